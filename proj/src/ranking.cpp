#include "proxygrade/ranking.hpp"

#include <algorithm>
#include <numeric>

namespace proxygrade {

std::size_t remove_first_voter(const std::vector<PoolEntry>& residual, const Rational& alpha) {
  for (std::size_t i = 0; i < residual.size(); ++i) {
    if (residual[i].value == alpha) return i;
  }
  throw Error(ErrorCode::InvalidArgument, "selected value " + to_string(alpha) + " not in pool");
}

VotingRange voting_range(const SelectorFn& selector, const VotingPool& pool,
                         CandidateIndex candidate, const RemovalRule& rule) {
  VotingRange range;
  range.candidate = candidate;
  range.pool_size = pool.size();
  range.values.reserve(pool.size());
  std::vector<PoolEntry> residual = pool.entries();
  while (!residual.empty()) {
    const Rational alpha = VotingPool(residual).values().values()[selector(residual.size()) - 1];
    range.values.push_back(alpha);
    const std::size_t drop = rule(residual, alpha);
    if (drop >= residual.size()) {
      throw Error(ErrorCode::IndexOutOfRange, "removal rule picked entry " + std::to_string(drop));
    }
    residual.erase(residual.begin() + static_cast<std::ptrdiff_t>(drop));
  }
  return range;
}

VotingRange voting_range(const Mechanism& mechanism, const VotingPool& pool,
                         CandidateIndex candidate) {
  if (!mechanism.is_fair()) {
    throw Error(ErrorCode::NotFair, "voting ranges need one selector for all candidates");
  }
  return voting_range(mechanism.selector(candidate), pool, candidate);
}

std::vector<VotingPool> equalize_pools_to(const std::vector<VotingPool>& pools, std::size_t target) {
  std::vector<VotingPool> out;
  out.reserve(pools.size());
  for (const auto& pool : pools) {
    if (pool.empty() || target % pool.size() != 0) {
      throw Error(ErrorCode::InvalidArgument, "pool of size " + std::to_string(pool.size()) +
                                                  " cannot be repeated up to " +
                                                  std::to_string(target));
    }
    const auto factor = static_cast<std::uint32_t>(target / pool.size());
    std::vector<PoolEntry> entries;
    entries.reserve(target);
    for (std::uint32_t copy = 0; copy < factor; ++copy) {
      for (PoolEntry entry : pool.entries()) {
        entry.copy = copy;
        entries.push_back(entry);
      }
    }
    out.emplace_back(std::move(entries));
  }
  return out;
}

EqualizedPools equalize_pools(const std::vector<VotingPool>& pools) {
  std::size_t size = 1;
  for (const auto& pool : pools) {
    if (pool.empty()) throw Error(ErrorCode::InvalidArgument, "cannot equalize an empty pool");
    size = std::lcm(size, pool.size());
  }
  return {equalize_pools_to(pools, size), size};
}

bool range_less(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

const VotingRange* RankOutcome::range_of(CandidateIndex candidate) const {
  for (const auto& range : ranges) {
    if (range.candidate == candidate) return &range;
  }
  return nullptr;
}

std::vector<VotingPool> ranking_pools(const Mechanism& mechanism, const Profile& profile,
                                      bool reinforce_absentees) {
  GradeResult graded = grade(mechanism, profile);
  std::vector<VotingPool> pools;
  pools.reserve(graded.candidates.size());
  for (CandidateIndex c = 0; c < graded.candidates.size(); ++c) {
    VotingPool pool = std::move(graded.candidates[c].pool);
    const auto& outcome = graded.candidates[c].grade;
    if (reinforce_absentees && outcome) {
      // Every addition uses the grade computed before any of them.
      std::vector<VoterIndex> absentees;
      for (VoterIndex v = 0; v < profile.voter_count(); ++v) {
        if (profile.at(v, c).is_abstain() && !pool.represents(v)) absentees.push_back(v);
      }
      for (VoterIndex v : absentees) pool.add({*outcome, v, PoolEntry::Source::Absentee});
    }
    pools.push_back(std::move(pool));
  }
  return pools;
}

RankOutcome rank(const Mechanism& mechanism, const Profile& profile, bool reinforce_absentees) {
  mechanism.require_shape(profile);
  if (!mechanism.is_fair()) {
    throw Error(ErrorCode::NotFair, "ranking needs one selector for all candidates");
  }
  auto pools = ranking_pools(mechanism, profile, reinforce_absentees);

  RankOutcome out;
  std::vector<CandidateIndex> ranked;
  std::vector<VotingPool> kept;
  for (CandidateIndex c = 0; c < pools.size(); ++c) {
    if (pools[c].empty()) {
      out.excluded.push_back(c);
    } else {
      ranked.push_back(c);
      kept.push_back(std::move(pools[c]));
    }
  }
  if (kept.empty()) return out;

  const SelectorFn& selector = mechanism.selector(0);
  auto equalized = equalize_pools(kept);
  const bool duplicated = std::any_of(kept.begin(), kept.end(), [&](const VotingPool& pool) {
    return pool.size() != equalized.size;
  });
  if (duplicated) {
    auto report = check_oc_condition(selector, equalized.size);
    if (!report.holds) {
      throw Error(ErrorCode::NotOuterConsistent,
                  selector.name() + " fails the merge condition at (" +
                      std::to_string(report.violation.first) + ", " +
                      std::to_string(report.violation.second) + "); pools of unequal size " +
                      "cannot be compared");
    }
  }
  out.equalized_size = equalized.size;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    out.ranges.push_back(voting_range(selector, equalized.pools[i], ranked[i]));
  }

  std::vector<std::size_t> order(ranked.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return range_less(out.ranges[b].values, out.ranges[a].values);
  });
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& range = out.ranges[order[i]];
    if (i > 0 && range.values == out.ranges[order[i - 1]].values) {
      out.tiers.back().push_back(range.candidate);
    } else {
      out.tiers.push_back({range.candidate});
    }
  }
  return out;
}

std::optional<RangeManipulation> range_sp_probe(const Mechanism& mechanism, const Profile& profile,
                                                CandidateIndex candidate,
                                                const std::vector<std::size_t>& deviations,
                                                const RemovalRule& rule) {
  mechanism.require_shape(profile);
  const SelectorFn& selector = mechanism.selector(candidate);
  const auto honest =
      voting_range(selector, assemble_pool(mechanism, profile, candidate), candidate, rule).values;
  for (VoterIndex voter : profile.graders(candidate)) {
    const std::size_t truth = profile.at(voter, candidate).label();
    const Rational peak = profile.scale().position(truth);
    for (std::size_t label : deviations) {
      if (label == truth) continue;
      const Profile lied =
          profile.with_vote(voter, candidate, Vote::grade(static_cast<std::uint32_t>(label)));
      const auto manipulated =
          voting_range(selector, assemble_pool(mechanism, lied, candidate), candidate, rule).values;
      auto diff = std::mismatch(honest.begin(), honest.end(), manipulated.begin(), manipulated.end());
      if (diff.first == honest.end() || diff.second == manipulated.end()) continue;
      const Rational& before = *diff.first;
      const Rational& after = *diff.second;
      const bool closer = (before > peak && after < before) || (before < peak && after > before);
      if (closer) {
        return RangeManipulation{voter,
                                 truth,
                                 label,
                                 honest,
                                 manipulated,
                                 static_cast<std::size_t>(diff.first - honest.begin())};
      }
    }
  }
  return std::nullopt;
}

}  // namespace proxygrade
