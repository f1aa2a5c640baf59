#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "oracles.hpp"
#include "proxygrade/axiom_checker.hpp"
#include "proxygrade/ranking.hpp"

using namespace proxygrade;

namespace {

VotingPool pool_of(std::initializer_list<int> values) {
  std::vector<PoolEntry> entries;
  VoterIndex v = 0;
  for (int x : values) entries.push_back({Rational(x), v++, PoolEntry::Source::Grade});
  return VotingPool(entries);
}

std::vector<Rational> rats(std::initializer_list<int> xs) { return {xs.begin(), xs.end()}; }

// One candidate per pool; voter i grades candidate c with pools[c][i].
Profile profile_of(const std::vector<std::vector<int>>& pools, int top) {
  std::vector<std::string> voters, candidates;
  std::vector<CellAssignment> cells;
  std::size_t n = 0;
  for (const auto& p : pools) n = std::max(n, p.size());
  for (std::size_t i = 0; i < n; ++i) voters.push_back("v" + std::to_string(10 + i));
  for (std::size_t c = 0; c < pools.size(); ++c) {
    candidates.push_back("C" + std::to_string(c));
    for (std::size_t i = 0; i < n; ++i) {
      cells.push_back({voters[i], candidates[c],
                       i < pools[c].size() ? std::to_string(pools[c][i]) : "blank"});
    }
  }
  return build_profile(voters, candidates, GradeScale::integer_range(0, top), cells);
}

// Every voter ballot repeated `times` times.
Profile duplicated(const Profile& p, std::size_t times) {
  std::vector<std::string> voters;
  std::vector<CellAssignment> cells;
  for (std::size_t r = 0; r < times; ++r) {
    for (VoterIndex i = 0; i < p.voter_count(); ++i) {
      voters.push_back(p.shape().voters[i] + "_" + std::to_string(r));
      for (CandidateIndex c = 0; c < p.candidate_count(); ++c) {
        auto v = p.at(i, c);
        if (v.is_eligible())
          cells.push_back({voters.back(), p.shape().candidates[c], describe(v, p.scale())});
      }
    }
  }
  return build_profile(voters, p.shape().candidates, p.scale(), cells);
}

}  // namespace

TEST_CASE("voting ranges") {
  auto lm = SelectorFn::lower_median();
  CHECK(voting_range(lm, pool_of({1, 2, 3}), 0).values == rats({2, 1, 3}));
  CHECK(voting_range(SelectorFn::max(), pool_of({4}), 0).values == rats({4}));
  CHECK(voting_range(lm, pool_of({2, 2}), 0).values == rats({2, 2}));
  CHECK(voting_range(lm, pool_of({}), 0).values.empty());
}

TEST_CASE("voting range matches the sort-and-erase oracle") {
  std::vector<int> alphabet{0, 1, 2};
  std::vector<std::pair<SelectorFn, std::function<std::size_t(std::size_t)>>> selectors{
      {SelectorFn::lower_median(), oracle::lower_median_rank},
      {SelectorFn::upper_median(), [](std::size_t n) { return n / 2 + 1; }},
      {SelectorFn::min(), [](std::size_t) { return std::size_t{1}; }},
      {SelectorFn::max(), [](std::size_t n) { return n; }}};
  for (std::size_t n = 1; n <= 4; ++n) {
    oracle::for_each_assignment(alphabet, n, [&](const std::vector<int>& xs) {
      std::vector<PoolEntry> entries;
      std::vector<Rational> values;
      for (std::size_t i = 0; i < n; ++i) {
        entries.push_back({Rational(xs[i]), i, PoolEntry::Source::Grade});
        values.emplace_back(xs[i]);
      }
      for (const auto& [g, rank] : selectors)
        CHECK(voting_range(g, VotingPool(entries), 0).values == oracle::voting_range(values, rank));
    });
  }
}

TEST_CASE("removal choice does not matter") {
  // remove the last matching entry instead of the first
  RemovalRule last = [](const std::vector<PoolEntry>& r, const Rational& alpha) {
    for (std::size_t i = r.size(); i-- > 0;)
      if (r[i].value == alpha) return i;
    return r.size();
  };
  std::vector<int> alphabet{0, 1, 2};
  for (std::size_t n = 1; n <= 4; ++n) {
    oracle::for_each_assignment(alphabet, n, [&](const std::vector<int>& xs) {
      std::vector<PoolEntry> entries;
      for (std::size_t i = 0; i < n; ++i) entries.push_back({Rational(xs[i]), i, PoolEntry::Source::Grade});
      VotingPool pool(entries);
      auto g = SelectorFn::lower_median();
      CHECK(voting_range(g, pool, 0).values == voting_range(g, pool, 0, last).values);
    });
  }
}

TEST_CASE("lexicographic comparison") {
  CHECK(range_less(rats({2, 1, 3}), rats({3, 1, 3})));
  CHECK(range_less(rats({2, 1}), rats({2, 1, 0})));
  CHECK_FALSE(range_less(rats({2, 1}), rats({2, 1})));
}

TEST_CASE("pool equalization") {
  auto eq = equalize_pools({pool_of({1, 2}), pool_of({0, 1, 2})});
  CHECK(eq.size == 6);
  CHECK(eq.pools[0].size() == 6);
  CHECK(eq.pools[1].size() == 6);
  CHECK(eq.pools[0].values().values() == rats({1, 1, 1, 2, 2, 2}));

  auto same = equalize_pools({pool_of({1, 2}), pool_of({0, 2})});
  CHECK(same.size == 2);
  CHECK(same.pools[0] == pool_of({1, 2}));

  // lcm and product give the same order
  auto pools = std::vector<VotingPool>{pool_of({0, 2}), pool_of({1, 1, 2, 0})};
  auto lcm = equalize_pools(pools);
  CHECK(lcm.size == 4);
  auto product = equalize_pools_to(pools, 8);
  auto g = SelectorFn::lower_median();
  auto a0 = voting_range(g, lcm.pools[0], 0).values;
  auto a1 = voting_range(g, lcm.pools[1], 1).values;
  auto b0 = voting_range(g, product[0], 0).values;
  auto b1 = voting_range(g, product[1], 1).values;
  CHECK(range_less(a0, a1) == range_less(b0, b1));
  CHECK(range_less(a1, a0) == range_less(b1, b0));
}

TEST_CASE("rank") {
  auto p = profile_of({{1, 2, 3}, {1, 3, 3}}, 3);
  auto m = majority_grade_mechanism(3, 2);
  auto r = rank(m, p, false);
  REQUIRE(r.tiers.size() == 2);
  CHECK(r.tiers[0] == std::vector<CandidateIndex>{1});
  CHECK(r.range_of(0)->values == rats({2, 1, 3}));
  CHECK(r.range_of(1)->values == rats({3, 1, 3}));

  auto tie = rank(m, profile_of({{2, 0, 1}, {0, 1, 2}}, 2), false);
  REQUIRE(tie.tiers.size() == 1);
  CHECK(tie.tiers[0].size() == 2);

  auto unequal = rank(m, profile_of({{0, 2}, {1, 1, 2}}, 2), false);
  CHECK(unequal.equalized_size == 6);

  auto excluded = rank(majority_grade_mechanism(1, 2), profile_of({{1}, {}}, 2), false);
  CHECK(excluded.excluded == std::vector<CandidateIndex>{1});
}

TEST_CASE("rank preconditions") {
  auto p = profile_of({{1, 2}, {1, 2, 0}}, 2);
  Mechanism unfair = majority_grade_mechanism(3, 2);
  unfair.set_selector(1, SelectorFn::max());
  CHECK_THROWS_AS(rank(unfair, p, false), Error);
  Mechanism not_oc(3, 2, ProxyFn::none(), SelectorFn::table({1, 1, 3, 2, 3, 3}));
  try {
    rank(not_oc, p, false);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotOuterConsistent);
  }
  // equal pool sizes need no duplication, so OC is not required
  CHECK_NOTHROW(rank(not_oc, profile_of({{1, 2, 0}, {1, 2, 2}}, 2), false));
}

TEST_CASE("duplication invariance and total order") {
  // every 2-candidate profile of 2 voters over {0,1,2,blank}
  auto s = GradeScale::integer_range(0, 2);
  InstanceSpace space(2, 2, s, {Vote::grade(0), Vote::grade(1), Vote::grade(2), Vote::blank()});
  auto m = majority_grade_mechanism(2, 2);
  for (std::uint64_t idx = 0; idx < space.profile_count(); ++idx) {
    auto p = space.profile_at(idx);
    auto base = rank(m, p, false);
    for (std::size_t times : {2u, 3u}) {
      auto q = duplicated(p, times);
      auto r = rank(majority_grade_mechanism(q.voter_count(), 2), q, false);
      CHECK(r.tiers == base.tiers);
      CHECK(r.excluded == base.excluded);
    }
    // ties exactly when the equalized pools are identical
    if (base.tiers.size() == 1 && base.tiers[0].size() == 2) {
      auto pools = ranking_pools(m, p, false);
      auto eq = equalize_pools(pools);
      CHECK(eq.pools[0].values() == eq.pools[1].values());
    }
  }
}

TEST_CASE("reinforcement") {
  auto s = GradeScale::integer_range(0, 2);
  InstanceSpace space(3, 1, s, standard_alphabet(s));
  auto m = majority_grade_mechanism(3, 1);
  for (std::uint64_t idx = 0; idx < space.profile_count(); ++idx) {
    auto p = space.profile_at(idx);
    auto plain = ranking_pools(m, p, false);
    auto reinforced = ranking_pools(m, p, true);
    bool abstainers = false;
    for (VoterIndex i = 0; i < 3; ++i) abstainers |= p.at(i, 0).is_abstain();
    if (!abstainers || plain[0].empty()) {
      CHECK(plain[0] == reinforced[0]);
      continue;
    }
    auto phi = *grade_candidate(m, p, 0);
    auto g = SelectorFn::lower_median();
    auto r = voting_range(g, plain[0], 0).values;
    auto pr = voting_range(g, reinforced[0], 0).values;
    std::vector<Rational> constant(pr.size(), phi);
    // the absentee votes pull the range toward the grade
    if (range_less(r, constant)) {
      CHECK_FALSE(range_less(pr, r));
      CHECK_FALSE(range_less(constant, pr));
    }
    if (range_less(constant, r)) {
      CHECK_FALSE(range_less(r, pr));
      CHECK_FALSE(range_less(pr, constant));
    }
  }
}

TEST_CASE("range strategy-proofness") {
  auto s = GradeScale::integer_range(0, 2);
  auto m = majority_grade_mechanism(3, 1);
  std::vector<std::size_t> deviations{0, 1, 2};
  InstanceSpace space(3, 1, s, {Vote::grade(0), Vote::grade(1), Vote::grade(2)});

  // drop the entry farthest from alpha (ties to the larger value)
  RemovalRule farthest = [](const std::vector<PoolEntry>& r, const Rational& alpha) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < r.size(); ++i) {
      auto d = boost::abs(r[i].value - alpha);
      auto e = boost::abs(r[best].value - alpha);
      if (d > e || (d == e && r[i].value > r[best].value)) best = i;
    }
    return best;
  };
  bool mutant_caught = false;
  for (std::uint64_t idx = 0; idx < space.profile_count(); ++idx) {
    auto p = space.profile_at(idx);
    CHECK_FALSE(range_sp_probe(m, p, 0, deviations).has_value());
    mutant_caught |= range_sp_probe(m, p, 0, deviations, farthest).has_value();
  }
  CHECK(mutant_caught);

  auto single = build_profile({"a"}, {"J"}, s, {{"a", "J", "1"}});
  CHECK_FALSE(range_sp_probe(majority_grade_mechanism(1, 1), single, 0, deviations).has_value());
}
