#include "proxygrade/maxmin_sp.hpp"

#include <algorithm>
#include <bit>

namespace proxygrade {

namespace {

void require_enumerable(std::size_t coalition_size) {
  if (coalition_size > kMaxCoalition) {
    throw Error(ErrorCode::EnumerationLimit,
                "coalition of " + std::to_string(coalition_size) + " graders exceeds " +
                    std::to_string(kMaxCoalition));
  }
}

}  // namespace

PhantomTable PhantomMapping::table(std::span<const VoterIndex> coalition,
                                   const Profile& residual) const {
  require_enumerable(coalition.size());
  PhantomTable out;
  out.candidate = candidate_;
  out.coalition.assign(coalition.begin(), coalition.end());
  const std::uint64_t subsets = std::uint64_t{1} << coalition.size();
  out.values.reserve(subsets);
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    out.values.push_back(fn_(coalition, mask, residual));
  }
  return out;
}

std::optional<Rational> proxy_phantom_value(const SelectorFn& selector,
                                            std::size_t coalition_size,
                                            std::size_t subset_size,
                                            const RationalMultiset& proxy_pool,
                                            const GradeScale& scale) {
  const std::size_t n = coalition_size + proxy_pool.size();
  if (n == 0) return std::nullopt;
  const auto p = static_cast<std::int64_t>(selector(n));
  const std::int64_t k = static_cast<std::int64_t>(subset_size) -
                         static_cast<std::int64_t>(coalition_size) + p;
  if (k <= 0) return scale.lo();
  if (k > static_cast<std::int64_t>(proxy_pool.size())) return scale.hi();
  return mu(static_cast<std::size_t>(k), proxy_pool);
}

PhantomTable phantoms_from_proxy(const Mechanism& mechanism, CandidateIndex candidate,
                                 std::span<const VoterIndex> coalition, const Profile& residual) {
  require_enumerable(coalition.size());
  const auto pool = assemble_pool(mechanism, residual, candidate).values();
  PhantomTable out;
  out.candidate = candidate;
  out.coalition.assign(coalition.begin(), coalition.end());
  const std::uint64_t subsets = std::uint64_t{1} << coalition.size();
  out.values.reserve(subsets);
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    out.values.push_back(proxy_phantom_value(mechanism.selector(candidate), coalition.size(),
                                             static_cast<std::size_t>(std::popcount(mask)), pool,
                                             residual.scale()));
  }
  return out;
}

PhantomMapping proxy_phantom_mapping(const Mechanism& mechanism, CandidateIndex candidate) {
  return PhantomMapping(
      candidate, [mechanism, candidate](std::span<const VoterIndex> coalition,
                                        std::uint64_t mask, const Profile& residual) {
        const auto pool = assemble_pool(mechanism, residual, candidate).values();
        return proxy_phantom_value(mechanism.selector(candidate), coalition.size(),
                                   static_cast<std::size_t>(std::popcount(mask)), pool,
                                   residual.scale());
      });
}

std::optional<Rational> eval_maxmin(const PhantomTable& table, const Profile& profile) {
  const auto& graders = profile.graders(table.candidate);
  if (graders != table.coalition) {
    throw Error(ErrorCode::ShapeMismatch, "phantom table coalition is not the grader set");
  }
  std::optional<Rational> best;
  for (std::uint64_t mask = 0; mask < table.values.size(); ++mask) {
    std::optional<Rational> low = table.values[mask];
    if (!low) continue;
    for (std::size_t bit = 0; bit < graders.size(); ++bit) {
      if (mask & (std::uint64_t{1} << bit)) {
        low = std::min(*low, profile.grade_value(graders[bit], table.candidate));
      }
    }
    if (!best || *low > *best) best = low;
  }
  return best;
}

std::optional<Rational> eval_maxmin(const PhantomMapping& mapping, const Profile& profile) {
  const auto& graders = profile.graders(mapping.candidate());
  require_enumerable(graders.size());
  const Profile residual = remove_voters(profile, graders);
  return eval_maxmin(mapping.table(graders, residual), profile);
}

PhantomTable clamp_phantoms(const PhantomTable& table, const GradeScale& scale) {
  PhantomTable out = table;
  if (out.values.empty()) return out;
  const auto top = out.values[out.full_mask()];
  const auto bottom = out.values[0];
  for (auto& value : out.values) {
    if (!value) continue;
    if (*value < scale.lo()) value = (top && *top < scale.lo()) ? *top : scale.lo();
  }
  for (auto& value : out.values) {
    if (!value) continue;
    if (*value > scale.hi()) value = (bottom && *bottom > scale.hi()) ? *bottom : scale.hi();
  }
  return out;
}

PhantomMapping clamp_phantoms(const PhantomMapping& mapping, const GradeScale& scale) {
  return PhantomMapping(mapping.candidate(),
                        [mapping, scale](std::span<const VoterIndex> coalition,
                                         std::uint64_t mask, const Profile& residual) {
                          const std::uint64_t full = (std::uint64_t{1} << coalition.size()) - 1;
                          PhantomTable table;
                          table.candidate = mapping.candidate();
                          table.coalition.assign(coalition.begin(), coalition.end());
                          table.values = {mapping(coalition, 0, residual),
                                          mapping(coalition, mask, residual),
                                          mapping(coalition, full, residual)};
                          // Three-entry stand-in: [empty, S, T] clamps like the full table.
                          auto clamped = clamp_phantoms(table, scale);
                          return clamped.values[1];
                        });
}

bool is_monotone(const PhantomTable& table) {
  const std::size_t bits = table.coalition.size();
  for (std::uint64_t mask = 0; mask < table.values.size(); ++mask) {
    const auto& here = table.values[mask];
    for (std::size_t bit = 0; bit < bits; ++bit) {
      const std::uint64_t wider = mask | (std::uint64_t{1} << bit);
      if (wider == mask) continue;
      const auto& there = table.values[wider];
      if (here.has_value() != there.has_value()) return false;
      if (here && *here > *there) return false;
    }
  }
  return true;
}

bool satisfies_unanimity_condition(const PhantomTable& table, const GradeScale& scale) {
  if (table.coalition.empty()) return true;
  const auto& bottom = table.values.front();
  const auto& top = table.values[table.full_mask()];
  return bottom && top && *bottom <= scale.lo() && *top >= scale.hi();
}

SAPhantomFamily majority_grade_sa_family(CandidateIndex candidate, const GradeScale& scale) {
  return {candidate, [lo = scale.lo(), hi = scale.hi()](
                         std::size_t k, std::size_t d, const Profile&) -> std::optional<Rational> {
            if (d == 0) return std::nullopt;
            return k > d / 2 ? hi : lo;
          }};
}

SAPhantomFamily sa_family_from_proxy(const Mechanism& mechanism, CandidateIndex candidate) {
  return {candidate, [mechanism, candidate](std::size_t k, std::size_t d,
                                            const Profile& residual) {
            const auto pool = assemble_pool(mechanism, residual, candidate).values();
            return proxy_phantom_value(mechanism.selector(candidate), d, k, pool,
                                       residual.scale());
          }};
}

std::optional<Rational> eval_sa_median(const SAPhantomFamily& family, const Profile& profile) {
  const auto& graders = profile.graders(family.candidate);
  const std::size_t d = graders.size();
  const Profile residual = remove_voters(profile, graders);
  std::vector<Rational> values = profile.grades_for(family.candidate);
  for (std::size_t k = 0; k <= d; ++k) {
    auto phantom = family.fn(k, d, residual);
    if (!phantom) return std::nullopt;
    values.push_back(*phantom);
  }
  return mu(d + 1, RationalMultiset(std::move(values)));
}

}  // namespace proxygrade
