#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "proxygrade/core_model.hpp"
#include "proxygrade/phantom_proxy.hpp"

namespace proxygrade {

/// Largest coalition the max-min formula will enumerate (2^12 subsets).
inline constexpr std::size_t kMaxCoalition = 12;

/// Phantom values omega_S for every S of one coalition T and one residual
/// profile. `values[mask]` holds omega for the subset whose members are the
/// coalition entries at the set bits of `mask`. An empty value means the
/// phantom is undefined (only possible when T and the proxy pool are both
/// empty: the candidate cannot be graded).
struct PhantomTable {
  CandidateIndex candidate = 0;
  std::vector<VoterIndex> coalition;  // T, ascending
  std::vector<std::optional<Rational>> values;

  std::size_t full_mask() const { return values.size() - 1; }
  bool operator==(const PhantomTable&) const = default;
};

/// omega_{J,S}^T as a function of (T, S, v_{-T}).
class PhantomMapping {
 public:
  using Fn = std::function<std::optional<Rational>(
      std::span<const VoterIndex> coalition, std::uint64_t subset_mask, const Profile& residual)>;

  PhantomMapping(CandidateIndex candidate, Fn fn)
      : candidate_(candidate), fn_(std::move(fn)) {}

  CandidateIndex candidate() const noexcept { return candidate_; }

  std::optional<Rational> operator()(std::span<const VoterIndex> coalition,
                                     std::uint64_t subset_mask, const Profile& residual) const {
    return fn_(coalition, subset_mask, residual);
  }

  /// Every omega_S for the coalition, evaluated once each.
  PhantomTable table(std::span<const VoterIndex> coalition, const Profile& residual) const;

 private:
  CandidateIndex candidate_;
  Fn fn_;
};

/// Phantom value of a phantom-proxy mechanism for |S| = `subset_size`,
/// |T| = `coalition_size` and proxy pool `proxy_pool`:
/// with p = g(|T| + |F|) and k = |S| - |T| + p, lo if k <= 0, hi if
/// k > |F|, else mu_k(F). Empty when |T| + |F| = 0.
std::optional<Rational> proxy_phantom_value(const SelectorFn& selector,
                                            std::size_t coalition_size,
                                            std::size_t subset_size,
                                            const RationalMultiset& proxy_pool,
                                            const GradeScale& scale);

/// Table for coalition T at residual v_{-T}.
PhantomTable phantoms_from_proxy(const Mechanism& mechanism, CandidateIndex candidate,
                                 std::span<const VoterIndex> coalition, const Profile& residual);

PhantomMapping proxy_phantom_mapping(const Mechanism& mechanism, CandidateIndex candidate);

/// max over S of min({v_i(J) : i in S} u {omega_S}). The table's coalition
/// must be D''_J of `profile`.
std::optional<Rational> eval_maxmin(const PhantomTable& table, const Profile& profile);

/// Same, with T = D''_J(profile) and the residual built here.
/// Throws EnumerationLimit when |T| exceeds kMaxCoalition.
std::optional<Rational> eval_maxmin(const PhantomMapping& mapping, const Profile& profile);

/// Normal form: values below lo become omega_T if omega_T < lo, else lo;
/// values above hi become omega_empty if omega_empty > hi, else hi.
/// The max-min value is unchanged for any grades inside [lo, hi].
PhantomTable clamp_phantoms(const PhantomTable& table, const GradeScale& scale);
PhantomMapping clamp_phantoms(const PhantomMapping& mapping, const GradeScale& scale);

/// S subset of S' implies omega_S <= omega_S'.
bool is_monotone(const PhantomTable& table);

/// omega_empty <= lo and omega_T >= hi (vacuous for an empty coalition).
bool satisfies_unanimity_condition(const PhantomTable& table, const GradeScale& scale);

/// omega_k^d for 0 <= k <= d, as a function of the residual profile.
struct SAPhantomFamily {
  using Fn = std::function<std::optional<Rational>(std::size_t k, std::size_t d,
                                                   const Profile& residual)>;

  CandidateIndex candidate = 0;
  Fn fn;
};

/// k phantoms at hi for k > d/2, lo otherwise; undefined for d = 0.
SAPhantomFamily majority_grade_sa_family(CandidateIndex candidate, const GradeScale& scale);

/// Family of a phantom-proxy mechanism whose phantoms depend on |S| only.
SAPhantomFamily sa_family_from_proxy(const Mechanism& mechanism, CandidateIndex candidate);

/// Lower median of the d grades and the d+1 phantoms omega_0^d..omega_d^d.
std::optional<Rational> eval_sa_median(const SAPhantomFamily& family, const Profile& profile);

}  // namespace proxygrade
