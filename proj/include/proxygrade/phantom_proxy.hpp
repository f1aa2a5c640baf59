#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "proxygrade/core_model.hpp"
#include "proxygrade/order_stats.hpp"

namespace proxygrade {

/// Proxy vote f_{i,J}: stands in for voter i on a candidate they did not
/// grade. Sees only the voter's own ballot.
class ProxyFn {
 public:
  enum class Kind { None, OwnAverage, Constant, Custom };
  using CustomFn =
      std::function<std::optional<Rational>(std::span<const Vote> ballot, const GradeScale&)>;

  static ProxyFn none() { return ProxyFn(Kind::None); }
  /// Mean position of the grades the voter gave; empty if they gave none.
  static ProxyFn own_average() { return ProxyFn(Kind::OwnAverage); }
  static ProxyFn constant(Rational value);
  /// `name` identifies the function for equality and reporting.
  static ProxyFn custom(std::string name, CustomFn fn);

  Kind kind() const noexcept { return kind_; }
  const Rational& constant_value() const noexcept { return constant_; }
  std::string name() const;

  std::optional<Rational> operator()(std::span<const Vote> ballot,
                                     const GradeScale& scale) const;

  bool operator==(const ProxyFn& other) const;

 private:
  explicit ProxyFn(Kind kind) : kind_(kind) {}

  Kind kind_;
  Rational constant_{0};
  std::string custom_name_;
  CustomFn custom_;
};

/// What happens to a voter who abstained on a candidate.
enum class AbsenteePolicy {
  RemoveFromPool,  // no proxy: the abstainer is ignored for that candidate
  ProxyAnyway,     // the proxy function is consulted as for blank votes
};

std::string to_string(AbsenteePolicy policy);

/// A phantom-proxy grading mechanism: one proxy per (voter, candidate) and
/// one selector per candidate, sized for a fixed election shape.
class Mechanism {
 public:
  Mechanism(std::size_t voters, std::size_t candidates, ProxyFn proxy,
            SelectorFn selector, AbsenteePolicy policy = AbsenteePolicy::RemoveFromPool);

  std::size_t voter_count() const noexcept { return voters_; }
  std::size_t candidate_count() const noexcept { return candidates_; }

  const ProxyFn& proxy(VoterIndex voter, CandidateIndex candidate) const;
  const SelectorFn& selector(CandidateIndex candidate) const;
  AbsenteePolicy absentee_policy() const noexcept { return policy_; }

  Mechanism& set_proxy(VoterIndex voter, CandidateIndex candidate, ProxyFn proxy);
  Mechanism& set_selector(CandidateIndex candidate, SelectorFn selector);
  Mechanism& set_absentee_policy(AbsenteePolicy policy);

  /// All candidates share one selector.
  bool is_fair() const;

  /// Throws ShapeMismatch unless the profile has this mechanism's shape.
  void require_shape(const Profile& profile) const;

 private:
  std::size_t voters_;
  std::size_t candidates_;
  std::vector<ProxyFn> proxies_;  // candidate-major
  std::vector<SelectorFn> selectors_;
  AbsenteePolicy policy_;
};

/// All-None proxies, lower-median selectors, abstainers ignored.
Mechanism majority_grade_mechanism(std::size_t voters, std::size_t candidates);

struct PoolEntry {
  enum class Source : std::uint8_t { Grade, Proxy, Absentee };

  Rational value;
  VoterIndex voter;
  Source source;
  std::uint32_t copy = 0;  // duplicate index after pool equalization

  bool operator==(const PoolEntry&) const = default;
};

std::string to_string(PoolEntry::Source source);

/// Real grades plus proxy votes for one candidate, each tagged with the
/// voter it represents. Entries are ordered by (voter, copy).
class VotingPool {
 public:
  VotingPool() = default;
  explicit VotingPool(std::vector<PoolEntry> entries);

  const std::vector<PoolEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  RationalMultiset values() const;
  bool represents(VoterIndex voter) const;

  void add(PoolEntry entry);

  bool operator==(const VotingPool&) const = default;

 private:
  std::vector<PoolEntry> entries_;
};

/// The proxy vote voter i casts for J, or nothing. Empty when the voter
/// graded J, when the whole ballot is blank/ineligible, or when the voter
/// abstained on J under RemoveFromPool.
std::optional<Rational> effective_proxy(const Mechanism& mechanism, const Profile& profile,
                                        VoterIndex voter, CandidateIndex candidate);

/// v(J) plus F_J(v). Throws ProxyOutOfRange if a proxy leaves [lo, hi].
VotingPool assemble_pool(const Mechanism& mechanism, const Profile& profile,
                         CandidateIndex candidate);

struct CandidateGrade {
  std::optional<Rational> grade;  // empty: ungraded (empty pool)
  VotingPool pool;
};

struct GradeResult {
  std::vector<CandidateGrade> candidates;

  Outcome outcome() const;
};

GradeResult grade(const Mechanism& mechanism, const Profile& profile);
std::optional<Rational> grade_candidate(const Mechanism& mechanism, const Profile& profile,
                                        CandidateIndex candidate);
/// Grade-only evaluation (no provenance), for the exhaustive checkers.
Outcome grade_outcome(const Mechanism& mechanism, const Profile& profile);

enum class SurfaceVerdict { Holds, Fails, NotDecidableSyntactically };

std::string to_string(SurfaceVerdict verdict);

struct SurfaceEntry {
  std::string axiom;
  SurfaceVerdict verdict;
  std::string reason;
};

/// Verdicts read off the mechanism's structure alone (proxy kinds,
/// selector conditions, absentee policy).
struct AxiomSurface {
  std::vector<SurfaceEntry> entries;

  const SurfaceEntry& at(std::string_view axiom) const;
};

AxiomSurface validate_axiom_surface(const Mechanism& mechanism, const ElectionShape& shape,
                                    std::size_t maxk);

}  // namespace proxygrade
