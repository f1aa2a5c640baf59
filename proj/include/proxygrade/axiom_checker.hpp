#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "proxygrade/core_model.hpp"
#include "proxygrade/phantom_proxy.hpp"

namespace proxygrade {

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

/// Every profile of a fixed shape whose cells range over an alphabet.
/// Cells marked ineligible by the optional pattern stay Ineligible.
class InstanceSpace {
 public:
  InstanceSpace(std::size_t voters, std::size_t candidates, GradeScale scale,
                std::vector<Vote> alphabet,
                std::optional<std::vector<bool>> eligibility = std::nullopt,
                std::uint64_t budget = kDefaultBudget);
  /// Space over an existing election shape (identifiers kept).
  InstanceSpace(std::shared_ptr<const ElectionShape> shape, std::vector<Vote> alphabet,
                std::optional<std::vector<bool>> eligibility = std::nullopt,
                std::uint64_t budget = kDefaultBudget);

  std::size_t voter_count() const noexcept { return shape_->voters.size(); }
  std::size_t candidate_count() const noexcept { return shape_->candidates.size(); }
  const GradeScale& scale() const noexcept { return shape_->scale; }
  const std::vector<Vote>& alphabet() const noexcept { return alphabet_; }
  const std::optional<std::vector<bool>>& eligibility() const noexcept { return eligibility_; }
  const std::shared_ptr<const ElectionShape>& shape() const noexcept { return shape_; }
  std::uint64_t budget() const noexcept { return budget_; }
  void set_budget(std::uint64_t budget) { budget_ = budget; }

  /// |alphabet|^(free cells); saturates at UINT64_MAX.
  std::uint64_t profile_count() const;
  /// Profiles in lexicographic order of their cell encoding.
  Profile profile_at(std::uint64_t index) const;

  /// Alphabet without Ineligible: the values an eligible cell may take.
  std::vector<Vote> eligible_values() const;

 private:
  std::shared_ptr<const ElectionShape> shape_;
  std::vector<Vote> alphabet_;
  std::optional<std::vector<bool>> eligibility_;  // voter-major
  std::vector<std::size_t> free_cells_;
  std::uint64_t budget_;
};

/// Every grade label plus blank and abstain.
std::vector<Vote> standard_alphabet(const GradeScale& scale);

using GradingFunction = std::function<Outcome(const Profile&)>;

/// What the checker audits: a black-box grading function, optionally
/// backed by a phantom-proxy mechanism (needed for fairness).
struct Subject {
  std::string name;
  GradingFunction fn;
  std::shared_ptr<const Mechanism> mechanism;

  static Subject of(const Mechanism& mechanism, std::string name = "mechanism");
  static Subject black_box(std::string name, GradingFunction fn);
};

/// Mean of the grades each candidate received; ungraded without grades.
Subject mean_aggregator();
/// Mean after dropping one lowest and one highest grade (when 3 or more).
Subject trimmed_mean_aggregator();
/// The same value for every candidate.
Subject constant_aggregator(Rational value);

/// One concrete test of an axiom. `profiles[0]` is the base profile; the
/// others are the variants the axiom compares it with.
struct AxiomInstance {
  std::string axiom;
  std::vector<Profile> profiles;
  std::optional<VoterIndex> voter;
  std::optional<VoterIndex> other_voter;
  std::optional<CandidateIndex> candidate;
  std::optional<CandidateIndex> other_candidate;
  std::optional<Rational> alpha;
};

struct Verdict {
  std::string axiom;
  bool holds = true;
  std::optional<AxiomInstance> witness;
  std::string detail;  // observed vs required, for failures
  std::uint64_t evaluations = 0;
  std::uint64_t instances = 0;
};

/// Re-runs the axiom's predicate on one instance; returns the violation
/// description, or nothing when the instance satisfies the axiom.
std::optional<std::string> evaluate_instance(const Subject& subject, const AxiomInstance& instance);

Verdict check_sp(const Subject& subject, const InstanceSpace& space);
Verdict check_bv(const Subject& subject, const InstanceSpace& space);
Verdict check_si(const Subject& subject, const InstanceSpace& space);

enum class ConsentRange {
  InputGrades,     // alpha must be a grade label
  OutputInterval,  // alpha may be any outcome; the scale is widened to hold it
};
Verdict check_sc(const Subject& subject, const InstanceSpace& space,
                 ConsentRange range = ConsentRange::InputGrades);
Verdict check_p(const Subject& subject, const InstanceSpace& space);
Verdict check_fp(const Subject& subject, const InstanceSpace& space);
Verdict check_jd(const Subject& subject, const InstanceSpace& space);
Verdict check_strong_sp(const Subject& subject, const InstanceSpace& space);
Verdict check_u(const Subject& subject, const InstanceSpace& space);
Verdict check_pareto(const Subject& subject, const InstanceSpace& space);
Verdict check_n(const Subject& subject, const InstanceSpace& space);
Verdict check_sn(const Subject& subject, const InstanceSpace& space);
/// Throws NeedsMechanism for black-box subjects.
Verdict check_fairness(const Subject& subject, const InstanceSpace& space);
Verdict check_a(const Subject& subject, const InstanceSpace& space);
Verdict check_sa(const Subject& subject, const InstanceSpace& space);
Verdict check_oc(const Subject& subject, const InstanceSpace& space);
/// Base profiles are the space's profiles without Ineligible cells.
Verdict check_ic(const Subject& subject, const InstanceSpace& space);

/// Axiom names accepted by `check_axiom`, in reporting order.
const std::vector<std::string>& axiom_names();
Verdict check_axiom(std::string_view axiom, const Subject& subject, const InstanceSpace& space);

struct CrossCheck {
  std::string name;
  bool applicable = true;
  bool consistent = true;
  std::string detail;
};

/// Implications between verdicts that must hold for every grading
/// function (or every phantom-proxy mechanism), plus agreement with the
/// structural verdicts when the subject has a mechanism.
std::vector<CrossCheck> cross_check(const Subject& subject, const ElectionShape& shape,
                                    const std::map<std::string, Verdict>& verdicts);

}  // namespace proxygrade
