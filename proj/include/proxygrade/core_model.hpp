#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "proxygrade/errors.hpp"
#include "proxygrade/rational.hpp"

namespace proxygrade {

using VoterIndex = std::size_t;
using CandidateIndex = std::size_t;

/// Ordered input grades embedded in the output interval [lo, hi].
///
/// Each label has a rational position; positions are strictly increasing.
/// The output space is the closed rational interval spanned by the first
/// and last positions, so every input grade is also a valid output.
class GradeScale {
 public:
  GradeScale(std::vector<std::string> labels, std::vector<Rational> positions);

  /// Labels with positions 0, 1, ..., n-1.
  static GradeScale ordinal(std::vector<std::string> labels);
  /// Labels "lo".."hi" positioned at their own integer value.
  static GradeScale integer_range(int lo, int hi);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& label(std::size_t index) const;
  const Rational& position(std::size_t index) const;
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<Rational>& positions() const noexcept { return positions_; }

  const Rational& lo() const noexcept { return positions_.front(); }
  const Rational& hi() const noexcept { return positions_.back(); }
  bool in_output_range(const Rational& value) const noexcept {
    return lo() <= value && value <= hi();
  }

  std::optional<std::size_t> find_label(std::string_view label) const;
  std::optional<std::size_t> find_position(const Rational& value) const;

  /// Scale with `value` added as a label (if not already a position), and
  /// the label index of `value` in the widened scale. Used to let a voter
  /// "vote the outcome" when the outcome is not an input grade.
  std::pair<GradeScale, std::size_t> widened_with(const Rational& value) const;

  bool operator==(const GradeScale&) const = default;

 private:
  std::vector<std::string> labels_;
  std::vector<Rational> positions_;
};

/// One cell of the profile: a grade, a blank vote, an abstention, or the
/// absence of a right to vote.
class Vote {
 public:
  enum class Kind : std::uint8_t { Grade, Blank, Abstain, Ineligible };

  constexpr Vote() = default;
  static constexpr Vote grade(std::uint32_t label) { return Vote(Kind::Grade, label); }
  static constexpr Vote blank() { return Vote(Kind::Blank, 0); }
  static constexpr Vote abstain() { return Vote(Kind::Abstain, 0); }
  static constexpr Vote ineligible() { return Vote(Kind::Ineligible, 0); }

  constexpr Kind kind() const noexcept { return kind_; }
  constexpr bool is_grade() const noexcept { return kind_ == Kind::Grade; }
  constexpr bool is_blank() const noexcept { return kind_ == Kind::Blank; }
  constexpr bool is_abstain() const noexcept { return kind_ == Kind::Abstain; }
  constexpr bool is_eligible() const noexcept { return kind_ != Kind::Ineligible; }
  /// Label index; only meaningful for grades.
  constexpr std::uint32_t label() const noexcept { return label_; }

  constexpr bool operator==(const Vote&) const = default;
  constexpr auto operator<=>(const Vote&) const = default;

 private:
  constexpr Vote(Kind kind, std::uint32_t label) : kind_(kind), label_(label) {}

  Kind kind_ = Kind::Ineligible;
  std::uint32_t label_ = 0;
};

std::string describe(const Vote& vote, const GradeScale& scale);

/// Voters, candidates and scale shared by every profile of one election.
/// Identifiers are kept in lexicographic order; indices follow that order.
struct ElectionShape {
  std::vector<std::string> voters;
  std::vector<std::string> candidates;
  GradeScale scale;

  std::optional<VoterIndex> find_voter(std::string_view id) const;
  std::optional<CandidateIndex> find_candidate(std::string_view id) const;
  bool operator==(const ElectionShape&) const = default;
};

std::shared_ptr<const ElectionShape> make_shape(std::vector<std::string> voters,
                                                std::vector<std::string> candidates,
                                                GradeScale scale);

/// Outcome of a grading function: one entry per candidate, empty when the
/// candidate could not be graded.
using Outcome = std::vector<std::optional<Rational>>;

/// Immutable (voter x candidate) matrix of votes.
///
/// Eligibility is implied by the cells: voter i may grade J iff the cell is
/// not Ineligible. The grader sets D''_J are computed once at construction.
class Profile {
 public:
  Profile(std::shared_ptr<const ElectionShape> shape, std::vector<Vote> cells);

  const ElectionShape& shape() const noexcept { return *shape_; }
  const std::shared_ptr<const ElectionShape>& shape_ptr() const noexcept { return shape_; }
  const GradeScale& scale() const noexcept { return shape_->scale; }
  std::size_t voter_count() const noexcept { return shape_->voters.size(); }
  std::size_t candidate_count() const noexcept { return shape_->candidates.size(); }

  Vote at(VoterIndex voter, CandidateIndex candidate) const;
  /// The voter's full ballot, indexed by candidate.
  std::span<const Vote> ballot(VoterIndex voter) const;
  const std::vector<Vote>& cells() const noexcept { return cells_; }

  /// Voters that graded `candidate` (D''_J), ascending.
  const std::vector<VoterIndex>& graders(CandidateIndex candidate) const;
  /// Voters allowed to vote for `candidate` (D_J).
  std::vector<VoterIndex> eligible_voters(CandidateIndex candidate) const;
  /// Candidates the voter may vote for (C_i).
  std::vector<CandidateIndex> eligible_candidates(VoterIndex voter) const;
  /// Candidates the voter graded (C'_i).
  std::vector<CandidateIndex> graded_candidates(VoterIndex voter) const;

  /// Position of the voter's grade; the cell must be a grade.
  const Rational& grade_value(VoterIndex voter, CandidateIndex candidate) const;
  /// Grades given to `candidate`, in voter order (the bag v(J)).
  std::vector<Rational> grades_for(CandidateIndex candidate) const;

  /// New profile over the same shape.
  Profile with_cells(std::vector<Vote> cells) const;
  /// Unchecked single-cell replacement; `apply_edit` enforces the
  /// eligibility rule, this does not.
  Profile with_vote(VoterIndex voter, CandidateIndex candidate, Vote vote) const;
  Profile with_ballot(VoterIndex voter, std::span<const Vote> ballot) const;
  /// Same votes re-expressed over `scale`; grades map by label index.
  Profile with_scale(GradeScale scale) const;

  bool operator==(const Profile& other) const;

 private:
  std::size_t offset(VoterIndex voter, CandidateIndex candidate) const;

  std::shared_ptr<const ElectionShape> shape_;
  std::vector<Vote> cells_;  // voter-major: cells_[voter * candidates + candidate]
  std::vector<std::vector<VoterIndex>> graders_;
};

/// Reads "blank", "abstain", "ineligible" or a grade label.
Vote parse_vote(std::string_view text, const GradeScale& scale);

struct CellAssignment {
  std::string voter;
  std::string candidate;
  std::string value;  // as accepted by parse_vote
};

/// Validates identifiers and cells; unlisted cells are Ineligible.
Profile build_profile(std::vector<std::string> voters,
                      std::vector<std::string> candidates, GradeScale scale,
                      const std::vector<CellAssignment>& cells);

struct ProfileEdit {
  VoterIndex voter;
  CandidateIndex candidate;
  Vote replacement;
};

/// Replaces one cell. Rights may be given up (anything -> Ineligible) but
/// never granted: replacing an Ineligible cell with anything else throws
/// IllegalEligibilityGrant.
Profile apply_edit(const Profile& profile, const ProfileEdit& edit);

/// v_{-T}: every eligible cell of every voter in `removed` becomes Blank,
/// across all candidates.
Profile remove_voters(const Profile& profile, std::span<const VoterIndex> removed);

/// Recomputes D''_J from the cells, bypassing the cache.
std::vector<VoterIndex> recompute_graders(const Profile& profile,
                                          CandidateIndex candidate);

}  // namespace proxygrade
