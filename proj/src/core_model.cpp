#include "proxygrade/core_model.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace proxygrade {

GradeScale::GradeScale(std::vector<std::string> labels,
                       std::vector<Rational> positions)
    : labels_(std::move(labels)), positions_(std::move(positions)) {
  if (labels_.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "a grade scale needs at least 2 labels");
  }
  if (labels_.size() != positions_.size()) {
    throw Error(ErrorCode::InvalidArgument,
                "grade scale has " + std::to_string(labels_.size()) + " labels but " +
                    std::to_string(positions_.size()) + " positions");
  }
  std::set<std::string> seen;
  for (const auto& label : labels_) {
    if (label.empty()) throw Error(ErrorCode::InvalidArgument, "empty grade label");
    if (label == "blank" || label == "abstain" || label == "ineligible") {
      throw Error(ErrorCode::InvalidArgument, "'" + label + "' is reserved");
    }
    if (!seen.insert(label).second) {
      throw Error(ErrorCode::DuplicateIdentifier, "grade label '" + label + "'");
    }
  }
  for (std::size_t i = 1; i < positions_.size(); ++i) {
    if (!(positions_[i - 1] < positions_[i])) {
      throw Error(ErrorCode::InvalidArgument,
                  "grade positions must be strictly increasing");
    }
  }
}

GradeScale GradeScale::ordinal(std::vector<std::string> labels) {
  std::vector<Rational> positions;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    positions.emplace_back(static_cast<std::int64_t>(i));
  }
  return GradeScale(std::move(labels), std::move(positions));
}

GradeScale GradeScale::integer_range(int lo, int hi) {
  std::vector<std::string> labels;
  std::vector<Rational> positions;
  for (int g = lo; g <= hi; ++g) {
    labels.push_back(std::to_string(g));
    positions.emplace_back(g);
  }
  return GradeScale(std::move(labels), std::move(positions));
}

const std::string& GradeScale::label(std::size_t index) const {
  if (index >= labels_.size()) {
    throw Error(ErrorCode::UnknownLabel, "label index " + std::to_string(index));
  }
  return labels_[index];
}

const Rational& GradeScale::position(std::size_t index) const {
  if (index >= positions_.size()) {
    throw Error(ErrorCode::UnknownLabel, "label index " + std::to_string(index));
  }
  return positions_[index];
}

std::optional<std::size_t> GradeScale::find_label(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

std::optional<std::size_t> GradeScale::find_position(const Rational& value) const {
  auto it = std::lower_bound(positions_.begin(), positions_.end(), value);
  if (it == positions_.end() || *it != value) return std::nullopt;
  return static_cast<std::size_t>(it - positions_.begin());
}

std::pair<GradeScale, std::size_t> GradeScale::widened_with(const Rational& value) const {
  if (auto existing = find_position(value)) return {*this, *existing};
  if (!in_output_range(value)) {
    throw Error(ErrorCode::InvalidArgument,
                "value " + to_string(value) + " lies outside the output range");
  }
  auto it = std::lower_bound(positions_.begin(), positions_.end(), value);
  auto at = static_cast<std::size_t>(it - positions_.begin());
  auto labels = labels_;
  auto positions = positions_;
  std::string name = "=" + to_string(value);
  while (std::find(labels.begin(), labels.end(), name) != labels.end()) name += "'";
  labels.insert(labels.begin() + static_cast<std::ptrdiff_t>(at), name);
  positions.insert(positions.begin() + static_cast<std::ptrdiff_t>(at), value);
  return {GradeScale(std::move(labels), std::move(positions)), at};
}

std::string describe(const Vote& vote, const GradeScale& scale) {
  switch (vote.kind()) {
    case Vote::Kind::Grade: return scale.label(vote.label());
    case Vote::Kind::Blank: return "blank";
    case Vote::Kind::Abstain: return "abstain";
    case Vote::Kind::Ineligible: return "ineligible";
  }
  return "?";
}

Vote parse_vote(std::string_view text, const GradeScale& scale) {
  if (text == "blank") return Vote::blank();
  if (text == "abstain") return Vote::abstain();
  if (text == "ineligible") return Vote::ineligible();
  if (auto label = scale.find_label(text)) {
    return Vote::grade(static_cast<std::uint32_t>(*label));
  }
  throw Error(ErrorCode::UnknownLabel, "'" + std::string(text) + "'");
}

std::optional<VoterIndex> ElectionShape::find_voter(std::string_view id) const {
  auto it = std::lower_bound(voters.begin(), voters.end(), id);
  if (it == voters.end() || *it != id) return std::nullopt;
  return static_cast<VoterIndex>(it - voters.begin());
}

std::optional<CandidateIndex> ElectionShape::find_candidate(std::string_view id) const {
  auto it = std::lower_bound(candidates.begin(), candidates.end(), id);
  if (it == candidates.end() || *it != id) return std::nullopt;
  return static_cast<CandidateIndex>(it - candidates.begin());
}

namespace {

void sort_unique(std::vector<std::string>& ids, std::string_view what) {
  std::sort(ids.begin(), ids.end());
  if (auto dup = std::adjacent_find(ids.begin(), ids.end()); dup != ids.end()) {
    throw Error(ErrorCode::DuplicateIdentifier, std::string(what) + " '" + *dup + "'");
  }
  for (const auto& id : ids) {
    if (id.empty()) throw Error(ErrorCode::InvalidArgument, "empty " + std::string(what) + " id");
  }
}

}  // namespace

std::shared_ptr<const ElectionShape> make_shape(std::vector<std::string> voters,
                                                std::vector<std::string> candidates,
                                                GradeScale scale) {
  sort_unique(voters, "voter");
  sort_unique(candidates, "candidate");
  return std::make_shared<const ElectionShape>(
      ElectionShape{std::move(voters), std::move(candidates), std::move(scale)});
}

Profile::Profile(std::shared_ptr<const ElectionShape> shape, std::vector<Vote> cells)
    : shape_(std::move(shape)), cells_(std::move(cells)) {
  if (!shape_) throw Error(ErrorCode::InvalidArgument, "profile without a shape");
  const auto nv = shape_->voters.size();
  const auto nc = shape_->candidates.size();
  if (cells_.size() != nv * nc) {
    throw Error(ErrorCode::ShapeMismatch,
                "expected " + std::to_string(nv * nc) + " cells, got " +
                    std::to_string(cells_.size()));
  }
  graders_.assign(nc, {});
  for (VoterIndex v = 0; v < nv; ++v) {
    for (CandidateIndex c = 0; c < nc; ++c) {
      const Vote& vote = cells_[v * nc + c];
      if (!vote.is_grade()) continue;
      if (vote.label() >= shape_->scale.size()) {
        throw Error(ErrorCode::UnknownLabel,
                    "label index " + std::to_string(vote.label()) + " for voter '" +
                        shape_->voters[v] + "'");
      }
      graders_[c].push_back(v);
    }
  }
}

std::size_t Profile::offset(VoterIndex voter, CandidateIndex candidate) const {
  if (voter >= voter_count() || candidate >= candidate_count()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "cell (" + std::to_string(voter) + ", " + std::to_string(candidate) + ")");
  }
  return voter * candidate_count() + candidate;
}

Vote Profile::at(VoterIndex voter, CandidateIndex candidate) const {
  return cells_[offset(voter, candidate)];
}

std::span<const Vote> Profile::ballot(VoterIndex voter) const {
  if (voter >= voter_count()) {
    throw Error(ErrorCode::IndexOutOfRange, "voter " + std::to_string(voter));
  }
  return std::span<const Vote>(cells_).subspan(voter * candidate_count(),
                                              candidate_count());
}

const std::vector<VoterIndex>& Profile::graders(CandidateIndex candidate) const {
  if (candidate >= candidate_count()) {
    throw Error(ErrorCode::IndexOutOfRange, "candidate " + std::to_string(candidate));
  }
  return graders_[candidate];
}

std::vector<VoterIndex> Profile::eligible_voters(CandidateIndex candidate) const {
  std::vector<VoterIndex> out;
  for (VoterIndex v = 0; v < voter_count(); ++v) {
    if (at(v, candidate).is_eligible()) out.push_back(v);
  }
  return out;
}

std::vector<CandidateIndex> Profile::eligible_candidates(VoterIndex voter) const {
  std::vector<CandidateIndex> out;
  auto row = ballot(voter);
  for (CandidateIndex c = 0; c < row.size(); ++c) {
    if (row[c].is_eligible()) out.push_back(c);
  }
  return out;
}

std::vector<CandidateIndex> Profile::graded_candidates(VoterIndex voter) const {
  std::vector<CandidateIndex> out;
  auto row = ballot(voter);
  for (CandidateIndex c = 0; c < row.size(); ++c) {
    if (row[c].is_grade()) out.push_back(c);
  }
  return out;
}

const Rational& Profile::grade_value(VoterIndex voter, CandidateIndex candidate) const {
  const Vote vote = at(voter, candidate);
  if (!vote.is_grade()) {
    throw Error(ErrorCode::InvalidArgument,
                "voter '" + shape_->voters[voter] + "' did not grade '" +
                    shape_->candidates[candidate] + "'");
  }
  return scale().position(vote.label());
}

std::vector<Rational> Profile::grades_for(CandidateIndex candidate) const {
  std::vector<Rational> out;
  for (VoterIndex v : graders(candidate)) out.push_back(grade_value(v, candidate));
  return out;
}

Profile Profile::with_cells(std::vector<Vote> cells) const {
  return Profile(shape_, std::move(cells));
}

Profile Profile::with_vote(VoterIndex voter, CandidateIndex candidate, Vote vote) const {
  auto cells = cells_;
  cells[offset(voter, candidate)] = vote;
  return Profile(shape_, std::move(cells));
}

Profile Profile::with_ballot(VoterIndex voter, std::span<const Vote> ballot) const {
  if (ballot.size() != candidate_count()) {
    throw Error(ErrorCode::ShapeMismatch, "ballot length differs from candidate count");
  }
  auto cells = cells_;
  std::copy(ballot.begin(), ballot.end(),
            cells.begin() + static_cast<std::ptrdiff_t>(offset(voter, 0)));
  return Profile(shape_, std::move(cells));
}

Profile Profile::with_scale(GradeScale scale) const {
  auto shape = std::make_shared<const ElectionShape>(
      ElectionShape{shape_->voters, shape_->candidates, std::move(scale)});
  return Profile(std::move(shape), cells_);
}

bool Profile::operator==(const Profile& other) const {
  return (shape_ == other.shape_ || *shape_ == *other.shape_) && cells_ == other.cells_;
}

Profile build_profile(std::vector<std::string> voters,
                      std::vector<std::string> candidates, GradeScale scale,
                      const std::vector<CellAssignment>& cells) {
  auto shape = make_shape(std::move(voters), std::move(candidates), std::move(scale));
  const auto nc = shape->candidates.size();
  std::vector<Vote> matrix(shape->voters.size() * nc, Vote::ineligible());
  std::map<std::pair<VoterIndex, CandidateIndex>, Vote> listed;
  for (const auto& cell : cells) {
    auto v = shape->find_voter(cell.voter);
    if (!v) throw Error(ErrorCode::UnknownIdentifier, "voter '" + cell.voter + "'");
    auto c = shape->find_candidate(cell.candidate);
    if (!c) throw Error(ErrorCode::UnknownIdentifier, "candidate '" + cell.candidate + "'");
    const Vote vote = parse_vote(cell.value, shape->scale);
    auto [it, inserted] = listed.emplace(std::make_pair(*v, *c), vote);
    if (!inserted && it->second != vote) {
      bool conflict = (it->second.is_grade() && !vote.is_eligible()) ||
                      (!it->second.is_eligible() && vote.is_grade());
      throw Error(conflict ? ErrorCode::GradeOnIneligibleCell : ErrorCode::DuplicateCell,
                  "cell (" + cell.voter + ", " + cell.candidate + ") listed twice");
    }
    matrix[*v * nc + *c] = vote;
  }
  return Profile(std::move(shape), std::move(matrix));
}

Profile apply_edit(const Profile& profile, const ProfileEdit& edit) {
  const Vote current = profile.at(edit.voter, edit.candidate);
  if (!current.is_eligible() && edit.replacement.is_eligible()) {
    throw Error(ErrorCode::IllegalEligibilityGrant,
                "voter '" + profile.shape().voters[edit.voter] +
                    "' has no right to vote for '" +
                    profile.shape().candidates[edit.candidate] + "'");
  }
  return profile.with_vote(edit.voter, edit.candidate, edit.replacement);
}

Profile remove_voters(const Profile& profile, std::span<const VoterIndex> removed) {
  if (removed.empty()) return profile;
  auto cells = profile.cells();
  const auto nc = profile.candidate_count();
  for (VoterIndex v : removed) {
    if (v >= profile.voter_count()) {
      throw Error(ErrorCode::IndexOutOfRange, "voter " + std::to_string(v));
    }
    for (CandidateIndex c = 0; c < nc; ++c) {
      auto& cell = cells[v * nc + c];
      if (cell.is_eligible()) cell = Vote::blank();
    }
  }
  return profile.with_cells(std::move(cells));
}

std::vector<VoterIndex> recompute_graders(const Profile& profile,
                                          CandidateIndex candidate) {
  std::vector<VoterIndex> out;
  for (VoterIndex v = 0; v < profile.voter_count(); ++v) {
    if (profile.at(v, candidate).is_grade()) out.push_back(v);
  }
  return out;
}

}  // namespace proxygrade
