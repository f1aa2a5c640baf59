#include "proxygrade/axiom_checker.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace proxygrade {

namespace {

std::vector<std::string> generated_ids(char prefix, std::size_t count) {
  const std::size_t width = std::to_string(count).size();
  std::vector<std::string> ids;
  for (std::size_t i = 1; i <= count; ++i) {
    std::string number = std::to_string(i);
    ids.push_back(std::string(1, prefix) + std::string(width - number.size(), '0') + number);
  }
  return ids;
}

std::string show(const std::optional<Rational>& value) {
  return value ? to_string(*value) : "ungraded";
}

std::string show(const Outcome& outcome) {
  std::string out = "(";
  for (std::size_t i = 0; i < outcome.size(); ++i) {
    if (i) out += ", ";
    out += show(outcome[i]);
  }
  return out + ")";
}

}  // namespace

InstanceSpace::InstanceSpace(std::size_t voters, std::size_t candidates, GradeScale scale,
                             std::vector<Vote> alphabet,
                             std::optional<std::vector<bool>> eligibility, std::uint64_t budget)
    : InstanceSpace(make_shape(generated_ids('v', voters), generated_ids('C', candidates),
                               std::move(scale)),
                    std::move(alphabet), std::move(eligibility), budget) {}

InstanceSpace::InstanceSpace(std::shared_ptr<const ElectionShape> shape,
                             std::vector<Vote> alphabet,
                             std::optional<std::vector<bool>> eligibility, std::uint64_t budget)
    : shape_(std::move(shape)),
      alphabet_(std::move(alphabet)),
      eligibility_(std::move(eligibility)),
      budget_(budget) {
  const std::size_t voters = shape_->voters.size();
  const std::size_t candidates = shape_->candidates.size();
  if (voters == 0 || candidates == 0) {
    throw Error(ErrorCode::InvalidArgument, "instance space needs a voter and a candidate");
  }
  if (alphabet_.empty()) throw Error(ErrorCode::InvalidArgument, "empty cell alphabet");
  std::sort(alphabet_.begin(), alphabet_.end());
  alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end()), alphabet_.end());
  for (const Vote& vote : alphabet_) {
    if (vote.is_grade() && vote.label() >= shape_->scale.size()) {
      throw Error(ErrorCode::UnknownLabel, "alphabet grade index " + std::to_string(vote.label()));
    }
  }
  const std::size_t cells = voters * candidates;
  if (eligibility_ && eligibility_->size() != cells) {
    throw Error(ErrorCode::ShapeMismatch, "eligibility pattern has " +
                                              std::to_string(eligibility_->size()) +
                                              " cells, expected " + std::to_string(cells));
  }
  for (std::size_t cell = 0; cell < cells; ++cell) {
    if (!eligibility_ || (*eligibility_)[cell]) free_cells_.push_back(cell);
  }
}

std::uint64_t InstanceSpace::profile_count() const {
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < free_cells_.size(); ++i) {
    if (count > std::numeric_limits<std::uint64_t>::max() / alphabet_.size()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    count *= alphabet_.size();
  }
  return count;
}

Profile InstanceSpace::profile_at(std::uint64_t index) const {
  std::vector<Vote> cells(voter_count() * candidate_count(), Vote::ineligible());
  for (std::size_t i = free_cells_.size(); i-- > 0;) {
    cells[free_cells_[i]] = alphabet_[index % alphabet_.size()];
    index /= alphabet_.size();
  }
  return Profile(shape_, std::move(cells));
}

std::vector<Vote> InstanceSpace::eligible_values() const {
  std::vector<Vote> out;
  for (const Vote& vote : alphabet_) {
    if (vote.is_eligible()) out.push_back(vote);
  }
  return out;
}

std::vector<Vote> standard_alphabet(const GradeScale& scale) {
  std::vector<Vote> out;
  for (std::uint32_t i = 0; i < scale.size(); ++i) out.push_back(Vote::grade(i));
  out.push_back(Vote::blank());
  out.push_back(Vote::abstain());
  return out;
}

Subject Subject::of(const Mechanism& mechanism, std::string name) {
  auto shared = std::make_shared<const Mechanism>(mechanism);
  return {std::move(name), [shared](const Profile& p) { return grade_outcome(*shared, p); },
          shared};
}

Subject Subject::black_box(std::string name, GradingFunction fn) {
  return {std::move(name), std::move(fn), nullptr};
}

namespace {

std::optional<Rational> mean_of(std::vector<Rational> values) {
  if (values.empty()) return std::nullopt;
  Rational sum{0};
  for (const auto& v : values) sum += v;
  return sum / static_cast<std::int64_t>(values.size());
}

}  // namespace

Subject mean_aggregator() {
  return Subject::black_box("mean", [](const Profile& p) {
    Outcome out;
    for (CandidateIndex c = 0; c < p.candidate_count(); ++c) out.push_back(mean_of(p.grades_for(c)));
    return out;
  });
}

Subject trimmed_mean_aggregator() {
  return Subject::black_box("trimmed_mean", [](const Profile& p) {
    Outcome out;
    for (CandidateIndex c = 0; c < p.candidate_count(); ++c) {
      auto grades = p.grades_for(c);
      std::sort(grades.begin(), grades.end());
      if (grades.size() >= 3) grades = std::vector<Rational>(grades.begin() + 1, grades.end() - 1);
      out.push_back(mean_of(std::move(grades)));
    }
    return out;
  });
}

Subject constant_aggregator(Rational value) {
  return Subject::black_box("constant(" + to_string(value) + ")", [value](const Profile& p) {
    return Outcome(p.candidate_count(), value);
  });
}

namespace {

using Outcomes = std::vector<const Outcome*>;

[[noreturn]] void malformed(const AxiomInstance& inst, const std::string& why) {
  throw Error(ErrorCode::InvalidArgument, inst.axiom + " instance: " + why);
}

void require(bool condition, const AxiomInstance& inst, const char* why) {
  if (!condition) malformed(inst, why);
}

VoterIndex voter_of(const AxiomInstance& inst) {
  if (!inst.voter) malformed(inst, "missing voter");
  return *inst.voter;
}

CandidateIndex candidate_of(const AxiomInstance& inst) {
  if (!inst.candidate) malformed(inst, "missing candidate");
  return *inst.candidate;
}

void require_profiles(const AxiomInstance& inst, std::size_t count) {
  if (inst.profiles.size() != count) {
    malformed(inst, "expected " + std::to_string(count) + " profiles");
  }
  const auto& base = inst.profiles.front();
  for (const auto& p : inst.profiles) {
    if (p.voter_count() != base.voter_count() || p.candidate_count() != base.candidate_count()) {
      malformed(inst, "profiles of different shapes");
    }
  }
  if (inst.voter && *inst.voter >= base.voter_count()) malformed(inst, "voter out of range");
  if (inst.other_voter && *inst.other_voter >= base.voter_count()) {
    malformed(inst, "voter out of range");
  }
  if (inst.candidate && *inst.candidate >= base.candidate_count()) {
    malformed(inst, "candidate out of range");
  }
  if (inst.other_candidate && *inst.other_candidate >= base.candidate_count()) {
    malformed(inst, "candidate out of range");
  }
}

bool differs_only_in_voter(const Profile& v, const Profile& w, VoterIndex voter) {
  for (VoterIndex i = 0; i < v.voter_count(); ++i) {
    if (i == voter) continue;
    for (CandidateIndex c = 0; c < v.candidate_count(); ++c) {
      if (v.at(i, c) != w.at(i, c)) return false;
    }
  }
  return true;
}

bool same_rights(const Profile& v, VoterIndex i, const Profile& w, VoterIndex j) {
  for (CandidateIndex c = 0; c < v.candidate_count(); ++c) {
    if (v.at(i, c).is_eligible() != w.at(j, c).is_eligible()) return false;
  }
  return true;
}

bool same_column(const Profile& v, const Profile& w, CandidateIndex c) {
  for (VoterIndex i = 0; i < v.voter_count(); ++i) {
    if (v.at(i, c) != w.at(i, c)) return false;
  }
  return true;
}

Profile swap_columns(const Profile& p, CandidateIndex a, CandidateIndex b) {
  std::vector<Vote> cells = p.cells();
  const auto nc = p.candidate_count();
  for (VoterIndex i = 0; i < p.voter_count(); ++i) std::swap(cells[i * nc + a], cells[i * nc + b]);
  return p.with_cells(std::move(cells));
}

Profile swap_ballots(const Profile& p, VoterIndex a, VoterIndex b) {
  std::vector<Vote> cells = p.cells();
  const auto nc = p.candidate_count();
  for (CandidateIndex c = 0; c < nc; ++c) std::swap(cells[a * nc + c], cells[b * nc + c]);
  return p.with_cells(std::move(cells));
}

Profile drop_ballot(const Profile& p, VoterIndex voter) {
  std::vector<Vote> ballot(p.candidate_count(), Vote::ineligible());
  return p.with_ballot(voter, ballot);
}

Profile merge_profiles(const Profile& v, const Profile& w) {
  std::vector<Vote> cells = v.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!cells[i].is_eligible()) cells[i] = w.cells()[i];
  }
  return v.with_cells(std::move(cells));
}

/// Same votes on `scale`, which is the profile's scale with one label
/// inserted at `inserted` (or unchanged).
Profile rescale(const Profile& p, const GradeScale& scale, std::size_t inserted) {
  if (scale.size() == p.scale().size()) return p.with_scale(scale);
  std::vector<Vote> cells = p.cells();
  for (auto& cell : cells) {
    if (cell.is_grade() && cell.label() >= inserted) cell = Vote::grade(cell.label() + 1);
  }
  return p.with_cells(std::move(cells)).with_scale(scale);
}

Rational distance(const Rational& a, const Rational& b) { return a > b ? a - b : b - a; }

// Shared by SP and strong SP: the outcome moved strictly toward `peak`.
std::optional<std::string> moved_toward(const std::optional<Rational>& before,
                                        const std::optional<Rational>& after,
                                        const Rational& peak, const std::string& who) {
  if (!before || !after) return std::nullopt;
  if ((*before > peak && *after < *before) || (*before < peak && *after > *before)) {
    return who + " with peak " + to_string(peak) + " moved the outcome from " + to_string(*before) +
           " to " + to_string(*after);
  }
  return std::nullopt;
}

std::optional<std::string> judge(const Subject& subject, const AxiomInstance& inst,
                                 const Outcomes& out) {
  const std::string& axiom = inst.axiom;

  if (axiom == "SP" || axiom == "StrongSP") {
    require_profiles(inst, 2);
    const auto i = voter_of(inst);
    const auto J = candidate_of(inst);
    const Profile& v = inst.profiles[0];
    const Profile& w = inst.profiles[1];
    require(differs_only_in_voter(v, w, i), inst, "variant changes another voter");
    require(same_rights(v, i, w, i), inst, "deviation changes eligibility");
    Rational peak;
    if (axiom == "SP") {
      require(v.at(i, J).is_grade() && w.at(i, J).is_grade(), inst, "both votes must be grades");
      peak = v.grade_value(i, J);
    } else {
      if (!inst.alpha) malformed(inst, "missing alpha");
      require(v.scale().find_position(*inst.alpha).has_value(), inst, "alpha must be a grade");
      if (v.at(i, J).is_grade()) {
        require(v.grade_value(i, J) == *inst.alpha, inst, "alpha must equal the voter's grade");
      }
      peak = *inst.alpha;
    }
    const auto& before = (*out[0])[J];
    const auto& after = (*out[1])[J];
    return moved_toward(before, after, peak,
                        "voter " + v.shape().voters[i] + " on " + v.shape().candidates[J]);
  }

  if (axiom == "BV") {
    require_profiles(inst, 2);
    const auto i = voter_of(inst);
    const auto J = candidate_of(inst);
    const Profile& v = inst.profiles[0];
    require(v.at(i, J).is_blank(), inst, "cell must be blank");
    require(inst.profiles[1] == v.with_vote(i, J, Vote::ineligible()), inst,
            "variant must turn the blank vote into ineligibility");
    if (*out[0] != *out[1]) {
      return "outcome " + show(*out[0]) + " became " + show(*out[1]);
    }
    return std::nullopt;
  }

  if (axiom == "SI") {
    require_profiles(inst, 2);
    const auto i = voter_of(inst);
    const auto J = candidate_of(inst);
    const Profile& v = inst.profiles[0];
    require(v.at(i, J).is_abstain(), inst, "cell must be an abstention");
    require(inst.profiles[1] == drop_ballot(v, i), inst, "variant must drop the whole ballot");
    if ((*out[0])[J] != (*out[1])[J]) {
      return "grade " + show((*out[0])[J]) + " became " + show((*out[1])[J]) +
             " once the abstainer lost every right";
    }
    return std::nullopt;
  }

  if (axiom == "SC" || axiom == "SC_B") {
    require_profiles(inst, 2);
    const auto i = voter_of(inst);
    const auto J = candidate_of(inst);
    const Profile& v = inst.profiles[0];
    const Profile& w = inst.profiles[1];
    require(v.at(i, J).is_abstain(), inst, "cell must be an abstention");
    const auto& alpha = (*out[0])[J];
    if (!alpha) return std::nullopt;
    if (axiom == "SC" && !v.scale().find_position(*alpha)) return std::nullopt;
    require(w.at(i, J).is_grade() && w.grade_value(i, J) == *alpha, inst,
            "variant must vote the outcome");
    if ((*out[1])[J] != alpha) {
      return "voting the outcome " + to_string(*alpha) + " moved it to " + show((*out[1])[J]);
    }
    return std::nullopt;
  }

  if (axiom == "P" || axiom == "FP") {
    require_profiles(inst, 2);
    const auto i = voter_of(inst);
    const auto J = candidate_of(inst);
    const Profile& v = inst.profiles[0];
    const Profile& w = inst.profiles[1];
    require(v.at(i, J).is_grade(), inst, "cell must be a grade");
    const Vote silence = w.at(i, J);
    require(silence.is_abstain() || (axiom == "FP" && silence.is_blank()), inst,
            "variant must abstain (or vote blank)");
    require(w == v.with_vote(i, J, silence), inst, "variant changes other cells");
    const Rational peak = v.grade_value(i, J);
    const auto& before = (*out[0])[J];
    const auto& after = (*out[1])[J];
    if (!before || !after) return std::nullopt;
    const bool strict = axiom == "P";
    const bool above = strict ? *before > peak : *before >= peak;
    const bool below = strict ? *before < peak : *before <= peak;
    if ((above && *after < *before) || (below && *after > *before)) {
      return "grade " + to_string(*before) + " with the voter at " + to_string(peak) + " became " +
             to_string(*after) + " after " + describe(silence, v.scale());
    }
    return std::nullopt;
  }

  if (axiom == "JD") {
    require_profiles(inst, 2);
    const auto J = candidate_of(inst);
    require(same_column(inst.profiles[0], inst.profiles[1], J), inst, "columns must agree");
    if ((*out[0])[J] != (*out[1])[J]) {
      return "same votes for " + inst.profiles[0].shape().candidates[J] + " but grades " +
             show((*out[0])[J]) + " and " + show((*out[1])[J]);
    }
    return std::nullopt;
  }

  if (axiom == "U") {
    require_profiles(inst, 1);
    const auto J = candidate_of(inst);
    const Profile& v = inst.profiles[0];
    if (!inst.alpha) malformed(inst, "missing alpha");
    const auto grades = v.grades_for(J);
    require(!grades.empty() && std::all_of(grades.begin(), grades.end(),
                                           [&](const Rational& g) { return g == *inst.alpha; }),
            inst, "every grader must give alpha");
    if ((*out[0])[J] != inst.alpha) {
      return "every grade is " + to_string(*inst.alpha) + " but the outcome is " +
             show((*out[0])[J]);
    }
    return std::nullopt;
  }

  if (axiom == "Pareto") {
    require_profiles(inst, 1);
    const auto J = candidate_of(inst);
    const Profile& v = inst.profiles[0];
    auto grades = v.grades_for(J);
    require(!grades.empty(), inst, "candidate must have graders");
    const auto& outcome = (*out[0])[J];
    if (!outcome) return "ungraded despite " + std::to_string(grades.size()) + " grades";
    std::vector<Rational> betas = grades;
    betas.push_back(v.scale().lo());
    betas.push_back(v.scale().hi());
    std::sort(betas.begin(), betas.end());
    betas.erase(std::unique(betas.begin(), betas.end()), betas.end());
    for (const auto& beta : betas) {
      bool closer = false;
      bool farther = false;
      for (const auto& g : grades) {
        closer = closer || distance(beta, g) < distance(*outcome, g);
        farther = farther || distance(beta, g) > distance(*outcome, g);
      }
      if (closer && !farther) {
        return to_string(beta) + " dominates the outcome " + to_string(*outcome);
      }
    }
    return std::nullopt;
  }

  if (axiom == "N" || axiom == "SN") {
    require_profiles(inst, 2);
    const auto I = candidate_of(inst);
    if (!inst.other_candidate) malformed(inst, "missing second candidate");
    const auto J = *inst.other_candidate;
    const Profile& v = inst.profiles[0];
    if (axiom == "N") {
      for (VoterIndex i = 0; i < v.voter_count(); ++i) {
        require(v.at(i, I).is_eligible() == v.at(i, J).is_eligible(), inst,
                "candidates must share their electorate");
      }
    }
    require(inst.profiles[1] == swap_columns(v, I, J), inst, "variant must swap the columns");
    Outcome expected = *out[0];
    std::swap(expected[I], expected[J]);
    if (*out[1] != expected) {
      return "swapping the candidates gave " + show(*out[1]) + ", expected " + show(expected);
    }
    return std::nullopt;
  }

  if (axiom == "F") {
    require_profiles(inst, 1);
    if (!subject.mechanism) throw Error(ErrorCode::NeedsMechanism, "fairness needs voting pools");
    const auto I = candidate_of(inst);
    if (!inst.other_candidate) malformed(inst, "missing second candidate");
    const auto J = *inst.other_candidate;
    const Profile& v = inst.profiles[0];
    require(assemble_pool(*subject.mechanism, v, I).values() ==
                assemble_pool(*subject.mechanism, v, J).values(),
            inst, "pools must be equal");
    if ((*out[0])[I] != (*out[0])[J]) {
      return "equal pools graded " + show((*out[0])[I]) + " and " + show((*out[0])[J]);
    }
    return std::nullopt;
  }

  if (axiom == "A" || axiom == "SA") {
    require_profiles(inst, 2);
    const auto i = voter_of(inst);
    if (!inst.other_voter) malformed(inst, "missing second voter");
    const auto j = *inst.other_voter;
    const Profile& v = inst.profiles[0];
    if (axiom == "A") require(same_rights(v, i, v, j), inst, "voters must share their rights");
    require(inst.profiles[1] == swap_ballots(v, i, j), inst, "variant must swap the ballots");
    if (*out[0] != *out[1]) {
      return "swapping ballots changed " + show(*out[0]) + " to " + show(*out[1]);
    }
    return std::nullopt;
  }

  if (axiom == "OC") {
    require_profiles(inst, 3);
    const auto J = candidate_of(inst);
    const auto& t = (*out[0])[J];
    const auto& v = (*out[1])[J];
    const auto& w = (*out[2])[J];
    if (v == w && t != v) {
      return "both halves grade " + show(v) + " but the whole electorate grades " + show(t);
    }
    return std::nullopt;
  }

  if (axiom == "IC") {
    require_profiles(inst, 4);
    const auto J = candidate_of(inst);
    const Profile& vp = inst.profiles[1];
    const Profile& wp = inst.profiles[2];
    for (VoterIndex i = 0; i < vp.voter_count(); ++i) {
      require(!(vp.at(i, J).is_eligible() && wp.at(i, J).is_eligible()), inst,
              "electorates must be disjoint");
    }
    require(inst.profiles[3] == merge_profiles(vp, wp), inst, "last profile must be the merge");
    const auto& v = (*out[1])[J];
    const auto& w = (*out[2])[J];
    const auto& merged = (*out[3])[J];
    if (v == w && merged != v) {
      return "both parts grade " + show(v) + " but the merge grades " + show(merged);
    }
    return std::nullopt;
  }

  throw Error(ErrorCode::InvalidArgument, "unknown axiom '" + axiom + "'");
}

class Run {
 public:
  Run(std::string axiom, const Subject& subject, const InstanceSpace& space)
      : subject_(subject), budget_(space.budget()) {
    verdict_.axiom = std::move(axiom);
    if (space.profile_count() > budget_) {
      throw Error(ErrorCode::BudgetExceeded,
                  verdict_.axiom + ": " + std::to_string(space.profile_count()) +
                      " profiles exceed the budget of " + std::to_string(budget_));
    }
  }

  const std::string& axiom() const { return verdict_.axiom; }

  Outcome eval(const Profile& profile) {
    if (++verdict_.evaluations > budget_) {
      throw Error(ErrorCode::BudgetExceeded, verdict_.axiom + ": more than " +
                                                 std::to_string(budget_) + " evaluations");
    }
    return subject_.fn(profile);
  }

  /// True when the instance violates the axiom; the verdict then records it.
  bool violated(AxiomInstance instance, const Outcomes& outcomes) {
    ++verdict_.instances;
    auto why = judge(subject_, instance, outcomes);
    if (!why) return false;
    verdict_.holds = false;
    verdict_.detail = std::move(*why);
    verdict_.witness = std::move(instance);
    return true;
  }

  /// An instance whose premise fails before any further evaluation.
  void skip() { ++verdict_.instances; }

  Verdict finish() { return std::move(verdict_); }

 private:
  const Subject& subject_;
  std::uint64_t budget_;
  Verdict verdict_;
};

/// Calls fn(ballot) for every ballot of `voter` with the same rights,
/// other than the current one. Stops when fn returns true.
template <class Fn>
bool for_each_deviation(const Profile& v, VoterIndex voter, const std::vector<Vote>& values,
                        Fn&& fn) {
  const auto current = v.ballot(voter);
  std::vector<std::size_t> slots;
  for (CandidateIndex c = 0; c < current.size(); ++c) {
    if (current[c].is_eligible()) slots.push_back(c);
  }
  std::vector<Vote> ballot(current.begin(), current.end());
  std::vector<std::size_t> digit(slots.size(), 0);
  for (std::size_t s = 0; s < slots.size(); ++s) ballot[slots[s]] = values[0];
  while (true) {
    if (!std::equal(ballot.begin(), ballot.end(), current.begin())) {
      if (fn(ballot)) return true;
    }
    std::size_t s = slots.size();
    while (s > 0) {
      --s;
      if (++digit[s] < values.size()) {
        ballot[slots[s]] = values[digit[s]];
        break;
      }
      digit[s] = 0;
      ballot[slots[s]] = values[0];
      if (s == 0) return false;
    }
    if (slots.empty()) return false;
  }
}

AxiomInstance make(const std::string& axiom, std::vector<Profile> profiles) {
  AxiomInstance inst;
  inst.axiom = axiom;
  inst.profiles = std::move(profiles);
  return inst;
}

Verdict deviation_check(const std::string& axiom, const Subject& subject,
                        const InstanceSpace& space) {
  Run run(axiom, subject, space);
  const auto values = space.eligible_values();
  const auto& scale = space.scale();
  const bool strong = axiom == "StrongSP";
  for (std::uint64_t index = 0; index < space.profile_count(); ++index) {
    const Profile v = space.profile_at(index);
    const Outcome phi = run.eval(v);
    for (VoterIndex i = 0; i < v.voter_count(); ++i) {
      const bool stop = for_each_deviation(v, i, values, [&](const std::vector<Vote>& ballot) {
        if (!strong) {
          bool relevant = false;
          for (CandidateIndex c = 0; c < ballot.size(); ++c) {
            relevant = relevant || (v.at(i, c).is_grade() && ballot[c].is_grade());
          }
          if (!relevant) return false;
        }
        const Profile w = v.with_ballot(i, ballot);
        const Outcome psi = run.eval(w);
        for (CandidateIndex J = 0; J < ballot.size(); ++J) {
          AxiomInstance inst = make(axiom, {v, w});
          inst.voter = i;
          inst.candidate = J;
          if (!strong) {
            if (!(v.at(i, J).is_grade() && ballot[J].is_grade())) continue;
            if (run.violated(std::move(inst), {&phi, &psi})) return true;
            continue;
          }
          if (v.at(i, J).is_grade()) {
            inst.alpha = v.grade_value(i, J);
            if (run.violated(std::move(inst), {&phi, &psi})) return true;
            continue;
          }
          // Any opinion alpha in A is allowed; only a moved outcome can violate.
          for (std::size_t label = 0; label < scale.size(); ++label) {
            AxiomInstance trial = inst;
            trial.alpha = scale.position(label);
            if (phi[J] == psi[J] && label > 0) break;
            if (run.violated(std::move(trial), {&phi, &psi})) return true;
          }
        }
        return false;
      });
      if (stop) return run.finish();
    }
  }
  return run.finish();
}

}  // namespace

std::optional<std::string> evaluate_instance(const Subject& subject, const AxiomInstance& instance) {
  std::vector<Outcome> outcomes;
  outcomes.reserve(instance.profiles.size());
  for (const auto& profile : instance.profiles) outcomes.push_back(subject.fn(profile));
  Outcomes refs;
  for (const auto& o : outcomes) refs.push_back(&o);
  return judge(subject, instance, refs);
}

Verdict check_sp(const Subject& subject, const InstanceSpace& space) {
  return deviation_check("SP", subject, space);
}

Verdict check_strong_sp(const Subject& subject, const InstanceSpace& space) {
  return deviation_check("StrongSP", subject, space);
}

Verdict check_bv(const Subject& subject, const InstanceSpace& space) {
  Run run("BV", subject, space);
  for (std::uint64_t index = 0; index < space.profile_count(); ++index) {
    const Profile v = space.profile_at(index);
    std::optional<Outcome> phi;
    for (VoterIndex i = 0; i < v.voter_count(); ++i) {
      for (CandidateIndex J = 0; J < v.candidate_count(); ++J) {
        if (!v.at(i, J).is_blank()) continue;
        if (!phi) phi = run.eval(v);
        const Profile w = v.with_vote(i, J, Vote::ineligible());
        const Outcome psi = run.eval(w);
        AxiomInstance inst = make("BV", {v, w});
        inst.voter = i;
        inst.candidate = J;
        if (run.violated(std::move(inst), {&*phi, &psi})) return run.finish();
      }
    }
  }
  return run.finish();
}

Verdict check_si(const Subject& subject, const InstanceSpace& space) {
  Run run("SI", subject, space);
  for (std::uint64_t index = 0; index < space.profile_count(); ++index) {
    const Profile v = space.profile_at(index);
    std::optional<Outcome> phi;
    for (VoterIndex i = 0; i < v.voter_count(); ++i) {
      std::optional<Profile> w;
      std::optional<Outcome> psi;
      for (CandidateIndex J = 0; J < v.candidate_count(); ++J) {
        if (!v.at(i, J).is_abstain()) continue;
        if (!phi) phi = run.eval(v);
        if (!w) {
          w = drop_ballot(v, i);
          psi = run.eval(*w);
        }
        AxiomInstance inst = make("SI", {v, *w});
        inst.voter = i;
        inst.candidate = J;
        if (run.violated(std::move(inst), {&*phi, &*psi})) return run.finish();
      }
    }
  }
  return run.finish();
}

Verdict check_sc(const Subject& subject, const InstanceSpace& space, ConsentRange range) {
  const std::string axiom = range == ConsentRange::InputGrades ? "SC" : "SC_B";
  Run run(axiom, subject, space);
  for (std::uint64_t index = 0; index < space.profile_count(); ++index) {
    const Profile v = space.profile_at(index);
    std::optional<Outcome> phi;
    for (VoterIndex i = 0; i < v.voter_count(); ++i) {
      for (CandidateIndex J = 0; J < v.candidate_count(); ++J) {
        if (!v.at(i, J).is_abstain()) continue;
        if (!phi) phi = run.eval(v);
        const auto& alpha = (*phi)[J];
        if (!alpha) continue;
        std::optional<Profile> w;
        if (auto label = v.scale().find_position(*alpha)) {
          w = v.with_vote(i, J, Vote::grade(static_cast<std::uint32_t>(*label)));
        } else if (range == ConsentRange::OutputInterval) {
          auto [wide, at] = v.scale().widened_with(*alpha);
          w = rescale(v, wide, at).with_vote(i, J, Vote::grade(static_cast<std::uint32_t>(at)));
        } else {
          continue;
        }
        const Outcome psi = run.eval(*w);
        AxiomInstance inst = make(axiom, {v, *w});
        inst.voter = i;
        inst.candidate = J;
        inst.alpha = alpha;
        if (run.violated(std::move(inst), {&*phi, &psi})) return run.finish();
      }
    }
  }
  return run.finish();
}

namespace {

Verdict silence_check(const std::string& axiom, const Subject& subject,
                      const InstanceSpace& space) {
  Run run(axiom, subject, space);
  std::vector<Vote> silences{Vote::abstain()};
  if (axiom == "FP") silences.push_back(Vote::blank());
  for (std::uint64_t index = 0; index < space.profile_count(); ++index) {
    const Profile v = space.profile_at(index);
    std::optional<Outcome> phi;
    for (VoterIndex i = 0; i < v.voter_count(); ++i) {
      for (CandidateIndex J = 0; J < v.candidate_count(); ++J) {
        if (!v.at(i, J).is_grade()) continue;
        if (!phi) phi = run.eval(v);
        for (const Vote& silence : silences) {
          const Profile w = v.with_vote(i, J, silence);
          const Outcome psi = run.eval(w);
          AxiomInstance inst = make(axiom, {v, w});
          inst.voter = i;
          inst.candidate = J;
          if (run.violated(std::move(inst), {&*phi, &psi})) return run.finish();
        }
      }
    }
  }
  return run.finish();
}

}  // namespace

Verdict check_p(const Subject& subject, const InstanceSpace& space) {
  return silence_check("P", subject, space);
}

Verdict check_fp(const Subject& subject, const InstanceSpace& space) {
  return silence_check("FP", subject, space);
}

Verdict check_jd(const Subject& subject, const InstanceSpace& space) {
  Run run("JD", subject, space);
  std::vector<std::map<std::vector<Vote>, std::pair<std::uint64_t, std::optional<Rational>>>> seen(
      space.candidate_count());
  for (std::uint64_t index = 0; index < space.profile_count(); ++index) {
    const Profile v = space.profile_at(index);
    const Outcome phi = run.eval(v);
    for (CandidateIndex J = 0; J < v.candidate_count(); ++J) {
      std::vector<Vote> column;
      for (VoterIndex i = 0; i < v.voter_count(); ++i) column.push_back(v.at(i, J));
      auto [it, inserted] = seen[J].emplace(std::move(column), std::make_pair(index, phi[J]));
      if (inserted || it->second.second == phi[J]) continue;
      const Profile first = space.profile_at(it->second.first);
      Outcome first_outcome(v.candidate_count());
      first_outcome[J] = it->second.second;
      AxiomInstance inst = make("JD", {first, v});
      inst.candidate = J;
      if (run.violated(std::move(inst), {&first_outcome, &phi})) return run.finish();
    }
  }
  return run.finish();
}

Verdict check_u(const Subject& subject, const InstanceSpace& space) {
  Run run("U", subject, space);
  for (std::uint64_t index = 0; index < space.profile_count(); ++index) {
    const Profile v = space.profile_at(index);
    std::optional<Outcome> phi;
    for (CandidateIndex J = 0; J < v.candidate_count(); ++J) {
      const auto grades = v.grades_for(J);
      if (grades.empty() ||
          !std::all_of(grades.begin(), grades.end(), [&](const Rational& g) { return g == grades[0]; })) {
        continue;
      }
      if (!phi) phi = run.eval(v);
      AxiomInstance inst = make("U", {v});
      inst.candidate = J;
      inst.alpha = grades[0];
      if (run.violated(std::move(inst), {&*phi})) return run.finish();
    }
  }
  return run.finish();
}

Verdict check_pareto(const Subject& subject, const InstanceSpace& space) {
  Run run("Pareto", subject, space);
  for (std::uint64_t index = 0; index < space.profile_count(); ++index) {
    const Profile v = space.profile_at(index);
    std::optional<Outcome> phi;
    for (CandidateIndex J = 0; J < v.candidate_count(); ++J) {
      if (v.graders(J).empty()) continue;
      if (!phi) phi = run.eval(v);
      AxiomInstance inst = make("Pareto", {v});
      inst.candidate = J;
      if (run.violated(std::move(inst), {&*phi})) return run.finish();
    }
  }
  return run.finish();
}

namespace {

Verdict column_swap_check(const std::string& axiom, const Subject& subject,
                          const InstanceSpace& space) {
  Run run(axiom, subject, space);
  for (std::uint64_t index = 0; index < space.profile_count(); ++index) {
    const Profile v = space.profile_at(index);
    std::optional<Outcome> phi;
    for (CandidateIndex I = 0; I < v.candidate_count(); ++I) {
      for (CandidateIndex J = I + 1; J < v.candidate_count(); ++J) {
        if (axiom == "N") {
          bool same = true;
          for (VoterIndex i = 0; i < v.voter_count(); ++i) {
            same = same && v.at(i, I).is_eligible() == v.at(i, J).is_eligible();
          }
          if (!same) continue;
        }
        if (!phi) phi = run.eval(v);
        const Profile w = swap_columns(v, I, J);
        const Outcome psi = run.eval(w);
        AxiomInstance inst = make(axiom, {v, w});
        inst.candidate = I;
        inst.other_candidate = J;
        if (run.violated(std::move(inst), {&*phi, &psi})) return run.finish();
      }
    }
  }
  return run.finish();
}

Verdict ballot_swap_check(const std::string& axiom, const Subject& subject,
                          const InstanceSpace& space) {
  Run run(axiom, subject, space);
  for (std::uint64_t index = 0; index < space.profile_count(); ++index) {
    const Profile v = space.profile_at(index);
    std::optional<Outcome> phi;
    for (VoterIndex i = 0; i < v.voter_count(); ++i) {
      for (VoterIndex j = i + 1; j < v.voter_count(); ++j) {
        if (axiom == "A" && !same_rights(v, i, v, j)) continue;
        if (!phi) phi = run.eval(v);
        const Profile w = swap_ballots(v, i, j);
        const Outcome psi = run.eval(w);
        AxiomInstance inst = make(axiom, {v, w});
        inst.voter = i;
        inst.other_voter = j;
        if (run.violated(std::move(inst), {&*phi, &psi})) return run.finish();
      }
    }
  }
  return run.finish();
}

std::vector<VoterIndex> members(std::uint64_t mask, std::size_t count) {
  std::vector<VoterIndex> out;
  for (std::size_t i = 0; i < count; ++i) {
    if (mask & (std::uint64_t{1} << i)) out.push_back(i);
  }
  return out;
}

}  // namespace

Verdict check_n(const Subject& subject, const InstanceSpace& space) {
  return column_swap_check("N", subject, space);
}

Verdict check_sn(const Subject& subject, const InstanceSpace& space) {
  return column_swap_check("SN", subject, space);
}

Verdict check_a(const Subject& subject, const InstanceSpace& space) {
  return ballot_swap_check("A", subject, space);
}

Verdict check_sa(const Subject& subject, const InstanceSpace& space) {
  return ballot_swap_check("SA", subject, space);
}

Verdict check_fairness(const Subject& subject, const InstanceSpace& space) {
  if (!subject.mechanism) {
    throw Error(ErrorCode::NeedsMechanism,
                "fairness compares voting pools; '" + subject.name + "' has none");
  }
  Run run("F", subject, space);
  for (std::uint64_t index = 0; index < space.profile_count(); ++index) {
    const Profile v = space.profile_at(index);
    std::vector<RationalMultiset> pools;
    for (CandidateIndex J = 0; J < v.candidate_count(); ++J) {
      pools.push_back(assemble_pool(*subject.mechanism, v, J).values());
    }
    std::optional<Outcome> phi;
    for (CandidateIndex I = 0; I < v.candidate_count(); ++I) {
      for (CandidateIndex J = I + 1; J < v.candidate_count(); ++J) {
        if (!(pools[I] == pools[J])) continue;
        if (!phi) phi = run.eval(v);
        AxiomInstance inst = make("F", {v});
        inst.candidate = I;
        inst.other_candidate = J;
        if (run.violated(std::move(inst), {&*phi})) return run.finish();
      }
    }
  }
  return run.finish();
}

Verdict check_oc(const Subject& subject, const InstanceSpace& space) {
  Run run("OC", subject, space);
  const std::size_t n = space.voter_count();
  if (n >= 20) throw Error(ErrorCode::EnumerationLimit, "too many voters to partition");
  const std::uint64_t all = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t index = 0; index < space.profile_count(); ++index) {
    const Profile t = space.profile_at(index);
    const Outcome whole = run.eval(t);
    std::vector<std::optional<Profile>> parts(all + 1);
    std::vector<Outcome> outcomes(all + 1);
    for (std::uint64_t removed = 0; removed <= all; ++removed) {
      parts[removed] = remove_voters(t, members(removed, n));
      outcomes[removed] = run.eval(*parts[removed]);
    }
    for (std::uint64_t first = 0; first <= all; ++first) {
      const std::uint64_t second = all & ~first;
      for (CandidateIndex J = 0; J < t.candidate_count(); ++J) {
        AxiomInstance inst = make("OC", {t, *parts[first], *parts[second]});
        inst.candidate = J;
        if (run.violated(std::move(inst), {&whole, &outcomes[first], &outcomes[second]})) {
          return run.finish();
        }
      }
    }
  }
  return run.finish();
}

Verdict check_ic(const Subject& subject, const InstanceSpace& space) {
  Run run("IC", subject, space);
  const std::size_t cells = space.voter_count() * space.candidate_count();
  if (cells >= 20) throw Error(ErrorCode::EnumerationLimit, "too many cells for right removal");
  const std::size_t nc = space.candidate_count();
  const std::uint64_t masks = std::uint64_t{1} << cells;
  for (std::uint64_t index = 0; index < space.profile_count(); ++index) {
    const Profile t = space.profile_at(index);
    const auto& tc = t.cells();
    if (std::any_of(tc.begin(), tc.end(), [](const Vote& v) { return !v.is_eligible(); })) continue;
    std::optional<Outcome> whole;
    std::vector<std::optional<Profile>> cut(masks);
    std::vector<std::optional<Outcome>> cut_outcome(masks);
    auto part = [&](std::uint64_t mask) -> std::size_t {
      if (!cut[mask]) {
        std::vector<Vote> reduced = tc;
        for (std::size_t c = 0; c < cells; ++c) {
          if (mask & (std::uint64_t{1} << c)) reduced[c] = Vote::ineligible();
        }
        cut[mask] = t.with_cells(std::move(reduced));
        cut_outcome[mask] = run.eval(*cut[mask]);
      }
      return mask;
    };
    for (std::uint64_t a = 0; a < masks; ++a) {
      for (std::uint64_t b = 0; b < masks; ++b) {
        std::optional<Profile> merged;
        std::optional<Outcome> merged_outcome;
        for (CandidateIndex J = 0; J < nc; ++J) {
          // Removed-cell masks: J's electorates are disjoint iff every
          // voter lost the J right in a or in b.
          bool disjoint = true;
          for (VoterIndex i = 0; i < space.voter_count() && disjoint; ++i) {
            const std::uint64_t bit = std::uint64_t{1} << (i * nc + J);
            disjoint = (a & bit) || (b & bit);
          }
          if (!disjoint) continue;
          part(a);
          part(b);
          if ((*cut_outcome[a])[J] != (*cut_outcome[b])[J]) {
            run.skip();
            continue;
          }
          if (!whole) whole = run.eval(t);
          if (!merged) {
            merged = merge_profiles(*cut[a], *cut[b]);
            merged_outcome = run.eval(*merged);
          }
          AxiomInstance inst = make("IC", {t, *cut[a], *cut[b], *merged});
          inst.candidate = J;
          if (run.violated(std::move(inst),
                           {&*whole, &*cut_outcome[a], &*cut_outcome[b], &*merged_outcome})) {
            return run.finish();
          }
        }
      }
    }
  }
  return run.finish();
}

const std::vector<std::string>& axiom_names() {
  static const std::vector<std::string> names{"SP", "BV",  "SI", "SC", "SC_B", "P",  "FP",
                                              "JD", "StrongSP", "U", "Pareto", "N", "SN",
                                              "F",  "A",   "SA", "OC", "IC"};
  return names;
}

Verdict check_axiom(std::string_view axiom, const Subject& subject, const InstanceSpace& space) {
  if (axiom == "SP") return check_sp(subject, space);
  if (axiom == "BV") return check_bv(subject, space);
  if (axiom == "SI") return check_si(subject, space);
  if (axiom == "SC") return check_sc(subject, space, ConsentRange::InputGrades);
  if (axiom == "SC_B") return check_sc(subject, space, ConsentRange::OutputInterval);
  if (axiom == "P") return check_p(subject, space);
  if (axiom == "FP") return check_fp(subject, space);
  if (axiom == "JD") return check_jd(subject, space);
  if (axiom == "StrongSP") return check_strong_sp(subject, space);
  if (axiom == "U") return check_u(subject, space);
  if (axiom == "Pareto") return check_pareto(subject, space);
  if (axiom == "N") return check_n(subject, space);
  if (axiom == "SN") return check_sn(subject, space);
  if (axiom == "F") return check_fairness(subject, space);
  if (axiom == "A") return check_a(subject, space);
  if (axiom == "SA") return check_sa(subject, space);
  if (axiom == "OC") return check_oc(subject, space);
  if (axiom == "IC") return check_ic(subject, space);
  throw Error(ErrorCode::InvalidArgument, "unknown axiom '" + std::string(axiom) + "'");
}

std::vector<CrossCheck> cross_check(const Subject& subject, const ElectionShape& shape,
                                    const std::map<std::string, Verdict>& verdicts) {
  std::vector<CrossCheck> out;
  auto has = [&](std::initializer_list<const char*> names) {
    return std::all_of(names.begin(), names.end(),
                       [&](const char* n) { return verdicts.count(n) > 0; });
  };
  auto holds = [&](const char* name) { return verdicts.at(name).holds; };
  auto add = [&](std::string name, bool applicable, bool consistent, std::string detail) {
    out.push_back({std::move(name), applicable, !applicable || consistent, std::move(detail)});
  };
  const bool proxy = subject.mechanism != nullptr;

  if (has({"P", "SC"})) {
    add("P => SC", true, !holds("P") || holds("SC"),
        std::string("P ") + (holds("P") ? "holds" : "fails") + ", SC " +
            (holds("SC") ? "holds" : "fails"));
    add("SC <=> P (phantom-proxy)", proxy, holds("SC") == holds("P"),
        proxy ? "" : "subject has no mechanism");
  }
  if (has({"BV", "OC", "P"})) {
    add("BV and OC => P (phantom-proxy)", proxy, !(holds("BV") && holds("OC")) || holds("P"),
        proxy ? "" : "subject has no mechanism");
  }
  if (has({"StrongSP", "SP", "FP", "JD"})) {
    const bool conj = holds("SP") && holds("FP") && holds("JD");
    add("StrongSP <=> SP and FP and JD", true, holds("StrongSP") == conj,
        std::string("StrongSP ") + (holds("StrongSP") ? "holds" : "fails") +
            ", conjunction " + (conj ? "holds" : "fails"));
  }
  if (has({"U", "Pareto"})) {
    add("U <=> Pareto", true, holds("U") == holds("Pareto"),
        std::string("U ") + (holds("U") ? "holds" : "fails") + ", Pareto " +
            (holds("Pareto") ? "holds" : "fails"));
  }
  if (proxy) {
    const auto surface = validate_axiom_surface(*subject.mechanism, shape, 50);
    for (const auto& entry : surface.entries) {
      auto it = verdicts.find(entry.axiom);
      if (it == verdicts.end() || entry.verdict == SurfaceVerdict::NotDecidableSyntactically) {
        continue;
      }
      const bool structural = entry.verdict == SurfaceVerdict::Holds;
      std::string detail = "structure: " + to_string(entry.verdict) + " (" + entry.reason +
                           "); search: " + (it->second.holds ? "holds" : "fails");
      if (!structural && it->second.holds) detail += "; no witness at this scale";
      add("structure agrees on " + entry.axiom, true, !(structural && !it->second.holds),
          std::move(detail));
    }
  }
  return out;
}

}  // namespace proxygrade
