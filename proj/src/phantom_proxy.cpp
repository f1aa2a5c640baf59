#include "proxygrade/phantom_proxy.hpp"

#include <algorithm>

namespace proxygrade {

ProxyFn ProxyFn::constant(Rational value) {
  ProxyFn fn(Kind::Constant);
  fn.constant_ = value;
  return fn;
}

ProxyFn ProxyFn::custom(std::string name, CustomFn fn) {
  if (!fn) throw Error(ErrorCode::InvalidArgument, "custom proxy without a function");
  ProxyFn out(Kind::Custom);
  out.custom_name_ = std::move(name);
  out.custom_ = std::move(fn);
  return out;
}

std::string ProxyFn::name() const {
  switch (kind_) {
    case Kind::None: return "none";
    case Kind::OwnAverage: return "own_average";
    case Kind::Constant: return "constant(" + to_string(constant_) + ")";
    case Kind::Custom: return "custom(" + custom_name_ + ")";
  }
  return "?";
}

std::optional<Rational> ProxyFn::operator()(std::span<const Vote> ballot,
                                            const GradeScale& scale) const {
  switch (kind_) {
    case Kind::None: return std::nullopt;
    case Kind::OwnAverage: {
      Rational sum{0};
      std::int64_t count = 0;
      for (const Vote& vote : ballot) {
        if (!vote.is_grade()) continue;
        sum += scale.position(vote.label());
        ++count;
      }
      if (count == 0) return std::nullopt;
      return sum / count;
    }
    case Kind::Constant: return constant_;
    case Kind::Custom: return custom_(ballot, scale);
  }
  return std::nullopt;
}

bool ProxyFn::operator==(const ProxyFn& other) const {
  if (kind_ != other.kind_) return false;
  if (kind_ == Kind::Constant) return constant_ == other.constant_;
  if (kind_ == Kind::Custom) return custom_name_ == other.custom_name_;
  return true;
}

std::string to_string(AbsenteePolicy policy) {
  return policy == AbsenteePolicy::RemoveFromPool ? "remove_from_pool" : "proxy_anyway";
}

Mechanism::Mechanism(std::size_t voters, std::size_t candidates, ProxyFn proxy,
                     SelectorFn selector, AbsenteePolicy policy)
    : voters_(voters),
      candidates_(candidates),
      proxies_(voters * candidates, proxy),
      selectors_(candidates, selector),
      policy_(policy) {}

const ProxyFn& Mechanism::proxy(VoterIndex voter, CandidateIndex candidate) const {
  if (voter >= voters_ || candidate >= candidates_) {
    throw Error(ErrorCode::IndexOutOfRange, "proxy (" + std::to_string(voter) + ", " +
                                                std::to_string(candidate) + ")");
  }
  return proxies_[candidate * voters_ + voter];
}

const SelectorFn& Mechanism::selector(CandidateIndex candidate) const {
  if (candidate >= candidates_) {
    throw Error(ErrorCode::IndexOutOfRange, "selector " + std::to_string(candidate));
  }
  return selectors_[candidate];
}

Mechanism& Mechanism::set_proxy(VoterIndex voter, CandidateIndex candidate, ProxyFn proxy) {
  if (voter >= voters_ || candidate >= candidates_) {
    throw Error(ErrorCode::IndexOutOfRange, "proxy (" + std::to_string(voter) + ", " +
                                                std::to_string(candidate) + ")");
  }
  proxies_[candidate * voters_ + voter] = std::move(proxy);
  return *this;
}

Mechanism& Mechanism::set_selector(CandidateIndex candidate, SelectorFn selector) {
  if (candidate >= candidates_) {
    throw Error(ErrorCode::IndexOutOfRange, "selector " + std::to_string(candidate));
  }
  selectors_[candidate] = std::move(selector);
  return *this;
}

Mechanism& Mechanism::set_absentee_policy(AbsenteePolicy policy) {
  policy_ = policy;
  return *this;
}

bool Mechanism::is_fair() const {
  return std::all_of(selectors_.begin(), selectors_.end(),
                     [&](const SelectorFn& s) { return s == selectors_.front(); });
}

void Mechanism::require_shape(const Profile& profile) const {
  if (profile.voter_count() != voters_ || profile.candidate_count() != candidates_) {
    throw Error(ErrorCode::ShapeMismatch,
                "mechanism is sized for " + std::to_string(voters_) + " voters x " +
                    std::to_string(candidates_) + " candidates, profile has " +
                    std::to_string(profile.voter_count()) + " x " +
                    std::to_string(profile.candidate_count()));
  }
}

Mechanism majority_grade_mechanism(std::size_t voters, std::size_t candidates) {
  return Mechanism(voters, candidates, ProxyFn::none(), SelectorFn::lower_median(),
                   AbsenteePolicy::RemoveFromPool);
}

std::string to_string(PoolEntry::Source source) {
  switch (source) {
    case PoolEntry::Source::Grade: return "grade";
    case PoolEntry::Source::Proxy: return "proxy";
    case PoolEntry::Source::Absentee: return "absentee";
  }
  return "?";
}

namespace {

bool entry_order(const PoolEntry& a, const PoolEntry& b) {
  return std::tie(a.voter, a.copy) < std::tie(b.voter, b.copy);
}

}  // namespace

VotingPool::VotingPool(std::vector<PoolEntry> entries) : entries_(std::move(entries)) {
  std::stable_sort(entries_.begin(), entries_.end(), entry_order);
}

RationalMultiset VotingPool::values() const {
  std::vector<Rational> values;
  values.reserve(entries_.size());
  for (const auto& entry : entries_) values.push_back(entry.value);
  return RationalMultiset(std::move(values));
}

bool VotingPool::represents(VoterIndex voter) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const PoolEntry& e) { return e.voter == voter; });
}

void VotingPool::add(PoolEntry entry) {
  entries_.insert(std::upper_bound(entries_.begin(), entries_.end(), entry, entry_order),
                  std::move(entry));
}

std::optional<Rational> effective_proxy(const Mechanism& mechanism, const Profile& profile,
                                        VoterIndex voter, CandidateIndex candidate) {
  const Vote vote = profile.at(voter, candidate);
  if (vote.is_grade()) return std::nullopt;
  if (vote.is_abstain() && mechanism.absentee_policy() == AbsenteePolicy::RemoveFromPool) {
    return std::nullopt;
  }
  auto ballot = profile.ballot(voter);
  // A ballot made only of blank votes and missing rights has no proxy anywhere.
  bool silent = std::all_of(ballot.begin(), ballot.end(), [](const Vote& v) {
    return v.is_blank() || !v.is_eligible();
  });
  if (silent) return std::nullopt;
  auto value = mechanism.proxy(voter, candidate)(ballot, profile.scale());
  if (value && !profile.scale().in_output_range(*value)) {
    throw Error(ErrorCode::ProxyOutOfRange,
                "proxy " + mechanism.proxy(voter, candidate).name() + " returned " +
                    to_string(*value) + " for voter '" + profile.shape().voters[voter] +
                    "' on '" + profile.shape().candidates[candidate] + "'");
  }
  return value;
}

VotingPool assemble_pool(const Mechanism& mechanism, const Profile& profile,
                         CandidateIndex candidate) {
  mechanism.require_shape(profile);
  std::vector<PoolEntry> entries;
  for (VoterIndex v = 0; v < profile.voter_count(); ++v) {
    const Vote vote = profile.at(v, candidate);
    if (vote.is_grade()) {
      entries.push_back({profile.scale().position(vote.label()), v, PoolEntry::Source::Grade});
    } else if (auto proxy = effective_proxy(mechanism, profile, v, candidate)) {
      entries.push_back({*proxy, v, PoolEntry::Source::Proxy});
    }
  }
  return VotingPool(std::move(entries));
}

Outcome GradeResult::outcome() const {
  Outcome out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) out.push_back(c.grade);
  return out;
}

GradeResult grade(const Mechanism& mechanism, const Profile& profile) {
  GradeResult result;
  for (CandidateIndex c = 0; c < profile.candidate_count(); ++c) {
    auto pool = assemble_pool(mechanism, profile, c);
    std::optional<Rational> value;
    if (!pool.empty()) value = select(mechanism.selector(c), pool.values());
    result.candidates.push_back({value, std::move(pool)});
  }
  return result;
}

std::optional<Rational> grade_candidate(const Mechanism& mechanism, const Profile& profile,
                                        CandidateIndex candidate) {
  mechanism.require_shape(profile);
  std::vector<Rational> values;
  for (VoterIndex v = 0; v < profile.voter_count(); ++v) {
    const Vote vote = profile.at(v, candidate);
    if (vote.is_grade()) {
      values.push_back(profile.scale().position(vote.label()));
    } else if (auto proxy = effective_proxy(mechanism, profile, v, candidate)) {
      values.push_back(*proxy);
    }
  }
  if (values.empty()) return std::nullopt;
  return select(mechanism.selector(candidate), RationalMultiset(std::move(values)));
}

Outcome grade_outcome(const Mechanism& mechanism, const Profile& profile) {
  Outcome out;
  out.reserve(profile.candidate_count());
  for (CandidateIndex c = 0; c < profile.candidate_count(); ++c) {
    out.push_back(grade_candidate(mechanism, profile, c));
  }
  return out;
}

std::string to_string(SurfaceVerdict verdict) {
  switch (verdict) {
    case SurfaceVerdict::Holds: return "holds";
    case SurfaceVerdict::Fails: return "fails";
    case SurfaceVerdict::NotDecidableSyntactically: return "not_decidable";
  }
  return "?";
}

const SurfaceEntry& AxiomSurface::at(std::string_view axiom) const {
  for (const auto& entry : entries) {
    if (entry.axiom == axiom) return entry;
  }
  throw Error(ErrorCode::InvalidArgument, "no surface verdict for '" + std::string(axiom) + "'");
}

namespace {

enum class Firing { Never, Sometimes, Unknown };

// Whether a proxy can ever contribute a vote in an election of this shape.
// With one candidate, a voter who did not grade it has no grades to average,
// and only an abstention keeps the ballot from being silent.
Firing firing(const ProxyFn& proxy, const ElectionShape& shape, AbsenteePolicy policy) {
  const bool several = shape.candidates.size() >= 2;
  switch (proxy.kind()) {
    case ProxyFn::Kind::None: return Firing::Never;
    case ProxyFn::Kind::OwnAverage: return several ? Firing::Sometimes : Firing::Never;
    case ProxyFn::Kind::Constant:
      return several || policy == AbsenteePolicy::ProxyAnyway ? Firing::Sometimes
                                                                : Firing::Never;
    case ProxyFn::Kind::Custom: return Firing::Unknown;
  }
  return Firing::Unknown;
}

bool selectors_agree(const SelectorFn& a, const SelectorFn& b, std::size_t max_pool) {
  for (std::size_t k = 1; k <= max_pool; ++k) {
    if (!a.supports(k) || !b.supports(k)) return a == b;
    if (a(k) != b(k)) return false;
  }
  return true;
}

std::string cell_name(const ElectionShape& shape, VoterIndex v, CandidateIndex c) {
  return "(" + shape.voters[v] + ", " + shape.candidates[c] + ")";
}

}  // namespace

AxiomSurface validate_axiom_surface(const Mechanism& mechanism, const ElectionShape& shape,
                                    std::size_t maxk) {
  if (mechanism.voter_count() != shape.voters.size() ||
      mechanism.candidate_count() != shape.candidates.size()) {
    throw Error(ErrorCode::ShapeMismatch, "mechanism and election shape differ");
  }
  const auto nv = shape.voters.size();
  const auto nc = shape.candidates.size();
  // Each voter is represented at most once per pool.
  const std::size_t max_pool = std::min(maxk, nv);

  bool any_custom = false;
  bool all_constant = true;
  std::optional<std::pair<VoterIndex, CandidateIndex>> firing_cell;
  for (CandidateIndex c = 0; c < nc; ++c) {
    for (VoterIndex v = 0; v < nv; ++v) {
      const auto& proxy = mechanism.proxy(v, c);
      any_custom = any_custom || proxy.kind() == ProxyFn::Kind::Custom;
      all_constant = all_constant && proxy.kind() == ProxyFn::Kind::Constant;
      if (!firing_cell && firing(proxy, shape, mechanism.absentee_policy()) == Firing::Sometimes) {
        firing_cell = {{v, c}};
      }
    }
  }
  const bool proxies_silent = !firing_cell && !any_custom;

  AxiomSurface surface;
  auto add = [&](std::string axiom, SurfaceVerdict verdict, std::string reason) {
    surface.entries.push_back({std::move(axiom), verdict, std::move(reason)});
  };
  using V = SurfaceVerdict;

  // U: no proxy votes at all.
  if (proxies_silent) {
    add("U", V::Holds, "no proxy ever votes");
  } else if (firing_cell) {
    add("U", V::Fails, "proxy " + mechanism.proxy(firing_cell->first, firing_cell->second).name() +
                           " votes for " + cell_name(shape, firing_cell->first, firing_cell->second));
  } else {
    add("U", V::NotDecidableSyntactically, "custom proxies");
  }

  // BV: built-in proxies cannot tell a blank vote from a missing right.
  add("BV", any_custom ? V::NotDecidableSyntactically : V::Holds,
      any_custom ? "custom proxies" : "built-in proxies treat blank and ineligible alike");

  // SI: abstainers must never be proxied. A voter whose ballot is wholly
  // ineligible is silent under every policy.
  if (proxies_silent) {
    add("SI", V::Holds, "no proxy ever votes");
  } else if (mechanism.absentee_policy() == AbsenteePolicy::RemoveFromPool) {
    add("SI", V::Holds, "abstentions are removed from the pool");
  } else if (firing_cell) {
    add("SI", V::Fails, "abstainers are proxied (proxy_anyway with " +
                            mechanism.proxy(firing_cell->first, firing_cell->second).name() + ")");
  } else if (any_custom) {
    add("SI", V::NotDecidableSyntactically, "custom proxies");
  } else {
    add("SI", V::Holds, "abstainers are never represented");
  }

  // SC and P: the selector may move by at most one rank when the pool grows.
  // Under proxy_anyway with always-voting proxies the pool never grows.
  {
    std::optional<std::string> failure;
    for (CandidateIndex c = 0; c < nc && !failure; ++c) {
      auto report = check_sc_condition(mechanism.selector(c), max_pool);
      if (!report.holds) {
        failure = shape.candidates[c] + ": " + mechanism.selector(c).name() +
                  " violates g(p+1) in {g(p), g(p)+1} at p=" + std::to_string(report.violation.first);
      }
    }
    const bool pool_constant_size =
        mechanism.absentee_policy() == AbsenteePolicy::ProxyAnyway && all_constant;
    for (const char* axiom : {"SC", "P"}) {
      if (!failure) {
        add(axiom, V::Holds, "selector condition holds up to pool size " + std::to_string(max_pool));
      } else if (pool_constant_size) {
        add(axiom, V::Holds, "abstainers always keep a proxy vote");
      } else if (any_custom) {
        add(axiom, V::NotDecidableSyntactically, *failure + " (custom proxies)");
      } else {
        add(axiom, V::Fails, *failure);
      }
    }
  }

  add("FP", V::NotDecidableSyntactically,
      "the non-strict definition is checked semantically only");

  // OC: (BV) mechanisms are outer-consistent iff every selector is.
  {
    std::optional<std::string> failure;
    for (CandidateIndex c = 0; c < nc && !failure; ++c) {
      auto report = check_oc_condition(mechanism.selector(c), max_pool);
      if (!report.holds) {
        failure = shape.candidates[c] + ": " + mechanism.selector(c).name() +
                  " violates the merge condition at (" + std::to_string(report.violation.first) +
                  ", " + std::to_string(report.violation.second) + ")";
      }
    }
    if (any_custom) {
      add("OC", V::NotDecidableSyntactically, "custom proxies");
    } else if (failure) {
      add("OC", V::Fails, *failure);
    } else {
      add("OC", V::Holds, "selector merge condition holds up to pool size " + std::to_string(max_pool));
    }
  }

  // F: one selector for every candidate (compared on reachable pool sizes).
  {
    std::optional<CandidateIndex> differing;
    for (CandidateIndex c = 1; c < nc && !differing; ++c) {
      if (!selectors_agree(mechanism.selector(0), mechanism.selector(c), max_pool)) differing = c;
    }
    if (differing) {
      add("F", V::Fails, shape.candidates[0] + " uses " + mechanism.selector(0).name() + ", " +
                             shape.candidates[*differing] + " uses " +
                             mechanism.selector(*differing).name());
    } else {
      add("F", V::Holds, "all candidates share one selector");
    }
  }

  // N and SN: each voter's proxy and the selector must not depend on the candidate.
  {
    std::optional<std::string> failure;
    bool undecidable = false;
    for (CandidateIndex c = 1; c < nc && !failure; ++c) {
      if (!selectors_agree(mechanism.selector(0), mechanism.selector(c), max_pool)) {
        failure = "selectors differ between " + shape.candidates[0] + " and " + shape.candidates[c];
      }
      for (VoterIndex v = 0; v < nv && !failure; ++v) {
        const auto& a = mechanism.proxy(v, 0);
        const auto& b = mechanism.proxy(v, c);
        if (a.kind() == ProxyFn::Kind::Custom || b.kind() == ProxyFn::Kind::Custom) {
          undecidable = true;
        } else if (!(a == b)) {
          failure = "voter " + shape.voters[v] + " has proxy " + a.name() + " for " +
                    shape.candidates[0] + " but " + b.name() + " for " + shape.candidates[c];
        }
      }
    }
    for (const char* axiom : {"N", "SN"}) {
      if (failure) {
        add(axiom, V::Fails, *failure);
      } else if (undecidable) {
        add(axiom, V::NotDecidableSyntactically, "custom proxies");
      } else {
        add(axiom, V::Holds, "proxies and selectors are candidate-independent");
      }
    }
  }

  // A and SA: every voter shares the candidate's proxy function.
  {
    std::optional<std::string> failure;
    for (CandidateIndex c = 0; c < nc && !failure; ++c) {
      for (VoterIndex v = 1; v < nv && !failure; ++v) {
        const auto& a = mechanism.proxy(0, c);
        const auto& b = mechanism.proxy(v, c);
        if (!(a == b)) {
          failure = shape.candidates[c] + ": voter " + shape.voters[0] + " has proxy " + a.name() +
                    ", voter " + shape.voters[v] + " has " + b.name();
        }
      }
    }
    for (const char* axiom : {"A", "SA"}) {
      if (!failure) {
        add(axiom, V::Holds, "proxies are voter-independent");
      } else if (any_custom) {
        add(axiom, V::NotDecidableSyntactically, *failure + " (custom proxies)");
      } else {
        add(axiom, V::Fails, *failure);
      }
    }
  }

  // JD: a proxy that can vote looks beyond the candidate's own cell.
  if (proxies_silent || nc < 2) {
    add("JD", V::Holds, nc < 2 ? "single candidate" : "no proxy ever votes");
  } else if (firing_cell) {
    add("JD", V::Fails, "proxy " + mechanism.proxy(firing_cell->first, firing_cell->second).name() +
                            " depends on the rest of the ballot");
  } else {
    add("JD", V::NotDecidableSyntactically, "custom proxies");
  }

  return surface;
}

}  // namespace proxygrade
