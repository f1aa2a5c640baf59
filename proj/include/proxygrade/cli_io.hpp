#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "proxygrade/axiom_checker.hpp"
#include "proxygrade/core_model.hpp"
#include "proxygrade/phantom_proxy.hpp"
#include "proxygrade/ranking.hpp"

namespace proxygrade {

// Election files:
//   { "scale": {"labels": [...], "positions": [...]},
//     "voters": [...], "candidates": [...],
//     "ballots": [{"voter": id, "candidate": id, "value": label | "blank" | "abstain"}] }
// Positions are optional (default 0..n-1) and may be numbers or "p/q"
// strings. Cells without a ballot entry are ineligible.

/// Throws SchemaError (with a JSON path), UnknownLabel, DuplicateCell, ...
Profile parse_election(std::string_view text);

/// Canonical form: sorted keys, ballots in voter then candidate order,
/// positions as exact strings, ineligible cells omitted.
std::string render_election(const Profile& profile);

/// One "voter,candidate,value" row per cell; a header row is optional.
/// Positions default to 0..n-1.
Profile parse_election_csv(std::string_view text, const std::vector<std::string>& labels,
                           const std::optional<std::vector<Rational>>& positions = std::nullopt);

// Mechanism files:
//   { "selector": "lower_median" | "upper_median" | "min" | "max" | {"table": [g(1), ...]},
//     "selectors": {candidate: selector, ...},
//     "proxy": "none" | "own_average" | {"constant": "p/q"},
//     "proxies": [{"voter": id, "candidate": id, "proxy": proxy}],
//     "absentee_policy": "remove_from_pool" | "proxy_anyway",
//     "reinforce_absentees": bool }
// Every key is optional; the defaults give the majority grade.

struct MechanismSpec {
  Mechanism mechanism;
  bool reinforce_absentees = false;
};

MechanismSpec parse_mechanism(std::string_view text, const ElectionShape& shape);

// Space files:
//   { "voters": n, "candidates": m, "scale": {...}, "alphabet": [value, ...],
//     "eligibility": [[bool per candidate] per voter], "budget": n }
// "alphabet" defaults to every label plus "blank" and "abstain".

InstanceSpace parse_space(std::string_view text);

/// All profiles with the election's shape and eligibility, each eligible
/// cell ranging over every label plus blank and abstain.
InstanceSpace space_of(const Profile& election, std::uint64_t budget = kDefaultBudget);

enum class ReportFormat { Json, Table };

std::string grade_report(const Profile& profile, const Mechanism& mechanism,
                         const GradeResult& result, ReportFormat format);

std::string rank_report(const Profile& profile, const RankOutcome& outcome,
                        bool reinforce_absentees, ReportFormat format);

/// A witness file: the instance's profiles as election objects, the roles
/// by identifier, and the subject (with its mechanism when there is one).
std::string render_witness(const Verdict& verdict, const std::string& subject_name,
                           const std::optional<std::string>& mechanism_text);

struct WitnessFile {
  AxiomInstance instance;
  std::string subject;
  std::optional<std::string> mechanism_text;  // raw mechanism JSON
  std::string detail;
};

WitnessFile parse_witness(std::string_view text);

struct CheckRecord {
  Verdict verdict;
  std::optional<std::string> witness_path;
};

std::string check_report(const std::string& subject_name, const InstanceSpace& space,
                         const std::vector<CheckRecord>& records,
                         const std::vector<CrossCheck>& cross_checks,
                         const std::optional<AxiomSurface>& surface, ReportFormat format);

/// "p/q" plus a decimal rendering.
std::string describe_rational(const Rational& value);

}  // namespace proxygrade
