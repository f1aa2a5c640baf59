#include "proxygrade/cli_io.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace proxygrade {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& message) {
  throw Error(ErrorCode::SchemaError, path + ": " + message);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    schema("$", e.what());
  }
}

void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) schema(path, "expected an object");
  for (const auto& item : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return item.key() == k; })) {
      schema(path + "." + item.key(), "unknown key");
    }
  }
}

const json& member(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) schema(path + "." + key, "missing");
  return *it;
}

std::string as_string(const json& value, const std::string& path) {
  if (!value.is_string()) schema(path, "expected a string");
  return value.get<std::string>();
}

std::vector<std::string> as_strings(const json& value, const std::string& path) {
  if (!value.is_array()) schema(path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(as_string(value[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::size_t as_count(const json& value, const std::string& path) {
  if (!value.is_number_unsigned()) schema(path, "expected a non-negative integer");
  return value.get<std::size_t>();
}

Rational as_rational(const json& value, const std::string& path) {
  if (value.is_number()) return parse_rational(value.dump());
  if (value.is_string()) {
    try {
      return parse_rational(value.get<std::string>());
    } catch (const Error& e) {
      schema(path, e.what());
    }
  }
  schema(path, "expected a number or a \"p/q\" string");
}

GradeScale scale_from_json(const json& value, const std::string& path) {
  allow_keys(value, path, {"labels", "positions"});
  auto labels = as_strings(member(value, "labels", path), path + ".labels");
  std::vector<Rational> positions;
  if (auto it = value.find("positions"); it != value.end()) {
    if (!it->is_array()) schema(path + ".positions", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      positions.push_back(as_rational((*it)[i], path + ".positions[" + std::to_string(i) + "]"));
    }
  } else {
    for (std::size_t i = 0; i < labels.size(); ++i) positions.emplace_back(static_cast<std::int64_t>(i));
  }
  try {
    return GradeScale(std::move(labels), std::move(positions));
  } catch (const Error& e) {
    schema(path, e.what());
  }
}

json scale_to_json(const GradeScale& scale) {
  json positions = json::array();
  for (const auto& p : scale.positions()) positions.push_back(to_string(p));
  return {{"labels", scale.labels()}, {"positions", positions}};
}

Profile profile_from_json(const json& doc, const std::string& path) {
  allow_keys(doc, path, {"scale", "voters", "candidates", "ballots"});
  GradeScale scale = scale_from_json(member(doc, "scale", path), path + ".scale");
  auto voters = as_strings(member(doc, "voters", path), path + ".voters");
  auto candidates = as_strings(member(doc, "candidates", path), path + ".candidates");
  std::vector<CellAssignment> cells;
  if (auto it = doc.find("ballots"); it != doc.end()) {
    if (!it->is_array()) schema(path + ".ballots", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string at = path + ".ballots[" + std::to_string(i) + "]";
      const json& cell = (*it)[i];
      allow_keys(cell, at, {"voter", "candidate", "value"});
      cells.push_back({as_string(member(cell, "voter", at), at + ".voter"),
                       as_string(member(cell, "candidate", at), at + ".candidate"),
                       as_string(member(cell, "value", at), at + ".value")});
    }
  }
  return build_profile(std::move(voters), std::move(candidates), std::move(scale), cells);
}

json profile_to_json(const Profile& profile) {
  const auto& shape = profile.shape();
  json ballots = json::array();
  for (VoterIndex v = 0; v < profile.voter_count(); ++v) {
    for (CandidateIndex c = 0; c < profile.candidate_count(); ++c) {
      const Vote vote = profile.at(v, c);
      if (!vote.is_eligible()) continue;
      ballots.push_back({{"voter", shape.voters[v]},
                         {"candidate", shape.candidates[c]},
                         {"value", describe(vote, shape.scale)}});
    }
  }
  return {{"scale", scale_to_json(shape.scale)},
          {"voters", shape.voters},
          {"candidates", shape.candidates},
          {"ballots", ballots}};
}

json rational_to_json(const Rational& value) {
  return {{"exact", to_string(value)}, {"decimal", to_double(value)}};
}

std::string decimal(const Rational& value) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << to_double(value);
  return out.str();
}

SelectorFn selector_from_json(const json& value, const std::string& path) {
  if (value.is_string()) {
    const auto name = value.get<std::string>();
    if (name == "lower_median") return SelectorFn::lower_median();
    if (name == "upper_median") return SelectorFn::upper_median();
    if (name == "min") return SelectorFn::min();
    if (name == "max") return SelectorFn::max();
    schema(path, "unknown selector '" + name + "'");
  }
  if (value.is_object()) {
    allow_keys(value, path, {"table"});
    const json& ranks = member(value, "table", path);
    if (!ranks.is_array()) schema(path + ".table", "expected an array");
    std::vector<std::size_t> table;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
      table.push_back(as_count(ranks[i], path + ".table[" + std::to_string(i) + "]"));
    }
    return SelectorFn::table(std::move(table));
  }
  schema(path, "expected a selector name or {\"table\": [...]}");
}

ProxyFn proxy_from_json(const json& value, const std::string& path, const GradeScale& scale) {
  if (value.is_string()) {
    const auto name = value.get<std::string>();
    if (name == "none") return ProxyFn::none();
    if (name == "own_average") return ProxyFn::own_average();
    schema(path, "unknown proxy '" + name + "'");
  }
  if (value.is_object()) {
    allow_keys(value, path, {"constant"});
    const Rational c = as_rational(member(value, "constant", path), path + ".constant");
    if (!scale.in_output_range(c)) {
      throw Error(ErrorCode::ProxyOutOfRange,
                  path + ": constant " + to_string(c) + " lies outside [" + to_string(scale.lo()) +
                      ", " + to_string(scale.hi()) + "]");
    }
    return ProxyFn::constant(c);
  }
  schema(path, "expected a proxy name or {\"constant\": value}");
}

CandidateIndex candidate_id(const ElectionShape& shape, const std::string& id,
                            const std::string& path) {
  auto c = shape.find_candidate(id);
  if (!c) throw Error(ErrorCode::UnknownIdentifier, path + ": candidate '" + id + "'");
  return *c;
}

VoterIndex voter_id(const ElectionShape& shape, const std::string& id, const std::string& path) {
  auto v = shape.find_voter(id);
  if (!v) throw Error(ErrorCode::UnknownIdentifier, path + ": voter '" + id + "'");
  return *v;
}

std::string pad(std::string text, std::size_t width) {
  if (text.size() < width) text.append(width - text.size(), ' ');
  return text;
}

std::string render_rows(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    widths.resize(std::max(widths.size(), row.size()), 0);
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      line += i + 1 < row.size() ? pad(row[i], widths[i] + 2) : row[i];
    }
    out += line + "\n";
  }
  return out;
}

}  // namespace

Profile parse_election(std::string_view text) { return profile_from_json(parse_json(text), "$"); }

std::string render_election(const Profile& profile) {
  return profile_to_json(profile).dump(2) + "\n";
}

Profile parse_election_csv(std::string_view text, const std::vector<std::string>& labels,
                           const std::optional<std::vector<Rational>>& positions) {
  std::vector<Rational> pos;
  if (positions) {
    pos = *positions;
  } else {
    for (std::size_t i = 0; i < labels.size(); ++i) pos.emplace_back(static_cast<std::int64_t>(i));
  }
  GradeScale scale(labels, pos);

  auto trim = [](std::string s) {
    auto notspace = [](unsigned char ch) { return !std::isspace(ch); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    return s;
  };

  std::vector<CellAssignment> cells;
  std::vector<std::string> voters;
  std::vector<std::string> candidates;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::istringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(trim(field));
    if (fields.size() != 3) {
      schema("line " + std::to_string(number), "expected voter,candidate,value");
    }
    if (cells.empty() && fields[0] == "voter" && fields[1] == "candidate" && fields[2] == "value") {
      continue;
    }
    voters.push_back(fields[0]);
    candidates.push_back(fields[1]);
    cells.push_back({fields[0], fields[1], fields[2]});
  }
  for (auto* ids : {&voters, &candidates}) {
    std::sort(ids->begin(), ids->end());
    ids->erase(std::unique(ids->begin(), ids->end()), ids->end());
  }
  return build_profile(std::move(voters), std::move(candidates), std::move(scale), cells);
}

MechanismSpec parse_mechanism(std::string_view text, const ElectionShape& shape) {
  const json doc = parse_json(text);
  allow_keys(doc, "$", {"selector", "selectors", "proxy", "proxies", "absentee_policy",
                        "reinforce_absentees"});
  SelectorFn selector = SelectorFn::lower_median();
  if (auto it = doc.find("selector"); it != doc.end()) selector = selector_from_json(*it, "$.selector");
  ProxyFn proxy = ProxyFn::none();
  if (auto it = doc.find("proxy"); it != doc.end()) proxy = proxy_from_json(*it, "$.proxy", shape.scale);
  AbsenteePolicy policy = AbsenteePolicy::RemoveFromPool;
  if (auto it = doc.find("absentee_policy"); it != doc.end()) {
    const auto name = as_string(*it, "$.absentee_policy");
    if (name == "remove_from_pool") {
      policy = AbsenteePolicy::RemoveFromPool;
    } else if (name == "proxy_anyway") {
      policy = AbsenteePolicy::ProxyAnyway;
    } else {
      schema("$.absentee_policy", "unknown policy '" + name + "'");
    }
  }
  MechanismSpec spec{Mechanism(shape.voters.size(), shape.candidates.size(), proxy, selector, policy),
                     false};
  if (auto it = doc.find("selectors"); it != doc.end()) {
    if (!it->is_object()) schema("$.selectors", "expected an object");
    for (const auto& item : it->items()) {
      const std::string path = "$.selectors." + item.key();
      spec.mechanism.set_selector(candidate_id(shape, item.key(), path),
                                  selector_from_json(item.value(), path));
    }
  }
  if (auto it = doc.find("proxies"); it != doc.end()) {
    if (!it->is_array()) schema("$.proxies", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string path = "$.proxies[" + std::to_string(i) + "]";
      const json& entry = (*it)[i];
      allow_keys(entry, path, {"voter", "candidate", "proxy"});
      const auto v = voter_id(shape, as_string(member(entry, "voter", path), path + ".voter"), path);
      const auto c = candidate_id(
          shape, as_string(member(entry, "candidate", path), path + ".candidate"), path);
      spec.mechanism.set_proxy(v, c, proxy_from_json(member(entry, "proxy", path), path + ".proxy",
                                                     shape.scale));
    }
  }
  if (auto it = doc.find("reinforce_absentees"); it != doc.end()) {
    if (!it->is_boolean()) schema("$.reinforce_absentees", "expected a boolean");
    spec.reinforce_absentees = it->get<bool>();
  }
  return spec;
}

InstanceSpace parse_space(std::string_view text) {
  const json doc = parse_json(text);
  allow_keys(doc, "$", {"voters", "candidates", "scale", "alphabet", "eligibility", "budget"});
  const auto voters = as_count(member(doc, "voters", "$"), "$.voters");
  const auto candidates = as_count(member(doc, "candidates", "$"), "$.candidates");
  GradeScale scale = scale_from_json(member(doc, "scale", "$"), "$.scale");
  std::vector<Vote> alphabet;
  if (auto it = doc.find("alphabet"); it != doc.end()) {
    const auto values = as_strings(*it, "$.alphabet");
    for (const auto& value : values) alphabet.push_back(parse_vote(value, scale));
  } else {
    alphabet = standard_alphabet(scale);
  }
  std::optional<std::vector<bool>> eligibility;
  if (auto it = doc.find("eligibility"); it != doc.end()) {
    if (!it->is_array() || it->size() != voters) {
      schema("$.eligibility", "expected one row per voter");
    }
    eligibility.emplace();
    for (std::size_t v = 0; v < voters; ++v) {
      const json& row = (*it)[v];
      const std::string path = "$.eligibility[" + std::to_string(v) + "]";
      if (!row.is_array() || row.size() != candidates) schema(path, "expected one flag per candidate");
      for (const auto& flag : row) {
        if (!flag.is_boolean()) schema(path, "expected booleans");
        eligibility->push_back(flag.get<bool>());
      }
    }
  }
  std::uint64_t budget = kDefaultBudget;
  if (auto it = doc.find("budget"); it != doc.end()) budget = as_count(*it, "$.budget");
  return InstanceSpace(voters, candidates, std::move(scale), std::move(alphabet),
                       std::move(eligibility), budget);
}

InstanceSpace space_of(const Profile& election, std::uint64_t budget) {
  std::vector<bool> eligibility;
  for (const Vote& vote : election.cells()) eligibility.push_back(vote.is_eligible());
  return InstanceSpace(election.shape_ptr(), standard_alphabet(election.scale()),
                       std::move(eligibility), budget);
}

std::string describe_rational(const Rational& value) {
  if (value.denominator() == 1) return to_string(value);
  return to_string(value) + " (" + decimal(value) + ")";
}

std::string grade_report(const Profile& profile, const Mechanism& mechanism,
                         const GradeResult& result, ReportFormat format) {
  const auto& shape = profile.shape();
  if (format == ReportFormat::Json) {
    json candidates = json::array();
    for (CandidateIndex c = 0; c < result.candidates.size(); ++c) {
      const auto& cg = result.candidates[c];
      json pool = json::array();
      for (const auto& entry : cg.pool.entries()) {
        pool.push_back({{"voter", shape.voters[entry.voter]},
                        {"source", to_string(entry.source)},
                        {"value", to_string(entry.value)}});
      }
      candidates.push_back({{"candidate", shape.candidates[c]},
                            {"selector", mechanism.selector(c).name()},
                            {"status", cg.grade ? "graded" : "ungraded"},
                            {"grade", cg.grade ? rational_to_json(*cg.grade) : json(nullptr)},
                            {"pool", pool}});
    }
    return json{{"candidates", candidates}}.dump(2) + "\n";
  }
  std::vector<std::vector<std::string>> rows{{"candidate", "grade", "selector", "pool"}};
  for (CandidateIndex c = 0; c < result.candidates.size(); ++c) {
    const auto& cg = result.candidates[c];
    std::string pool;
    for (const auto& entry : cg.pool.entries()) {
      if (!pool.empty()) pool += " ";
      pool += shape.voters[entry.voter] + "=" + to_string(entry.value);
      if (entry.source == PoolEntry::Source::Proxy) pool += "*";
    }
    rows.push_back({shape.candidates[c], cg.grade ? describe_rational(*cg.grade) : "ungraded",
                    mechanism.selector(c).name(), pool.empty() ? "-" : pool});
  }
  return render_rows(rows);
}

std::string rank_report(const Profile& profile, const RankOutcome& outcome,
                        bool reinforce_absentees, ReportFormat format) {
  const auto& shape = profile.shape();
  auto range_strings = [&](CandidateIndex c) {
    std::vector<std::string> out;
    if (const auto* range = outcome.range_of(c)) {
      for (const auto& value : range->values) out.push_back(to_string(value));
    }
    return out;
  };
  if (format == ReportFormat::Json) {
    json ranking = json::array();
    json ranges = json::object();
    for (std::size_t t = 0; t < outcome.tiers.size(); ++t) {
      json names = json::array();
      for (auto c : outcome.tiers[t]) {
        names.push_back(shape.candidates[c]);
        ranges[shape.candidates[c]] = range_strings(c);
      }
      ranking.push_back({{"rank", t + 1}, {"candidates", names}});
    }
    json excluded = json::array();
    for (auto c : outcome.excluded) excluded.push_back(shape.candidates[c]);
    return json{{"ranking", ranking},
                {"ranges", ranges},
                {"excluded", excluded},
                {"equalized_size", outcome.equalized_size},
                {"reinforce_absentees", reinforce_absentees}}
               .dump(2) +
           "\n";
  }
  std::vector<std::vector<std::string>> rows{{"rank", "candidate", "range"}};
  for (std::size_t t = 0; t < outcome.tiers.size(); ++t) {
    for (auto c : outcome.tiers[t]) {
      std::string joined;
      for (const auto& s : range_strings(c)) joined += (joined.empty() ? "" : " ") + s;
      rows.push_back({std::to_string(t + 1), shape.candidates[c], joined});
    }
  }
  std::string out = render_rows(rows);
  for (auto c : outcome.excluded) out += "excluded: " + shape.candidates[c] + " (empty pool)\n";
  return out;
}

std::string render_witness(const Verdict& verdict, const std::string& subject_name,
                           const std::optional<std::string>& mechanism_text) {
  if (!verdict.witness) throw Error(ErrorCode::InvalidArgument, "verdict has no witness");
  const auto& inst = *verdict.witness;
  const auto& shape = inst.profiles.front().shape();
  json doc{{"axiom", inst.axiom}, {"subject", subject_name}, {"detail", verdict.detail}};
  if (mechanism_text) doc["mechanism"] = parse_json(*mechanism_text);
  if (inst.voter) doc["voter"] = shape.voters[*inst.voter];
  if (inst.other_voter) doc["other_voter"] = shape.voters[*inst.other_voter];
  if (inst.candidate) doc["candidate"] = shape.candidates[*inst.candidate];
  if (inst.other_candidate) doc["other_candidate"] = shape.candidates[*inst.other_candidate];
  if (inst.alpha) doc["alpha"] = to_string(*inst.alpha);
  json profiles = json::array();
  for (const auto& p : inst.profiles) profiles.push_back(profile_to_json(p));
  doc["profiles"] = profiles;
  return doc.dump(2) + "\n";
}

WitnessFile parse_witness(std::string_view text) {
  const json doc = parse_json(text);
  allow_keys(doc, "$", {"axiom", "subject", "detail", "mechanism", "voter", "other_voter",
                        "candidate", "other_candidate", "alpha", "profiles"});
  WitnessFile out;
  out.instance.axiom = as_string(member(doc, "axiom", "$"), "$.axiom");
  out.subject = as_string(member(doc, "subject", "$"), "$.subject");
  if (auto it = doc.find("detail"); it != doc.end()) out.detail = as_string(*it, "$.detail");
  if (auto it = doc.find("mechanism"); it != doc.end()) out.mechanism_text = it->dump();
  const json& profiles = member(doc, "profiles", "$");
  if (!profiles.is_array() || profiles.empty()) schema("$.profiles", "expected a non-empty array");
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    out.instance.profiles.push_back(
        profile_from_json(profiles[i], "$.profiles[" + std::to_string(i) + "]"));
  }
  const auto& shape = out.instance.profiles.front().shape();
  if (auto it = doc.find("voter"); it != doc.end()) {
    out.instance.voter = voter_id(shape, as_string(*it, "$.voter"), "$.voter");
  }
  if (auto it = doc.find("other_voter"); it != doc.end()) {
    out.instance.other_voter = voter_id(shape, as_string(*it, "$.other_voter"), "$.other_voter");
  }
  if (auto it = doc.find("candidate"); it != doc.end()) {
    out.instance.candidate = candidate_id(shape, as_string(*it, "$.candidate"), "$.candidate");
  }
  if (auto it = doc.find("other_candidate"); it != doc.end()) {
    out.instance.other_candidate =
        candidate_id(shape, as_string(*it, "$.other_candidate"), "$.other_candidate");
  }
  if (auto it = doc.find("alpha"); it != doc.end()) out.instance.alpha = as_rational(*it, "$.alpha");
  return out;
}

std::string check_report(const std::string& subject_name, const InstanceSpace& space,
                         const std::vector<CheckRecord>& records,
                         const std::vector<CrossCheck>& cross_checks,
                         const std::optional<AxiomSurface>& surface, ReportFormat format) {
  if (format == ReportFormat::Json) {
    json alphabet = json::array();
    for (const Vote& v : space.alphabet()) alphabet.push_back(describe(v, space.scale()));
    json verdicts = json::array();
    for (const auto& r : records) {
      json entry{{"axiom", r.verdict.axiom},
                 {"verdict", r.verdict.holds ? "holds" : "fails"},
                 {"evaluations", r.verdict.evaluations},
                 {"instances", r.verdict.instances}};
      if (!r.verdict.holds) entry["detail"] = r.verdict.detail;
      if (r.witness_path) entry["witness"] = *r.witness_path;
      verdicts.push_back(entry);
    }
    json checks = json::array();
    for (const auto& c : cross_checks) {
      checks.push_back({{"name", c.name},
                        {"applicable", c.applicable},
                        {"consistent", c.consistent},
                        {"detail", c.detail}});
    }
    json doc{{"subject", subject_name},
             {"space",
              {{"voters", space.voter_count()},
               {"candidates", space.candidate_count()},
               {"scale", scale_to_json(space.scale())},
               {"alphabet", alphabet},
               {"profiles", space.profile_count()}}},
             {"verdicts", verdicts},
             {"cross_checks", checks}};
    if (surface) {
      json entries = json::array();
      for (const auto& e : surface->entries) {
        entries.push_back({{"axiom", e.axiom}, {"verdict", to_string(e.verdict)}, {"reason", e.reason}});
      }
      doc["structure"] = entries;
    }
    return doc.dump(2) + "\n";
  }
  std::string out = "subject: " + subject_name + ", " + std::to_string(space.profile_count()) +
                    " profiles\n";
  std::vector<std::vector<std::string>> rows{{"axiom", "verdict", "evaluations", "detail"}};
  for (const auto& r : records) {
    std::string detail = r.verdict.holds ? "" : r.verdict.detail;
    if (r.witness_path) detail += " [" + *r.witness_path + "]";
    rows.push_back({r.verdict.axiom, r.verdict.holds ? "holds" : "FAILS",
                    std::to_string(r.verdict.evaluations), detail});
  }
  out += render_rows(rows);
  for (const auto& c : cross_checks) {
    if (!c.applicable) continue;
    out += std::string(c.consistent ? "  ok        " : "  CONFLICT  ") + c.name +
           (c.detail.empty() ? "" : ": " + c.detail) + "\n";
  }
  return out;
}

}  // namespace proxygrade
