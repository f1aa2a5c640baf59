#include "proxygrade/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "proxygrade/axiom_checker.hpp"
#include "proxygrade/cli_io.hpp"
#include "proxygrade/errors.hpp"
#include "proxygrade/phantom_proxy.hpp"
#include "proxygrade/ranking.hpp"

namespace proxygrade {
namespace {

constexpr std::size_t kSurfaceMaxK = 50;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  out << text;
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

ReportFormat format_of(const std::string& name) {
  return name == "table" ? ReportFormat::Table : ReportFormat::Json;
}

struct ElectionArgs {
  std::string path;
  std::string labels;
  std::string positions;
};

Profile load_election(const ElectionArgs& args) {
  auto text = read_file(args.path);
  if (std::filesystem::path(args.path).extension() != ".csv") return parse_election(text);
  if (args.labels.empty())
    throw Error(ErrorCode::InvalidArgument, "CSV elections need --labels");
  std::optional<std::vector<Rational>> positions;
  if (!args.positions.empty()) {
    positions.emplace();
    for (const auto& p : split_csv(args.positions)) positions->push_back(parse_rational(p));
  }
  return parse_election_csv(text, split_csv(args.labels), positions);
}

MechanismSpec load_mechanism(const std::string& path, const ElectionShape& shape) {
  return parse_mechanism(path.empty() ? std::string("{}") : read_file(path), shape);
}

void add_election_options(CLI::App* cmd, ElectionArgs& args, bool required) {
  auto* opt = cmd->add_option("--election", args.path, "election file (.json or .csv)");
  if (required) opt->required();
  cmd->add_option("--labels", args.labels, "grade labels for CSV input, low to high");
  cmd->add_option("--positions", args.positions, "label positions for CSV input");
}

// Subject named on the command line or recorded in a witness file.
Subject aggregator_subject(const std::string& name, const ElectionShape& shape) {
  if (name == "mean") return mean_aggregator();
  if (name == "trimmed_mean") return trimmed_mean_aggregator();
  if (name == "majority_grade")
    return Subject::of(majority_grade_mechanism(shape.voters.size(), shape.candidates.size()),
                       "majority_grade");
  std::string_view v = name;
  if (v.starts_with("constant:")) return constant_aggregator(parse_rational(v.substr(9)));
  if (v.starts_with("constant(") && v.ends_with(")"))
    return constant_aggregator(parse_rational(v.substr(9, v.size() - 10)));
  throw Error(ErrorCode::InvalidArgument, "unknown aggregator '" + name + "'");
}

struct CheckArgs {
  ElectionArgs election;
  std::string space;
  std::string mechanism;
  std::string aggregator;
  std::string axioms;
  std::uint64_t budget = kDefaultBudget;
  std::string witness_dir;
  std::string replay;
  std::string output = "json";
};

int run_replay(const CheckArgs& args, std::ostream& out) {
  auto witness = parse_witness(read_file(args.replay));
  const auto& shape = witness.instance.profiles.front().shape();
  std::optional<Subject> subject;
  if (!args.mechanism.empty()) {
    subject = Subject::of(load_mechanism(args.mechanism, shape).mechanism, witness.subject);
  } else if (witness.mechanism_text) {
    subject = Subject::of(parse_mechanism(*witness.mechanism_text, shape).mechanism,
                          witness.subject);
  } else {
    subject = aggregator_subject(args.aggregator.empty() ? witness.subject : args.aggregator,
                                 shape);
  }
  auto violation = evaluate_instance(*subject, witness.instance);
  out << witness.instance.axiom << ": "
      << (violation ? "reproduced (" + *violation + ")" : "not reproduced") << "\n";
  return violation ? kExitAxiomFails : kExitOk;
}

int run_check(const CheckArgs& args, std::ostream& out) {
  if (!args.replay.empty()) return run_replay(args, out);
  if (args.election.path.empty() == args.space.empty())
    throw Error(ErrorCode::InvalidArgument, "give exactly one of --election or --space");
  if (!args.mechanism.empty() && !args.aggregator.empty())
    throw Error(ErrorCode::InvalidArgument, "give at most one of --mechanism or --aggregator");

  std::optional<InstanceSpace> space;
  if (!args.space.empty()) {
    space = parse_space(read_file(args.space));
    space->set_budget(args.budget);
  } else {
    space = space_of(load_election(args.election), args.budget);
  }
  const auto& shape = *space->shape();

  std::optional<Subject> subject;
  std::optional<std::string> mechanism_text;
  if (!args.aggregator.empty()) {
    subject = aggregator_subject(args.aggregator, shape);
    if (subject->mechanism) mechanism_text = "{}";
  } else {
    mechanism_text = args.mechanism.empty() ? std::string("{}") : read_file(args.mechanism);
    auto name = args.mechanism.empty()
                    ? std::string("majority_grade")
                    : std::filesystem::path(args.mechanism).stem().string();
    subject = Subject::of(parse_mechanism(*mechanism_text, shape).mechanism, name);
  }

  std::vector<std::string> axioms;
  if (args.axioms.empty()) {
    for (const auto& a : axiom_names()) {
      if (a == "IC") continue;
      if (a == "F" && !subject->mechanism) continue;
      axioms.push_back(a);
    }
  } else {
    axioms = split_csv(args.axioms);
  }

  std::vector<CheckRecord> records;
  std::map<std::string, Verdict> verdicts;
  bool failed = false;
  for (const auto& axiom : axioms) {
    CheckRecord record{check_axiom(axiom, *subject, *space), std::nullopt};
    if (!record.verdict.holds) {
      failed = true;
      if (!args.witness_dir.empty() && record.verdict.witness) {
        std::filesystem::create_directories(args.witness_dir);
        auto path = std::filesystem::path(args.witness_dir) / (axiom + ".json");
        write_file(path, render_witness(record.verdict, subject->name, mechanism_text));
        record.witness_path = path.string();
      }
    }
    verdicts.emplace(axiom, record.verdict);
    records.push_back(std::move(record));
  }

  std::optional<AxiomSurface> surface;
  if (subject->mechanism) surface = validate_axiom_surface(*subject->mechanism, shape, kSurfaceMaxK);
  out << check_report(subject->name, *space, records, cross_check(*subject, shape, verdicts),
                      surface, format_of(args.output));
  return failed ? kExitAxiomFails : kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grading and ranking with phantom proxies"};
  app.name("proxygrade");
  app.require_subcommand(1);

  ElectionArgs grade_election;
  std::string grade_mechanism;
  std::string grade_output = "json";
  auto* grade_cmd = app.add_subcommand("grade", "grade every candidate");
  add_election_options(grade_cmd, grade_election, true);
  grade_cmd->add_option("--mechanism", grade_mechanism, "mechanism file (default: majority grade)");
  grade_cmd->add_option("--output", grade_output)->check(CLI::IsMember({"json", "table"}));

  ElectionArgs rank_election;
  std::string rank_mechanism;
  std::string rank_output = "json";
  bool reinforce = false;
  auto* rank_cmd = app.add_subcommand("rank", "rank candidates by voting range");
  add_election_options(rank_cmd, rank_election, true);
  rank_cmd->add_option("--mechanism", rank_mechanism, "mechanism file (default: majority grade)");
  rank_cmd->add_flag("--reinforce-absentees", reinforce, "absentees vote the pre-addition grade");
  rank_cmd->add_option("--output", rank_output)->check(CLI::IsMember({"json", "table"}));

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "verify axioms exhaustively");
  add_election_options(check_cmd, check.election, false);
  check_cmd->add_option("--space", check.space, "space file");
  check_cmd->add_option("--mechanism", check.mechanism, "mechanism file");
  check_cmd->add_option("--aggregator", check.aggregator,
                        "mean | trimmed_mean | majority_grade | constant:<value>");
  check_cmd->add_option("--axioms", check.axioms, "comma-separated axiom names");
  check_cmd->add_option("--budget", check.budget, "maximum number of evaluations");
  check_cmd->add_option("--witness-dir", check.witness_dir, "write <axiom>.json witnesses here");
  check_cmd->add_option("--replay", check.replay, "re-run the instance in a witness file");
  check_cmd->add_option("--output", check.output)->check(CLI::IsMember({"json", "table"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "proxygrade: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    if (*grade_cmd) {
      auto profile = load_election(grade_election);
      auto spec = load_mechanism(grade_mechanism, profile.shape());
      out << grade_report(profile, spec.mechanism, grade(spec.mechanism, profile),
                          format_of(grade_output));
      return kExitOk;
    }
    if (*rank_cmd) {
      auto profile = load_election(rank_election);
      auto spec = load_mechanism(rank_mechanism, profile.shape());
      bool r = reinforce || spec.reinforce_absentees;
      out << rank_report(profile, rank(spec.mechanism, profile, r), r, format_of(rank_output));
      return kExitOk;
    }
    return run_check(check, out);
  } catch (const Error& e) {
    err << "proxygrade: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "proxygrade: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace proxygrade
