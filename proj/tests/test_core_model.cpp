#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "proxygrade/core_model.hpp"

using namespace proxygrade;

namespace {

Profile worked_example() {
  return build_profile({"x", "y", "z"}, {"I", "J"}, GradeScale::integer_range(1, 5),
                       {{"x", "I", "1"},
                        {"x", "J", "blank"},
                        {"y", "I", "blank"},
                        {"y", "J", "3"},
                        {"z", "I", "2"},
                        {"z", "J", "2"}});
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("grade scale") {
  auto s = GradeScale::integer_range(1, 5);
  CHECK(s.size() == 5);
  CHECK(s.lo() == 1);
  CHECK(s.hi() == 5);
  CHECK(s.find_label("3") == 2u);
  CHECK(s.in_output_range(Rational(7, 2)));
  CHECK_FALSE(s.in_output_range(Rational(11, 2)));

  auto o = GradeScale::ordinal({"Bad", "Good"});
  CHECK(o.position(1) == 1);
  CHECK(code_of([] { GradeScale({"a", "b"}, {Rational(1), Rational(1)}); }) ==
        ErrorCode::InvalidArgument);

  auto [wide, at] = s.widened_with(Rational(5, 2));
  CHECK(at == 2u);
  CHECK(wide.size() == 6);
  CHECK(wide.position(at) == Rational(5, 2));
}

TEST_CASE("worked example profile") {
  auto p = worked_example();
  CHECK(p.graders(0) == std::vector<VoterIndex>{0, 2});
  CHECK(p.graders(1) == std::vector<VoterIndex>{1, 2});
  CHECK(p.grades_for(0) == std::vector<Rational>{1, 2});
  CHECK(p.graded_candidates(0) == std::vector<CandidateIndex>{0});
  CHECK(p.eligible_candidates(0) == std::vector<CandidateIndex>{0, 1});
}

TEST_CASE("identifiers are sorted and indices follow") {
  auto p = build_profile({"zed", "amy"}, {"B", "A"}, GradeScale::integer_range(0, 2),
                         {{"amy", "B", "2"}});
  CHECK(p.shape().voters == std::vector<std::string>{"amy", "zed"});
  CHECK(p.shape().candidates == std::vector<std::string>{"A", "B"});
  CHECK(p.at(0, 1) == Vote::grade(2));
  CHECK(p.at(1, 0) == Vote::ineligible());
}

TEST_CASE("no cells means nobody is eligible") {
  auto p = build_profile({"a"}, {"J"}, GradeScale::integer_range(0, 1), {});
  CHECK(p.eligible_voters(0).empty());
}

TEST_CASE("validation errors") {
  auto s = GradeScale::integer_range(1, 5);
  CHECK(code_of([&] { build_profile({"x"}, {"I"}, s, {{"x", "I", "7"}}); }) ==
        ErrorCode::UnknownLabel);
  CHECK(code_of([&] { build_profile({"x", "x"}, {"I"}, s, {}); }) ==
        ErrorCode::DuplicateIdentifier);
  CHECK(code_of([&] { build_profile({"x"}, {"I"}, s, {{"y", "I", "1"}}); }) ==
        ErrorCode::UnknownIdentifier);
  CHECK(code_of([&] {
          build_profile({"x"}, {"I"}, s, {{"x", "I", "1"}, {"x", "I", "2"}});
        }) == ErrorCode::DuplicateCell);
  CHECK(code_of([&] {
          build_profile({"x"}, {"I"}, s, {{"x", "I", "ineligible"}, {"x", "I", "2"}});
        }) == ErrorCode::GradeOnIneligibleCell);
}

TEST_CASE("apply_edit") {
  auto p = worked_example();
  auto before = p.cells();

  auto abstained = apply_edit(p, {2, 1, Vote::abstain()});
  CHECK(abstained.graders(1) == std::vector<VoterIndex>{1});

  auto removed = apply_edit(p, {0, 1, Vote::ineligible()});
  CHECK(removed.at(0, 1) == Vote::ineligible());

  CHECK(code_of([&] { apply_edit(removed, {0, 1, Vote::grade(1)}); }) ==
        ErrorCode::IllegalEligibilityGrant);
  CHECK(code_of([&] { apply_edit(p, {5, 0, Vote::blank()}); }) == ErrorCode::IndexOutOfRange);

  CHECK(p.cells() == before);
}

TEST_CASE("remove_voters") {
  auto p = worked_example();
  CHECK(remove_voters(p, std::vector<VoterIndex>{}) == p);

  auto no_x = remove_voters(p, std::vector<VoterIndex>{0});
  CHECK(no_x.at(0, 0) == Vote::blank());
  CHECK(no_x.graders(0) == std::vector<VoterIndex>{2});

  auto none = remove_voters(p, std::vector<VoterIndex>{0, 1, 2});
  for (const auto& v : none.cells()) CHECK(v == Vote::blank());
}

TEST_CASE("cached graders match a fresh computation on every small profile") {
  auto shape = make_shape({"a", "b"}, {"I", "J"}, GradeScale::integer_range(0, 1));
  std::vector<Vote> alphabet{Vote::grade(0), Vote::grade(1), Vote::blank(), Vote::abstain(),
                             Vote::ineligible()};
  oracle::for_each_assignment(alphabet, 4, [&](const std::vector<Vote>& cells) {
    Profile p(shape, cells);
    for (CandidateIndex c = 0; c < 2; ++c) {
      CHECK(p.graders(c) == recompute_graders(p, c));
      for (auto v : p.graders(c)) CHECK(p.at(v, c).is_eligible());
    }
  });
}

TEST_CASE("parse_vote and describe") {
  auto s = GradeScale::ordinal({"Bad", "Good"});
  CHECK(parse_vote("Good", s) == Vote::grade(1));
  CHECK(parse_vote("blank", s) == Vote::blank());
  CHECK(parse_vote("abstain", s) == Vote::abstain());
  CHECK(parse_vote("ineligible", s) == Vote::ineligible());
  CHECK(describe(Vote::grade(0), s) == "Bad");
}

TEST_CASE("with_scale keeps label indices") {
  auto p = worked_example();
  auto [wide, at] = p.scale().widened_with(Rational(3, 2));
  CHECK(at == 1u);
  auto q = p.with_scale(wide);
  CHECK(q.at(0, 0) == Vote::grade(0));
  CHECK(q.scale().size() == 6);
}
