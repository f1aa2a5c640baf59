#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "proxygrade/axiom_checker.hpp"

using namespace proxygrade;

namespace {

GradeScale scale3() { return GradeScale::integer_range(0, 2); }

InstanceSpace space(std::size_t voters, std::size_t candidates) {
  return InstanceSpace(voters, candidates, scale3(), standard_alphabet(scale3()));
}

Subject majority(std::size_t voters, std::size_t candidates) {
  return Subject::of(majority_grade_mechanism(voters, candidates), "majority_grade");
}

Subject own_average(std::size_t voters, std::size_t candidates,
                    AbsenteePolicy policy = AbsenteePolicy::RemoveFromPool) {
  return Subject::of(
      Mechanism(voters, candidates, ProxyFn::own_average(), SelectorFn::lower_median(), policy),
      "own_average");
}

// A failing verdict must come with a witness that fails again on replay.
void check_witness(const Subject& subject, const Verdict& v) {
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->axiom == v.axiom);
  auto again = evaluate_instance(subject, *v.witness);
  REQUIRE(again.has_value());
  CHECK(*again == v.detail);
}

}  // namespace

TEST_CASE("instance space enumeration") {
  auto s = space(3, 2);
  CHECK(s.profile_count() == 15625);
  CHECK(s.profile_at(0).at(0, 0) == Vote::grade(0));
  CHECK(s.eligible_values().size() == 5);

  std::vector<bool> pattern{true, false, true, true};
  InstanceSpace masked(2, 2, scale3(), standard_alphabet(scale3()), pattern);
  CHECK(masked.profile_count() == 125);
  CHECK(masked.profile_at(17).at(0, 1) == Vote::ineligible());
  CHECK(masked.shape()->voters == std::vector<std::string>{"v1", "v2"});
}

TEST_CASE("strategy-proofness") {
  auto s = space(3, 2);
  CHECK(check_sp(majority(3, 2), s).holds);
  CHECK(check_sp(own_average(3, 2), s).holds);
  CHECK(check_sp(constant_aggregator(Rational(1)), s).holds);

  auto mean = mean_aggregator();
  auto v = check_sp(mean, s);
  CHECK_FALSE(v.holds);
  check_witness(mean, v);
  CHECK(v.evaluations > 0);

  // the first witness does not depend on the run
  auto again = check_sp(mean, s);
  CHECK(again.witness->profiles == v.witness->profiles);
}

TEST_CASE("blank votes, silence, consent, participation") {
  auto s = space(3, 2);
  auto mg = majority(3, 2);
  CHECK(check_si(mg, s).holds);
  CHECK(check_bv(mg, s).holds);
  CHECK(check_jd(mg, s).holds);
  CHECK(check_sc(mg, s).holds);
  CHECK(check_p(mg, s).holds);
  // non-strict antecedents: at a tie with the voter's own grade, leaving
  // the pool may move the lower median
  auto fp = check_fp(mg, s);
  CHECK_FALSE(fp.holds);
  check_witness(mg, fp);
  CHECK(check_fp(constant_aggregator(Rational(1)), s).holds);

  auto own = own_average(3, 2);
  CHECK(check_si(own, s).holds);
  auto jd = check_jd(own, s);
  CHECK_FALSE(jd.holds);
  check_witness(own, jd);

  auto anyway = own_average(3, 2, AbsenteePolicy::ProxyAnyway);
  auto si = check_si(anyway, s);
  CHECK_FALSE(si.holds);
  check_witness(anyway, si);
}

TEST_CASE("consent with a widened scale") {
  auto s = space(2, 1);
  CHECK(check_sc(majority(2, 1), s, ConsentRange::OutputInterval).holds);
  auto trimmed = trimmed_mean_aggregator();
  CHECK_NOTHROW(check_sc(trimmed, s, ConsentRange::OutputInterval));
}

TEST_CASE("selector conditions show up semantically") {
  InstanceSpace s(3, 1, scale3(), standard_alphabet(scale3()));
  auto bad_oc = Subject::of(Mechanism(3, 1, ProxyFn::none(), SelectorFn::table({1, 1, 3})), "t");
  auto oc = check_oc(bad_oc, s);
  CHECK_FALSE(oc.holds);
  check_witness(bad_oc, oc);

  InstanceSpace s4(4, 1, scale3(), standard_alphabet(scale3()));
  auto bad_sc =
      Subject::of(Mechanism(4, 1, ProxyFn::none(), SelectorFn::table({1, 1, 1, 4})), "t");
  auto sc = check_sc(bad_sc, s4);
  CHECK_FALSE(sc.holds);
  check_witness(bad_sc, sc);

  for (auto g : {SelectorFn::lower_median(), SelectorFn::min(), SelectorFn::max()}) {
    auto subject = Subject::of(Mechanism(3, 1, ProxyFn::none(), g), g.name());
    CHECK(check_oc(subject, s).holds);
    CHECK(check_sc(subject, s).holds);
    CHECK(check_p(subject, s).holds);
  }
}

TEST_CASE("unanimity and Pareto") {
  auto s = space(2, 2);
  CHECK(check_u(majority(2, 2), s).holds);
  CHECK(check_pareto(majority(2, 2), s).holds);

  auto constant_proxy = Subject::of(
      Mechanism(2, 2, ProxyFn::constant(Rational(1)), SelectorFn::lower_median()), "c");
  auto u = check_u(constant_proxy, s);
  CHECK_FALSE(u.holds);
  check_witness(constant_proxy, u);
  CHECK_FALSE(check_pareto(constant_proxy, s).holds);

  CHECK(check_u(mean_aggregator(), s).holds);
  CHECK_FALSE(check_u(constant_aggregator(Rational(1)), s).holds);
}

TEST_CASE("neutrality and anonymity") {
  auto s = space(2, 2);
  auto mg = majority(2, 2);
  CHECK(check_sn(mg, s).holds);
  CHECK(check_sa(mg, s).holds);
  CHECK(check_n(mg, s).holds);
  CHECK(check_a(mg, s).holds);
  CHECK(check_fairness(mg, s).holds);

  Mechanism skewed(2, 2, ProxyFn::constant(Rational(0)), SelectorFn::lower_median());
  skewed.set_proxy(0, 1, ProxyFn::constant(Rational(2)));
  skewed.set_proxy(1, 1, ProxyFn::constant(Rational(2)));
  auto sk = Subject::of(skewed, "skewed");
  auto sn = check_sn(sk, s);
  CHECK_FALSE(sn.holds);
  check_witness(sk, sn);
  CHECK(check_sa(sk, s).holds);

  Mechanism unfair = majority_grade_mechanism(2, 2);
  unfair.set_selector(1, SelectorFn::max());
  auto un = Subject::of(unfair, "unfair");
  auto f = check_fairness(un, s);
  CHECK_FALSE(f.holds);
  check_witness(un, f);

  CHECK_THROWS_AS(check_fairness(mean_aggregator(), s), Error);
}

TEST_CASE("inner consistency") {
  InstanceSpace s(2, 1, scale3(), {Vote::grade(0), Vote::grade(1), Vote::grade(2)});
  auto v = check_ic(majority(2, 1), s);
  CHECK(v.instances > 0);
  CHECK(check_ic(constant_aggregator(Rational(1)), s).holds);
}

TEST_CASE("strong strategy-proofness") {
  auto s = space(2, 2);
  CHECK(check_strong_sp(constant_aggregator(Rational(1)), s).holds);
  CHECK_FALSE(check_strong_sp(mean_aggregator(), s).holds);
  // a blank voter can pull the lower median up by grading
  auto v = check_strong_sp(majority(2, 2), s);
  CHECK_FALSE(v.holds);
  check_witness(majority(2, 2), v);
}

TEST_CASE("budget") {
  auto s = space(3, 2);
  s.set_budget(100);
  try {
    check_sp(majority(3, 2), s);
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BudgetExceeded);
  }
}

TEST_CASE("dispatch by name") {
  auto s = space(2, 1);
  for (const auto& name : axiom_names()) {
    CAPTURE(name);
    auto v = check_axiom(name, majority(2, 1), s);
    CHECK(v.axiom == name);
  }
  CHECK_THROWS_AS(check_axiom("XYZ", majority(2, 1), s), Error);
}

TEST_CASE("cross checks are consistent for the built-in subjects") {
  auto s = space(2, 2);
  std::vector<Subject> subjects{majority(2, 2), own_average(2, 2),
                                own_average(2, 2, AbsenteePolicy::ProxyAnyway),
                                mean_aggregator(), trimmed_mean_aggregator(),
                                constant_aggregator(Rational(1))};
  for (const auto& subject : subjects) {
    CAPTURE(subject.name);
    std::map<std::string, Verdict> verdicts;
    for (const auto& name : axiom_names()) {
      if (name == "IC") continue;
      if (name == "F" && !subject.mechanism) continue;
      verdicts.emplace(name, check_axiom(name, subject, s));
    }
    for (const auto& c : cross_check(subject, *s.shape(), verdicts)) {
      CAPTURE(c.name);
      CAPTURE(c.detail);
      CHECK(c.consistent);
    }
  }
}
