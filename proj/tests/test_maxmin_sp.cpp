#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "proxygrade/axiom_checker.hpp"
#include "proxygrade/maxmin_sp.hpp"

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

Mechanism worked_mechanism() {
  Mechanism m(3, 2, ProxyFn::own_average(), SelectorFn::min());
  m.set_selector(1, SelectorFn::max());
  return m;
}

std::vector<Mechanism> mechanisms() {
  std::vector<Mechanism> out{
      majority_grade_mechanism(3, 2),
      Mechanism(3, 2, ProxyFn::own_average(), SelectorFn::lower_median()),
      Mechanism(3, 2, ProxyFn::constant(Rational(3, 2)), SelectorFn::upper_median(),
                AbsenteePolicy::ProxyAnyway),
      Mechanism(3, 2, ProxyFn::own_average(), SelectorFn::table({1, 1, 3, 2, 5, 4}))};
  out.push_back(worked_mechanism());
  return out;
}

// Brute-force max over S of min({grades in S} u {omega_S}).
std::optional<Rational> brute_maxmin(const PhantomTable& t, const Profile& p) {
  std::optional<Rational> best;
  for (std::size_t mask = 0; mask < t.values.size(); ++mask) {
    if (!t.values[mask]) return std::nullopt;
    Rational low = *t.values[mask];
    for (std::size_t b = 0; b < t.coalition.size(); ++b)
      if (mask >> b & 1) low = std::min(low, p.grade_value(t.coalition[b], t.candidate));
    if (!best || low > *best) best = low;
  }
  return best;
}

}  // namespace

TEST_CASE("phantom values of the worked example") {
  auto p = worked_example();
  auto m = worked_mechanism();
  std::vector<VoterIndex> t{0, 2};
  auto table = phantoms_from_proxy(m, 0, t, remove_voters(p, t));
  CHECK(table.values[0] == Rational(1));  // S empty: k = -1
  CHECK(table.values[3] == Rational(3));  // S = T: k = 1, mu_1({3})
  CHECK(eval_maxmin(table, p) == Rational(1));
  CHECK(eval_maxmin(proxy_phantom_mapping(m, 1), p) == Rational(3));
}

TEST_CASE("phantom value branches") {
  auto s = GradeScale::integer_range(0, 4);
  RationalMultiset none;
  auto g = SelectorFn::lower_median();
  CHECK(proxy_phantom_value(g, 0, 0, none, s) == std::nullopt);
  // empty proxy pool: lo while k <= 0, hi after
  for (std::size_t sub = 0; sub <= 3; ++sub) {
    auto k = static_cast<long>(sub) - 3 + 2;
    CHECK(proxy_phantom_value(g, 3, sub, none, s) == (k <= 0 ? Rational(0) : Rational(4)));
  }
  RationalMultiset f(std::vector<Rational>{1, 3});
  // |T| = 1, |F| = 2, p = g(3) = 2; k = |S| + 1
  CHECK(proxy_phantom_value(g, 1, 0, f, s) == Rational(1));
  CHECK(proxy_phantom_value(g, 1, 1, f, s) == Rational(3));
}

TEST_CASE("max-min equals the proxy grade on every small profile") {
  InstanceSpace space(3, 2, GradeScale::integer_range(0, 2),
                      standard_alphabet(GradeScale::integer_range(0, 2)));
  auto ms = mechanisms();
  for (std::uint64_t idx = 0; idx < space.profile_count(); ++idx) {
    auto p = space.profile_at(idx);
    for (const auto& m : ms) {
      for (CandidateIndex c = 0; c < 2; ++c) {
        std::optional<Rational> expected;
        try {
          expected = grade_candidate(m, p, c);
        } catch (const Error&) {
          continue;  // table selector outside its domain
        }
        auto mapping = proxy_phantom_mapping(m, c);
        auto& t = p.graders(c);
        auto table = mapping.table(t, remove_voters(p, t));
        REQUIRE(eval_maxmin(table, p) == expected);
        CHECK(brute_maxmin(table, p) == expected);
        CHECK(is_monotone(table));
        auto clamped = clamp_phantoms(table, p.scale());
        CHECK(eval_maxmin(clamped, p) == expected);
        CHECK(clamp_phantoms(clamped, p.scale()) == clamped);
      }
    }
  }
}

TEST_CASE("clamping raises low phantoms") {
  auto p = build_profile({"a", "b"}, {"J"}, GradeScale::integer_range(1, 3),
                         {{"a", "J", "2"}, {"b", "J", "3"}});
  PhantomTable t{0, {0, 1}, {Rational(-5), Rational(-1), Rational(2), Rational(4)}};
  auto c = clamp_phantoms(t, p.scale());
  CHECK(c.values[0] == Rational(1));
  CHECK(c.values[1] == Rational(1));
  CHECK(c.values[2] == Rational(2));
  CHECK(c.values[3] == Rational(3));
  CHECK(eval_maxmin(c, p) == eval_maxmin(t, p));

  PhantomTable low{0, {0, 1}, {Rational(-5), Rational(-3), Rational(-2), Rational(-1)}};
  auto cl = clamp_phantoms(low, p.scale());
  CHECK(cl.values[0] == Rational(-1));
  CHECK(eval_maxmin(cl, p) == eval_maxmin(low, p));
}

TEST_CASE("unanimity condition agrees with semantic unanimity") {
  // 2 voters x 1 candidate over {0,1,2}; each table defines a grading
  // function of the two grades (no proxies involved)
  auto s = GradeScale::integer_range(0, 2);
  auto shape = make_shape({"a", "b"}, {"J"}, s);
  std::vector<Rational> values{Rational(-1), 0, 1, 2, 3};
  oracle::for_each_assignment(values, 4, [&](const std::vector<Rational>& w) {
    PhantomTable t{0, {0, 1}, {w[0], w[1], w[2], w[3]}};
    if (!is_monotone(t)) return;
    bool unanimous = true;
    for (std::uint32_t a = 0; a < 3; ++a) {
      Profile p(shape, {Vote::grade(a), Vote::grade(a)});
      unanimous &= eval_maxmin(t, p) == Rational(a);
    }
    CHECK(satisfies_unanimity_condition(t, s) == unanimous);
  });
}

TEST_CASE("max-min is monotone in each grade") {
  InstanceSpace space(3, 1, GradeScale::integer_range(0, 3),
                      {Vote::grade(0), Vote::grade(1), Vote::grade(2), Vote::grade(3),
                       Vote::blank()});
  Mechanism m(3, 1, ProxyFn::own_average(), SelectorFn::lower_median());
  auto mapping = proxy_phantom_mapping(m, 0);
  for (std::uint64_t idx = 0; idx < space.profile_count(); ++idx) {
    auto p = space.profile_at(idx);
    auto base = eval_maxmin(mapping, p);
    for (auto i : p.graders(0)) {
      if (p.at(i, 0).label() == 3) continue;
      auto q = p.with_vote(i, 0, Vote::grade(p.at(i, 0).label() + 1));
      CHECK(eval_maxmin(mapping, q) >= base);
    }
  }
}

TEST_CASE("enumeration limit") {
  std::vector<std::string> voters;
  std::vector<CellAssignment> cells;
  for (int i = 0; i < 13; ++i) {
    voters.push_back("v" + std::to_string(10 + i));
    cells.push_back({voters.back(), "J", "1"});
  }
  auto p = build_profile(voters, {"J"}, GradeScale::integer_range(0, 2), cells);
  CHECK_THROWS_AS(eval_maxmin(proxy_phantom_mapping(majority_grade_mechanism(13, 1), 0), p),
                  Error);
}

TEST_CASE("median form") {
  auto s = GradeScale::integer_range(0, 2);
  InstanceSpace space(3, 2, s, standard_alphabet(s));
  for (std::uint64_t idx = 0; idx < space.profile_count(); ++idx) {
    auto p = space.profile_at(idx);
    for (CandidateIndex c = 0; c < 2; ++c) {
      auto expected = oracle::majority_grade(p.grades_for(c));
      CHECK(eval_sa_median(majority_grade_sa_family(c, s), p) == expected);
    }
  }

  // d = 0: the single phantom
  auto empty = build_profile({"a"}, {"J"}, s, {{"a", "J", "blank"}});
  SAPhantomFamily fixed{0, [](std::size_t, std::size_t, const Profile&) {
                          return std::optional<Rational>(1);
                        }};
  CHECK(eval_sa_median(fixed, empty) == Rational(1));

  // d = 1 with omega_0 <= alpha <= omega_1
  auto one = build_profile({"a"}, {"J"}, s, {{"a", "J", "1"}});
  SAPhantomFamily spread{0, [](std::size_t k, std::size_t, const Profile&) {
                           return std::optional<Rational>(k == 0 ? 0 : 2);
                         }};
  CHECK(eval_sa_median(spread, one) == Rational(1));
}

TEST_CASE("median form of anonymous proxy mechanisms") {
  auto s = GradeScale::integer_range(0, 2);
  InstanceSpace space(3, 2, s, standard_alphabet(s));
  Mechanism m(3, 2, ProxyFn::constant(Rational(1)), SelectorFn::lower_median(),
              AbsenteePolicy::ProxyAnyway);
  for (std::uint64_t idx = 0; idx < space.profile_count(); ++idx) {
    auto p = space.profile_at(idx);
    for (CandidateIndex c = 0; c < 2; ++c) {
      CHECK(eval_sa_median(sa_family_from_proxy(m, c), p) == grade_candidate(m, p, c));
    }
  }
}
