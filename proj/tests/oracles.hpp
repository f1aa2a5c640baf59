#pragma once

// Reference implementations written straight from the definitions, kept
// independent of the library's evaluation paths.

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "proxygrade/core_model.hpp"

namespace oracle {

using proxygrade::Rational;

inline Rational kth_smallest(std::vector<Rational> values, std::size_t k) {
  std::sort(values.begin(), values.end());
  return values.at(k - 1);
}

inline std::size_t lower_median_rank(std::size_t n) { return (n + 1) / 2; }

enum class Proxy { None, OwnAverage, Constant };

struct Mech {
  Proxy proxy = Proxy::None;
  Rational constant{0};
  bool proxy_on_abstain = false;
  // rank chosen for a pool of size n, per candidate
  std::function<std::size_t(std::size_t candidate, std::size_t n)> rank =
      [](std::size_t, std::size_t n) { return lower_median_rank(n); };
};

// Pool of candidate c read directly off the cells.
inline std::vector<Rational> pool(const Mech& m, const proxygrade::Profile& p, std::size_t c) {
  std::vector<Rational> out;
  for (std::size_t i = 0; i < p.voter_count(); ++i) {
    auto v = p.at(i, c);
    if (v.is_grade()) {
      out.push_back(p.scale().position(v.label()));
      continue;
    }
    // blank and ineligible cells take the proxy, abstentions only if asked
    if (v.is_abstain() && !m.proxy_on_abstain) continue;
    // a ballot made only of blanks and ineligible cells carries no proxy
    bool silent = true;
    Rational sum{0};
    int grades = 0;
    for (std::size_t d = 0; d < p.candidate_count(); ++d) {
      auto w = p.at(i, d);
      if (w.is_grade() || w.is_abstain()) silent = false;
      if (w.is_grade()) {
        sum += p.scale().position(w.label());
        ++grades;
      }
    }
    if (silent) continue;
    if (m.proxy == Proxy::Constant) out.push_back(m.constant);
    if (m.proxy == Proxy::OwnAverage && grades > 0) out.push_back(sum / grades);
  }
  return out;
}

inline proxygrade::Outcome grade(const Mech& m, const proxygrade::Profile& p) {
  proxygrade::Outcome out;
  for (std::size_t c = 0; c < p.candidate_count(); ++c) {
    auto values = pool(m, p, c);
    if (values.empty()) {
      out.push_back(std::nullopt);
    } else {
      out.push_back(kth_smallest(values, m.rank(c, values.size())));
    }
  }
  return out;
}

inline std::optional<Rational> majority_grade(const std::vector<Rational>& grades) {
  if (grades.empty()) return std::nullopt;
  return kth_smallest(grades, lower_median_rank(grades.size()));
}

// Repeatedly select with g and erase the selected value.
inline std::vector<Rational> voting_range(std::vector<Rational> values,
                                          const std::function<std::size_t(std::size_t)>& g) {
  std::vector<Rational> out;
  std::sort(values.begin(), values.end());
  while (!values.empty()) {
    auto k = g(values.size());
    out.push_back(values[k - 1]);
    values.erase(values.begin() + static_cast<std::ptrdiff_t>(k - 1));
  }
  return out;
}

// Odometer over every assignment of `alphabet` to `cells` positions.
template <class T, class Fn>
void for_each_assignment(const std::vector<T>& alphabet, std::size_t cells, Fn&& fn) {
  std::vector<std::size_t> digits(cells, 0);
  std::vector<T> current(cells, alphabet.front());
  while (true) {
    for (std::size_t i = 0; i < cells; ++i) current[i] = alphabet[digits[i]];
    fn(current);
    std::size_t i = 0;
    while (i < cells && ++digits[i] == alphabet.size()) digits[i++] = 0;
    if (i == cells) return;
  }
}

}  // namespace oracle
