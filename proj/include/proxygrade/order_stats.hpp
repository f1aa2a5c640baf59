#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "proxygrade/rational.hpp"

namespace proxygrade {

/// Sorted bag of rationals.
class RationalMultiset {
 public:
  RationalMultiset() = default;
  explicit RationalMultiset(std::vector<Rational> values);

  void insert(const Rational& value);
  /// Removes one copy of `value`; false if absent.
  bool erase_one(const Rational& value);

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  const std::vector<Rational>& values() const noexcept { return values_; }
  bool contains(const Rational& value) const;

  bool operator==(const RationalMultiset&) const = default;

 private:
  std::vector<Rational> values_;
};

/// The k-th smallest element (1-indexed, counting multiplicity).
const Rational& mu(std::size_t k, const RationalMultiset& values);

/// Selector g: pool size -> rank, with 1 <= g(k) <= k.
///
/// The lower median g(k) = ceil(k/2) is the majority grade selector.
/// Table selectors only cover the sizes they list.
class SelectorFn {
 public:
  enum class Kind { LowerMedian, UpperMedian, Min, Max, Table };

  static SelectorFn lower_median() { return SelectorFn(Kind::LowerMedian, {}); }
  static SelectorFn upper_median() { return SelectorFn(Kind::UpperMedian, {}); }
  static SelectorFn min() { return SelectorFn(Kind::Min, {}); }
  static SelectorFn max() { return SelectorFn(Kind::Max, {}); }
  /// `ranks[k-1]` is g(k).
  static SelectorFn table(std::vector<std::size_t> ranks);

  Kind kind() const noexcept { return kind_; }
  const std::vector<std::size_t>& ranks() const noexcept { return ranks_; }
  /// Largest supported pool size; empty for the unbounded built-ins.
  std::optional<std::size_t> domain() const;
  bool supports(std::size_t k) const;

  /// g(k); throws SelectorDomainExceeded beyond a table's domain.
  std::size_t operator()(std::size_t k) const;

  std::string name() const;

  bool operator==(const SelectorFn&) const = default;

 private:
  SelectorFn(Kind kind, std::vector<std::size_t> ranks)
      : kind_(kind), ranks_(std::move(ranks)) {}

  Kind kind_;
  std::vector<std::size_t> ranks_;
};

/// Applies the selector to the bag: mu(g(|values|), values).
const Rational& select(const SelectorFn& selector, const RationalMultiset& values);

struct ConditionReport {
  bool holds = true;
  /// First violating p (SC) or (k, k') (OC); unused slots are 0.
  std::pair<std::size_t, std::size_t> violation{0, 0};
};

/// g(p+1) in {g(p), g(p)+1} for 1 <= p < maxk (clipped to a table's domain).
ConditionReport check_sc_condition(const SelectorFn& selector, std::size_t maxk);

/// g(k+k') in {g(k)+g(k')-1, g(k)+g(k')} for k, k' >= 1 with k+k' <= maxk.
/// Pairs are scanned by increasing k+k', then increasing k.
ConditionReport check_oc_condition(const SelectorFn& selector, std::size_t maxk);

}  // namespace proxygrade
