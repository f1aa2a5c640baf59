#include "proxygrade/order_stats.hpp"

#include <algorithm>

#include "proxygrade/errors.hpp"

namespace proxygrade {

RationalMultiset::RationalMultiset(std::vector<Rational> values)
    : values_(std::move(values)) {
  std::sort(values_.begin(), values_.end());
}

void RationalMultiset::insert(const Rational& value) {
  values_.insert(std::upper_bound(values_.begin(), values_.end(), value), value);
}

bool RationalMultiset::erase_one(const Rational& value) {
  auto it = std::lower_bound(values_.begin(), values_.end(), value);
  if (it == values_.end() || *it != value) return false;
  values_.erase(it);
  return true;
}

bool RationalMultiset::contains(const Rational& value) const {
  return std::binary_search(values_.begin(), values_.end(), value);
}

const Rational& mu(std::size_t k, const RationalMultiset& values) {
  if (k == 0 || k > values.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "order statistic " + std::to_string(k) + " of a bag of size " +
                    std::to_string(values.size()));
  }
  return values.values()[k - 1];
}

SelectorFn SelectorFn::table(std::vector<std::size_t> ranks) {
  for (std::size_t k = 1; k <= ranks.size(); ++k) {
    if (ranks[k - 1] < 1 || ranks[k - 1] > k) {
      throw Error(ErrorCode::InvalidArgument,
                  "selector table entry g(" + std::to_string(k) + ") = " +
                      std::to_string(ranks[k - 1]) + " is outside [1, k]");
    }
  }
  if (ranks.empty()) throw Error(ErrorCode::InvalidArgument, "empty selector table");
  return SelectorFn(Kind::Table, std::move(ranks));
}

std::optional<std::size_t> SelectorFn::domain() const {
  if (kind_ == Kind::Table) return ranks_.size();
  return std::nullopt;
}

bool SelectorFn::supports(std::size_t k) const {
  return k >= 1 && (kind_ != Kind::Table || k <= ranks_.size());
}

std::size_t SelectorFn::operator()(std::size_t k) const {
  if (k == 0) throw Error(ErrorCode::IndexOutOfRange, "selector applied to an empty pool");
  switch (kind_) {
    case Kind::LowerMedian: return (k + 1) / 2;
    case Kind::UpperMedian: return k / 2 + 1;
    case Kind::Min: return 1;
    case Kind::Max: return k;
    case Kind::Table:
      if (k > ranks_.size()) {
        throw Error(ErrorCode::SelectorDomainExceeded,
                    "selector table covers sizes up to " + std::to_string(ranks_.size()) +
                        ", pool has " + std::to_string(k));
      }
      return ranks_[k - 1];
  }
  return 1;
}

std::string SelectorFn::name() const {
  switch (kind_) {
    case Kind::LowerMedian: return "lower_median";
    case Kind::UpperMedian: return "upper_median";
    case Kind::Min: return "min";
    case Kind::Max: return "max";
    case Kind::Table: {
      std::string out = "table[";
      for (std::size_t i = 0; i < ranks_.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(ranks_[i]);
      }
      return out + "]";
    }
  }
  return "?";
}

const Rational& select(const SelectorFn& selector, const RationalMultiset& values) {
  return mu(selector(values.size()), values);
}

namespace {

std::size_t clip(const SelectorFn& selector, std::size_t maxk) {
  if (auto domain = selector.domain()) return std::min(maxk, *domain);
  return maxk;
}

}  // namespace

ConditionReport check_sc_condition(const SelectorFn& selector, std::size_t maxk) {
  const auto limit = clip(selector, maxk);
  for (std::size_t p = 1; p < limit; ++p) {
    const auto now = selector(p);
    const auto next = selector(p + 1);
    if (next != now && next != now + 1) return {false, {p, 0}};
  }
  return {};
}

ConditionReport check_oc_condition(const SelectorFn& selector, std::size_t maxk) {
  const auto limit = clip(selector, maxk);
  for (std::size_t total = 2; total <= limit; ++total) {
    const auto merged = selector(total);
    for (std::size_t k = 1; k < total; ++k) {
      const auto sum = selector(k) + selector(total - k);
      if (merged != sum && merged + 1 != sum) return {false, {k, total - k}};
    }
  }
  return {};
}

}  // namespace proxygrade
