#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "proxygrade/phantom_proxy.hpp"

namespace proxygrade {

/// R_J: the selected value at each step of repeatedly selecting and
/// removing from the pool.
struct VotingRange {
  CandidateIndex candidate = 0;
  std::vector<Rational> values;
  std::size_t pool_size = 0;

  bool operator==(const VotingRange&) const = default;
};

/// Chooses which pool entry to remove once `alpha` has been selected.
/// Returns an index into `residual`.
using RemovalRule =
    std::function<std::size_t(const std::vector<PoolEntry>& residual, const Rational& alpha)>;

/// Removes the entry equal to alpha whose voter comes first (then the
/// lowest duplicate copy).
std::size_t remove_first_voter(const std::vector<PoolEntry>& residual, const Rational& alpha);

VotingRange voting_range(const SelectorFn& selector, const VotingPool& pool,
                         CandidateIndex candidate,
                         const RemovalRule& rule = remove_first_voter);

/// Throws NotFair unless every candidate shares one selector.
VotingRange voting_range(const Mechanism& mechanism, const VotingPool& pool,
                         CandidateIndex candidate);

/// Each pool repeated `target / size` times; `target` must be a common
/// multiple of the sizes.
std::vector<VotingPool> equalize_pools_to(const std::vector<VotingPool>& pools, std::size_t target);

struct EqualizedPools {
  std::vector<VotingPool> pools;
  std::size_t size = 0;  // lcm of the input sizes
};

/// Repeats every pool up to the lcm of the pool sizes. Pools must be nonempty.
EqualizedPools equalize_pools(const std::vector<VotingPool>& pools);

/// Lexicographic comparison; a proper prefix is smaller.
bool range_less(const std::vector<Rational>& a, const std::vector<Rational>& b);

struct RankOutcome {
  /// Best first; candidates in one tier are tied.
  std::vector<std::vector<CandidateIndex>> tiers;
  /// Ranges of the ranked candidates, in candidate order.
  std::vector<VotingRange> ranges;
  /// Candidates with an empty pool.
  std::vector<CandidateIndex> excluded;
  std::size_t equalized_size = 0;

  const VotingRange* range_of(CandidateIndex candidate) const;
};

/// Pools as used by the ranking: real grades and proxies, plus (when
/// `reinforce_absentees`) one entry worth the candidate's grade for each
/// abstainer not already represented.
std::vector<VotingPool> ranking_pools(const Mechanism& mechanism, const Profile& profile,
                                      bool reinforce_absentees);

/// Throws NotFair for candidate-dependent selectors, and
/// NotOuterConsistent when pools must be duplicated but the selector
/// fails the merge condition up to the equalized size.
RankOutcome rank(const Mechanism& mechanism, const Profile& profile, bool reinforce_absentees);

struct RangeManipulation {
  VoterIndex voter = 0;
  std::size_t true_label = 0;
  std::size_t reported_label = 0;
  std::vector<Rational> honest;
  std::vector<Rational> manipulated;
  std::size_t position = 0;  // first differing index
};

/// Searches single-voter grade changes on `candidate` for one that moves
/// the range, at its first differing entry, strictly toward the voter's
/// true grade. `deviations` are label indices to try.
std::optional<RangeManipulation> range_sp_probe(const Mechanism& mechanism, const Profile& profile,
                                                CandidateIndex candidate,
                                                const std::vector<std::size_t>& deviations,
                                                const RemovalRule& rule = remove_first_voter);

}  // namespace proxygrade
