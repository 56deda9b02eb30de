#pragma once

#include <cstdint>
#include <vector>

#include "pasv/poset.hpp"

namespace pasv {

// Positive per-player soft priority weights.
struct Weights {
    std::vector<double> lambda;

    static Weights uniform(int n) { return Weights{std::vector<double>(n, 1.0)}; }
    static Weights of(std::vector<double> lambda);

    int size() const { return static_cast<int>(lambda.size()); }
    double operator[](int i) const { return lambda[i]; }
};

// A distribution over linear extensions: parallel support/probability
// arrays, probabilities in linear space after normalization.
struct OrderDistribution {
    int n = 0;
    std::vector<Permutation> support;
    std::vector<double> prob;

    std::size_t size() const { return support.size(); }
};

// Natural log of the unnormalized order weight
//   prod_t  lambda[pi_t] * |max(S_t)| / sum_{k in max(S_t)} lambda[k]
// over prefixes S_t of pi. Log space so that extreme weights (sweeps use
// lambda up to 2^11^c) cannot overflow the product. Throws
// NotLinearExtension when pi violates the order.
double pasv_log_weight(const Poset& p, const Weights& w, const Permutation& pi);

// The full order distribution, normalized by log-sum-exp over all linear
// extensions. Throws ExtensionCountExceedsCap via enumeration.
OrderDistribution exact_pasv_distribution(const Poset& p, const Weights& w,
                                          std::uint64_t cap = Poset::kDefaultExtensionCap);

// Uniform over linear extensions (equal-weight special case).
OrderDistribution psv_distribution(const Poset& p,
                                   std::uint64_t cap = Poset::kDefaultExtensionCap);

// Probability of pi under the backward sequential weighted scheme for an
// ordered partition:
//   prod_t  lambda[pi_t] / sum_{k in max(S_t)} lambda[k].
// Already normalized over the partition's linear extensions.
double wsv_probability(const OrderedPartition& op, const Weights& w,
                       const Permutation& pi);

// Per-step selection probability lambda[i] / sum_{k in max(S)} lambda[k]
// for a maximal element i of a feasible set S. Values over max(S) sum to 1.
// Throws InfeasibleSet / NotMaximalInSet.
double choice_factor(const Poset& p, const Weights& w, int i, const Bitset& S);

} // namespace pasv
