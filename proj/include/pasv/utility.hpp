#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pasv/bitset.hpp"

namespace pasv {

// Deterministic map from player subsets to a real score. Total on all
// subsets, not only feasible ones; repeated evaluation of the same subset
// must return the identical value. Implementations are safe for concurrent
// evaluation (the external-process utility serializes internally).
class UtilityFn {
public:
    virtual ~UtilityFn() = default;
    virtual double evaluate(const Bitset& subset) const = 0;
    // Stable identity string, usable as a cache namespace.
    virtual std::string descriptor() const = 0;
};

using UtilityPtr = std::shared_ptr<const UtilityFn>;

// Lookup table keyed by canonical subset encoding. Missing subsets return
// the default when given, otherwise throw MissingSubset.
UtilityPtr table_utility(int n, std::map<std::string, double> entries,
                         std::optional<double> default_value = std::nullopt);

// u_T(S) = 1 if T is contained in S else 0.
UtilityPtr elementary_game(const Bitset& T);

// Desk-scale data-reuse market. Original players carry their own gain; a
// copy substitutes for its absent source (contributing the source's gain)
// and contributes -penalty once the source is present. Players that are
// neither sources nor copies contribute 0.
struct LineageSpec {
    Bitset sources;
    std::map<int, int> copy_to_source;
    std::map<int, double> gains;          // per source
    std::map<int, double> noise_penalty;  // per copy; absent means 0
};
UtilityPtr lineage_utility(const LineageSpec& spec);

// Black-box utility spoken over a child process's stdin/stdout: one request
// line {"subset":[sorted indices]} per evaluation, one reply line holding a
// JSON number. The command runs under /bin/sh -c. Throws ProcessFailure /
// ProtocolViolation / Timeout.
UtilityPtr external_utility(int n, std::string command,
                            std::chrono::milliseconds timeout = std::chrono::milliseconds(60'000));

// Rectangular numeric dataset with integer class labels.
struct TabularDataset {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;

    int row_count() const { return static_cast<int>(rows.size()); }
    int feature_count() const { return rows.empty() ? 0 : static_cast<int>(rows.front().size()); }
};

// Class-probability scorer: probabilities over classes sum to 1.
class Predictor {
public:
    virtual ~Predictor() = default;
    virtual int class_count() const = 0;
    virtual double predict_proba(std::span<const double> x, int y) const = 0;
};

using PredictorPtr = std::shared_ptr<const Predictor>;

// Multinomial-logistic scorer: softmax(W x + b).
PredictorPtr logistic_predictor(std::vector<std::vector<double>> weights,
                                std::vector<double> bias);

// Masked-prediction utility with conditional k-NN imputation. For each of
// n_eval evaluation points (drawn once at construction, without
// replacement), the k nearest training rows under Euclidean distance
// restricted to the revealed coordinates S supply the hidden coordinates;
// the utility is the doubly averaged predicted probability of the true
// class. Ties break by training-row index; for S = {} (all rows at
// distance 0) the k rows are the head of a seeded shuffle fixed at
// construction. Throws KTooLarge / DimensionMismatch / InvalidArgument.
UtilityPtr knn_imputation_utility(TabularDataset train, TabularDataset eval_points,
                                  PredictorPtr predictor, int k, int n_eval,
                                  std::uint64_t seed);

// Memoizing wrapper keyed by canonical subset encoding; a value is computed
// at most once per key, errors propagate and are not cached. Wrapping an
// already-cached utility returns it unchanged.
UtilityPtr cached(UtilityPtr inner);

} // namespace pasv
