#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pasv/order_model.hpp"
#include "pasv/poset.hpp"
#include "pasv/utility.hpp"
#include "pasv/valuation.hpp"

namespace pasv {

// Default sweep grid {2^k : k = -8..8}.
std::vector<double> default_sweep_grid();

// One value run per grid multiplier b: target players' weights become
// baseline * b (off-target weights stay at baseline), values recomputed
// independently per point. Monte Carlo seeds derive from (seed, grid index).
struct SweepSpec {
    Bitset target;
    std::vector<double> grid;
    Weights baseline;
    EstimatorConfig estimator;
    std::uint64_t seed = 0;

    void validate(int n) const;
};

struct SweepPoint {
    double multiplier = 1.0;
    ValueReport report;
};

struct SweepReport {
    Bitset target;
    std::vector<SweepPoint> points;
};

SweepReport run_sweep(const Poset& p, const SweepSpec& spec, const UtilityFn& u);

// The weights a sweep uses at one grid point.
Weights sweep_weights(const SweepSpec& spec, std::size_t grid_index);

// Values under the extreme-weight limit construction: the modified poset
// with off-target weights kept and the target's weight set to 1 (the limit
// distribution does not depend on it).
ValueReport limit_reference_maximal(const Poset& p, const Weights& w, int target,
                                    const UtilityFn& u, const EstimatorConfig& cfg);

ValueReport limit_reference_refine(const OrderedPartition& op, const Weights& w,
                                   int layer_index, const Bitset& G,
                                   const UtilityFn& u, const EstimatorConfig& cfg);

// Half the L1 distance between two distributions over permutations of the
// same player count (supports may differ).
double tv_distance(const OrderDistribution& a, const OrderDistribution& b);

// Total variation between the numerically limiting distribution (target
// weight 1e8) and the distribution on the candidate-edge-augmented poset
// with target weight 1. A clearly positive value demonstrates that the
// extreme weight is not equivalent to adding those edges.
double limit_mismatch_demo(const Poset& p, const Weights& w, int target,
                           std::span<const std::pair<int, int>> candidate_edges,
                           std::uint64_t cap = Poset::kDefaultExtensionCap);

} // namespace pasv
