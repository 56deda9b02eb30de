#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pasv/order_model.hpp"
#include "pasv/poset.hpp"
#include "pasv/sampler.hpp"
#include "pasv/utility.hpp"

namespace pasv {

// Per-player value estimates. The telescoping identity makes the value sum
// equal U([n]) - U({}) per sample, so `value_sum` must match `grand_total`
// up to float accumulation. `per_sample_marginals` (n_samples x n,
// row-major) backs group-level standard errors; exact reports leave it
// empty and carry zero errors.
struct ValueReport {
    std::vector<double> values;
    std::vector<double> std_errors;
    std::uint64_t n_samples = 0;
    double grand_total = 0.0; // U([n]) - U({})
    double value_sum = 0.0;   // realized sum of values
    std::vector<double> per_sample_marginals;

    int player_count() const { return static_cast<int>(values.size()); }
};

// Mean marginal gain per (group, entry position), with cell sample counts.
struct PositionCurve {
    std::vector<std::string> group_labels;
    std::vector<std::vector<double>> mean;         // [group][position]
    std::vector<std::vector<std::uint64_t>> count; // [group][position]
};

// Monte Carlo random-order values: the average over samples of each
// player's marginal gain at its realized position. One telescoping chain of
// n+1 utility calls per sample; standard errors are per-player sample
// standard deviations over sqrt(n_samples).
ValueReport rov_estimate(std::span<const Permutation> samples, const UtilityFn& u);

// Exact expectation over the enumerated order distribution.
ValueReport exact_value(const Poset& p, const Weights& w, const UtilityFn& u,
                        std::uint64_t cap = Poset::kDefaultExtensionCap);

ValueReport exact_value(const OrderDistribution& d, const UtilityFn& u);

// groups[i] names player i's group; every player must be covered.
PositionCurve marginal_by_position(std::span<const Permutation> samples,
                                   const UtilityFn& u,
                                   const std::vector<std::string>& groups);

// Group totals with honest errors: the group standard error comes from
// per-sample group sums, not from summing member errors.
std::map<std::string, std::pair<double, double>> group_values(
    const ValueReport& r, const std::vector<std::string>& groups);

// Estimator dispatch shared by the CLI and the sweep: exact whenever the
// extension count fits under the cap (unless forced), MH sampling
// otherwise.
struct EstimatorConfig {
    enum class Mode { Auto, Exact, Mh };
    Mode mode = Mode::Auto;
    std::uint64_t exact_cap = 100'000;
    MhConfig mh;
};

ValueReport estimate_values(const Poset& p, const Weights& w, const UtilityFn& u,
                            const EstimatorConfig& cfg);

} // namespace pasv
