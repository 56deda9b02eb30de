#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pasv/order_model.hpp"
#include "pasv/poset.hpp"

namespace pasv {

// Chain schedule. Samples are recorded at steps B+1, B+1+tau, ...,
// B+tau*(n_mc-1)+1; index_weights, when nonempty, biases the proposal
// position (entry j weights the adjacent pair at 0-based positions
// (j, j+1)); empty means uniform.
struct MhConfig {
    std::uint64_t n_mc = 1;
    std::uint64_t burn_in = 0;
    std::uint64_t thinning = 1;
    std::uint64_t seed = 0;
    std::vector<double> index_weights;

    // Schedules used for the reported experiments: heavy decorrelation for
    // large player sets, lighter for n <= 32.
    static MhConfig suggested(int n) {
        MhConfig cfg;
        if (n > 32) {
            cfg.n_mc = 10'000;
            cfg.burn_in = 100'000;
            cfg.thinning = 10'000;
        } else {
            cfg.n_mc = 3'000;
            cfg.burn_in = 10'000;
            cfg.thinning = 1'000;
        }
        return cfg;
    }

    void validate(int n) const;
};

struct ChainStats {
    std::uint64_t steps_total = 0;
    std::uint64_t proposals = 0; // steps whose drawn pair was incomparable
    std::uint64_t accepts = 0;

    double acceptance_rate() const {
        return static_cast<double>(accepts) /
               static_cast<double>(proposals > 0 ? proposals : 1);
    }
};

// Probability ratio p(pi') / p(pi) for the adjacent swap at 0-based
// positions (k, k+1), evaluated from the two local maximal sets only:
//   (sum lambda over max(S_{k+1}) / |max(S_{k+1})|)
//   -----------------------------------------------  with S' = S_k + pi[k+1].
//   (sum lambda over max(S'))       / |max(S')|
// Throws ComparablePair when the pair cannot be swapped.
double local_ratio(const Poset& p, const Weights& w, const Permutation& pi, int k);

// Adjacent-swap Metropolis-Hastings over linear extensions, acceptance
// min{1, p(pi')/p(pi)} via local_ratio. Comparable draws count as steps
// but not proposals (the chain stays). Byte-identical output for identical
// inputs and seed. init defaults to the deterministic topological order.
std::pair<std::vector<Permutation>, ChainStats> mh_sample(
    const Poset& p, const Weights& w, const MhConfig& cfg,
    const std::optional<Permutation>& init = std::nullopt);

// I.i.d. inverse-CDF draws from an enumerated distribution.
std::vector<Permutation> exact_sample(const OrderDistribution& d,
                                      std::uint64_t n_draws, std::uint64_t seed);

// I.i.d. exact draws for an ordered partition: fills positions n-1, n-2,
// ..., each time choosing among the current maximal elements with
// probability proportional to lambda.
std::vector<Permutation> backward_sequential_sample(const OrderedPartition& op,
                                                    const Weights& w,
                                                    std::uint64_t n_draws,
                                                    std::uint64_t seed);

} // namespace pasv
