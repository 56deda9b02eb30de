#include "pasv/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>

#include "pasv/errors.hpp"
#include "pasv/rng.hpp"

namespace pasv {

std::vector<double> default_sweep_grid() {
    std::vector<double> grid;
    for (int k = -8; k <= 8; ++k) grid.push_back(std::ldexp(1.0, k));
    return grid;
}

void SweepSpec::validate(int n) const {
    if (target.size() != n) throw DimensionMismatch("sweep target has wrong player count");
    if (target.empty()) throw InvalidArgument("sweep target is empty");
    if (baseline.size() != n) throw DimensionMismatch("baseline weights have wrong player count");
    if (grid.empty()) throw InvalidArgument("sweep grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0)) throw InvalidArgument("sweep grid multipliers must be positive");
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw InvalidArgument("sweep grid must be strictly increasing");
        }
    }
}

Weights sweep_weights(const SweepSpec& spec, std::size_t grid_index) {
    // Always rebuilt from the baseline; multipliers never compound.
    std::vector<double> lambda = spec.baseline.lambda;
    spec.target.for_each([&](int i) { lambda[i] *= spec.grid[grid_index]; });
    return Weights::of(std::move(lambda));
}

SweepReport run_sweep(const Poset& p, const SweepSpec& spec, const UtilityFn& u) {
    spec.validate(p.player_count());
    // Grid points are independent (own weights, own derived chain seed, the
    // shared utility is read-only), so they run concurrently; assembly by
    // grid index keeps the report deterministic.
    std::vector<std::future<ValueReport>> pending;
    pending.reserve(spec.grid.size());
    for (std::size_t gi = 0; gi < spec.grid.size(); ++gi) {
        EstimatorConfig cfg = spec.estimator;
        cfg.mh.seed = derive_seed(spec.seed, "sweep-point", gi);
        pending.push_back(std::async(std::launch::async, [&p, &spec, &u, cfg, gi] {
            return estimate_values(p, sweep_weights(spec, gi), u, cfg);
        }));
    }
    SweepReport report;
    report.target = spec.target;
    report.points.reserve(spec.grid.size());
    for (std::size_t gi = 0; gi < spec.grid.size(); ++gi) {
        report.points.push_back(SweepPoint{spec.grid[gi], pending[gi].get()});
    }
    return report;
}

namespace {

Weights limit_weights(const Weights& w, const Bitset& target) {
    std::vector<double> lambda = w.lambda;
    target.for_each([&](int i) { lambda[i] = 1.0; });
    return Weights::of(std::move(lambda));
}

} // namespace

ValueReport limit_reference_maximal(const Poset& p, const Weights& w, int target,
                                    const UtilityFn& u, const EstimatorConfig& cfg) {
    const Poset modified = p.force_unique_maximal(target);
    Bitset t(p.player_count());
    t.set(target);
    return estimate_values(modified, limit_weights(w, t), u, cfg);
}

ValueReport limit_reference_refine(const OrderedPartition& op, const Weights& w,
                                   int layer_index, const Bitset& G,
                                   const UtilityFn& u, const EstimatorConfig& cfg) {
    const Poset modified = refine_layer_poset(op, layer_index, G);
    return estimate_values(modified, limit_weights(w, G), u, cfg);
}

double tv_distance(const OrderDistribution& a, const OrderDistribution& b) {
    if (a.n != b.n) {
        throw DimensionMismatch("distributions are over different player counts");
    }
    std::map<std::vector<int>, double> diff;
    for (std::size_t i = 0; i < a.size(); ++i) diff[a.support[i].order] += a.prob[i];
    for (std::size_t i = 0; i < b.size(); ++i) diff[b.support[i].order] -= b.prob[i];
    double l1 = 0.0;
    for (const auto& [order, d] : diff) l1 += std::abs(d);
    return 0.5 * l1;
}

double limit_mismatch_demo(const Poset& p, const Weights& w, int target,
                           std::span<const std::pair<int, int>> candidate_edges,
                           std::uint64_t cap) {
    std::vector<double> extreme = w.lambda;
    extreme[target] = 1e8;
    const OrderDistribution limiting =
        exact_pasv_distribution(p, Weights::of(std::move(extreme)), cap);

    std::vector<std::pair<int, int>> edges = p.strict_pairs();
    edges.insert(edges.end(), candidate_edges.begin(), candidate_edges.end());
    const Poset augmented = Poset::from_edges(p.player_count(), edges);
    std::vector<double> plain = w.lambda;
    plain[target] = 1.0;
    const OrderDistribution candidate =
        exact_pasv_distribution(augmented, Weights::of(std::move(plain)), cap);

    return tv_distance(limiting, candidate);
}

} // namespace pasv
