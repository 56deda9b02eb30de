#include "pasv/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pasv/errors.hpp"
#include "pasv/rng.hpp"

namespace pasv {

void MhConfig::validate(int n) const {
    if (n_mc < 1) throw InvalidArgument("n_mc must be at least 1");
    if (thinning < 1) throw InvalidArgument("thinning must be at least 1");
    if (!index_weights.empty()) {
        if (static_cast<int>(index_weights.size()) != n - 1) {
            throw InvalidArgument("index sampler needs one weight per adjacent pair");
        }
        double sum = 0.0;
        for (double v : index_weights) {
            if (!(v > 0.0)) throw InvalidArgument("index sampler weights must be positive");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw InvalidArgument("index sampler weights must sum to 1");
        }
    }
}

namespace {

struct FrontierSummary {
    double lambda_sum = 0.0;
    int size = 0;
};

FrontierSummary summarize(const Bitset& frontier, const Weights& w) {
    FrontierSummary s;
    frontier.for_each([&](int k) {
        s.lambda_sum += w[k];
        ++s.size;
    });
    return s;
}

double ratio_from(const Bitset& max_cur, const Bitset& max_swapped, const Weights& w) {
    const FrontierSummary cur = summarize(max_cur, w);
    const FrontierSummary swapped = summarize(max_swapped, w);
    return (cur.lambda_sum / cur.size) / (swapped.lambda_sum / swapped.size);
}

// Maximal set of S_k with pi[k] replaced by pi[k+1], built from max(S_{k-1}).
Bitset swapped_frontier(const Poset& p, const Bitset& prev_frontier, int incoming) {
    Bitset out = prev_frontier;
    out.remove(p.predecessors(incoming));
    out.set(incoming);
    return out;
}

} // namespace

double local_ratio(const Poset& p, const Weights& w, const Permutation& pi, int k) {
    const int n = p.player_count();
    if (!p.is_linear_extension(pi)) {
        throw NotLinearExtension("local_ratio: permutation is not a linear extension");
    }
    if (k < 0 || k >= n - 1) {
        throw IndexOutOfRange("swap position " + std::to_string(k) +
                              " out of range [0, " + std::to_string(n - 1) + ")");
    }
    if (!p.incomparable(pi.order[k], pi.order[k + 1])) {
        throw ComparablePair("players at positions " + std::to_string(k) + ", " +
                             std::to_string(k + 1) + " are comparable");
    }
    PrefixFrontier prefix(p);
    for (int t = 0; t < k; ++t) prefix.push(pi.order[t]);
    const Bitset before = prefix.frontier();
    prefix.push(pi.order[k]);
    const Bitset max_cur = prefix.frontier();
    const Bitset max_swapped = swapped_frontier(p, before, pi.order[k + 1]);
    return ratio_from(max_cur, max_swapped, w);
}

std::pair<std::vector<Permutation>, ChainStats> mh_sample(
    const Poset& p, const Weights& w, const MhConfig& cfg,
    const std::optional<Permutation>& init) {
    const int n = p.player_count();
    cfg.validate(n);

    Permutation pi = init ? *init : p.initial_linear_extension();
    if (init && !p.is_linear_extension(pi)) {
        throw InvalidInit("initial permutation is not a linear extension");
    }

    // frontiers[t] = max of the first t+1 elements; a swap at pair (k, k+1)
    // only invalidates frontiers[k].
    std::vector<Bitset> frontiers(n, Bitset(n));
    {
        PrefixFrontier prefix(p);
        for (int t = 0; t < n; ++t) {
            prefix.push(pi.order[t]);
            frontiers[t] = prefix.frontier();
        }
    }

    std::vector<double> index_cum;
    if (!cfg.index_weights.empty()) {
        index_cum.resize(cfg.index_weights.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < cfg.index_weights.size(); ++i) {
            acc += cfg.index_weights[i];
            index_cum[i] = acc;
        }
    }

    Rng rng(cfg.seed);
    ChainStats stats;
    std::vector<Permutation> samples;
    samples.reserve(cfg.n_mc);
    const Bitset empty_frontier(n);

    const std::uint64_t total_steps = cfg.burn_in + cfg.thinning * (cfg.n_mc - 1) + 1;
    for (std::uint64_t t = 1; t <= total_steps; ++t) {
        ++stats.steps_total;
        if (n >= 2) {
            const int k = index_cum.empty()
                              ? static_cast<int>(rng.next_below(n - 1))
                              : static_cast<int>(rng.next_categorical(index_cum));
            const int a = pi.order[k];
            const int b = pi.order[k + 1];
            if (p.incomparable(a, b)) {
                ++stats.proposals;
                const Bitset& before = k > 0 ? frontiers[k - 1] : empty_frontier;
                const Bitset max_swapped = swapped_frontier(p, before, b);
                const double ratio = ratio_from(frontiers[k], max_swapped, w);
                const double alpha = std::min(1.0, ratio);
                if (rng.next_double() < alpha) {
                    ++stats.accepts;
                    pi.order[k] = b;
                    pi.order[k + 1] = a;
                    pi.position[a] = k + 1;
                    pi.position[b] = k;
                    frontiers[k] = max_swapped;
                }
            }
        }
        if (t > cfg.burn_in && (t - cfg.burn_in - 1) % cfg.thinning == 0) {
            samples.push_back(pi);
        }
    }
    return {std::move(samples), stats};
}

std::vector<Permutation> exact_sample(const OrderDistribution& d,
                                      std::uint64_t n_draws, std::uint64_t seed) {
    std::vector<double> cum(d.prob.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < d.prob.size(); ++i) {
        acc += d.prob[i];
        cum[i] = acc;
    }
    Rng rng(seed);
    std::vector<Permutation> out;
    out.reserve(n_draws);
    for (std::uint64_t i = 0; i < n_draws; ++i) {
        out.push_back(d.support[rng.next_categorical(cum)]);
    }
    return out;
}

std::vector<Permutation> backward_sequential_sample(const OrderedPartition& op,
                                                    const Weights& w,
                                                    std::uint64_t n_draws,
                                                    std::uint64_t seed) {
    const Poset p = op.to_poset();
    const int n = p.player_count();
    Rng rng(seed);
    std::vector<Permutation> out;
    out.reserve(n_draws);
    for (std::uint64_t draw = 0; draw < n_draws; ++draw) {
        Bitset remaining = Bitset::full(n);
        Bitset maximal = p.maximal_elements(remaining);
        std::vector<int> order(n, -1);
        for (int pos = n - 1; pos >= 0; --pos) {
            double sum = 0.0;
            maximal.for_each([&](int k) { sum += w[k]; });
            const double u = rng.next_double() * sum;
            int chosen = -1;
            double acc = 0.0;
            maximal.for_each([&](int k) {
                if (chosen < 0) {
                    acc += w[k];
                    if (u < acc) chosen = k;
                }
            });
            if (chosen < 0) chosen = maximal.members().back();
            order[pos] = chosen;
            remaining.reset(chosen);
            maximal.reset(chosen);
            // Predecessors of the removed player may become maximal.
            p.predecessors(chosen).for_each([&](int j) {
                if (remaining.test(j) && !p.successors(j).intersects(remaining)) {
                    maximal.set(j);
                }
            });
        }
        out.push_back(Permutation::of_order(std::move(order)));
    }
    return out;
}

} // namespace pasv
