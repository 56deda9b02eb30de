#include "pasv/valuation.hpp"

#include <algorithm>
#include <cmath>

#include "pasv/errors.hpp"

namespace pasv {

namespace {

// Marginal gains of one permutation via the telescoping chain
// U(S_1), ..., U(S_n) with U({}) shared by the caller.
void marginals_along(const Permutation& pi, const UtilityFn& u, double u_empty,
                     std::vector<double>& out) {
    const int n = pi.size();
    Bitset prefix(n);
    double prev = u_empty;
    for (int t = 0; t < n; ++t) {
        prefix.set(pi.order[t]);
        const double cur = u.evaluate(prefix);
        out[pi.order[t]] = cur - prev;
        prev = cur;
    }
}

void check_groups(const std::vector<std::string>& groups, int n) {
    if (static_cast<int>(groups.size()) != n) {
        throw IncompleteGrouping("grouping must name a group for each of the " +
                                 std::to_string(n) + " players");
    }
    for (const auto& g : groups) {
        if (g.empty()) throw IncompleteGrouping("empty group label");
    }
}

std::vector<std::string> distinct_sorted(const std::vector<std::string>& groups) {
    std::vector<std::string> labels(groups);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return labels;
}

} // namespace

ValueReport rov_estimate(std::span<const Permutation> samples, const UtilityFn& u) {
    if (samples.empty()) throw EmptySamples("rov_estimate needs at least one sample");
    const int n = samples.front().size();
    const auto n_samples = static_cast<std::uint64_t>(samples.size());

    ValueReport r;
    r.n_samples = n_samples;
    r.values.assign(n, 0.0);
    r.std_errors.assign(n, 0.0);
    r.per_sample_marginals.reserve(samples.size() * n);

    const double u_empty = u.evaluate(Bitset(n));
    const double u_full = u.evaluate(Bitset::full(n));
    r.grand_total = u_full - u_empty;

    std::vector<double> sum(n, 0.0);
    std::vector<double> sum_sq(n, 0.0);
    std::vector<double> marg(n, 0.0);
    for (const Permutation& pi : samples) {
        if (pi.size() != n) throw DimensionMismatch("samples disagree on player count");
        marginals_along(pi, u, u_empty, marg);
        for (int i = 0; i < n; ++i) {
            sum[i] += marg[i];
            sum_sq[i] += marg[i] * marg[i];
            r.per_sample_marginals.push_back(marg[i]);
        }
    }
    const double inv = 1.0 / static_cast<double>(n_samples);
    for (int i = 0; i < n; ++i) {
        r.values[i] = sum[i] * inv;
        if (n_samples > 1) {
            const double var = std::max(
                0.0, (sum_sq[i] - sum[i] * sum[i] * inv) /
                         static_cast<double>(n_samples - 1));
            r.std_errors[i] = std::sqrt(var * inv);
        }
        r.value_sum += r.values[i];
    }
    return r;
}

ValueReport exact_value(const OrderDistribution& d, const UtilityFn& u) {
    const int n = d.n;
    ValueReport r;
    r.n_samples = d.size();
    r.values.assign(n, 0.0);
    r.std_errors.assign(n, 0.0);

    const double u_empty = u.evaluate(Bitset(n));
    const double u_full = u.evaluate(Bitset::full(n));
    r.grand_total = u_full - u_empty;

    std::vector<double> marg(n, 0.0);
    for (std::size_t idx = 0; idx < d.size(); ++idx) {
        marginals_along(d.support[idx], u, u_empty, marg);
        for (int i = 0; i < n; ++i) r.values[i] += d.prob[idx] * marg[i];
    }
    for (int i = 0; i < n; ++i) r.value_sum += r.values[i];
    return r;
}

ValueReport exact_value(const Poset& p, const Weights& w, const UtilityFn& u,
                        std::uint64_t cap) {
    return exact_value(exact_pasv_distribution(p, w, cap), u);
}

PositionCurve marginal_by_position(std::span<const Permutation> samples,
                                   const UtilityFn& u,
                                   const std::vector<std::string>& groups) {
    if (samples.empty()) throw EmptySamples("marginal_by_position needs samples");
    const int n = samples.front().size();
    check_groups(groups, n);

    PositionCurve curve;
    curve.group_labels = distinct_sorted(groups);
    std::map<std::string, int> gid;
    for (std::size_t g = 0; g < curve.group_labels.size(); ++g) {
        gid[curve.group_labels[g]] = static_cast<int>(g);
    }
    curve.mean.assign(curve.group_labels.size(), std::vector<double>(n, 0.0));
    curve.count.assign(curve.group_labels.size(), std::vector<std::uint64_t>(n, 0));

    const double u_empty = u.evaluate(Bitset(n));
    std::vector<double> marg(n, 0.0);
    for (const Permutation& pi : samples) {
        marginals_along(pi, u, u_empty, marg);
        for (int pos = 0; pos < n; ++pos) {
            const int player = pi.order[pos];
            const int g = gid[groups[player]];
            curve.mean[g][pos] += marg[player];
            ++curve.count[g][pos];
        }
    }
    for (std::size_t g = 0; g < curve.mean.size(); ++g) {
        for (int pos = 0; pos < n; ++pos) {
            if (curve.count[g][pos] > 0) {
                curve.mean[g][pos] /= static_cast<double>(curve.count[g][pos]);
            }
        }
    }
    return curve;
}

std::map<std::string, std::pair<double, double>> group_values(
    const ValueReport& r, const std::vector<std::string>& groups) {
    const int n = r.player_count();
    check_groups(groups, n);

    std::map<std::string, std::vector<int>> members;
    for (int i = 0; i < n; ++i) members[groups[i]].push_back(i);

    std::map<std::string, std::pair<double, double>> out;
    for (const auto& [label, idx] : members) {
        double value = 0.0;
        for (int i : idx) value += r.values[i];
        double std_error = 0.0;
        if (!r.per_sample_marginals.empty() && r.n_samples > 1) {
            double sum = 0.0;
            double sum_sq = 0.0;
            for (std::uint64_t s = 0; s < r.n_samples; ++s) {
                double gsum = 0.0;
                for (int i : idx) gsum += r.per_sample_marginals[s * n + i];
                sum += gsum;
                sum_sq += gsum * gsum;
            }
            const double inv = 1.0 / static_cast<double>(r.n_samples);
            const double var = std::max(
                0.0, (sum_sq - sum * sum * inv) / static_cast<double>(r.n_samples - 1));
            std_error = std::sqrt(var * inv);
        }
        out[label] = {value, std_error};
    }
    return out;
}

ValueReport estimate_values(const Poset& p, const Weights& w, const UtilityFn& u,
                            const EstimatorConfig& cfg) {
    if (cfg.mode != EstimatorConfig::Mode::Mh) {
        // Count first (no storage) so an over-cap poset costs no memory.
        bool fits = true;
        try {
            p.count_linear_extensions(cfg.exact_cap);
        } catch (const ExtensionCountExceedsCap&) {
            if (cfg.mode == EstimatorConfig::Mode::Exact) throw;
            fits = false;
        }
        if (fits) return exact_value(p, w, u, cfg.exact_cap);
    }
    auto [samples, stats] = mh_sample(p, w, cfg.mh);
    (void)stats;
    return rov_estimate(samples, u);
}

} // namespace pasv
