#include "pasv/order_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pasv/errors.hpp"

namespace pasv {

Weights Weights::of(std::vector<double> lambda) {
    for (double v : lambda) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw InvalidArgument("weights must be positive and finite");
        }
    }
    return Weights{std::move(lambda)};
}

namespace {

void require_extension(const Poset& p, const Permutation& pi, const char* who) {
    if (!p.is_linear_extension(pi)) {
        throw NotLinearExtension(std::string(who) +
                                 ": permutation is not a linear extension");
    }
}

// Shared prefix scan for the sequential-factor products. with_size_factor
// keeps the |max(S_t)| numerator (the equal-weight-uniformity correction);
// without it the product is the ordered-partition backward scheme.
double log_prefix_product(const Poset& p, const Weights& w, const Permutation& pi,
                          bool with_size_factor) {
    PrefixFrontier frontier(p);
    double log_w = 0.0;
    for (int t = 0; t < pi.size(); ++t) {
        const int player = pi.order[t];
        frontier.push(player);
        double sum = 0.0;
        int m = 0;
        frontier.frontier().for_each([&](int k) {
            sum += w[k];
            ++m;
        });
        log_w += std::log(w[player]) - std::log(sum);
        if (with_size_factor) log_w += std::log(static_cast<double>(m));
    }
    return log_w;
}

} // namespace

double pasv_log_weight(const Poset& p, const Weights& w, const Permutation& pi) {
    require_extension(p, pi, "pasv_log_weight");
    return log_prefix_product(p, w, pi, /*with_size_factor=*/true);
}

OrderDistribution exact_pasv_distribution(const Poset& p, const Weights& w,
                                          std::uint64_t cap) {
    OrderDistribution d;
    d.n = p.player_count();
    d.support = p.enumerate_linear_extensions(cap);
    std::vector<double> log_w(d.support.size());
    for (std::size_t i = 0; i < d.support.size(); ++i) {
        log_w[i] = log_prefix_product(p, w, d.support[i], true);
    }
    // log-sum-exp in fixed (lexicographic) support order for determinism.
    double max_lw = -std::numeric_limits<double>::infinity();
    for (double lw : log_w) max_lw = std::max(max_lw, lw);
    double z = 0.0;
    for (double lw : log_w) z += std::exp(lw - max_lw);
    const double log_z = max_lw + std::log(z);
    d.prob.resize(log_w.size());
    for (std::size_t i = 0; i < log_w.size(); ++i) {
        d.prob[i] = std::exp(log_w[i] - log_z);
    }
    return d;
}

OrderDistribution psv_distribution(const Poset& p, std::uint64_t cap) {
    OrderDistribution d;
    d.n = p.player_count();
    d.support = p.enumerate_linear_extensions(cap);
    d.prob.assign(d.support.size(), 1.0 / static_cast<double>(d.support.size()));
    return d;
}

double wsv_probability(const OrderedPartition& op, const Weights& w,
                       const Permutation& pi) {
    const Poset p = op.to_poset();
    require_extension(p, pi, "wsv_probability");
    return std::exp(log_prefix_product(p, w, pi, /*with_size_factor=*/false));
}

double choice_factor(const Poset& p, const Weights& w, int i, const Bitset& S) {
    if (!p.is_feasible(S)) {
        throw InfeasibleSet("choice factor requires a feasible set");
    }
    const Bitset maximal = p.maximal_elements(S);
    if (!maximal.test(i)) {
        throw NotMaximalInSet("player " + std::to_string(i) +
                              " is not maximal in the given set");
    }
    double sum = 0.0;
    maximal.for_each([&](int k) { sum += w[k]; });
    return w[i] / sum;
}

} // namespace pasv
