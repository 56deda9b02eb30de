#include "pasv/poset.hpp"

#include <algorithm>
#include <string>

#include "pasv/errors.hpp"

namespace pasv {

Permutation Permutation::of_order(std::vector<int> order) {
    const int n = static_cast<int>(order.size());
    std::vector<int> position(n, -1);
    for (int t = 0; t < n; ++t) {
        int p = order[t];
        if (p < 0 || p >= n) {
            throw IndexOutOfRange("permutation entry " + std::to_string(p) +
                                  " out of range [0, " + std::to_string(n) + ")");
        }
        if (position[p] != -1) {
            throw InvalidArgument("player " + std::to_string(p) +
                                  " appears twice in permutation");
        }
        position[p] = t;
    }
    return Permutation{std::move(order), std::move(position)};
}

Poset Poset::from_edges(int n, std::span<const std::pair<int, int>> edges) {
    if (n < 1) throw InvalidArgument("player count must be positive");
    std::vector<Bitset> direct(n, Bitset(n));
    for (const auto& [from, to] : edges) {
        if (from < 0 || from >= n || to < 0 || to >= n) {
            throw IndexOutOfRange("edge (" + std::to_string(from) + ", " +
                                  std::to_string(to) + ") out of range for n = " +
                                  std::to_string(n));
        }
        if (from == to) {
            throw CycleDetected("self-loop at player " + std::to_string(from));
        }
        direct[from].set(to);
    }

    // Kahn layering detects cycles and yields a topological order.
    std::vector<int> indegree(n, 0);
    for (int i = 0; i < n; ++i) {
        direct[i].for_each([&](int j) { ++indegree[j]; });
    }
    std::vector<int> topo;
    topo.reserve(n);
    std::vector<int> ready;
    for (int i = 0; i < n; ++i) {
        if (indegree[i] == 0) ready.push_back(i);
    }
    while (!ready.empty()) {
        int v = ready.back();
        ready.pop_back();
        topo.push_back(v);
        direct[v].for_each([&](int j) {
            if (--indegree[j] == 0) ready.push_back(j);
        });
    }
    if (static_cast<int>(topo.size()) != n) {
        throw CycleDetected("edge set contains a directed cycle");
    }

    // Closure by bitwise OR in reverse topological order:
    // succ(i) = direct(i) OR union of succ(j) over direct successors j.
    std::vector<Bitset> succ(n, Bitset(n));
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
        int i = *it;
        succ[i] = direct[i];
        direct[i].for_each([&](int j) { succ[i] |= succ[j]; });
    }
    std::vector<Bitset> pred(n, Bitset(n));
    for (int i = 0; i < n; ++i) {
        succ[i].for_each([&](int j) { pred[j].set(i); });
    }
    return Poset(n, std::move(succ), std::move(pred));
}

Poset Poset::from_edges(int n, std::initializer_list<std::pair<int, int>> edges) {
    std::vector<std::pair<int, int>> v(edges);
    return from_edges(n, std::span<const std::pair<int, int>>(v));
}

Poset Poset::antichain(int n) {
    return from_edges(n, std::span<const std::pair<int, int>>{});
}

Poset Poset::chain(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return from_edges(n, edges);
}

bool Poset::incomparable(int i, int j) const {
    if (i == j) {
        throw SamePlayer("incomparability is only defined for distinct players");
    }
    return !precedes(i, j) && !precedes(j, i);
}

bool Poset::is_feasible(const Bitset& S) const {
    bool ok = true;
    S.for_each([&](int i) {
        if (ok && !pred_[i].is_subset_of(S)) ok = false;
    });
    return ok;
}

Bitset Poset::maximal_elements(const Bitset& S) const {
    if (S.empty()) {
        throw EmptySet("maximal elements of the empty set are undefined");
    }
    Bitset out(n_);
    S.for_each([&](int i) {
        if (!succ_[i].intersects(S)) out.set(i);
    });
    return out;
}

bool Poset::is_linear_extension(const Permutation& pi) const {
    if (pi.size() != n_) return false;
    for (int i = 0; i < n_; ++i) {
        bool ok = true;
        succ_[i].for_each([&](int j) {
            if (ok && pi.position[i] >= pi.position[j]) ok = false;
        });
        if (!ok) return false;
    }
    return true;
}

Permutation Poset::initial_linear_extension() const {
    Bitset placed(n_);
    std::vector<int> order;
    order.reserve(n_);
    for (int step = 0; step < n_; ++step) {
        for (int i = 0; i < n_; ++i) {
            if (!placed.test(i) && pred_[i].is_subset_of(placed)) {
                order.push_back(i);
                placed.set(i);
                break;
            }
        }
    }
    return Permutation::of_order(std::move(order));
}

namespace {

void enumerate_rec(const Poset& p, Bitset& placed, std::vector<int>& order,
                   std::uint64_t cap, std::vector<Permutation>* out,
                   std::uint64_t& count) {
    const int n = p.player_count();
    if (static_cast<int>(order.size()) == n) {
        if (count >= cap) {
            throw ExtensionCountExceedsCap(
                "linear extension count exceeds cap " + std::to_string(cap));
        }
        ++count;
        if (out != nullptr) out->push_back(Permutation::of_order(order));
        return;
    }
    for (int i = 0; i < n; ++i) {
        if (!placed.test(i) && p.predecessors(i).is_subset_of(placed)) {
            placed.set(i);
            order.push_back(i);
            enumerate_rec(p, placed, order, cap, out, count);
            order.pop_back();
            placed.reset(i);
        }
    }
}

} // namespace

std::vector<Permutation> Poset::enumerate_linear_extensions(std::uint64_t cap) const {
    std::vector<Permutation> out;
    Bitset placed(n_);
    std::vector<int> order;
    order.reserve(n_);
    std::uint64_t count = 0;
    enumerate_rec(*this, placed, order, cap, &out, count);
    return out;
}

std::uint64_t Poset::count_linear_extensions(std::uint64_t cap) const {
    Bitset placed(n_);
    std::vector<int> order;
    order.reserve(n_);
    std::uint64_t count = 0;
    enumerate_rec(*this, placed, order, cap, nullptr, count);
    return count;
}

std::optional<OrderedPartition> Poset::ordered_partition() const {
    // Candidate layer of i = longest chain strictly below i, computed over
    // the closure in any topological order (predecessors first).
    std::vector<int> depth(n_, 0);
    Permutation topo = initial_linear_extension();
    for (int t = 0; t < n_; ++t) {
        int i = topo.order[t];
        int d = 0;
        pred_[i].for_each([&](int j) { d = std::max(d, depth[j] + 1); });
        depth[i] = d;
    }
    int m = 0;
    for (int i = 0; i < n_; ++i) m = std::max(m, depth[i] + 1);

    // The layering must reproduce the strict relation exactly.
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            if (i == j) continue;
            if (precedes(i, j) != (depth[i] < depth[j])) return std::nullopt;
        }
    }

    std::vector<Bitset> layers(m, Bitset(n_));
    for (int i = 0; i < n_; ++i) layers[depth[i]].set(i);
    return OrderedPartition{std::move(layers)};
}

Poset Poset::force_unique_maximal(int i) const {
    if (i < 0 || i >= n_) {
        throw IndexOutOfRange("player " + std::to_string(i) + " out of range");
    }
    Bitset top = maximal_elements(Bitset::full(n_));
    if (!top.test(i)) {
        throw NotGloballyMaximal("player " + std::to_string(i) +
                                 " is not globally maximal");
    }
    std::vector<std::pair<int, int>> edges = strict_pairs();
    top.for_each([&](int j) {
        if (j != i) edges.emplace_back(j, i);
    });
    return from_edges(n_, edges);
}

std::vector<std::pair<int, int>> Poset::strict_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n_; ++i) {
        succ_[i].for_each([&](int j) { out.emplace_back(i, j); });
    }
    return out;
}

OrderedPartition OrderedPartition::from_layers(std::vector<Bitset> layers) {
    if (layers.empty()) throw InvalidArgument("ordered partition needs at least one layer");
    const int n = layers.front().size();
    Bitset seen(n);
    for (const auto& layer : layers) {
        if (layer.size() != n) throw DimensionMismatch("layers disagree on player count");
        if (layer.empty()) throw EmptySubset("ordered partition layer is empty");
        if (layer.intersects(seen)) throw InvalidArgument("ordered partition layers overlap");
        seen |= layer;
    }
    if (seen != Bitset::full(n)) {
        throw InvalidArgument("ordered partition layers do not cover all players");
    }
    return OrderedPartition{std::move(layers)};
}

int OrderedPartition::layer_of(int player) const {
    for (int li = 0; li < layer_count(); ++li) {
        if (layers[li].test(player)) return li;
    }
    throw IndexOutOfRange("player " + std::to_string(player) + " not in partition");
}

Poset OrderedPartition::to_poset() const {
    const int n = player_count();
    std::vector<std::pair<int, int>> edges;
    for (int li = 0; li + 1 < layer_count(); ++li) {
        layers[li].for_each([&](int i) {
            layers[li + 1].for_each([&](int j) { edges.emplace_back(i, j); });
        });
    }
    return Poset::from_edges(n, edges);
}

OrderedPartition OrderedPartition::refined(int layer_index, const Bitset& G) const {
    if (layer_index < 0 || layer_index >= layer_count()) {
        throw IndexOutOfRange("layer index " + std::to_string(layer_index) +
                              " out of range");
    }
    if (G.empty()) throw EmptySubset("refining subset is empty");
    const Bitset& B = layers[layer_index];
    if (!G.is_subset_of(B)) {
        throw SubsetNotInLayer("refining subset is not contained in the layer");
    }
    if (G == B) return *this;

    std::vector<Bitset> out;
    out.reserve(layers.size() + 1);
    for (int li = 0; li < layer_count(); ++li) {
        if (li == layer_index) {
            out.push_back(difference(B, G));
            out.push_back(G);
        } else {
            out.push_back(layers[li]);
        }
    }
    return from_layers(std::move(out));
}

Poset refine_layer_poset(const OrderedPartition& op, int layer_index, const Bitset& G) {
    return op.refined(layer_index, G).to_poset();
}

} // namespace pasv
