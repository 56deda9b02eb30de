#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pasv/bitset.hpp"

namespace pasv {

// An ordering of all n players. `order[t]` is the player at position t,
// `position` is its inverse.
struct Permutation {
    std::vector<int> order;
    std::vector<int> position;

    static Permutation of_order(std::vector<int> order);

    int size() const { return static_cast<int>(order.size()); }

    bool operator==(const Permutation& o) const { return order == o.order; }
    bool operator!=(const Permutation& o) const { return !(*this == o); }
};

struct OrderedPartition;

// The partial order ([n], precedence) stored as its strict transitive
// closure: succ_[i] holds every j with i < j, pred_[i] the transpose.
// Immutable after construction; all queries are read-only.
class Poset {
public:
    static constexpr std::uint64_t kDefaultExtensionCap = 10'000'000;

    // Builds the transitive closure of the given directed edges (from, to)
    // meaning from < to. Duplicate edges are fine. Throws CycleDetected on
    // directed cycles (including self-loops) and IndexOutOfRange on bad
    // endpoints.
    static Poset from_edges(int n, std::span<const std::pair<int, int>> edges);
    static Poset from_edges(int n, std::initializer_list<std::pair<int, int>> edges);

    static Poset antichain(int n);
    static Poset chain(int n);

    int player_count() const { return n_; }

    bool precedes(int i, int j) const { return succ_[i].test(j); }

    // True iff neither i < j nor j < i. Throws SamePlayer when i == j.
    bool incomparable(int i, int j) const;

    const Bitset& successors(int i) const { return succ_[i]; }
    const Bitset& predecessors(int i) const { return pred_[i]; }

    // S is feasible iff it is downward closed: every predecessor of a
    // member is a member.
    bool is_feasible(const Bitset& S) const;

    // Members of S with no successor inside S. Throws EmptySet for empty S.
    Bitset maximal_elements(const Bitset& S) const;

    bool is_linear_extension(const Permutation& pi) const;

    // Deterministic topological order: repeatedly take the lowest-index
    // player whose predecessors are all placed.
    Permutation initial_linear_extension() const;

    // All linear extensions in lexicographic order of the order arrays.
    // Throws ExtensionCountExceedsCap once the count would exceed cap.
    std::vector<Permutation> enumerate_linear_extensions(
        std::uint64_t cap = kDefaultExtensionCap) const;

    std::uint64_t count_linear_extensions(std::uint64_t cap = kDefaultExtensionCap) const;

    // Recovers the unique layer sequence (B_1, ..., B_m) when the strict
    // relation is exactly "earlier layer precedes later layer"; none
    // otherwise. An antichain yields a single layer.
    std::optional<OrderedPartition> ordered_partition() const;

    // The poset of the extreme-weight limit for a globally maximal player:
    // adds j < i for every other globally maximal j, then re-closes. All
    // original strict pairs are preserved. Throws NotGloballyMaximal.
    Poset force_unique_maximal(int i) const;

    std::vector<std::pair<int, int>> strict_pairs() const;

    bool operator==(const Poset& o) const { return n_ == o.n_ && succ_ == o.succ_; }

private:
    Poset(int n, std::vector<Bitset> succ, std::vector<Bitset> pred)
        : n_(n), succ_(std::move(succ)), pred_(std::move(pred)) {}

    int n_ = 0;
    std::vector<Bitset> succ_;
    std::vector<Bitset> pred_;
};

// Disjoint layers covering [n]; the induced poset has i < j iff
// layer(i) < layer(j).
struct OrderedPartition {
    std::vector<Bitset> layers;

    static OrderedPartition from_layers(std::vector<Bitset> layers);

    int player_count() const { return layers.empty() ? 0 : layers.front().size(); }
    int layer_count() const { return static_cast<int>(layers.size()); }
    int layer_of(int player) const;

    Poset to_poset() const;

    // Splits layer `layer_index` into the consecutive layers (B \ G, G).
    // G == B leaves the partition unchanged. Throws EmptySubset /
    // SubsetNotInLayer.
    OrderedPartition refined(int layer_index, const Bitset& G) const;
};

// The poset of the extreme-weight limit for a layer subset G: the refined
// partition (B \ G, G) as a poset.
Poset refine_layer_poset(const OrderedPartition& op, int layer_index, const Bitset& G);

// Incremental maximal-set tracker for prefixes of a linear extension.
// After pushing pi_1..pi_t, frontier() is max(S_t): pushing p evicts
// exactly the frontier members that precede p.
class PrefixFrontier {
public:
    explicit PrefixFrontier(const Poset& p)
        : poset_(&p), frontier_(p.player_count()) {}

    void push(int player) {
        frontier_.remove(poset_->predecessors(player));
        frontier_.set(player);
    }

    const Bitset& frontier() const { return frontier_; }

    void clear() { frontier_ = Bitset(poset_->player_count()); }

private:
    const Poset* poset_;
    Bitset frontier_;
};

} // namespace pasv
