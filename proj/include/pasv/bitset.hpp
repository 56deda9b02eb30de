#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "pasv/errors.hpp"

namespace pasv {

// Dynamic fixed-capacity bitset used as the player-set representation.
// Capacity is the player count n; all bits above n are kept at zero so
// whole-word operations stay valid.
class Bitset {
public:
    Bitset() = default;

    explicit Bitset(int n) : n_(n), words_((n + 63) / 64, 0) {}

    static Bitset full(int n) {
        Bitset b(n);
        for (auto& w : b.words_) w = ~std::uint64_t{0};
        b.trim();
        return b;
    }

    static Bitset of(int n, std::initializer_list<int> members) {
        Bitset b(n);
        for (int i : members) b.set(i);
        return b;
    }

    static Bitset of(int n, const std::vector<int>& members) {
        Bitset b(n);
        for (int i : members) b.set(i);
        return b;
    }

    int size() const { return n_; }

    bool test(int i) const {
        check_index(i);
        return (words_[i >> 6] >> (i & 63)) & 1;
    }

    void set(int i) {
        check_index(i);
        words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }

    void reset(int i) {
        check_index(i);
        words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }

    int count() const {
        int c = 0;
        for (auto w : words_) c += std::popcount(w);
        return c;
    }

    bool any() const {
        for (auto w : words_) {
            if (w) return true;
        }
        return false;
    }

    bool empty() const { return !any(); }

    Bitset& operator|=(const Bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }

    Bitset& operator&=(const Bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }

    // this := this \ o
    Bitset& remove(const Bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }

    friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
    friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }

    friend Bitset difference(Bitset a, const Bitset& b) { return a.remove(b); }

    bool is_subset_of(const Bitset& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            if (words_[i] & ~o.words_[i]) return false;
        }
        return true;
    }

    bool intersects(const Bitset& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            if (words_[i] & o.words_[i]) return true;
        }
        return false;
    }

    bool operator==(const Bitset& o) const { return n_ == o.n_ && words_ == o.words_; }
    bool operator!=(const Bitset& o) const { return !(*this == o); }

    // Visits members in ascending index order.
    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                int bit = std::countr_zero(w);
                f(static_cast<int>(wi * 64) + bit);
                w &= w - 1;
            }
        }
    }

    std::vector<int> members() const {
        std::vector<int> out;
        out.reserve(count());
        for_each([&](int i) { out.push_back(i); });
        return out;
    }

    int first() const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            if (words_[wi]) return static_cast<int>(wi * 64) + std::countr_zero(words_[wi]);
        }
        return -1;
    }

    // Stable cross-run identity string: lowercase hex mask for n <= 64
    // (empty set -> "0"), '-'-joined sorted index list above (CSV-safe,
    // empty set -> "").
    std::string canonical_key() const;

private:
    void check_index(int i) const {
        if (i < 0 || i >= n_) {
            throw IndexOutOfRange("player index " + std::to_string(i) +
                                  " out of range [0, " + std::to_string(n_) + ")");
        }
    }

    void trim() {
        int rem = n_ & 63;
        if (rem != 0 && !words_.empty()) {
            words_.back() &= (std::uint64_t{1} << rem) - 1;
        }
    }

    int n_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace pasv
