#pragma once

// Shared fixtures for the unit and acceptance suites.

#include <vector>

#include "pasv/order_model.hpp"
#include "pasv/poset.hpp"

namespace testing {

// Four players with strict pairs 0<1, 2<1, 2<3: the "N" poset. Its five
// linear extensions and the weighted distribution under lambda=(1,1,1,2)
// are worked through analytically in the suites below.
inline pasv::Poset n_poset() {
    return pasv::Poset::from_edges(4, {{0, 1}, {2, 1}, {2, 3}});
}

inline pasv::Permutation perm(std::vector<int> order) {
    return pasv::Permutation::of_order(std::move(order));
}

inline pasv::Weights weights(std::vector<double> lambda) {
    return pasv::Weights::of(std::move(lambda));
}

} // namespace testing
