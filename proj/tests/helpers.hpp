#pragma once

#include <vector>

#include "xdrec/random.hpp"
#include "xdrec/ratings.hpp"

namespace xdrec::testing {

// 4x4 fully observed two-block fixture: 5s on the diagonal blocks, 1s off.
inline SparseRatingMatrix two_block_matrix() {
    std::vector<RatingTriple> ts;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            ts.push_back({i, j, (i < 2) == (j < 2) ? 5 : 1});
        }
    }
    return build_matrix(std::move(ts), 4, 4, 5);
}

// Random sparse matrix with at least one observed entry.
inline SparseRatingMatrix random_matrix(Rng& rng, int n_users, int n_items, double density,
                                        int r_max = 5) {
    std::vector<RatingTriple> ts;
    for (int i = 0; i < n_users; ++i) {
        for (int j = 0; j < n_items; ++j) {
            if (rng.uniform01() < density) ts.push_back({i, j, rng.int_in(1, r_max)});
        }
    }
    if (ts.empty()) ts.push_back({0, 0, rng.int_in(1, r_max)});
    return build_matrix(std::move(ts), n_users, n_items, r_max);
}

inline bool bitwise_equal(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

}  // namespace xdrec::testing
