#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "xdrec/errors.hpp"

namespace xdrec {

// Dense numeric matrices are plain Eigen, row-major so rows are contiguous
// (the hot loops all walk rows) and so numpy round-trips are copy-free.
using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using IntMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// One observed rating. Ratings are 1..r_max; a source-file 0 means
// "missing" and is never stored.
struct RatingTriple {
    int user = 0;
    int item = 0;
    int rating = 0;
};

// Immutable coordinate-form rating matrix with per-user and per-item
// adjacency. Missing entries are represented by absence.
class SparseRatingMatrix {
public:
    SparseRatingMatrix() = default;

    int n_users() const { return n_users_; }
    int n_items() const { return n_items_; }
    int r_max() const { return r_max_; }
    std::size_t n_observed() const { return triples_.size(); }
    double density() const {
        return n_users_ == 0 || n_items_ == 0
                   ? 0.0
                   : static_cast<double>(triples_.size()) / (static_cast<double>(n_users_) * n_items_);
    }

    // Sorted by (user, item); the user adjacency is contiguous in here.
    const std::vector<RatingTriple>& triples() const { return triples_; }

    std::span<const RatingTriple> user_entries(int user) const {
        return {triples_.data() + user_ptr_[user],
                triples_.data() + user_ptr_[static_cast<std::size_t>(user) + 1]};
    }

    // Indices into triples(), grouped by item.
    std::span<const std::int32_t> item_entry_ids(int item) const {
        return {item_ids_.data() + item_ptr_[item],
                item_ids_.data() + item_ptr_[static_cast<std::size_t>(item) + 1]};
    }

    friend SparseRatingMatrix build_matrix(std::vector<RatingTriple> triples, int n_users,
                                           int n_items, int r_max);

private:
    int n_users_ = 0;
    int n_items_ = 0;
    int r_max_ = 0;
    std::vector<RatingTriple> triples_;
    std::vector<std::size_t> user_ptr_;
    std::vector<std::int32_t> item_ids_;
    std::vector<std::size_t> item_ptr_;
};

// Validates, deduplicates-checks and indexes the triples.
// Throws DataError: OutOfBounds, InvalidRating, DuplicateEntry.
SparseRatingMatrix build_matrix(std::vector<RatingTriple> triples, int n_users, int n_items,
                                int r_max);

// Mean of the stored ratings. Throws DataError("EmptyMatrix") on no entries.
double observed_mean(const SparseRatingMatrix& m);

// ||(X - A) .* W||_F^2 over the observed entries; A is a full n_users x n_items
// reconstruction. Throws DataError("ShapeMismatch").
double masked_residual_sq(const SparseRatingMatrix& m, const DenseMatrix& a);

// Observed ratings placed in a dense matrix, zeros elsewhere.
DenseMatrix densify(const SparseRatingMatrix& m);

// scores[e] = left.row(u_e) . right.row(i_e) for each stored triple e.
// left is n_users x k, right is n_items x k.
Eigen::VectorXd masked_row_dots(const SparseRatingMatrix& m, const DenseMatrix& left,
                                const DenseMatrix& right);

}  // namespace xdrec
