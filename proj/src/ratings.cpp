#include "xdrec/ratings.hpp"

#include <algorithm>
#include <string>

namespace xdrec {

SparseRatingMatrix build_matrix(std::vector<RatingTriple> triples, int n_users, int n_items,
                                int r_max) {
    if (n_users < 0 || n_items < 0 || r_max < 1) {
        throw DataError("InvalidConfig", "matrix dimensions and r_max must be positive");
    }
    for (const auto& t : triples) {
        if (t.user < 0 || t.user >= n_users || t.item < 0 || t.item >= n_items) {
            throw DataError("OutOfBounds", "entry (" + std::to_string(t.user) + "," +
                                               std::to_string(t.item) + ") outside " +
                                               std::to_string(n_users) + "x" +
                                               std::to_string(n_items));
        }
        if (t.rating < 1 || t.rating > r_max) {
            throw DataError("InvalidRating", "rating " + std::to_string(t.rating) +
                                                 " for entry (" + std::to_string(t.user) + "," +
                                                 std::to_string(t.item) + "), expected 1.." +
                                                 std::to_string(r_max));
        }
    }
    std::sort(triples.begin(), triples.end(), [](const RatingTriple& a, const RatingTriple& b) {
        return a.user != b.user ? a.user < b.user : a.item < b.item;
    });
    for (std::size_t e = 1; e < triples.size(); ++e) {
        if (triples[e].user == triples[e - 1].user && triples[e].item == triples[e - 1].item) {
            throw DataError("DuplicateEntry", "(" + std::to_string(triples[e].user) + "," +
                                                  std::to_string(triples[e].item) + ")");
        }
    }

    SparseRatingMatrix m;
    m.n_users_ = n_users;
    m.n_items_ = n_items;
    m.r_max_ = r_max;
    m.triples_ = std::move(triples);

    m.user_ptr_.assign(static_cast<std::size_t>(n_users) + 1, 0);
    std::vector<std::size_t> item_count(static_cast<std::size_t>(n_items) + 1, 0);
    for (const auto& t : m.triples_) {
        ++m.user_ptr_[static_cast<std::size_t>(t.user) + 1];
        ++item_count[static_cast<std::size_t>(t.item) + 1];
    }
    for (int u = 0; u < n_users; ++u) m.user_ptr_[u + 1] += m.user_ptr_[u];

    m.item_ptr_.assign(static_cast<std::size_t>(n_items) + 1, 0);
    for (int i = 0; i < n_items; ++i) m.item_ptr_[i + 1] = m.item_ptr_[i] + item_count[i + 1];
    m.item_ids_.resize(m.triples_.size());
    std::vector<std::size_t> cursor(m.item_ptr_.begin(), m.item_ptr_.end() - 1);
    for (std::size_t e = 0; e < m.triples_.size(); ++e) {
        m.item_ids_[cursor[m.triples_[e].item]++] = static_cast<std::int32_t>(e);
    }
    return m;
}

double observed_mean(const SparseRatingMatrix& m) {
    if (m.n_observed() == 0) throw DataError("EmptyMatrix", "no observed ratings");
    double sum = 0.0;
    for (const auto& t : m.triples()) sum += t.rating;
    return sum / static_cast<double>(m.n_observed());
}

double masked_residual_sq(const SparseRatingMatrix& m, const DenseMatrix& a) {
    if (a.rows() != m.n_users() || a.cols() != m.n_items()) {
        throw DataError("ShapeMismatch", "reconstruction is " + std::to_string(a.rows()) + "x" +
                                             std::to_string(a.cols()) + ", matrix is " +
                                             std::to_string(m.n_users()) + "x" +
                                             std::to_string(m.n_items()));
    }
    double sum = 0.0;
    for (const auto& t : m.triples()) {
        double d = t.rating - a(t.user, t.item);
        sum += d * d;
    }
    return sum;
}

DenseMatrix densify(const SparseRatingMatrix& m) {
    DenseMatrix a = DenseMatrix::Zero(m.n_users(), m.n_items());
    for (const auto& t : m.triples()) a(t.user, t.item) = t.rating;
    return a;
}

Eigen::VectorXd masked_row_dots(const SparseRatingMatrix& m, const DenseMatrix& left,
                                const DenseMatrix& right) {
    Eigen::VectorXd scores(static_cast<Eigen::Index>(m.n_observed()));
    const auto& ts = m.triples();
    for (std::size_t e = 0; e < ts.size(); ++e) {
        scores[static_cast<Eigen::Index>(e)] = left.row(ts[e].user).dot(right.row(ts[e].item));
    }
    return scores;
}

}  // namespace xdrec
