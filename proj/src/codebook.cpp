#include "xdrec/codebook.hpp"

#include <string>

namespace xdrec {

Codebook build_codebook(const SparseRatingMatrix& x, const MembershipMatrix& user_clusters,
                        const MembershipMatrix& item_clusters, AveragingMode mode) {
    if (user_clusters.n_rows() != x.n_users() || item_clusters.n_rows() != x.n_items()) {
        throw DataError("MembershipSizeMismatch",
                        "memberships cover " + std::to_string(user_clusters.n_rows()) + " users / " +
                            std::to_string(item_clusters.n_rows()) + " items, matrix is " +
                            std::to_string(x.n_users()) + "x" + std::to_string(x.n_items()));
    }
    const int k1 = user_clusters.n_clusters;
    const int k2 = item_clusters.n_clusters;

    Codebook cb;
    cb.B = DenseMatrix::Zero(k1, k2);
    cb.block_counts = DenseMatrix::Zero(k1, k2);
    DenseMatrix sums = DenseMatrix::Zero(k1, k2);
    for (const auto& t : x.triples()) {
        int a = user_clusters.assignments[static_cast<std::size_t>(t.user)];
        int b = item_clusters.assignments[static_cast<std::size_t>(t.item)];
        sums(a, b) += t.rating;
        cb.block_counts(a, b) += 1.0;
    }

    // Denominators: observed entries per block, or the full block size with
    // missing entries counted as zeros (the verbatim element-wise division).
    DenseMatrix denom;
    if (mode == AveragingMode::ObservedAverage) {
        denom = cb.block_counts;
    } else {
        Eigen::VectorXd user_sizes = Eigen::VectorXd::Zero(k1);
        Eigen::VectorXd item_sizes = Eigen::VectorXd::Zero(k2);
        for (int a : user_clusters.assignments) user_sizes[a] += 1.0;
        for (int b : item_clusters.assignments) item_sizes[b] += 1.0;
        denom = user_sizes * item_sizes.transpose();
    }

    double non_empty_sum = 0.0;
    int non_empty = 0;
    for (int a = 0; a < k1; ++a) {
        for (int b = 0; b < k2; ++b) {
            if (denom(a, b) > 0.0) {
                cb.B(a, b) = sums(a, b) / denom(a, b);
                non_empty_sum += cb.B(a, b);
                ++non_empty;
            }
        }
    }
    cb.fill_value = non_empty > 0 ? non_empty_sum / non_empty : observed_mean(x);
    for (int a = 0; a < k1; ++a) {
        for (int b = 0; b < k2; ++b) {
            if (denom(a, b) <= 0.0) cb.B(a, b) = cb.fill_value;
        }
    }
    return cb;
}

DenseMatrix codebook_reconstruction(const Codebook& cb, const MembershipMatrix& user_clusters,
                                    const MembershipMatrix& item_clusters) {
    if (user_clusters.n_clusters != cb.B.rows() || item_clusters.n_clusters != cb.B.cols()) {
        throw DataError("ShapeMismatch", "memberships use " +
                                             std::to_string(user_clusters.n_clusters) + "x" +
                                             std::to_string(item_clusters.n_clusters) +
                                             " clusters, codebook is " +
                                             std::to_string(cb.B.rows()) + "x" +
                                             std::to_string(cb.B.cols()));
    }
    DenseMatrix recon(user_clusters.n_rows(), item_clusters.n_rows());
    for (int i = 0; i < user_clusters.n_rows(); ++i) {
        for (int j = 0; j < item_clusters.n_rows(); ++j) {
            recon(i, j) = cb.B(user_clusters.assignments[static_cast<std::size_t>(i)],
                               item_clusters.assignments[static_cast<std::size_t>(j)]);
        }
    }
    return recon;
}

}  // namespace xdrec
