#pragma once

#include "xdrec/cocluster.hpp"
#include "xdrec/ratings.hpp"

namespace xdrec {

enum class AveragingMode {
    // Divide each block sum by the number of observed ratings in the block.
    ObservedAverage,
    // Divide by the full block size |cluster a| * |cluster b|, counting
    // missing entries as zeros.
    Literal,
};

// Cluster-level rating pattern: B[a][b] summarizes how user-cluster a rates
// item-cluster b. Blocks with no observed ratings hold fill_value.
struct Codebook {
    DenseMatrix B;             // k1 x k2
    DenseMatrix block_counts;  // observed ratings per co-cluster
    double fill_value = 0.0;
};

// Throws DataError("MembershipSizeMismatch") if the memberships do not cover
// exactly the users/items of x.
Codebook build_codebook(const SparseRatingMatrix& x, const MembershipMatrix& user_clusters,
                        const MembershipMatrix& item_clusters,
                        AveragingMode mode = AveragingMode::ObservedAverage);

// Dense m x n matrix with entry (i, j) = B[cluster(i)][cluster(j)].
// Throws DataError("ShapeMismatch").
DenseMatrix codebook_reconstruction(const Codebook& cb, const MembershipMatrix& user_clusters,
                                    const MembershipMatrix& item_clusters);

}  // namespace xdrec
