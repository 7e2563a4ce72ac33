#pragma once

#include <cstdint>
#include <vector>

#include "xdrec/ratings.hpp"

namespace xdrec {

struct CoClusterConfig {
    int k1 = 0;  // user clusters
    int k2 = 0;  // item clusters
    double alpha = 1.0;  // row-sum penalty weight on P
    double beta = 1.0;   // row-sum penalty weight on Q
    int max_iters = 300;
    double tol = 1e-5;  // relative decrease over a 10-iteration window
    std::uint64_t seed = 0;
};

// Nonnegative factors of X ~ P S Q^T together with the per-iteration
// objective values (trace[0] is the initial objective).
struct TriFactorization {
    DenseMatrix P;  // m x k1
    DenseMatrix S;  // k1 x k2
    DenseMatrix Q;  // n x k2
    std::vector<double> objective_trace;
};

// One cluster per row, extracted by row-wise argmax.
struct MembershipMatrix {
    std::vector<int> assignments;
    int n_clusters = 0;

    int n_rows() const { return static_cast<int>(assignments.size()); }
};

// ||(X - P S Q^T) .* W||_F^2 + alpha ||P1 - 1||_F^2 + beta ||Q1 - 1||_F^2
// Throws DataError: ShapeMismatch, NegativeFactor.
double onmtf_objective(const SparseRatingMatrix& x, const DenseMatrix& p, const DenseMatrix& s,
                       const DenseMatrix& q, double alpha, double beta);

// Alternating projected gradient descent with backtracking; every accepted
// iteration is non-increasing in the objective and all factors stay >= 0.
// Deterministic for a fixed cfg.seed. Stopping at max_iters is not an error;
// throws NumericError("Diverged") if values stop being finite.
TriFactorization factorize(const SparseRatingMatrix& x, const CoClusterConfig& cfg);

// Row-wise argmax, ties to the lowest index.
// Throws DataError("EmptyMatrix") if f has no rows or no columns.
MembershipMatrix binarize(const DenseMatrix& f);

}  // namespace xdrec
