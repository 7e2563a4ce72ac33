#pragma once

#include <cstdint>
#include <vector>

#include "xdrec/codebook.hpp"
#include "xdrec/ratings.hpp"

namespace xdrec {

// C1 smoothed hinge: 0 for d >= 1, quadratic on (0, 1), linear below 0.
inline double smoothed_hinge(double d) {
    if (d >= 1.0) return 0.0;
    if (d > 0.0) {
        double t = 1.0 - d;
        return 0.5 * t * t;
    }
    return 0.5 - d;
}

inline double smoothed_hinge_grad(double d) {
    if (d >= 1.0) return 0.0;
    if (d > 0.0) return d - 1.0;
    return -1.0;
}

// Ordinal margin sign for threshold c against rating y: -1 when the
// threshold lies below the rating, +1 otherwise.
inline int ordinal_sign(int threshold, int rating) { return threshold < rating ? -1 : 1; }

struct TransferConfig {
    double lambda = 0.5;       // Frobenius regularization weight
    double learn_rate = 0.01;  // initial gradient-descent step
    int max_iters = 500;
    double tol = 1e-5;  // relative decrease over a 10-iteration window
    std::uint64_t seed = 0;
    int r_max = 5;
    // Backtracking keeps the trace non-increasing; switch off for the plain
    // fixed-step update form.
    bool backtracking = true;
};

// Target-side factors against a fixed codebook. Scores are z = U B V^T and
// Theta holds r_max-1 decoding thresholds per user.
struct TransferModel {
    DenseMatrix U;      // m' x k1
    DenseMatrix V;      // n' x k2
    DenseMatrix Theta;  // m' x (r_max - 1)
    DenseMatrix B;      // codebook, fixed during training
    std::vector<double> objective_trace;

    int r_max() const { return static_cast<int>(Theta.cols()) + 1; }
};

struct TransferGradients {
    DenseMatrix U;
    DenseMatrix V;
    DenseMatrix Theta;
};

// Decoded integer ratings with the raw scores kept alongside.
struct PredictionMatrix {
    DenseMatrix scores;  // m' x n'
    IntMatrix ratings;   // entries in 1..r_max
};

// sum over observed (i,j) and c of h(T_ij^c (theta_ic - z_ij))
//   + lambda/2 (||U||_F^2 + ||V||_F^2)
double objective(const SparseRatingMatrix& y, const TransferModel& m, double lambda);

TransferGradients gradients(const SparseRatingMatrix& y, const TransferModel& m, double lambda);

// Gradient descent on U, V, Theta from a seeded random start, with the
// codebook held fixed. Deterministic for a fixed cfg.seed.
// Throws NumericError("Diverged") if the objective stops being finite.
TransferModel fit(const SparseRatingMatrix& y, const Codebook& cb, const TransferConfig& cfg);

// Same optimization with B fixed to the k x k identity, i.e. plain
// maximum-margin factorization with z = U V^T.
TransferModel fit_baseline_mmmf(const SparseRatingMatrix& y, int k, const TransferConfig& cfg);

// y_hat(i,j) = 1 + #{ c : z_ij >= theta_ic }, well-defined for any
// threshold ordering.
PredictionMatrix decode(const TransferModel& m);

// Diagnostic: fraction of users whose thresholds are not non-decreasing.
double unordered_threshold_fraction(const TransferModel& m);

}  // namespace xdrec
