#include "xdrec/cocluster.hpp"

#include <cmath>
#include <string>

#include "xdrec/random.hpp"

namespace xdrec {

namespace {

// ||(X - P S Q^T) .* W||_F^2 without forming the dense reconstruction.
double data_residual_sq(const SparseRatingMatrix& x, const DenseMatrix& p, const DenseMatrix& s,
                        const DenseMatrix& q) {
    DenseMatrix ps = p * s;  // m x k2
    double sum = 0.0;
    for (const auto& t : x.triples()) {
        double d = t.rating - ps.row(t.user).dot(q.row(t.item));
        sum += d * d;
    }
    return sum;
}

double row_sum_penalty(const DenseMatrix& m, double weight) {
    if (weight == 0.0) return 0.0;
    return weight * (m.rowwise().sum().array() - 1.0).square().sum();
}

// Residual coefficients 2 (z_e - x_e) for the current factors.
Eigen::VectorXd residual_coeffs(const SparseRatingMatrix& x, const DenseMatrix& p,
                                const DenseMatrix& s, const DenseMatrix& q) {
    DenseMatrix ps = p * s;
    Eigen::VectorXd g(static_cast<Eigen::Index>(x.n_observed()));
    const auto& ts = x.triples();
    for (std::size_t e = 0; e < ts.size(); ++e) {
        g[static_cast<Eigen::Index>(e)] =
            2.0 * (ps.row(ts[e].user).dot(q.row(ts[e].item)) - ts[e].rating);
    }
    return g;
}

constexpr double kArmijoSigma = 0.01;
constexpr int kMaxHalvings = 40;
constexpr int kStopWindow = 10;

// One projected-gradient step on a single factor block with backtracking.
// `eval` returns the full objective for a trial block value. Returns true
// and updates block/f_current on an accepted step.
template <typename EvalFn>
bool block_step(DenseMatrix& block, const DenseMatrix& grad, double& step, double& f_current,
                EvalFn&& eval) {
    for (int trial = 0; trial <= kMaxHalvings; ++trial) {
        DenseMatrix candidate = (block - step * grad).cwiseMax(0.0);
        double f_new = eval(candidate);
        double predicted = grad.cwiseProduct(candidate - block).sum();
        if (f_new <= f_current + kArmijoSigma * predicted) {
            if (trial == 0) step = std::min(step * 1.5, 1e8);
            block.swap(candidate);
            f_current = f_new;
            return true;
        }
        step *= 0.5;
    }
    return false;
}

}  // namespace

double onmtf_objective(const SparseRatingMatrix& x, const DenseMatrix& p, const DenseMatrix& s,
                       const DenseMatrix& q, double alpha, double beta) {
    if (p.rows() != x.n_users() || q.rows() != x.n_items() || p.cols() != s.rows() ||
        s.cols() != q.cols()) {
        throw DataError("ShapeMismatch", "factor shapes inconsistent with the rating matrix");
    }
    if (p.minCoeff() < 0.0 || s.minCoeff() < 0.0 || q.minCoeff() < 0.0) {
        throw DataError("NegativeFactor", "tri-factorization factors must be nonnegative");
    }
    return data_residual_sq(x, p, s, q) + row_sum_penalty(p, alpha) + row_sum_penalty(q, beta);
}

TriFactorization factorize(const SparseRatingMatrix& x, const CoClusterConfig& cfg) {
    if (x.n_observed() == 0) throw DataError("EmptyMatrix", "cannot factorize an empty matrix");
    if (cfg.k1 < 1 || cfg.k2 < 1 || cfg.k1 > x.n_users() || cfg.k2 > x.n_items()) {
        throw DataError("InvalidConfig", "need 1 <= k1 <= n_users and 1 <= k2 <= n_items, got k1=" +
                                             std::to_string(cfg.k1) + " k2=" +
                                             std::to_string(cfg.k2));
    }
    if (cfg.alpha < 0.0 || cfg.beta < 0.0 || cfg.tol <= 0.0 || cfg.max_iters < 0) {
        throw DataError("InvalidConfig", "alpha, beta must be >= 0, tol > 0, max_iters >= 0");
    }

    const int m = x.n_users();
    const int n = x.n_items();
    Rng rng(cfg.seed);

    // Random rows normalized to sum 1 sit at the penalty optimum; a
    // mean-valued S makes the initial reconstruction equal the global mean.
    TriFactorization tri;
    tri.P = DenseMatrix(m, cfg.k1);
    for (int i = 0; i < m; ++i) {
        double row_sum = 0.0;
        for (int a = 0; a < cfg.k1; ++a) {
            tri.P(i, a) = rng.uniform01();
            row_sum += tri.P(i, a);
        }
        if (row_sum > 0.0) tri.P.row(i) /= row_sum;
    }
    tri.Q = DenseMatrix(n, cfg.k2);
    for (int j = 0; j < n; ++j) {
        double row_sum = 0.0;
        for (int b = 0; b < cfg.k2; ++b) {
            tri.Q(j, b) = rng.uniform01();
            row_sum += tri.Q(j, b);
        }
        if (row_sum > 0.0) tri.Q.row(j) /= row_sum;
    }
    tri.S = DenseMatrix::Constant(cfg.k1, cfg.k2, observed_mean(x));

    double data = data_residual_sq(x, tri.P, tri.S, tri.Q);
    double pen_p = row_sum_penalty(tri.P, cfg.alpha);
    double pen_q = row_sum_penalty(tri.Q, cfg.beta);
    double f = data + pen_p + pen_q;
    tri.objective_trace.push_back(f);

    double step_p = 1.0, step_s = 1.0, step_q = 1.0;
    const auto& ts = x.triples();

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        // P block
        {
            Eigen::VectorXd g = residual_coeffs(x, tri.P, tri.S, tri.Q);
            DenseMatrix qs = tri.Q * tri.S.transpose();  // n x k1
            DenseMatrix grad = DenseMatrix::Zero(m, cfg.k1);
            for (std::size_t e = 0; e < ts.size(); ++e) {
                grad.row(ts[e].user) += g[static_cast<Eigen::Index>(e)] * qs.row(ts[e].item);
            }
            if (cfg.alpha > 0.0) {
                Eigen::VectorXd row_defect =
                    2.0 * cfg.alpha * (tri.P.rowwise().sum().array() - 1.0).matrix();
                grad.colwise() += row_defect;
            }
            double data_trial = data, pen_trial = pen_p;
            bool accepted = block_step(tri.P, grad, step_p, f, [&](const DenseMatrix& cand) {
                data_trial = data_residual_sq(x, cand, tri.S, tri.Q);
                pen_trial = row_sum_penalty(cand, cfg.alpha);
                return data_trial + pen_trial + pen_q;
            });
            if (accepted) {
                data = data_trial;
                pen_p = pen_trial;
            }
        }
        // S block: penalties do not depend on S
        {
            Eigen::VectorXd g = residual_coeffs(x, tri.P, tri.S, tri.Q);
            DenseMatrix gq = DenseMatrix::Zero(m, cfg.k2);
            for (std::size_t e = 0; e < ts.size(); ++e) {
                gq.row(ts[e].user) += g[static_cast<Eigen::Index>(e)] * tri.Q.row(ts[e].item);
            }
            DenseMatrix grad = tri.P.transpose() * gq;  // k1 x k2
            double data_trial = data;
            bool accepted = block_step(tri.S, grad, step_s, f, [&](const DenseMatrix& cand) {
                data_trial = data_residual_sq(x, tri.P, cand, tri.Q);
                return data_trial + pen_p + pen_q;
            });
            if (accepted) data = data_trial;
        }
        // Q block
        {
            Eigen::VectorXd g = residual_coeffs(x, tri.P, tri.S, tri.Q);
            DenseMatrix ps = tri.P * tri.S;  // m x k2
            DenseMatrix grad = DenseMatrix::Zero(n, cfg.k2);
            for (std::size_t e = 0; e < ts.size(); ++e) {
                grad.row(ts[e].item) += g[static_cast<Eigen::Index>(e)] * ps.row(ts[e].user);
            }
            if (cfg.beta > 0.0) {
                Eigen::VectorXd row_defect =
                    2.0 * cfg.beta * (tri.Q.rowwise().sum().array() - 1.0).matrix();
                grad.colwise() += row_defect;
            }
            double data_trial = data, pen_trial = pen_q;
            bool accepted = block_step(tri.Q, grad, step_q, f, [&](const DenseMatrix& cand) {
                data_trial = data_residual_sq(x, tri.P, tri.S, cand);
                pen_trial = row_sum_penalty(cand, cfg.beta);
                return data_trial + pen_p + pen_trial;
            });
            if (accepted) {
                data = data_trial;
                pen_q = pen_trial;
            }
        }

        if (!std::isfinite(f)) throw NumericError("Diverged", "tri-factorization objective is not finite");
        tri.objective_trace.push_back(f);

        std::size_t t = tri.objective_trace.size() - 1;
        if (t >= kStopWindow) {
            double before = tri.objective_trace[t - kStopWindow];
            if (before - f <= cfg.tol * std::max(1.0, std::abs(before))) break;
        }
    }
    return tri;
}

MembershipMatrix binarize(const DenseMatrix& f) {
    if (f.rows() == 0 || f.cols() == 0) {
        throw DataError("EmptyMatrix", "cannot binarize an empty factor matrix");
    }
    if (!f.allFinite()) throw NumericError("Diverged", "factor matrix contains NaN/Inf");

    MembershipMatrix memb;
    memb.n_clusters = static_cast<int>(f.cols());
    memb.assignments.resize(static_cast<std::size_t>(f.rows()));
    for (Eigen::Index i = 0; i < f.rows(); ++i) {
        int best = 0;
        for (Eigen::Index j = 1; j < f.cols(); ++j) {
            if (f(i, j) > f(i, best)) best = static_cast<int>(j);
        }
        memb.assignments[static_cast<std::size_t>(i)] = best;
    }
    return memb;
}

}  // namespace xdrec
