#include "xdrec/transfer.hpp"

#include <cmath>
#include <string>

#include "xdrec/random.hpp"

namespace xdrec {

namespace {

constexpr double kArmijoSigma = 1e-4;
constexpr int kMaxHalvings = 60;
constexpr int kStopWindow = 10;

void check_shapes(const SparseRatingMatrix& y, const DenseMatrix& u, const DenseMatrix& v,
                  const DenseMatrix& theta, const DenseMatrix& b) {
    if (u.rows() != y.n_users() || v.rows() != y.n_items() || theta.rows() != y.n_users() ||
        u.cols() != b.rows() || v.cols() != b.cols() || theta.cols() < 1) {
        throw DataError("ShapeMismatch", "transfer model shapes inconsistent with the target");
    }
    if (y.r_max() > static_cast<int>(theta.cols()) + 1) {
        throw DataError("ShapeMismatch", "target ratings exceed the model's rating levels");
    }
}

double objective_impl(const SparseRatingMatrix& y, const DenseMatrix& u, const DenseMatrix& v,
                      const DenseMatrix& theta, const DenseMatrix& b, double lambda) {
    const int levels = static_cast<int>(theta.cols());  // r - 1
    DenseMatrix ub = u * b;                             // m' x k2
    double loss = 0.0;
    for (const auto& t : y.triples()) {
        double z = ub.row(t.user).dot(v.row(t.item));
        for (int c = 1; c <= levels; ++c) {
            double sign = ordinal_sign(c, t.rating);
            loss += smoothed_hinge(sign * (theta(t.user, c - 1) - z));
        }
    }
    return loss + 0.5 * lambda * (u.squaredNorm() + v.squaredNorm());
}

void gradients_impl(const SparseRatingMatrix& y, const DenseMatrix& u, const DenseMatrix& v,
                    const DenseMatrix& theta, const DenseMatrix& b, double lambda,
                    DenseMatrix& grad_u, DenseMatrix& grad_v, DenseMatrix& grad_theta) {
    const int levels = static_cast<int>(theta.cols());
    DenseMatrix ub = u * b;  // m' x k2

    // coef_ij = sum_c T h'(T (theta_ic - z_ij)); scores enter U/V through
    // accum_u = sum_j coef_ij V_j and accum_v = sum_i coef_ij U_i.
    DenseMatrix accum_u = DenseMatrix::Zero(u.rows(), v.cols());
    DenseMatrix accum_v = DenseMatrix::Zero(v.rows(), u.cols());
    grad_theta = DenseMatrix::Zero(theta.rows(), theta.cols());

    for (const auto& t : y.triples()) {
        double z = ub.row(t.user).dot(v.row(t.item));
        double coef = 0.0;
        for (int c = 1; c <= levels; ++c) {
            double sign = ordinal_sign(c, t.rating);
            double slope = sign * smoothed_hinge_grad(sign * (theta(t.user, c - 1) - z));
            grad_theta(t.user, c - 1) += slope;
            coef += slope;
        }
        accum_u.row(t.user) += coef * v.row(t.item);
        accum_v.row(t.item) += coef * ub.row(t.user);
    }
    grad_u = lambda * u - accum_u * b.transpose();
    grad_v = lambda * v - accum_v;
}

void validate(const TransferConfig& cfg) {
    if (cfg.lambda <= 0.0 || cfg.learn_rate <= 0.0 || cfg.r_max < 2 || cfg.tol <= 0.0 ||
        cfg.max_iters < 0) {
        throw DataError("InvalidConfig",
                        "need lambda > 0, learn_rate > 0, r_max >= 2, tol > 0, max_iters >= 0");
    }
}

TransferModel fit_against(const SparseRatingMatrix& y, const DenseMatrix& b,
                          const TransferConfig& cfg) {
    validate(cfg);
    if (y.n_observed() == 0) throw DataError("EmptyMatrix", "cannot fit an empty target");
    if (y.r_max() > cfg.r_max) {
        throw DataError("InvalidConfig", "target r_max " + std::to_string(y.r_max()) +
                                             " exceeds configured r_max " +
                                             std::to_string(cfg.r_max));
    }

    const int m = y.n_users();
    const int n = y.n_items();
    const int levels = cfg.r_max - 1;
    Rng rng(cfg.seed);

    TransferModel model;
    model.B = b;
    model.U = DenseMatrix(m, b.rows());
    model.V = DenseMatrix(n, b.cols());
    for (Eigen::Index i = 0; i < model.U.rows(); ++i)
        for (Eigen::Index a = 0; a < model.U.cols(); ++a) model.U(i, a) = rng.normal(0.0, 0.01);
    for (Eigen::Index j = 0; j < model.V.rows(); ++j)
        for (Eigen::Index bcol = 0; bcol < model.V.cols(); ++bcol)
            model.V(j, bcol) = rng.normal(0.0, 0.01);
    // Centered, strictly increasing thresholds so every rating level is
    // reachable from the near-zero initial scores.
    model.Theta = DenseMatrix(m, levels);
    for (int c = 1; c <= levels; ++c) {
        model.Theta.col(c - 1).setConstant(c - cfg.r_max / 2.0 + 0.5);
    }

    double f = objective_impl(y, model.U, model.V, model.Theta, model.B, cfg.lambda);
    model.objective_trace.push_back(f);

    double step = cfg.learn_rate;
    DenseMatrix grad_u, grad_v, grad_theta;
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        gradients_impl(y, model.U, model.V, model.Theta, model.B, cfg.lambda, grad_u, grad_v,
                       grad_theta);
        double grad_sq = grad_u.squaredNorm() + grad_v.squaredNorm() + grad_theta.squaredNorm();
        if (grad_sq <= 1e-24) break;

        double f_new = f;
        if (cfg.backtracking) {
            bool accepted = false;
            for (int trial = 0; trial <= kMaxHalvings; ++trial) {
                DenseMatrix u_new = model.U - step * grad_u;
                DenseMatrix v_new = model.V - step * grad_v;
                DenseMatrix theta_new = model.Theta - step * grad_theta;
                f_new = objective_impl(y, u_new, v_new, theta_new, model.B, cfg.lambda);
                if (std::isfinite(f_new) && f_new <= f - kArmijoSigma * step * grad_sq) {
                    model.U.swap(u_new);
                    model.V.swap(v_new);
                    model.Theta.swap(theta_new);
                    if (trial == 0) step = std::min(step * 1.5, 1e6);
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) break;  // no further decrease at double precision
        } else {
            model.U -= step * grad_u;
            model.V -= step * grad_v;
            model.Theta -= step * grad_theta;
            f_new = objective_impl(y, model.U, model.V, model.Theta, model.B, cfg.lambda);
        }

        if (!std::isfinite(f_new)) {
            throw NumericError("Diverged", "transfer objective is not finite at iteration " +
                                               std::to_string(iter + 1));
        }
        f = f_new;
        model.objective_trace.push_back(f);

        std::size_t t = model.objective_trace.size() - 1;
        if (t >= kStopWindow) {
            double before = model.objective_trace[t - kStopWindow];
            if (before - f <= cfg.tol * std::max(1.0, std::abs(before))) break;
        }
    }
    return model;
}

}  // namespace

double objective(const SparseRatingMatrix& y, const TransferModel& m, double lambda) {
    check_shapes(y, m.U, m.V, m.Theta, m.B);
    return objective_impl(y, m.U, m.V, m.Theta, m.B, lambda);
}

TransferGradients gradients(const SparseRatingMatrix& y, const TransferModel& m, double lambda) {
    check_shapes(y, m.U, m.V, m.Theta, m.B);
    TransferGradients g;
    gradients_impl(y, m.U, m.V, m.Theta, m.B, lambda, g.U, g.V, g.Theta);
    return g;
}

TransferModel fit(const SparseRatingMatrix& y, const Codebook& cb, const TransferConfig& cfg) {
    if (cb.B.rows() == 0 || cb.B.cols() == 0) {
        throw DataError("EmptyMatrix", "codebook is empty");
    }
    return fit_against(y, cb.B, cfg);
}

TransferModel fit_baseline_mmmf(const SparseRatingMatrix& y, int k, const TransferConfig& cfg) {
    if (k < 1) throw DataError("InvalidConfig", "baseline rank must be >= 1");
    return fit_against(y, DenseMatrix::Identity(k, k), cfg);
}

PredictionMatrix decode(const TransferModel& m) {
    const int levels = static_cast<int>(m.Theta.cols());
    PredictionMatrix pred;
    pred.scores = m.U * m.B * m.V.transpose();
    pred.ratings.resize(pred.scores.rows(), pred.scores.cols());
    for (Eigen::Index i = 0; i < pred.scores.rows(); ++i) {
        for (Eigen::Index j = 0; j < pred.scores.cols(); ++j) {
            int rating = 1;
            for (int c = 0; c < levels; ++c) {
                if (pred.scores(i, j) >= m.Theta(i, c)) ++rating;
            }
            pred.ratings(i, j) = rating;
        }
    }
    return pred;
}

double unordered_threshold_fraction(const TransferModel& m) {
    if (m.Theta.rows() == 0) return 0.0;
    Eigen::Index unordered = 0;
    for (Eigen::Index i = 0; i < m.Theta.rows(); ++i) {
        for (Eigen::Index c = 1; c < m.Theta.cols(); ++c) {
            if (m.Theta(i, c) < m.Theta(i, c - 1)) {
                ++unordered;
                break;
            }
        }
    }
    return static_cast<double>(unordered) / static_cast<double>(m.Theta.rows());
}

}  // namespace xdrec
