#include "xdrec/evaluate.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "xdrec/random.hpp"

namespace xdrec {

namespace {

void check_pred_shape(const SparseRatingMatrix& truth, const PredictionMatrix& pred) {
    if (truth.n_observed() == 0) throw DataError("EmptyTestSet", "no entries to score");
    if (pred.scores.rows() < truth.n_users() || pred.scores.cols() < truth.n_items() ||
        pred.ratings.rows() != pred.scores.rows() || pred.ratings.cols() != pred.scores.cols()) {
        throw DataError("ShapeMismatch", "prediction matrix does not cover the truth entries");
    }
}

template <typename AccessFn>
std::pair<double, double> residual_metrics(const SparseRatingMatrix& truth, AccessFn&& value_at) {
    double sq = 0.0, abs = 0.0;
    for (const auto& t : truth.triples()) {
        double d = t.rating - value_at(t.user, t.item);
        sq += d * d;
        abs += std::abs(d);
    }
    double n = static_cast<double>(truth.n_observed());
    return {std::sqrt(sq / n), abs / n};
}

// Score one run, optionally substituting the train mean for users/items
// never seen during training.
RunScore score_run(const SparseRatingMatrix& train, const SparseRatingMatrix& test,
                   const PredictionMatrix& pred, bool cold_start_mean, std::uint64_t split_seed) {
    check_pred_shape(test, pred);
    double train_mean = observed_mean(train);
    int decoded_mean = std::min(std::max(static_cast<int>(std::lround(train_mean)), 1),
                                train.r_max());
    auto cold = [&](int u, int i) {
        return cold_start_mean && (train.user_entries(u).empty() || train.item_entry_ids(i).empty());
    };
    auto [r, m] = residual_metrics(test, [&](int u, int i) {
        return cold(u, i) ? static_cast<double>(decoded_mean)
                          : static_cast<double>(pred.ratings(u, i));
    });
    auto [rr, mr] = residual_metrics(test, [&](int u, int i) {
        return cold(u, i) ? train_mean : pred.scores(u, i);
    });
    return {split_seed, r, m, rr, mr};
}

}  // namespace

std::pair<SparseRatingMatrix, SparseRatingMatrix> split(const SparseRatingMatrix& y,
                                                        const SplitSpec& spec) {
    if (spec.train_fraction <= 0.0 || spec.train_fraction >= 1.0) {
        throw DataError("InvalidConfig", "train_fraction must be in (0, 1)");
    }
    if (y.n_observed() < 2) throw DataError("TooFewEntries", "need at least 2 observed entries");

    std::vector<std::size_t> order(y.n_observed());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(spec.seed);
    rng.shuffle(order);

    // round half up on the train count
    std::size_t n_train = static_cast<std::size_t>(
        std::floor(spec.train_fraction * static_cast<double>(y.n_observed()) + 0.5));

    std::vector<RatingTriple> train_triples, test_triples;
    train_triples.reserve(n_train);
    test_triples.reserve(y.n_observed() - n_train);
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const auto& t = y.triples()[order[pos]];
        (pos < n_train ? train_triples : test_triples).push_back(t);
    }
    return {build_matrix(std::move(train_triples), y.n_users(), y.n_items(), y.r_max()),
            build_matrix(std::move(test_triples), y.n_users(), y.n_items(), y.r_max())};
}

double rmse(const SparseRatingMatrix& truth, const PredictionMatrix& pred) {
    check_pred_shape(truth, pred);
    return residual_metrics(truth, [&](int u, int i) {
               return static_cast<double>(pred.ratings(u, i));
           }).first;
}

double mae(const SparseRatingMatrix& truth, const PredictionMatrix& pred) {
    check_pred_shape(truth, pred);
    return residual_metrics(truth, [&](int u, int i) {
               return static_cast<double>(pred.ratings(u, i));
           }).second;
}

double rmse_raw(const SparseRatingMatrix& truth, const PredictionMatrix& pred) {
    check_pred_shape(truth, pred);
    return residual_metrics(truth, [&](int u, int i) { return pred.scores(u, i); }).first;
}

double mae_raw(const SparseRatingMatrix& truth, const PredictionMatrix& pred) {
    check_pred_shape(truth, pred);
    return residual_metrics(truth, [&](int u, int i) { return pred.scores(u, i); }).second;
}

std::string method_name(Method m) {
    switch (m) {
        case Method::Proposed: return "proposed";
        case Method::BaselineMmmf: return "baseline-mmmf";
        case Method::GlobalMean: return "global-mean";
    }
    return "unknown";
}

ProtocolArtifacts run_protocol_full(const SparseRatingMatrix& source,
                                    const SparseRatingMatrix& target, const ProtocolConfig& cfg) {
    if (cfg.runs < 1) throw DataError("InvalidConfig", "runs must be >= 1");

    ProtocolArtifacts out;

    // The source pipeline does not depend on the target split, so it runs
    // once and is reused across runs.
    if (cfg.method == Method::Proposed) {
        CoClusterConfig co = cfg.cocluster;
        co.k1 = cfg.k1;
        co.k2 = cfg.k2;
        TriFactorization tri = factorize(source, co);
        MembershipMatrix user_clusters = binarize(tri.P);
        MembershipMatrix item_clusters = binarize(tri.Q);
        out.codebook = build_codebook(source, user_clusters, item_clusters);
        out.cocluster_trace = tri.objective_trace;
    }

    for (int run = 0; run < cfg.runs; ++run) {
        SplitSpec split_spec = cfg.split;
        split_spec.seed = cfg.base_seed + static_cast<std::uint64_t>(run);
        auto [train, test] = split(target, split_spec);

        TransferConfig tr = cfg.transfer;
        tr.seed = cfg.transfer.seed + static_cast<std::uint64_t>(run);

        PredictionMatrix pred;
        switch (cfg.method) {
            case Method::Proposed: {
                TransferModel model = fit(train, *out.codebook, tr);
                pred = decode(model);
                out.transfer_trace = model.objective_trace;
                out.final_model = std::move(model);
                break;
            }
            case Method::BaselineMmmf: {
                TransferModel model = fit_baseline_mmmf(train, cfg.k1, tr);
                pred = decode(model);
                out.transfer_trace = model.objective_trace;
                out.final_model = std::move(model);
                break;
            }
            case Method::GlobalMean: {
                double mean = observed_mean(train);
                int decoded = std::min(std::max(static_cast<int>(std::lround(mean)), 1),
                                       train.r_max());
                pred.scores = DenseMatrix::Constant(target.n_users(), target.n_items(), mean);
                pred.ratings = IntMatrix::Constant(target.n_users(), target.n_items(), decoded);
                break;
            }
        }
        out.report.per_run.push_back(
            score_run(train, test, pred, cfg.cold_start_mean, split_spec.seed));
        out.report.n_test = test.n_observed();
    }

    double n = static_cast<double>(cfg.runs);
    for (const auto& r : out.report.per_run) {
        out.report.rmse += r.rmse / n;
        out.report.mae += r.mae / n;
        out.report.rmse_raw += r.rmse_raw / n;
        out.report.mae_raw += r.mae_raw / n;
    }
    return out;
}

EvalReport run_protocol(const SparseRatingMatrix& source, const SparseRatingMatrix& target,
                        const ProtocolConfig& cfg) {
    return run_protocol_full(source, target, cfg).report;
}

std::vector<std::pair<int, EvalReport>> cluster_sweep(const SparseRatingMatrix& source,
                                                      const SparseRatingMatrix& target,
                                                      const std::vector<int>& k_values,
                                                      const ProtocolConfig& base_cfg) {
    if (k_values.empty()) throw DataError("InvalidConfig", "sweep needs at least one k value");
    std::vector<std::pair<int, EvalReport>> rows;
    rows.reserve(k_values.size());
    for (int k : k_values) {
        ProtocolConfig cfg = base_cfg;
        cfg.k1 = k;
        cfg.k2 = k;
        rows.emplace_back(k, run_protocol(source, target, cfg));
    }
    return rows;
}

}  // namespace xdrec
