#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xdrec/cocluster.hpp"
#include "xdrec/codebook.hpp"
#include "xdrec/ratings.hpp"
#include "xdrec/transfer.hpp"

namespace xdrec {

struct SplitSpec {
    double train_fraction = 0.8;
    std::uint64_t seed = 0;
};

// Uniform random partition of the observed triples; the train side gets
// round(train_fraction * n) entries. Throws DataError("TooFewEntries") if
// there are fewer than two observed entries.
std::pair<SparseRatingMatrix, SparseRatingMatrix> split(const SparseRatingMatrix& y,
                                                        const SplitSpec& spec);

// Metrics over the truth entries, read from the decoded ratings (rmse/mae)
// or the raw scores (*_raw). Throw DataError: EmptyTestSet, ShapeMismatch.
double rmse(const SparseRatingMatrix& truth, const PredictionMatrix& pred);
double mae(const SparseRatingMatrix& truth, const PredictionMatrix& pred);
double rmse_raw(const SparseRatingMatrix& truth, const PredictionMatrix& pred);
double mae_raw(const SparseRatingMatrix& truth, const PredictionMatrix& pred);

enum class Method { Proposed, BaselineMmmf, GlobalMean };

std::string method_name(Method m);

struct RunScore {
    std::uint64_t split_seed = 0;
    double rmse = 0.0;
    double mae = 0.0;
    double rmse_raw = 0.0;
    double mae_raw = 0.0;
};

struct EvalReport {
    double rmse = 0.0;  // mean of per-run decoded RMSE
    double mae = 0.0;
    double rmse_raw = 0.0;
    double mae_raw = 0.0;
    std::vector<RunScore> per_run;
    std::size_t n_test = 0;  // test entries in the last run
    std::vector<std::pair<std::string, std::string>> config_echo;
};

struct ProtocolConfig {
    int k1 = 0;
    int k2 = 0;
    int runs = 5;
    std::uint64_t base_seed = 0;
    CoClusterConfig cocluster;
    TransferConfig transfer;
    SplitSpec split;
    Method method = Method::Proposed;
    // Predict the train mean for test users/items with no training data
    // instead of the model output.
    bool cold_start_mean = false;
};

struct ProtocolArtifacts {
    EvalReport report;
    std::optional<Codebook> codebook;        // proposed method only
    std::optional<TransferModel> final_model;  // model of the last run
    std::vector<double> cocluster_trace;
    std::vector<double> transfer_trace;  // last run
};

// Runs the end-to-end protocol: factorize the source once, build the
// codebook, then for each run s split the target with seed base_seed + s,
// fit on the train side and score on the test side.
ProtocolArtifacts run_protocol_full(const SparseRatingMatrix& source,
                                    const SparseRatingMatrix& target, const ProtocolConfig& cfg);

EvalReport run_protocol(const SparseRatingMatrix& source, const SparseRatingMatrix& target,
                        const ProtocolConfig& cfg);

// One report per k with k1 = k2 = k.
std::vector<std::pair<int, EvalReport>> cluster_sweep(const SparseRatingMatrix& source,
                                                      const SparseRatingMatrix& target,
                                                      const std::vector<int>& k_values,
                                                      const ProtocolConfig& base_cfg);

}  // namespace xdrec
