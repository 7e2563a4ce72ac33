#pragma once

#include <string>
#include <utility>
#include <vector>

#include "xdrec/codebook.hpp"
#include "xdrec/evaluate.hpp"
#include "xdrec/ratings.hpp"
#include "xdrec/transfer.hpp"

namespace xdrec {

void write_matrix_csv(const std::string& path, const DenseMatrix& m);

// Two columns: iteration, objective.
void write_trace_csv(const std::string& path, const std::vector<double>& trace);

// B to <prefix>.csv and the observed counts to <prefix>_counts.csv.
void write_codebook_csv(const Codebook& cb, const std::string& prefix);

// U.csv, V.csv, Theta.csv plus model.txt (key=value header: dimensions,
// r_max, lambda, seed, final objective, threshold diagnostic).
void export_model(const TransferModel& m, const std::string& dir, double lambda,
                  std::uint64_t seed);

// Key=value report; per-run scores inline plus the full config echo.
void write_report(const std::string& path, const EvalReport& report, Method method);

// Columns: run, split_seed, rmse, mae, rmse_raw, mae_raw.
void write_per_run_csv(const std::string& path, const EvalReport& report);

// Columns: k, rmse, mae.
void write_sweep_csv(const std::string& path,
                     const std::vector<std::pair<int, EvalReport>>& rows);

}  // namespace xdrec
