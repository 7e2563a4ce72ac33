#include "xdrec/io.hpp"

#include <cstdio>
#include <fstream>

namespace xdrec {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("FileNotFound", "cannot open " + path + " for writing");
    return out;
}

// shortest round-trip-exact representation
std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

void write_matrix_csv(const std::string& path, const DenseMatrix& m) {
    auto out = open_out(path);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << fmt(m(i, j));
        }
        out << '\n';
    }
}

void write_trace_csv(const std::string& path, const std::vector<double>& trace) {
    auto out = open_out(path);
    out << "iteration,objective\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        out << i << ',' << fmt(trace[i]) << '\n';
    }
}

void write_codebook_csv(const Codebook& cb, const std::string& prefix) {
    write_matrix_csv(prefix + ".csv", cb.B);
    write_matrix_csv(prefix + "_counts.csv", cb.block_counts);
}

void export_model(const TransferModel& m, const std::string& dir, double lambda,
                  std::uint64_t seed) {
    write_matrix_csv(dir + "/U.csv", m.U);
    write_matrix_csv(dir + "/V.csv", m.V);
    write_matrix_csv(dir + "/Theta.csv", m.Theta);
    auto out = open_out(dir + "/model.txt");
    out << "n_users=" << m.U.rows() << '\n';
    out << "n_items=" << m.V.rows() << '\n';
    out << "k1=" << m.U.cols() << '\n';
    out << "k2=" << m.V.cols() << '\n';
    out << "r_max=" << m.r_max() << '\n';
    out << "lambda=" << fmt(lambda) << '\n';
    out << "seed=" << seed << '\n';
    out << "iterations=" << (m.objective_trace.empty() ? 0 : m.objective_trace.size() - 1) << '\n';
    out << "final_objective="
        << (m.objective_trace.empty() ? "nan" : fmt(m.objective_trace.back())) << '\n';
    out << "unordered_threshold_fraction=" << fmt(unordered_threshold_fraction(m)) << '\n';
}

void write_report(const std::string& path, const EvalReport& report, Method method) {
    auto out = open_out(path);
    out << "method=" << method_name(method) << '\n';
    out << "runs=" << report.per_run.size() << '\n';
    out << "rmse=" << fmt6(report.rmse) << '\n';
    out << "mae=" << fmt6(report.mae) << '\n';
    out << "rmse_raw=" << fmt6(report.rmse_raw) << '\n';
    out << "mae_raw=" << fmt6(report.mae_raw) << '\n';
    out << "n_test=" << report.n_test << '\n';
    for (std::size_t i = 0; i < report.per_run.size(); ++i) {
        const auto& r = report.per_run[i];
        out << "run." << i << "=seed:" << r.split_seed << " rmse:" << fmt6(r.rmse)
            << " mae:" << fmt6(r.mae) << " rmse_raw:" << fmt6(r.rmse_raw)
            << " mae_raw:" << fmt6(r.mae_raw) << '\n';
    }
    for (const auto& [k, v] : report.config_echo) {
        out << "config." << k << '=' << v << '\n';
    }
}

void write_per_run_csv(const std::string& path, const EvalReport& report) {
    auto out = open_out(path);
    out << "run,split_seed,rmse,mae,rmse_raw,mae_raw\n";
    for (std::size_t i = 0; i < report.per_run.size(); ++i) {
        const auto& r = report.per_run[i];
        out << i << ',' << r.split_seed << ',' << fmt6(r.rmse) << ',' << fmt6(r.mae) << ','
            << fmt6(r.rmse_raw) << ',' << fmt6(r.mae_raw) << '\n';
    }
}

void write_sweep_csv(const std::string& path,
                     const std::vector<std::pair<int, EvalReport>>& rows) {
    auto out = open_out(path);
    out << "k,rmse,mae\n";
    for (const auto& [k, report] : rows) {
        out << k << ',' << fmt6(report.rmse) << ',' << fmt6(report.mae) << '\n';
    }
}

}  // namespace xdrec
