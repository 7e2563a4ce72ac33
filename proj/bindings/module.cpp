#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "xdrec/cocluster.hpp"
#include "xdrec/codebook.hpp"
#include "xdrec/dataset.hpp"
#include "xdrec/evaluate.hpp"
#include "xdrec/ratings.hpp"
#include "xdrec/transfer.hpp"

namespace py = pybind11;
using namespace xdrec;

namespace {

SparseRatingMatrix matrix_from_tuples(const std::vector<std::tuple<int, int, int>>& entries,
                                      int n_users, int n_items, int r_max) {
    std::vector<RatingTriple> triples;
    triples.reserve(entries.size());
    for (const auto& [u, i, r] : entries) triples.push_back({u, i, r});
    return build_matrix(std::move(triples), n_users, n_items, r_max);
}

IntMatrix triples_to_array(const SparseRatingMatrix& m) {
    IntMatrix out(static_cast<Eigen::Index>(m.n_observed()), 3);
    Eigen::Index row = 0;
    for (const auto& t : m.triples()) {
        out(row, 0) = t.user;
        out(row, 1) = t.item;
        out(row, 2) = t.rating;
        ++row;
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "cross-domain rating prediction via codebook transfer";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    py::class_<SparseRatingMatrix>(m, "SparseRatingMatrix")
        .def_property_readonly("n_users", &SparseRatingMatrix::n_users)
        .def_property_readonly("n_items", &SparseRatingMatrix::n_items)
        .def_property_readonly("r_max", &SparseRatingMatrix::r_max)
        .def_property_readonly("n_observed", &SparseRatingMatrix::n_observed)
        .def_property_readonly("density", &SparseRatingMatrix::density)
        .def("to_numpy", &triples_to_array, "observed entries as an (n, 3) array of user, item, rating")
        .def("__len__", &SparseRatingMatrix::n_observed)
        .def("__repr__", [](const SparseRatingMatrix& s) {
            return "<SparseRatingMatrix " + std::to_string(s.n_users()) + "x" +
                   std::to_string(s.n_items()) + ", " + std::to_string(s.n_observed()) +
                   " observed>";
        });

    m.def("build_matrix", &matrix_from_tuples, py::arg("triples"), py::arg("n_users"),
          py::arg("n_items"), py::arg("r_max") = 5,
          "build an indexed rating matrix from (user, item, rating) tuples");
    m.def("observed_mean", &observed_mean);
    m.def("masked_residual_sq", &masked_residual_sq);
    m.def("densify", &densify);

    py::class_<CoClusterConfig>(m, "CoClusterConfig")
        .def(py::init([](int k1, int k2, double alpha, double beta, int max_iters, double tol,
                         std::uint64_t seed) {
                 return CoClusterConfig{k1, k2, alpha, beta, max_iters, tol, seed};
             }),
             py::arg("k1"), py::arg("k2"), py::arg("alpha") = 1.0, py::arg("beta") = 1.0,
             py::arg("max_iters") = 300, py::arg("tol") = 1e-5, py::arg("seed") = 0)
        .def_readwrite("k1", &CoClusterConfig::k1)
        .def_readwrite("k2", &CoClusterConfig::k2)
        .def_readwrite("alpha", &CoClusterConfig::alpha)
        .def_readwrite("beta", &CoClusterConfig::beta)
        .def_readwrite("max_iters", &CoClusterConfig::max_iters)
        .def_readwrite("tol", &CoClusterConfig::tol)
        .def_readwrite("seed", &CoClusterConfig::seed);

    py::class_<TriFactorization>(m, "TriFactorization")
        .def_readonly("P", &TriFactorization::P)
        .def_readonly("S", &TriFactorization::S)
        .def_readonly("Q", &TriFactorization::Q)
        .def_readonly("objective_trace", &TriFactorization::objective_trace);

    py::class_<MembershipMatrix>(m, "MembershipMatrix")
        .def(py::init([](std::vector<int> assignments, int n_clusters) {
                 return MembershipMatrix{std::move(assignments), n_clusters};
             }),
             py::arg("assignments"), py::arg("n_clusters"))
        .def_readonly("assignments", &MembershipMatrix::assignments)
        .def_readonly("n_clusters", &MembershipMatrix::n_clusters)
        .def_property_readonly("n_rows", &MembershipMatrix::n_rows);

    m.def("onmtf_objective", &onmtf_objective, py::arg("x"), py::arg("p"), py::arg("s"),
          py::arg("q"), py::arg("alpha"), py::arg("beta"));
    m.def("factorize", &factorize, py::arg("x"), py::arg("config"));
    m.def("binarize", &binarize);

    py::enum_<AveragingMode>(m, "AveragingMode")
        .value("OBSERVED_AVERAGE", AveragingMode::ObservedAverage)
        .value("LITERAL", AveragingMode::Literal);

    py::class_<Codebook>(m, "Codebook")
        .def_readonly("B", &Codebook::B)
        .def_readonly("block_counts", &Codebook::block_counts)
        .def_readonly("fill_value", &Codebook::fill_value);

    m.def("build_codebook", &build_codebook, py::arg("x"), py::arg("user_clusters"),
          py::arg("item_clusters"), py::arg("mode") = AveragingMode::ObservedAverage);
    m.def("codebook_reconstruction", &codebook_reconstruction);

    m.def("smoothed_hinge", py::vectorize(smoothed_hinge));
    m.def("smoothed_hinge_grad", py::vectorize(smoothed_hinge_grad));
    m.def("ordinal_sign", &ordinal_sign, py::arg("threshold"), py::arg("rating"));

    py::class_<TransferConfig>(m, "TransferConfig")
        .def(py::init([](double lambda, double learn_rate, int max_iters, double tol,
                         std::uint64_t seed, int r_max, bool backtracking) {
                 return TransferConfig{lambda, learn_rate, max_iters, tol, seed, r_max,
                                       backtracking};
             }),
             py::arg("lambda_") = 0.5, py::arg("learn_rate") = 0.01, py::arg("max_iters") = 500,
             py::arg("tol") = 1e-5, py::arg("seed") = 0, py::arg("r_max") = 5,
             py::arg("backtracking") = true)
        .def_readwrite("lambda_", &TransferConfig::lambda)
        .def_readwrite("learn_rate", &TransferConfig::learn_rate)
        .def_readwrite("max_iters", &TransferConfig::max_iters)
        .def_readwrite("tol", &TransferConfig::tol)
        .def_readwrite("seed", &TransferConfig::seed)
        .def_readwrite("r_max", &TransferConfig::r_max)
        .def_readwrite("backtracking", &TransferConfig::backtracking);

    py::class_<TransferModel>(m, "TransferModel")
        .def(py::init([](DenseMatrix u, DenseMatrix v, DenseMatrix theta, DenseMatrix b) {
                 if (u.cols() != b.rows() || v.cols() != b.cols() || theta.rows() != u.rows()) {
                     throw DataError("ShapeMismatch", "U, V, Theta, B shapes are inconsistent");
                 }
                 return TransferModel{std::move(u), std::move(v), std::move(theta), std::move(b),
                                      {}};
             }),
             py::arg("U"), py::arg("V"), py::arg("Theta"), py::arg("B"))
        .def_readwrite("U", &TransferModel::U)
        .def_readwrite("V", &TransferModel::V)
        .def_readwrite("Theta", &TransferModel::Theta)
        .def_readonly("B", &TransferModel::B)
        .def_readonly("objective_trace", &TransferModel::objective_trace)
        .def_property_readonly("r_max", &TransferModel::r_max);

    py::class_<PredictionMatrix>(m, "PredictionMatrix")
        .def_readonly("scores", &PredictionMatrix::scores)
        .def_readonly("ratings", &PredictionMatrix::ratings);

    m.def("objective", &objective, py::arg("y"), py::arg("model"), py::arg("lambda_"));
    m.def(
        "gradients",
        [](const SparseRatingMatrix& y, const TransferModel& model, double lambda) {
            TransferGradients g = gradients(y, model, lambda);
            return py::make_tuple(g.U, g.V, g.Theta);
        },
        py::arg("y"), py::arg("model"), py::arg("lambda_"));
    m.def("fit", &fit, py::arg("y"), py::arg("codebook"), py::arg("config"));
    m.def("fit_baseline_mmmf", &fit_baseline_mmmf, py::arg("y"), py::arg("k"), py::arg("config"));
    m.def("decode", &decode);
    m.def("unordered_threshold_fraction", &unordered_threshold_fraction);

    py::class_<SplitSpec>(m, "SplitSpec")
        .def(py::init([](double train_fraction, std::uint64_t seed) {
                 return SplitSpec{train_fraction, seed};
             }),
             py::arg("train_fraction") = 0.8, py::arg("seed") = 0)
        .def_readwrite("train_fraction", &SplitSpec::train_fraction)
        .def_readwrite("seed", &SplitSpec::seed);

    m.def("split", &split, py::arg("y"), py::arg("spec"));
    m.def("rmse", &rmse);
    m.def("mae", &mae);
    m.def("rmse_raw", &rmse_raw);
    m.def("mae_raw", &mae_raw);

    py::enum_<Method>(m, "Method")
        .value("PROPOSED", Method::Proposed)
        .value("BASELINE_MMMF", Method::BaselineMmmf)
        .value("GLOBAL_MEAN", Method::GlobalMean);

    py::class_<RunScore>(m, "RunScore")
        .def_readonly("split_seed", &RunScore::split_seed)
        .def_readonly("rmse", &RunScore::rmse)
        .def_readonly("mae", &RunScore::mae)
        .def_readonly("rmse_raw", &RunScore::rmse_raw)
        .def_readonly("mae_raw", &RunScore::mae_raw);

    py::class_<EvalReport>(m, "EvalReport")
        .def_readonly("rmse", &EvalReport::rmse)
        .def_readonly("mae", &EvalReport::mae)
        .def_readonly("rmse_raw", &EvalReport::rmse_raw)
        .def_readonly("mae_raw", &EvalReport::mae_raw)
        .def_readonly("per_run", &EvalReport::per_run)
        .def_readonly("n_test", &EvalReport::n_test);

    py::class_<ProtocolConfig>(m, "ProtocolConfig")
        .def(py::init([](int k1, int k2, int runs, std::uint64_t base_seed, CoClusterConfig co,
                         TransferConfig tr, SplitSpec sp, Method method, bool cold_start_mean) {
                 return ProtocolConfig{k1, k2, runs, base_seed, co, tr, sp, method,
                                       cold_start_mean};
             }),
             py::arg("k1"), py::arg("k2"), py::arg("runs"), py::arg("base_seed"),
             py::arg("cocluster"), py::arg("transfer"), py::arg("split") = SplitSpec{},
             py::arg("method") = Method::Proposed, py::arg("cold_start_mean") = false)
        .def_readwrite("k1", &ProtocolConfig::k1)
        .def_readwrite("k2", &ProtocolConfig::k2)
        .def_readwrite("runs", &ProtocolConfig::runs)
        .def_readwrite("base_seed", &ProtocolConfig::base_seed)
        .def_readwrite("cocluster", &ProtocolConfig::cocluster)
        .def_readwrite("transfer", &ProtocolConfig::transfer)
        .def_readwrite("split", &ProtocolConfig::split)
        .def_readwrite("method", &ProtocolConfig::method)
        .def_readwrite("cold_start_mean", &ProtocolConfig::cold_start_mean);

    m.def("run_protocol", &run_protocol, py::arg("source"), py::arg("target"), py::arg("config"));
    m.def("cluster_sweep", &cluster_sweep, py::arg("source"), py::arg("target"),
          py::arg("k_values"), py::arg("config"));

    py::enum_<FileFormat>(m, "FileFormat")
        .value("TSV", FileFormat::Tsv)
        .value("CSV", FileFormat::Csv);

    py::class_<DatasetSpec>(m, "DatasetSpec")
        .def(py::init([](std::string path, FileFormat format, std::optional<int> max_users,
                         std::optional<int> max_items, int id_base, int r_max) {
                 return DatasetSpec{std::move(path), format, max_users, max_items, id_base,
                                    r_max};
             }),
             py::arg("path"), py::arg("format") = FileFormat::Csv,
             py::arg("max_users") = std::nullopt, py::arg("max_items") = std::nullopt,
             py::arg("id_base") = 0, py::arg("r_max") = 5)
        .def_readwrite("path", &DatasetSpec::path)
        .def_readwrite("format", &DatasetSpec::format)
        .def_readwrite("max_users", &DatasetSpec::max_users)
        .def_readwrite("max_items", &DatasetSpec::max_items)
        .def_readwrite("id_base", &DatasetSpec::id_base)
        .def_readwrite("r_max", &DatasetSpec::r_max);

    py::class_<DatasetStats>(m, "DatasetStats")
        .def_readonly("n_users", &DatasetStats::n_users)
        .def_readonly("n_items", &DatasetStats::n_items)
        .def_readonly("observed_percentage", &DatasetStats::observed_percentage);

    m.def("load", &load, py::arg("spec"));
    m.def("stats", &stats);
    m.def("save_csv", &save_csv, py::arg("matrix"), py::arg("path"));
}
