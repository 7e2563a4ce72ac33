#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "xdrec/config.hpp"
#include "xdrec/dataset.hpp"
#include "xdrec/io.hpp"

namespace fs = std::filesystem;
using namespace xdrec;

namespace {

void print_stats(const std::string& label, const SparseRatingMatrix& m) {
    DatasetStats s = stats(m);
    std::cout << label << ".n_users=" << s.n_users << '\n'
              << label << ".n_items=" << s.n_items << '\n'
              << label << ".n_observed=" << m.n_observed() << '\n'
              << label << ".observed_pct=" << s.observed_percentage << '\n';
}

SparseRatingMatrix load_source(const ExperimentConfig& cfg) {
    if (!cfg.has_source) {
        throw DataError("InvalidConfig", "a [source] section is required for this command");
    }
    SparseRatingMatrix source = load(cfg.source);
    print_stats("source", source);
    return source;
}

int cmd_run(const ExperimentConfig& cfg) {
    SparseRatingMatrix target = load(cfg.target);
    print_stats("target", target);
    SparseRatingMatrix source =
        cfg.method == Method::Proposed ? load_source(cfg) : SparseRatingMatrix{};

    ProtocolArtifacts artifacts = run_protocol_full(source, target, protocol_config(cfg));
    artifacts.report.config_echo = config_echo(cfg);

    fs::create_directories(cfg.output_dir);
    write_report(cfg.output_dir + "/report.txt", artifacts.report, cfg.method);
    write_per_run_csv(cfg.output_dir + "/per_run.csv", artifacts.report);
    if (artifacts.codebook) {
        write_codebook_csv(*artifacts.codebook, cfg.output_dir + "/codebook");
        write_trace_csv(cfg.output_dir + "/cocluster_trace.csv", artifacts.cocluster_trace);
    }
    if (artifacts.final_model) {
        export_model(*artifacts.final_model, cfg.output_dir, cfg.transfer.lambda,
                     cfg.transfer.seed);
        write_trace_csv(cfg.output_dir + "/transfer_trace.csv", artifacts.transfer_trace);
    }

    std::cout << "method=" << method_name(cfg.method) << " rmse=" << artifacts.report.rmse
              << " mae=" << artifacts.report.mae << '\n'
              << "report written to " << cfg.output_dir << "/report.txt\n";
    return 0;
}

int cmd_sweep(const ExperimentConfig& cfg, const std::vector<int>& k_values) {
    SparseRatingMatrix target = load(cfg.target);
    print_stats("target", target);
    SparseRatingMatrix source =
        cfg.method == Method::Proposed ? load_source(cfg) : SparseRatingMatrix{};

    auto rows = cluster_sweep(source, target, k_values, protocol_config(cfg));
    fs::create_directories(cfg.output_dir);
    write_sweep_csv(cfg.output_dir + "/sweep.csv", rows);
    for (const auto& [k, report] : rows) {
        std::cout << "k=" << k << " rmse=" << report.rmse << " mae=" << report.mae << '\n';
    }
    std::cout << "sweep written to " << cfg.output_dir << "/sweep.csv\n";
    return 0;
}

int cmd_codebook(const ExperimentConfig& cfg) {
    SparseRatingMatrix source = load_source(cfg);

    CoClusterConfig co = cfg.cocluster;
    TriFactorization tri = factorize(source, co);
    Codebook cb = build_codebook(source, binarize(tri.P), binarize(tri.Q));

    fs::create_directories(cfg.output_dir);
    write_codebook_csv(cb, cfg.output_dir + "/codebook");
    write_trace_csv(cfg.output_dir + "/cocluster_trace.csv", tri.objective_trace);
    std::cout << "codebook written to " << cfg.output_dir << "/codebook.csv\n";
    return 0;
}

std::vector<int> parse_k_list(const std::string& arg) {
    std::vector<int> ks;
    std::string cur;
    std::istringstream ss(arg);
    while (std::getline(ss, cur, ',')) {
        try {
            std::size_t used = 0;
            int k = std::stoi(cur, &used);
            if (used != cur.size() || k < 1) throw std::invalid_argument(cur);
            ks.push_back(k);
        } catch (...) {
            throw CLI::ValidationError("--k", "'" + cur + "' is not a positive integer");
        }
    }
    if (ks.empty()) throw CLI::ValidationError("--k", "empty cluster-count list");
    return ks;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cross-domain rating prediction via codebook transfer"};
    app.require_subcommand(1);

    std::string config_path;
    std::string k_arg;
    std::string output_dir_override;
    std::uint64_t seed_override = 0;
    bool serial = false;  // serial is the only execution mode; kept for scripts

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("config", config_path, "experiment config file")->required();
        cmd->add_option("--seed", seed_override, "override the base split seed");
        cmd->add_flag("--serial", serial, "force the serial reference path (default)");
        cmd->add_option("--output-dir", output_dir_override, "override [experiment] output_dir");
    };

    CLI::App* run_cmd = app.add_subcommand("run", "run the transfer protocol and write reports");
    add_common(run_cmd);
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "evaluate a list of cluster counts");
    add_common(sweep_cmd);
    sweep_cmd->add_option("--k", k_arg, "comma-separated cluster counts, e.g. 25,50,75")
        ->required();
    CLI::App* codebook_cmd =
        app.add_subcommand("codebook", "run only the source-side pipeline and write the codebook");
    add_common(codebook_cmd);

    std::vector<int> k_values;
    try {
        app.parse(argc, argv);
        if (sweep_cmd->parsed()) k_values = parse_k_list(k_arg);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        ExperimentConfig cfg = load_experiment_config(config_path);
        if (run_cmd->count("--seed") || sweep_cmd->count("--seed") ||
            codebook_cmd->count("--seed")) {
            cfg.split.seed = seed_override;
        }
        if (!output_dir_override.empty()) cfg.output_dir = output_dir_override;

        if (run_cmd->parsed()) return cmd_run(cfg);
        if (sweep_cmd->parsed()) return cmd_sweep(cfg, k_values);
        return cmd_codebook(cfg);
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: Internal: " << e.what() << '\n';
        return 2;
    }
}
