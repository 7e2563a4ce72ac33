#include "xdrec/config.hpp"

#include <fstream>
#include <sstream>
#include <string>

namespace xdrec {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void bad_value(const std::string& where, const std::string& value) {
    throw DataError("InvalidConfig", where + ": bad value '" + value + "'");
}

int to_int(const std::string& where, const std::string& v) {
    try {
        std::size_t used = 0;
        int x = std::stoi(v, &used);
        if (used != v.size()) bad_value(where, v);
        return x;
    } catch (const DataError&) {
        throw;
    } catch (...) {
        bad_value(where, v);
    }
}

double to_double(const std::string& where, const std::string& v) {
    try {
        std::size_t used = 0;
        double x = std::stod(v, &used);
        if (used != v.size()) bad_value(where, v);
        return x;
    } catch (const DataError&) {
        throw;
    } catch (...) {
        bad_value(where, v);
    }
}

std::uint64_t to_u64(const std::string& where, const std::string& v) {
    try {
        std::size_t used = 0;
        std::uint64_t x = std::stoull(v, &used);
        if (used != v.size()) bad_value(where, v);
        return x;
    } catch (const DataError&) {
        throw;
    } catch (...) {
        bad_value(where, v);
    }
}

bool to_bool(const std::string& where, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    bad_value(where, v);
}

FileFormat to_format(const std::string& where, const std::string& v) {
    if (v == "tsv" || v == "tab-separated") return FileFormat::Tsv;
    if (v == "csv" || v == "comma-separated") return FileFormat::Csv;
    bad_value(where, v);
}

Method to_method(const std::string& where, const std::string& v) {
    if (v == "proposed") return Method::Proposed;
    if (v == "baseline-mmmf") return Method::BaselineMmmf;
    if (v == "global-mean") return Method::GlobalMean;
    bad_value(where, v);
}

bool apply_dataset_key(DatasetSpec& d, const std::string& where, const std::string& key,
                       const std::string& value) {
    if (key == "path") {
        d.path = value;
    } else if (key == "format") {
        d.format = to_format(where, value);
    } else if (key == "max_users") {
        d.max_users = to_int(where, value);
    } else if (key == "max_items") {
        d.max_items = to_int(where, value);
    } else if (key == "id_base") {
        d.id_base = to_int(where, value);
    } else if (key == "r_max") {
        d.r_max = to_int(where, value);
    } else {
        return false;
    }
    return true;
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("FileNotFound", path);

    ExperimentConfig cfg;
    std::string line, section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;

        auto where = [&](const std::string& key) {
            return path + ":" + std::to_string(line_no) + " [" + section + "] " + key;
        };

        if (line.front() == '[') {
            if (line.back() != ']') {
                throw DataError("ParseError", path + ":" + std::to_string(line_no) +
                                                  ": unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section != "source" && section != "target" && section != "cocluster" &&
                section != "transfer" && section != "split" && section != "experiment") {
                throw DataError("ParseError", path + ":" + std::to_string(line_no) +
                                                  ": unknown section [" + section + "]");
            }
            if (section == "source") cfg.has_source = true;
            continue;
        }

        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw DataError("ParseError",
                            path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw DataError("ParseError",
                            path + ":" + std::to_string(line_no) + ": empty key or value");
        }

        bool known = true;
        if (section == "source") {
            known = apply_dataset_key(cfg.source, where(key), key, value);
        } else if (section == "target") {
            known = apply_dataset_key(cfg.target, where(key), key, value);
        } else if (section == "cocluster") {
            if (key == "k1") cfg.cocluster.k1 = to_int(where(key), value);
            else if (key == "k2") cfg.cocluster.k2 = to_int(where(key), value);
            else if (key == "alpha") cfg.cocluster.alpha = to_double(where(key), value);
            else if (key == "beta") cfg.cocluster.beta = to_double(where(key), value);
            else if (key == "max_iters") cfg.cocluster.max_iters = to_int(where(key), value);
            else if (key == "tol") cfg.cocluster.tol = to_double(where(key), value);
            else if (key == "seed") cfg.cocluster.seed = to_u64(where(key), value);
            else known = false;
        } else if (section == "transfer") {
            if (key == "lambda") cfg.transfer.lambda = to_double(where(key), value);
            else if (key == "learn_rate") cfg.transfer.learn_rate = to_double(where(key), value);
            else if (key == "max_iters") cfg.transfer.max_iters = to_int(where(key), value);
            else if (key == "tol") cfg.transfer.tol = to_double(where(key), value);
            else if (key == "seed") cfg.transfer.seed = to_u64(where(key), value);
            else if (key == "r_max") cfg.transfer.r_max = to_int(where(key), value);
            else if (key == "backtracking") cfg.transfer.backtracking = to_bool(where(key), value);
            else known = false;
        } else if (section == "split") {
            if (key == "train_fraction") cfg.split.train_fraction = to_double(where(key), value);
            else if (key == "seed") cfg.split.seed = to_u64(where(key), value);
            else known = false;
        } else if (section == "experiment") {
            if (key == "runs") cfg.runs = to_int(where(key), value);
            else if (key == "method") cfg.method = to_method(where(key), value);
            else if (key == "output_dir") cfg.output_dir = value;
            else if (key == "cold_start") {
                if (value == "model") cfg.cold_start_mean = false;
                else if (value == "global-mean") cfg.cold_start_mean = true;
                else bad_value(where(key), value);
            } else known = false;
        } else {
            throw DataError("ParseError", path + ":" + std::to_string(line_no) +
                                              ": key outside any section");
        }
        if (!known) {
            throw DataError("ParseError", path + ":" + std::to_string(line_no) +
                                              ": unknown key '" + key + "' in [" + section + "]");
        }
    }

    if (cfg.target.path.empty()) {
        throw DataError("InvalidConfig", path + ": [target] path is required");
    }
    if (cfg.has_source && cfg.source.path.empty()) {
        throw DataError("InvalidConfig", path + ": [source] section present but path missing");
    }
    if (cfg.runs < 1) throw DataError("InvalidConfig", path + ": runs must be >= 1");
    return cfg;
}

std::vector<std::pair<std::string, std::string>> config_echo(const ExperimentConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> kv;
    auto add = [&](const std::string& k, const std::string& v) { kv.emplace_back(k, v); };
    auto num = [](double v) {
        std::ostringstream ss;
        ss << v;
        return ss.str();
    };
    auto add_dataset = [&](const std::string& prefix, const DatasetSpec& d) {
        add(prefix + ".path", d.path);
        add(prefix + ".format", d.format == FileFormat::Tsv ? "tsv" : "csv");
        add(prefix + ".max_users", d.max_users ? std::to_string(*d.max_users) : "all");
        add(prefix + ".max_items", d.max_items ? std::to_string(*d.max_items) : "all");
        add(prefix + ".id_base", std::to_string(d.id_base));
        add(prefix + ".r_max", std::to_string(d.r_max));
    };

    if (cfg.has_source) add_dataset("source", cfg.source);
    add_dataset("target", cfg.target);
    add("cocluster.k1", std::to_string(cfg.cocluster.k1));
    add("cocluster.k2", std::to_string(cfg.cocluster.k2));
    add("cocluster.alpha", num(cfg.cocluster.alpha));
    add("cocluster.beta", num(cfg.cocluster.beta));
    add("cocluster.max_iters", std::to_string(cfg.cocluster.max_iters));
    add("cocluster.tol", num(cfg.cocluster.tol));
    add("cocluster.seed", std::to_string(cfg.cocluster.seed));
    add("transfer.lambda", num(cfg.transfer.lambda));
    add("transfer.learn_rate", num(cfg.transfer.learn_rate));
    add("transfer.max_iters", std::to_string(cfg.transfer.max_iters));
    add("transfer.tol", num(cfg.transfer.tol));
    add("transfer.seed", std::to_string(cfg.transfer.seed));
    add("transfer.r_max", std::to_string(cfg.transfer.r_max));
    add("transfer.backtracking", cfg.transfer.backtracking ? "true" : "false");
    add("split.train_fraction", num(cfg.split.train_fraction));
    add("split.seed", std::to_string(cfg.split.seed));
    add("experiment.runs", std::to_string(cfg.runs));
    add("experiment.method", method_name(cfg.method));
    add("experiment.cold_start", cfg.cold_start_mean ? "global-mean" : "model");
    add("experiment.output_dir", cfg.output_dir);
    return kv;
}

ProtocolConfig protocol_config(const ExperimentConfig& cfg) {
    ProtocolConfig p;
    p.k1 = cfg.cocluster.k1;
    p.k2 = cfg.cocluster.k2;
    p.runs = cfg.runs;
    p.base_seed = cfg.split.seed;
    p.cocluster = cfg.cocluster;
    p.transfer = cfg.transfer;
    p.split = cfg.split;
    p.method = cfg.method;
    p.cold_start_mean = cfg.cold_start_mean;
    return p;
}

}  // namespace xdrec
