#pragma once

#include <string>
#include <utility>
#include <vector>

#include "xdrec/dataset.hpp"
#include "xdrec/evaluate.hpp"

namespace xdrec {

// Declarative experiment description, read from an INI-style file with
// [source] [target] [cocluster] [transfer] [split] [experiment] sections.
struct ExperimentConfig {
    DatasetSpec source;
    bool has_source = false;  // [source] may be omitted for target-only methods
    DatasetSpec target;
    CoClusterConfig cocluster;
    TransferConfig transfer;
    SplitSpec split;
    int runs = 5;
    Method method = Method::Proposed;
    bool cold_start_mean = false;
    std::string output_dir = "out";
};

// Strict parser: unknown sections or keys are errors, with line numbers.
// Throws DataError: FileNotFound, ParseError, InvalidConfig.
ExperimentConfig load_experiment_config(const std::string& path);

// Every resolved field as section.key=value pairs, defaults included, so a
// report is self-describing.
std::vector<std::pair<std::string, std::string>> config_echo(const ExperimentConfig& cfg);

ProtocolConfig protocol_config(const ExperimentConfig& cfg);

}  // namespace xdrec
