#ifndef LF_REPORT_HPP
#define LF_REPORT_HPP

#include <string>

#include <json.hpp>

#include "lf/config.hpp"
#include "lf/fontaine.hpp"

namespace lf {

using Json = nlohmann::ordered_json;

// Outcome of one CLI command: a machine-readable document, a text render,
// and the process exit code (0 ok, 1 error, 2 theorem-confirmed-failure).
struct CommandResult {
    Json doc;
    std::string text;
    int exit_code = 0;
};

CommandResult cmd_ram(const ExperimentConfig& cfg);
CommandResult cmd_pm(const ExperimentConfig& cfg);
CommandResult cmd_witness(const ExperimentConfig& cfg);
CommandResult cmd_rescue(const ExperimentConfig& cfg);
CommandResult cmd_norms(const ExperimentConfig& cfg);
CommandResult cmd_corpus(const ExperimentConfig& cfg);

CommandResult run_command(const std::string& name, const ExperimentConfig& cfg);

} // namespace lf

#endif
