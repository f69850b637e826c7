// ramexp: ramification invariants and Fontaine (P_m) experiments for
// towers of local fields, driven by flat INI-style configs.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lf/report.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw lf::ConfigError("cannot open config file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"local-field ramification and Fontaine property experiments"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, format = "text", out_path;
    bool have_seed = false, have_precision = false;
    unsigned long seed = 0;
    int precision = 0;

    app.add_option("--config", config_path, "experiment config file")->required();
    app.add_option("--seed", seed, "override the config seed")->each([&](const std::string&) {
        have_seed = true;
    });
    app.add_option("--precision", precision, "override working precision (base digits)")
        ->each([&](const std::string&) { have_precision = true; });
    app.add_option("--format", format, "output format: text | json")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_option("--out", out_path, "write the report to a file instead of stdout");

    for (const char* name : {"ram", "pm", "witness", "rescue", "norms", "corpus"})
        app.add_subcommand(name);

    CLI11_PARSE(app, argc, argv);

    try {
        lf::ExperimentConfig cfg = lf::parse_config(slurp(config_path));
        if (have_seed) cfg.seed = seed;
        if (have_precision) cfg.precision = precision;
        std::string sub = app.get_subcommands().front()->get_name();
        lf::CommandResult res = lf::run_command(sub, cfg);
        std::string payload = format == "json" ? res.doc.dump(2) + "\n" : res.text;
        if (out_path.empty()) {
            std::cout << payload;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            out << payload;
        }
        return res.exit_code;
    } catch (const lf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
