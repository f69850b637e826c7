#ifndef LF_CONFIG_HPP
#define LF_CONFIG_HPP

#include <string>
#include <vector>

#include "lf/tower.hpp"

namespace lf {

// Field element literal in configs: either a plain integer or a digit list
// "v<offset>:d0,d1,..." (digit codes of the residue field, lowest valuation
// first, at the stated valuation offset).
struct CoeffSpec {
    bool is_int = true;
    Int int_value = 0;
    long offset = 0;
    std::vector<unsigned long> digit_codes;

    bool operator==(const CoeffSpec& o) const;
    std::string to_string() const;
    static CoeffSpec parse(const std::string& s);
};

struct ExperimentConfig {
    // [base]
    Kind kind = Kind::mixed;
    long p = 2;
    int r = 1;
    std::vector<unsigned long> base_respoly; // non-leading coeffs over F_p (monic implied)
    int precision = 0;                       // 0: derive from m and the degree

    // [extension] (the Galois extension L/K under test)
    int unram_degree = 1;
    std::vector<unsigned long> unram_respoly; // non-leading coeffs over F_q, codes
    std::vector<CoeffSpec> eis;               // a_0..a_{e-1}

    // [target] (an explicit candidate E, for rescue/hom commands)
    std::vector<CoeffSpec> target_eis;
    int target_unram_degree = 1;

    // [experiment]
    std::string m_str;       // rational "a/b"; empty: use u_{L/K}
    std::vector<unsigned long> unit_digits; // witness unit u, digit codes from level 0
    int corpus_max_degree = 4;
    long corpus_coeff_val_bound = 0; // 0: m + 1
    int depth = 2;
    unsigned long seed = 1;
    int psi_trials = 50;

    bool operator==(const ExperimentConfig& o) const;
};

ExperimentConfig parse_config(const std::string& text);
std::string serialize_config(const ExperimentConfig& cfg);

// Towers from a config. Precision resolution: explicit value, else
// e_total * (2 ceil(m) + 2) with a small floor.
struct BuiltExperiment {
    TowerPtr L;
    Rat m;
    int precision = 0;
};
BuiltExperiment build_extension(const ExperimentConfig& cfg);
TowerPtr build_target(const ExperimentConfig& cfg, int precision);
UnramElt build_unit(const ExperimentConfig& cfg, const TowerPtr& L);

uint64_t fnv1a64(const std::string& s);

} // namespace lf

#endif
