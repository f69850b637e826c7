#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lf/report.hpp"

using namespace lf;

namespace {

const char* kGaussConfig = R"(# Q_2(i)/Q_2 at the critical level
[base]
kind = mixed
p = 2
r = 1
precision = 0

[extension]
unram_degree = 1
eis_coeff_0 = int:2
eis_coeff_1 = int:-2

[experiment]
m = 2
unit = 1,1
corpus_max_degree = 2
depth = 2
seed = 7
psi_trials = 10
)";

} // namespace

TEST_CASE("config parse and round trip") {
    ExperimentConfig cfg = parse_config(kGaussConfig);
    CHECK(cfg.kind == Kind::mixed);
    CHECK(cfg.p == 2);
    CHECK(cfg.eis.size() == 2);
    CHECK(cfg.eis[0].is_int);
    CHECK(cfg.eis[0].int_value == 2);
    CHECK(cfg.m_str == "2");
    CHECK(cfg.unit_digits == std::vector<unsigned long>{1, 1});
    CHECK(cfg.seed == 7);
    // parse(serialize(cfg)) == cfg
    ExperimentConfig back = parse_config(serialize_config(cfg));
    CHECK(back == cfg);
    // and the serialization is a fixed point
    CHECK(serialize_config(back) == serialize_config(cfg));
}

TEST_CASE("digit-list coefficients") {
    CoeffSpec cs = CoeffSpec::parse("v1:1,0,1");
    CHECK(!cs.is_int);
    CHECK(cs.offset == 1);
    CHECK(cs.digit_codes == std::vector<unsigned long>{1, 0, 1});
    CHECK(cs.to_string() == "v1:1,0,1");
    CoeffSpec ci = CoeffSpec::parse("-2");
    CHECK(ci.is_int);
    CHECK(ci.int_value == -2);
    // digit lists reproduce integers: 2 = [0,1] from offset 0 over Q_2
    ExperimentConfig cfg = parse_config(kGaussConfig);
    cfg.eis[0] = CoeffSpec::parse("v1:1");      // 2 = 1*2^1
    cfg.eis[1] = CoeffSpec::parse("v1:1,1,1,1,1,1,1,1,1,1,1"); // -2 = 2+4+8+...
    BuiltExperiment built = build_extension(cfg);
    CHECK(built.L->e() == 2);
    RamData rd = ram_data(built.L);
    CHECK(upper_break(rd) == Rat(2));
}

TEST_CASE("cmd_ram reports the invariants") {
    ExperimentConfig cfg = parse_config(kGaussConfig);
    CommandResult r = cmd_ram(cfg);
    CHECK(r.exit_code == 0);
    CHECK(r.doc["u_break"] == "2/1");
    CHECK(r.doc["i_break"] == "1/1");
    CHECK(r.doc["group_order"] == 2);
    CHECK(r.doc["hasse_arf"] == true);
    CHECK(r.doc["filtration"]["serre_lower"].size() == 1);
}

TEST_CASE("cmd_ram structured NotGalois error") {
    ExperimentConfig cfg = parse_config(kGaussConfig);
    cfg.eis = {CoeffSpec::parse("-2"), CoeffSpec::parse("0"), CoeffSpec::parse("0")}; // x^3 - 2
    CommandResult r = cmd_ram(cfg);
    CHECK(r.exit_code == 1);
    CHECK(r.doc["error"]["code"] == "NotGalois");
}

TEST_CASE("cmd_witness emits the counterexample") {
    ExperimentConfig cfg = parse_config(kGaussConfig);
    CommandResult r = cmd_witness(cfg);
    CHECK(r.exit_code == 0);
    CHECK(r.doc["hom_exists"] == true);
    CHECK(r.doc["contains_L"] == false);
    CHECK(r.doc["hom_witness"]["achieved"] == "2/1");
}

TEST_CASE("cmd_rescue finds the unramified quadratic") {
    ExperimentConfig cfg = parse_config(kGaussConfig);
    CommandResult r = cmd_rescue(cfg);
    CHECK(r.exit_code == 0);
    CHECK(r.doc["rescue_found"] == true);
    CHECK(r.doc["rescue_degree"] == 2);
    CHECK(r.doc["contains_L_after"] == true);
}

TEST_CASE("cmd_norms reports the cokernel") {
    ExperimentConfig cfg = parse_config(kGaussConfig);
    CommandResult r = cmd_norms(cfg);
    CHECK(r.exit_code == 0);
    CHECK(r.doc["cokernel"]["order"] == 2);
    CHECK(r.doc["cokernel"]["depth_consistency_ok"] == true);
    CHECK(r.doc["surjectivity_above_break"]["ok"] == true);
    CHECK(r.doc["cft_unit_index"] == 2);
    CHECK(r.doc["graded_at_break"]["kernel_size"] == 2);
}

TEST_CASE("cmd_pm verdict and exit code") {
    ExperimentConfig cfg = parse_config(kGaussConfig);
    CommandResult r = cmd_pm(cfg);
    CHECK(r.exit_code == 2); // theorem-confirmed-failure, distinguishable from crashes
    CHECK(r.doc["pm"]["verdict"] == "theorem-confirmed-failure");
    CHECK(r.doc["pm"]["psi_identity"]["failures"] == 0);
}

TEST_CASE("determinism: same seed, byte-identical reports") {
    ExperimentConfig cfg = parse_config(kGaussConfig);
    CommandResult a = cmd_pm(cfg);
    CommandResult b = cmd_pm(cfg);
    CHECK(a.doc.dump(2) == b.doc.dump(2));
    CHECK(a.text == b.text);
    CommandResult c = cmd_corpus(cfg);
    CommandResult d = cmd_corpus(cfg);
    CHECK(c.doc.dump(2) == d.doc.dump(2));
}

TEST_CASE("ramexp binary end to end") {
    std::string cfg_path = "cli_smoke_config.ini";
    {
        std::ofstream out(cfg_path);
        out << kGaussConfig;
    }
    std::string bin = LF_RAMEXP_PATH;
    std::string out1 = "cli_smoke_a.json", out2 = "cli_smoke_b.json";
    int rc1 = std::system((bin + " ram --config " + cfg_path + " --format json --out " + out1).c_str());
    CHECK(WEXITSTATUS(rc1) == 0);
    int rc2 = std::system((bin + " pm --config " + cfg_path + " --format json --out " + out2).c_str());
    CHECK(WEXITSTATUS(rc2) == 2);
    // reports exist and carry the envelope
    std::ifstream in1(out1);
    std::stringstream ss;
    ss << in1.rdbuf();
    Json j = Json::parse(ss.str());
    CHECK(j["command"] == "ram");
    CHECK(j["u_break"] == "2/1");
    // byte-identical rerun
    std::string out3 = "cli_smoke_c.json";
    int rc3 = std::system((bin + " pm --config " + cfg_path + " --format json --out " + out3).c_str());
    CHECK(WEXITSTATUS(rc3) == 2);
    std::ifstream f2(out2), f3(out3);
    std::stringstream s2, s3;
    s2 << f2.rdbuf();
    s3 << f3.rdbuf();
    CHECK(s2.str() == s3.str());
    std::remove(cfg_path.c_str());
    std::remove(out1.c_str());
    std::remove(out2.c_str());
    std::remove(out3.c_str());
}
