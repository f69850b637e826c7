#include "lf/config.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "lf/errors.hpp"
#include "lf/ramification.hpp"

namespace lf {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<unsigned long> parse_code_list(const std::string& s) {
    std::vector<unsigned long> out;
    std::string cur;
    auto flush = [&] {
        std::string t = trim(cur);
        if (!t.empty()) out.push_back(std::stoul(t));
        cur.clear();
    };
    for (char ch : s) {
        if (ch == ',')
            flush();
        else
            cur += ch;
    }
    flush();
    return out;
}

std::string code_list_str(const std::vector<unsigned long>& v) {
    std::ostringstream os;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << v[i];
    }
    return os.str();
}

} // namespace

bool CoeffSpec::operator==(const CoeffSpec& o) const {
    if (is_int != o.is_int) return false;
    if (is_int) return int_value == o.int_value;
    return offset == o.offset && digit_codes == o.digit_codes;
}

std::string CoeffSpec::to_string() const {
    if (is_int) return "int:" + int_value.get_str();
    return "v" + std::to_string(offset) + ":" + code_list_str(digit_codes);
}

CoeffSpec CoeffSpec::parse(const std::string& raw) {
    std::string s = trim(raw);
    CoeffSpec cs;
    if (s.rfind("int:", 0) == 0) {
        cs.is_int = true;
        cs.int_value = Int(s.substr(4));
        return cs;
    }
    if (!s.empty() && s[0] == 'v') {
        size_t colon = s.find(':');
        if (colon == std::string::npos) throw ConfigError("bad coefficient literal '" + s + "'");
        cs.is_int = false;
        cs.offset = std::stol(s.substr(1, colon - 1));
        cs.digit_codes = parse_code_list(s.substr(colon + 1));
        return cs;
    }
    cs.is_int = true;
    cs.int_value = Int(s);
    return cs;
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line, section;
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> kv;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        kv[section].emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }

    std::vector<CoeffSpec> eis_tmp, target_tmp;
    std::map<long, CoeffSpec> eis_by_idx, target_by_idx;
    for (const auto& [section, entries] : kv) {
        for (const auto& [key, value] : entries) {
            try {
                if (section == "base") {
                    if (key == "kind") {
                        if (value == "mixed")
                            cfg.kind = Kind::mixed;
                        else if (value == "equal")
                            cfg.kind = Kind::equal;
                        else
                            throw ConfigError("kind must be mixed or equal");
                    } else if (key == "p")
                        cfg.p = std::stol(value);
                    else if (key == "r")
                        cfg.r = std::stoi(value);
                    else if (key == "respoly")
                        cfg.base_respoly = parse_code_list(value);
                    else if (key == "precision")
                        cfg.precision = std::stoi(value);
                    else
                        throw ConfigError("unknown key '" + key + "' in [base]");
                } else if (section == "extension") {
                    if (key == "unram_degree")
                        cfg.unram_degree = std::stoi(value);
                    else if (key == "unram_respoly")
                        cfg.unram_respoly = parse_code_list(value);
                    else if (key.rfind("eis_coeff_", 0) == 0)
                        eis_by_idx[std::stol(key.substr(10))] = CoeffSpec::parse(value);
                    else
                        throw ConfigError("unknown key '" + key + "' in [extension]");
                } else if (section == "target") {
                    if (key == "unram_degree")
                        cfg.target_unram_degree = std::stoi(value);
                    else if (key.rfind("eis_coeff_", 0) == 0)
                        target_by_idx[std::stol(key.substr(10))] = CoeffSpec::parse(value);
                    else
                        throw ConfigError("unknown key '" + key + "' in [target]");
                } else if (section == "experiment") {
                    if (key == "m")
                        cfg.m_str = value;
                    else if (key == "unit")
                        cfg.unit_digits = parse_code_list(value);
                    else if (key == "corpus_max_degree")
                        cfg.corpus_max_degree = std::stoi(value);
                    else if (key == "corpus_coeff_val_bound")
                        cfg.corpus_coeff_val_bound = std::stol(value);
                    else if (key == "depth")
                        cfg.depth = std::stoi(value);
                    else if (key == "seed")
                        cfg.seed = std::stoul(value);
                    else if (key == "psi_trials")
                        cfg.psi_trials = std::stoi(value);
                    else
                        throw ConfigError("unknown key '" + key + "' in [experiment]");
                } else {
                    throw ConfigError("unknown section [" + section + "]");
                }
            } catch (const Error&) {
                throw;
            } catch (const std::exception& ex) {
                throw ConfigError("key '" + key + "' in [" + section + "]: " + ex.what());
            }
        }
    }
    for (auto& [idx, cs] : eis_by_idx) {
        if (idx != static_cast<long>(eis_tmp.size()))
            throw ConfigError("eis_coeff indices must be contiguous from 0");
        eis_tmp.push_back(cs);
    }
    for (auto& [idx, cs] : target_by_idx) {
        if (idx != static_cast<long>(target_tmp.size()))
            throw ConfigError("target eis_coeff indices must be contiguous from 0");
        target_tmp.push_back(cs);
    }
    cfg.eis = std::move(eis_tmp);
    cfg.target_eis = std::move(target_tmp);
    return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "[base]\n";
    os << "kind = " << (cfg.kind == Kind::mixed ? "mixed" : "equal") << "\n";
    os << "p = " << cfg.p << "\n";
    os << "r = " << cfg.r << "\n";
    if (!cfg.base_respoly.empty()) os << "respoly = " << code_list_str(cfg.base_respoly) << "\n";
    os << "precision = " << cfg.precision << "\n";
    os << "\n[extension]\n";
    os << "unram_degree = " << cfg.unram_degree << "\n";
    if (!cfg.unram_respoly.empty())
        os << "unram_respoly = " << code_list_str(cfg.unram_respoly) << "\n";
    for (size_t i = 0; i < cfg.eis.size(); ++i)
        os << "eis_coeff_" << i << " = " << cfg.eis[i].to_string() << "\n";
    if (!cfg.target_eis.empty() || cfg.target_unram_degree != 1) {
        os << "\n[target]\n";
        os << "unram_degree = " << cfg.target_unram_degree << "\n";
        for (size_t i = 0; i < cfg.target_eis.size(); ++i)
            os << "eis_coeff_" << i << " = " << cfg.target_eis[i].to_string() << "\n";
    }
    os << "\n[experiment]\n";
    if (!cfg.m_str.empty()) os << "m = " << cfg.m_str << "\n";
    if (!cfg.unit_digits.empty()) os << "unit = " << code_list_str(cfg.unit_digits) << "\n";
    os << "corpus_max_degree = " << cfg.corpus_max_degree << "\n";
    os << "corpus_coeff_val_bound = " << cfg.corpus_coeff_val_bound << "\n";
    os << "depth = " << cfg.depth << "\n";
    os << "seed = " << cfg.seed << "\n";
    os << "psi_trials = " << cfg.psi_trials << "\n";
    return os.str();
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
    return kind == o.kind && p == o.p && r == o.r && base_respoly == o.base_respoly &&
           precision == o.precision && unram_degree == o.unram_degree &&
           unram_respoly == o.unram_respoly && eis == o.eis && target_eis == o.target_eis &&
           target_unram_degree == o.target_unram_degree && m_str == o.m_str &&
           unit_digits == o.unit_digits && corpus_max_degree == o.corpus_max_degree &&
           corpus_coeff_val_bound == o.corpus_coeff_val_bound && depth == o.depth &&
           seed == o.seed && psi_trials == o.psi_trials;
}

namespace {

std::vector<uint32_t> respoly_from_codes(long p, int r, const std::vector<unsigned long>& codes) {
    // codes are the non-leading coefficients over F_p
    std::vector<uint32_t> mod;
    for (unsigned long c : codes) mod.push_back(static_cast<uint32_t>(c));
    mod.resize(r, 0);
    mod.push_back(1);
    return mod;
}

std::vector<Element> eis_elements(const TowerPtr& K, const std::vector<CoeffSpec>& specs) {
    std::vector<Element> out;
    const auto& codec = K->codec();
    for (const auto& cs : specs) {
        if (cs.is_int) {
            out.push_back(K->from_int(cs.int_value));
        } else {
            std::vector<FqElt> digits;
            for (unsigned long code : cs.digit_codes) digits.push_back(codec.decode(code));
            out.push_back(K->from_digits(static_cast<int>(cs.offset), digits));
        }
    }
    return out;
}

TowerPtr build_tower(Kind kind, long p, int r, const std::vector<unsigned long>& base_respoly,
                     int precision, int unram_degree,
                     const std::vector<unsigned long>& unram_respoly,
                     const std::vector<CoeffSpec>& eis) {
    BaseSpec bs;
    bs.kind = kind;
    bs.p = p;
    bs.r = r;
    if (!base_respoly.empty()) bs.respoly = respoly_from_codes(p, r, base_respoly);
    bs.precision = precision;
    TowerPtr t = FieldTower::make(bs);
    if (unram_degree > 1) {
        std::vector<FqElt> rp;
        const auto& Fq = t->residue_field();
        const auto& codec = t->codec();
        for (unsigned long code : unram_respoly) rp.push_back(codec.decode(code));
        if (!rp.empty()) {
            rp.resize(unram_degree, Fq->zero());
            rp.push_back(Fq->one());
        }
        t = t->extend_unramified(unram_degree, rp);
    }
    if (!eis.empty()) t = t->extend_eisenstein(eis_elements(t, eis));
    return t;
}

} // namespace

BuiltExperiment build_extension(const ExperimentConfig& cfg) {
    BuiltExperiment out;
    const int e = static_cast<int>(cfg.eis.size());
    if (e == 0) throw ConfigError("[extension] must define an Eisenstein step");
    // provisional precision, enough to compute the break
    int prov = cfg.precision > 0 ? cfg.precision : std::max(10, 10 * 1);
    TowerPtr L0 = build_tower(cfg.kind, cfg.p, cfg.r, cfg.base_respoly, prov, cfg.unram_degree,
                              cfg.unram_respoly, cfg.eis);
    Rat m;
    if (!cfg.m_str.empty()) {
        m = parse_rat(cfg.m_str);
    } else {
        RamData rd = ram_data(L0);
        m = upper_break(rd);
    }
    int precision = cfg.precision;
    if (precision <= 0) {
        long mc = to_long(ceil_int(m));
        precision = std::max<long>(8, e * (2 * mc + 2));
    }
    out.precision = precision;
    out.m = m;
    out.L = precision == prov ? L0
                              : build_tower(cfg.kind, cfg.p, cfg.r, cfg.base_respoly, precision,
                                            cfg.unram_degree, cfg.unram_respoly, cfg.eis);
    return out;
}

TowerPtr build_target(const ExperimentConfig& cfg, int precision) {
    if (cfg.target_eis.empty()) throw ConfigError("[target] must define an Eisenstein step");
    return build_tower(cfg.kind, cfg.p, cfg.r, cfg.base_respoly, precision,
                       cfg.target_unram_degree, {}, cfg.target_eis);
}

UnramElt build_unit(const ExperimentConfig& cfg, const TowerPtr& L) {
    if (cfg.unit_digits.empty()) throw ConfigError("[experiment] unit is required");
    const auto& codec = L->codec();
    std::vector<FqElt> digits;
    for (unsigned long code : cfg.unit_digits) digits.push_back(codec.decode(code));
    return L->coeff_ring().from_base_digits(digits, L->nmax());
}

uint64_t fnv1a64(const std::string& s) {
    uint64_t h = UINT64_C(0xcbf29ce484222325);
    for (unsigned char c : s) {
        h ^= c;
        h *= UINT64_C(0x100000001b3);
    }
    return h;
}

} // namespace lf
