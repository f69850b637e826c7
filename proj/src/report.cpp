#include "lf/report.hpp"

#include <random>
#include <sstream>

#include "lf/errors.hpp"

namespace lf {

namespace {

constexpr const char* kVersion = "localfield 1.0.0";

Json envelope(const std::string& command, const ExperimentConfig& cfg) {
    Json j;
    j["command"] = command;
    j["version"] = kVersion;
    j["seed"] = cfg.seed;
    std::ostringstream os;
    os << std::hex << fnv1a64(serialize_config(cfg));
    j["config_hash"] = os.str();
    return j;
}

Json rows_json(const std::vector<FiltrationRow>& rows) {
    Json arr = Json::array();
    for (const auto& r : rows) {
        Json row;
        row["index"] = rat_str(r.index);
        row["order"] = r.members.size();
        row["members"] = r.members;
        arr.push_back(row);
    }
    return arr;
}

Json plfunc_json(const PLFunc& f) {
    Json j;
    j["slope_lo"] = rat_str(f.slope_lo());
    Json pts = Json::array();
    for (const auto& [x, y] : f.breakpoints()) pts.push_back(Json::array({rat_str(x), rat_str(y)}));
    j["breakpoints"] = pts;
    j["slope_hi"] = rat_str(f.slope_hi());
    return j;
}

std::string render_text(const Json& j, int indent = 0) {
    std::ostringstream os;
    std::string pad(indent, ' ');
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.value().is_object() || it.value().is_array()) {
                os << pad << it.key() << ":\n" << render_text(it.value(), indent + 2);
            } else {
                os << pad << it.key() << ": " << it.value().dump() << "\n";
            }
        }
    } else if (j.is_array()) {
        for (const auto& v : j) {
            if (v.is_object() || v.is_array())
                os << pad << "-\n" << render_text(v, indent + 2);
            else
                os << pad << "- " << v.dump() << "\n";
        }
    } else {
        os << pad << j.dump() << "\n";
    }
    return os.str();
}

CommandResult finish(Json j, int code) {
    CommandResult r;
    r.text = render_text(j);
    r.doc = std::move(j);
    r.exit_code = code;
    return r;
}

CommandResult error_result(Json j, const Error& e) {
    j["error"] = Json{{"code", e.code()}, {"message", e.what()}};
    return finish(std::move(j), 1);
}

Json describe_tower(const TowerPtr& T) {
    Json j;
    j["field"] = T->describe();
    j["e"] = T->e();
    j["f"] = T->f();
    j["degree_over_base"] = T->degree_over_base();
    j["precision"] = T->nmax();
    Json coeffs = Json::array();
    for (const auto& a : T->eis_coeffs())
        coeffs.push_back(T->coeff_ring().to_string(a, std::min(T->nmax(), 8)));
    j["eis_coeffs"] = coeffs;
    return j;
}

} // namespace

CommandResult cmd_ram(const ExperimentConfig& cfg) {
    Json j = envelope("ram", cfg);
    try {
        BuiltExperiment built = build_extension(cfg);
        j["extension"] = describe_tower(built.L);
        RamData rd = ram_data(built.L);
        j["group_order"] = rd.G.order();
        j["abelian"] = rd.G.abelian;
        j["trivial"] = rd.trivial;
        if (!rd.trivial) {
            j["u_break"] = rat_str(upper_break(rd));
            j["i_break"] = rat_str(lower_break(rd));
            j["wild"] = rd.wild;
            j["single_jump"] = rd.single_jump;
            Json filt;
            filt["serre_lower"] = rows_json(filtration_rows(rd, Convention::serre_lower));
            filt["fontaine_lower"] = rows_json(filtration_rows(rd, Convention::fontaine_lower));
            filt["serre_upper"] = rows_json(filtration_rows(rd, Convention::serre_upper));
            filt["fontaine_upper"] = rows_json(filtration_rows(rd, Convention::fontaine_upper));
            j["filtration"] = filt;
            j["phi"] = plfunc_json(rd.phi);
            j["psi"] = plfunc_json(rd.psi);
            j["phi_tilde"] = plfunc_json(rd.phi_tilde);
            j["psi_tilde"] = plfunc_json(rd.psi_tilde);
            if (rd.G.abelian) j["hasse_arf"] = hasse_arf_check(rd);
        }
        return finish(std::move(j), 0);
    } catch (const Error& e) {
        return error_result(std::move(j), e);
    }
}

CommandResult cmd_pm(const ExperimentConfig& cfg) {
    Json j = envelope("pm", cfg);
    try {
        BuiltExperiment built = build_extension(cfg);
        j["extension"] = describe_tower(built.L);
        j["m"] = rat_str(built.m);
        CorpusSpec cs;
        cs.max_degree = cfg.corpus_max_degree;
        cs.coeff_val_bound = cfg.corpus_coeff_val_bound;
        PmReport rep = pm_experiment(built.L, built.m, cs);
        Json pr;
        pr["u_break"] = rat_str(rep.u_break);
        pr["m_is_break"] = rep.m_is_break;
        pr["wild"] = rep.wild;
        pr["verdict"] = rep.verdict;
        pr["witness"] = Json{{"label", rep.witness_label},
                             {"unit_digits", rep.witness_unit_digits},
                             {"hom_exists", rep.witness_hom},
                             {"contains_L", rep.witness_contains}};
        if (rep.witness_rescue_degree) pr["witness"]["rescue_degree"] = *rep.witness_rescue_degree;
        pr["bracket_above_ok"] = rep.bracket_above_ok;
        pr["bracket_below_ok"] = rep.bracket_below_ok;
        Json corpus = Json::array();
        for (const auto& cv : rep.corpus) {
            Json row;
            row["label"] = cv.label;
            row["degree"] = cv.degree;
            if (!cv.error.empty()) {
                row["error"] = cv.error;
            } else {
                row["hom_at_m"] = cv.hom_at_m;
                row["contains_L"] = cv.contains_L;
                row["hom_at_next"] = cv.hom_at_next;
                if (cv.rescue_degree) row["rescue_degree"] = *cv.rescue_degree;
            }
            corpus.push_back(row);
        }
        pr["corpus"] = corpus;
        pr["errors"] = rep.errors;
        // seeded psi-identity trials on L itself
        {
            std::mt19937_64 rng(cfg.seed);
            const auto& FQ = built.L->residue_field();
            long depth = std::min<long>(built.L->e() * (to_long(ceil_int(built.m)) + 2),
                                        built.L->e() * (built.L->nmax() - 3));
            int failures = 0;
            for (int t = 0; t < cfg.psi_trials; ++t) {
                std::vector<FqElt> digits;
                for (long k = 0; k < depth; ++k)
                    digits.push_back(FQ->from_index(rng() % FQ->q()));
                Element beta = built.L->from_digits(0, digits);
                PsiIdentityResult pid = psi_identity_check(built.L, built.L, beta);
                if (!pid.ok) ++failures;
            }
            pr["psi_identity"] =
                Json{{"trials", cfg.psi_trials}, {"seed", cfg.seed}, {"failures", failures}};
        }
        j["pm"] = pr;
        int code = 0;
        if (!rep.errors.empty())
            code = 1;
        else if (rep.verdict == "theorem-confirmed-failure")
            code = 2;
        return finish(std::move(j), code);
    } catch (const Error& e) {
        return error_result(std::move(j), e);
    }
}

CommandResult cmd_witness(const ExperimentConfig& cfg) {
    Json j = envelope("witness", cfg);
    try {
        BuiltExperiment built = build_extension(cfg);
        j["extension"] = describe_tower(built.L);
        if (!is_integer(built.m)) throw InvalidArgument("witness level m must be an integer");
        long m = to_long(Int(built.m.get_num()));
        UnramElt u;
        if (!cfg.unit_digits.empty()) {
            u = build_unit(cfg, built.L);
        } else {
            RamData rd = ram_data(built.L);
            CokernelResult ck = norm_cokernel(rd, m, 1);
            const auto& FQ = built.L->residue_field();
            FqElt delta = FQ->zero();
            for (unsigned long di = 0; di < FQ->q(); ++di)
                if (!cokernel_class_trivial(ck, FQ->from_index(di))) {
                    delta = FQ->from_index(di);
                    break;
                }
            std::vector<FqElt> digits(static_cast<size_t>(m), FQ->zero());
            digits[0] = FQ->one();
            digits[static_cast<size_t>(m - 1)] = FQ->add(digits[static_cast<size_t>(m - 1)], delta);
            u = built.L->coeff_ring().from_base_digits(digits, built.L->nmax());
        }
        j["unit"] = built.L->coeff_ring().to_string(u, static_cast<int>(m) + 1);
        TowerPtr E = witness_extension(built.L, u, m);
        j["witness_extension"] = describe_tower(E);
        auto hw = hom_exists(built.L, E, built.m);
        j["hom_exists"] = hw.has_value();
        if (hw) {
            Json w;
            w["above_precision"] = hw->above_precision;
            if (hw->achieved) w["achieved"] = rat_str(*hw->achieved);
            std::vector<unsigned long> bd;
            for (const auto& d : hw->beta_digits) bd.push_back(E->residue_field()->to_index(d));
            w["beta_digits"] = bd;
            j["hom_witness"] = w;
        }
        TPoly f = defining_poly_over_base(built.L);
        j["contains_L"] = poly::has_root(f, E);
        return finish(std::move(j), 0);
    } catch (const Error& e) {
        return error_result(std::move(j), e);
    }
}

CommandResult cmd_rescue(const ExperimentConfig& cfg) {
    Json j = envelope("rescue", cfg);
    try {
        BuiltExperiment built = build_extension(cfg);
        j["extension"] = describe_tower(built.L);
        if (!is_integer(built.m)) throw InvalidArgument("rescue level m must be an integer");
        long m = to_long(Int(built.m.get_num()));
        TowerPtr E;
        if (!cfg.target_eis.empty()) {
            E = build_target(cfg, built.precision);
        } else if (!cfg.unit_digits.empty()) {
            E = witness_extension(built.L, build_unit(cfg, built.L), m);
        } else {
            throw ConfigError("rescue needs a [target] section or an experiment unit");
        }
        j["target"] = describe_tower(E);
        auto hw = hom_exists(built.L, E, built.m);
        j["hom_exists"] = hw.has_value();
        RamData rd = ram_data(built.L);
        RescueResult rescue = find_unramified_rescue(built.L, E, rd.G.order());
        j["rescue_found"] = rescue.found;
        if (rescue.found) {
            j["rescue_degree"] = rescue.degree;
            j["contains_L_after"] = true;
            j["compositum"] = describe_tower(rescue.EK);
        }
        int code = rescue.found ? 0 : 1;
        return finish(std::move(j), code);
    } catch (const Error& e) {
        return error_result(std::move(j), e);
    }
}

CommandResult cmd_norms(const ExperimentConfig& cfg) {
    Json j = envelope("norms", cfg);
    try {
        BuiltExperiment built = build_extension(cfg);
        j["extension"] = describe_tower(built.L);
        if (!is_integer(built.m)) throw InvalidArgument("norm level m must be an integer");
        long m = to_long(Int(built.m.get_num()));
        RamData rd = ram_data(built.L);
        SurjectivityResult sur = norm_surjectivity_above_break(rd, m, cfg.depth);
        j["surjectivity_above_break"] =
            Json{{"ok", sur.ok}, {"hit", sur.hit}, {"total", sur.total}};
        CokernelResult ck = norm_cokernel(rd, m, cfg.depth);
        Json cj;
        cj["order"] = ck.order;
        cj["image_order"] = ck.image_order;
        cj["image_subgroup_ok"] = ck.image_subgroup_ok;
        std::vector<unsigned long> reps;
        for (const auto& r : ck.coset_reps)
            reps.push_back(built.L->residue_field()->to_index(r));
        cj["coset_reps"] = reps;
        cj["depth_image_order"] = ck.depth_image_order;
        cj["depth_consistency_ok"] = ck.depth_consistency_ok;
        j["cokernel"] = cj;
        j["cft_unit_index"] = cft_unit_index(rd, m);
        j["group_order"] = rd.G.order();
        GradedNormInfo gn = graded_norm(rd, m - 1);
        j["graded_at_break"] = Json{{"kernel_size", gn.kernel_size}, {"surjective", gn.surjective}};
        return finish(std::move(j), 0);
    } catch (const Error& e) {
        return error_result(std::move(j), e);
    }
}

CommandResult cmd_corpus(const ExperimentConfig& cfg) {
    Json j = envelope("corpus", cfg);
    try {
        BuiltExperiment built = build_extension(cfg);
        j["extension"] = describe_tower(built.L);
        CorpusSpec cs;
        cs.max_degree = cfg.corpus_max_degree;
        cs.coeff_val_bound = cfg.corpus_coeff_val_bound;
        long m = to_long(ceil_int(built.m));
        auto corpus = generate_corpus(built.L->base(), m, cs);
        Json arr = Json::array();
        for (const auto& ent : corpus) {
            Json row;
            row["label"] = ent.label;
            row["degree"] = ent.degree;
            row["different_exponent"] = ent.different_exponent;
            row["coeff_digit_codes"] = ent.coeff_digit_codes;
            arr.push_back(row);
        }
        j["corpus"] = arr;
        j["count"] = corpus.size();
        return finish(std::move(j), 0);
    } catch (const Error& e) {
        return error_result(std::move(j), e);
    }
}

CommandResult run_command(const std::string& name, const ExperimentConfig& cfg) {
    if (name == "ram") return cmd_ram(cfg);
    if (name == "pm") return cmd_pm(cfg);
    if (name == "witness") return cmd_witness(cfg);
    if (name == "rescue") return cmd_rescue(cfg);
    if (name == "norms") return cmd_norms(cfg);
    if (name == "corpus") return cmd_corpus(cfg);
    throw InvalidArgument("unknown command '" + name + "'");
}

} // namespace lf
