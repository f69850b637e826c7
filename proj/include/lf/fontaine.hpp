#ifndef LF_FONTAINE_HPP
#define LF_FONTAINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "lf/unit_norms.hpp"

namespace lf {

// Monic Eisenstein polynomial of the tower, as a polynomial over its
// unramified subfield.
TPoly defining_poly_over_base(const TowerPtr& L);

struct HomWitness {
    TowerPtr L, E;
    Rat m;
    bool above_precision = false;     // f(beta) indistinguishable from zero
    std::optional<Rat> achieved;      // exact v_K(f(beta)) when measurable
    std::vector<FqElt> beta_digits;   // digits of beta below v_K = m
    Element beta;
};

// O_K-algebra homomorphism O_L -> O_E/a^m exists iff some integral beta has
// v_K(f(beta)) >= m; decided exactly by the capped branch-and-bound.
std::optional<HomWitness> hom_exists(const TowerPtr& L, const TowerPtr& E, const Rat& m);

// E generated by a root of x^e + a_{e-1}x^{e-1} + ... + a_1 x + u a_0.
TowerPtr witness_extension(const TowerPtr& L, const UnramElt& u, long m);

struct RescueResult {
    bool found = false;
    int degree = 1;      // [K':K]
    TowerPtr EK;         // E base-changed by K' (contains a root of f_L)
    std::vector<int> degrees_tried;
};

// Smallest unramified K' with degree dividing group_order such that f_L has
// a root in E K'. Absolute degree of E K' over the base is capped.
RescueResult find_unramified_rescue(const TowerPtr& L, const TowerPtr& E, int group_order,
                                    int degree_cap = 12);

// The paper's normalization of the witness root: the ratio u' = pi_E/pi_L in
// the compositum lies in U^{psi(m-1)} of L and has norm u.
struct RatioCheckResult {
    bool level_ok = false; // v_L(u' - 1) >= psi_{L/K}(m-1)
    bool norm_ok = false;  // N(u') = u
    Rat level;
};
RatioCheckResult witness_ratio_check(const TowerPtr& L, const TowerPtr& E, long m,
                                     const UnramElt& u, const RescueResult& rescue);

// Section-2 lemma: hom at level u_{L/K} over K iff (M in E and hom at level
// u_{L/M} over M), both sides evaluated independently.
bool reduction_equivalence_check(const RamData& rd, const SubfieldData& sd, const TowerPtr& E);

struct PsiIdentityResult {
    bool ok = false;
    bool infinite = false; // beta indistinguishable from a conjugate
    Rat lhs, rhs;          // psi~(v_K f(beta)) and max_sigma v_K(beta - sigma alpha)
};
// T must contain L (all conjugates of pi_L found in T) and beta must be an
// integral element of T.
PsiIdentityResult psi_identity_check(const TowerPtr& L, const TowerPtr& T, const Element& beta);
// same check with the ramification data and conjugate set precomputed (for
// batched trials)
PsiIdentityResult psi_identity_check_pre(const RamData& rd, const TPoly& f_in_T,
                                         const std::vector<Element>& conjugates,
                                         const TowerPtr& T, const Element& beta);

struct ModuleCheckResult {
    bool beta_val_ok = false;   // v_K(beta) = 1/n
    bool killed_ok = false;     // a_{L/K}^m kills T
    bool torsion_ok = false;    // T[pi_L] = pi_L^{nm-1} T
    bool rank_ok = false;       // T free over O_L/a^m of the forced rank
    long rank = 0;
    bool ok = false;
};
ModuleCheckResult module_structure_check(const TowerPtr& L, const TowerPtr& E, long m,
                                         const Element& beta);

// Lemma 4.4 <-> Prop 5.1(1) mechanism: the coset of u is trivial in the norm
// cokernel iff the witness extension of u contains L.
bool witness_cokernel_correspondence(const TowerPtr& L, long m);

struct CorpusSpec {
    int max_degree = 4;
    long coeff_val_bound = 0; // 0: use m + 1
    bool include_trivial = true;
    bool dedup = true;
};

struct CorpusEntry {
    TowerPtr E;
    int degree = 1;
    long different_exponent = 0; // v_E(f'(pi_E)), an invariant of the extension
    std::string label;
    std::vector<std::vector<unsigned long>> coeff_digit_codes;
};

std::vector<CorpusEntry> generate_corpus(const BaseSpec& base, long m, const CorpusSpec& cs);

struct CandidateVerdict {
    std::string label;
    int degree = 1;
    bool hom_at_m = false;
    bool contains_L = false;
    bool hom_at_next = false; // level u+1
    std::optional<int> rescue_degree;
    std::string error;
};

struct PmReport {
    std::string extension;
    Rat m;
    Rat u_break;
    bool m_is_break = false;
    bool wild = false;
    std::string verdict; // refuted | consistent-with-(P_m) | theorem-confirmed-failure
    // the constructed witness (when the theorem predicts failure)
    std::string witness_label;
    std::vector<unsigned long> witness_unit_digits;
    bool witness_hom = false;
    bool witness_contains = false;
    std::optional<int> witness_rescue_degree;
    bool bracket_above_ok = false;   // no corpus hom at u+1 without containment
    bool bracket_below_ok = false;   // witnesses exist at every integer level < u
    std::vector<CandidateVerdict> corpus;
    std::vector<std::string> errors;
};

PmReport pm_experiment(const TowerPtr& L, const Rat& m, const CorpusSpec& cs);

} // namespace lf

#endif
