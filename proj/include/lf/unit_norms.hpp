#ifndef LF_UNIT_NORMS_HPP
#define LF_UNIT_NORMS_HPP

#include <vector>

#include "lf/maxval.hpp"
#include "lf/ramification.hpp"

namespace lf {

// Norm to the unramified subfield: product of all conjugates.
Element norm(const GaloisGroup& G, const Element& x);
// Same, folded into the coefficient ring of the unramified subfield.
UnramElt norm_to_unram(const GaloisGroup& G, const Element& x);

// 1 + sum_{k in [a, a+len)} [d_k] pi^k for a digit window.
Element principal_unit(const TowerPtr& L, long a, const std::vector<FqElt>& window);

// Digits of a unit y of the unramified subfield below level b, as residue
// codes (the class key of y in U_K/U_K^b).
std::vector<unsigned long> unit_class_key(const TowerPtr& L, const UnramElt& y, int b);

struct SurjectivityResult {
    bool ok = false;
    long hit = 0;
    long total = 0;
};

// Lemma 4.3 consequence: norms from U_L^{psi(m-1)+1} cover U_K^m modulo
// U_K^{m+c}, verified by exhaustive digit enumeration.
SurjectivityResult norm_surjectivity_above_break(const RamData& rd, long m, int c,
                                                 Exec ex = Exec::serial);

struct CokernelResult {
    long order = 1;       // |U_K^{m-1} / (U_K^m N U_L^{psi(m-1)})|
    long image_order = 1; // |W|, the graded norm image at the break
    bool image_subgroup_ok = false;
    std::vector<FqElt> image;      // W as delta-digits in the residue field
    std::vector<FqElt> coset_reps; // smallest-index representative per coset
    long depth_image_order = 0;    // |S_c| at enumeration depth c
    bool depth_consistency_ok = false; // order * |S_c| == q^{c+1}
};

CokernelResult norm_cokernel(const RamData& rd, long m, int c);

// delta-invariant of u in U_K^{m-1}: the digit of u at level m-1.
FqElt cokernel_delta(const TowerPtr& L, const UnramElt& u, long m);
bool cokernel_class_trivial(const CokernelResult& ck, const FqElt& delta);

struct BaseChangeClassResult {
    int degree = 1;
    bool trivial_before = false;
    bool trivial_after = false;
};

// Lemma 4.4 functoriality: the image of the class of u under the unramified
// base change of degree d.
BaseChangeClassResult cokernel_class_base_change(const TowerPtr& L, long m, const UnramElt& u,
                                                 int d);

// [U_K : N U_L] by exhaustive enumeration of unit digit classes.
long cft_unit_index(const RamData& rd, long m);

struct GradedNormInfo {
    long kernel_size = 0;
    bool surjective = false;
};

// Graded norm U_L^{psi(u)}/U_L^{psi(u)+1} -> U_K^u/U_K^{u+1} for integer
// u >= m-1 (the regime of Lemma 4.3).
GradedNormInfo graded_norm(const RamData& rd, long u);

} // namespace lf

#endif
