#ifndef LF_RAMIFICATION_HPP
#define LF_RAMIFICATION_HPP

#include <optional>
#include <vector>

#include "lf/plfunc.hpp"
#include "lf/poly.hpp"
#include "lf/tower.hpp"

namespace lf {

// Galois group of the Eisenstein step of a tower, acting over the
// unramified subfield. Automorphisms are the roots of the Eisenstein
// polynomial inside the tower itself; sigma_0 is the identity (root = pi).
struct GaloisGroup {
    TowerPtr L;
    std::vector<Element> roots;
    std::vector<std::vector<int>> table; // table[i][j]: sigma_i o sigma_j
    std::vector<int> inverse_idx;
    std::vector<long> jvals; // v_T(sigma pi - pi); jvals[0] is a sentinel
    bool abelian = false;

    int order() const { return static_cast<int>(roots.size()); }
    Element apply(int i, const Element& x) const;
    bool is_subgroup(const std::vector<int>& h) const;
    bool is_normal(const std::vector<int>& h) const;
};

GaloisGroup galois_group(const TowerPtr& L);

// Lower-numbering data; every other convention is an exact reindexing.
struct RamData {
    GaloisGroup G;
    std::vector<long> serre_jumps; // sorted integer jumps b with G_b != G_{b+1}
    PLFunc phi, psi;               // Herbrand functions, Serre convention
    PLFunc phi_tilde, psi_tilde;   // Fontaine convention
    std::optional<Rat> u_break;    // Fontaine upper break u_{L/K}
    std::optional<Rat> i_break;    // Fontaine lower break i_{L/K}
    bool trivial = false;
    bool tame = false;  // u <= 1
    bool wild = false;  // u > 1
    bool single_jump = false;

    // subgroup at integer Serre index i: {sigma : j(sigma) >= i+1}
    std::vector<int> subgroup_serre(long i) const;
};

RamData ram_data(const TowerPtr& L);

Rat upper_break(const RamData& rd); // throws TrivialExtension
Rat lower_break(const RamData& rd);

// abelian extensions only: all Fontaine upper jumps must be integers
bool hasse_arf_check(const RamData& rd);

enum class Convention { serre_lower, fontaine_lower, serre_upper, fontaine_upper };

struct FiltrationRow {
    Rat index;
    std::vector<int> members;
};
std::vector<FiltrationRow> filtration_rows(const RamData& rd, Convention cv);

// M = fixed subfield of Gal(L/K)^{(u_{L/K})}, in tower normal form, plus the
// data needed to present L/M relative to M = K(theta).
struct SubfieldData {
    TowerPtr M;
    std::vector<int> H;  // Gal(L/M) as indices into G
    Element theta;       // uniformizer of M inside L
    long e_MK = 1;
    Rat i_LK, i_LM;
    bool identity_ok = false; // i_LM == e_MK * i_LK
    PLFunc psi_LM;            // Serre psi of L/M from the restricted filtration
    Rat u_LM;                 // Fontaine upper break of L/M
    // coefficient k of the minimal polynomial of pi_L over M, written as
    // sum_j coeff_in_theta[k][j] theta^j with entries in the coefficient ring
    std::vector<std::vector<UnramElt>> g_coeffs_in_theta;
};

SubfieldData single_jump_subfield(const RamData& rd);

// Tower presented by the minimal polynomial of u*pi for a unit u of the
// unramified subfield (for uniformizer-independence checks).
TowerPtr scaled_uniformizer_tower(const TowerPtr& L, const UnramElt& u);

// Solve sum_j b_j col_j = rhs over the coefficient ring by Gaussian
// elimination with unit pivots; cols/rhs are integral coefficient vectors.
std::vector<UnramElt> local_solve(const UnramRing& R, int e,
                                  const std::vector<std::vector<UnramElt>>& cols,
                                  const std::vector<UnramElt>& rhs, int n);

// Fold an integral element to a coefficient vector with zero shift.
std::vector<UnramElt> coeff_vector(const Element& x);
// Element of the unramified subfield: top coefficient slots must vanish.
UnramElt to_unram(const Element& x, long check_prec);

} // namespace lf

#endif
