#pragma once

#include "twres/supercuspidal.hpp"
#include "twres/twisted.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace twres {

/// value * q^(half_q_exp / 2).
struct MeasureValue {
    CharacterValue value;
    int half_q_exp = 0;
    std::string to_string() const;
};

struct TruncationSpec {
    int m = 3;          // requested kappa depth; f_G conjugates are exact at depth 2
    int b_window = 7;   // principal parts b with ord b >= -b_window
    int e_max = 6;      // shells ord(alpha - 1) in [1, e_max]; non-units with |ord alpha| <= e_max
    int k_max = 8;
    int workers = 1;
    void validate() const;
};

/// Principal parts b in F/O of order -j modulo multiplication by O^x2.
struct BOrbit {
    int j = 0;
    Elem b;
    long mult = 1;  // number of classes in F/O in the orbit
};

/// Orbits for ord b = -j (j = 0 is the single class b in O).
std::vector<BOrbit> b_orbits(const LocalField& F, int j);

enum class StratumKind { NonUnit, Generic, PlusOne, MinusOne };
const char* stratum_name(StratumKind k);

/// A coset alpha_0 (1 + p^(v+2)) of T = F^x (relative depth 2), with its d^x alpha volume.
struct GammaStratum {
    StratumKind kind;
    int level = 0;  // ord(alpha) for NonUnit, ord(alpha - 1) for PlusOne, 0 otherwise
    Elem alpha;
    Rational vol;
};

/// Representatives of every T-stratum inside the truncation window.
std::vector<GammaStratum> gamma_strata(const LocalField& F, const TruncationSpec& t);

/// One b-orbit at the forced a_i level for a fixed gamma.
struct CosetCell {
    int j = 0;
    long mult = 1;
    int i = 0;
    CharacterValue kavg;  // integral over K of f(kappa X kappa^|-)
    int delta() const { return i - j; }
};

/// Coset data of G/T for delta = S(gamma)^-1: |D_eps| and the nonzero cells.
struct GammaProfile {
    int d_eps_ord = 0;  // |D_eps(delta)| = q^-d_eps_ord
    int i = 0;          // the only a_i level meeting det valuations {0, 1}
    std::vector<CosetCell> cells;
    long cells_scanned = 0;
};

/// Scans b-orbits 0..b_window; TailNonzero if the boundary orbit contributes.
GammaProfile gamma_profile(const KutzkoDatum& f, const TorusElem& g, const TruncationSpec& t);

/// I_eps(S(gamma)^-1, f_G) with |D_eps|^(1/2) carried as a half power of q.
MeasureValue orbital_twisted(const KutzkoDatum& f, const TorusElem& g, const TruncationSpec& t);

/// Brute-force I_eps for an arbitrary f constant on kappa mod p^level:
/// every b-class of order >= -b_window (no orbit reduction), every a_i with |i| <= i_window,
/// kappa over GL_2(O/p^level). TailNonzero on boundary contributions.
MeasureValue orbital_twisted_bruteforce(const TorusElem& g, const std::function<CharacterValue(const Mat&)>& f,
                                        int level, int i_window, int b_window);

/// W_k(n_b a_i) with ord b = -j (b in O for j = 0), from the weights module.
Rational coset_weight(const LocalField& F, int i, int j, int k);

/// psi_k(gamma) = integral over G/T of f_G(g S(gamma)^-1 g^|-) W_k(g).
MeasureValue psi_k(const KutzkoDatum& f, const TorusElem& g, int k, const TruncationSpec& t);

struct StratumRow {
    GammaStratum stratum;
    GammaProfile profile;
};

struct CoefficientTable {
    int p = 0;
    std::vector<CharacterValue> c;  // c_0..c_kmax
    std::vector<StratumRow> rows;   // in stratum order
    long unit_square_classes = 0;
};

/// c_k = 2 * integral over T of |D_eps(gamma)| psi_k(gamma).
CoefficientTable assemble_coefficients(const KutzkoDatum& f, const TruncationSpec& t);

struct ABResult {
    MeasureValue A, B;
    std::vector<int> shells;                      // e = ord(alpha - 1)
    std::vector<CharacterValue> A_inc, B_inc;     // per-shell increments
};

/// A = int_T1 |D_eps| int (2 Delta + 1), B = 4 int_T1 |D_eps| vol, with the f_G K-averages as
/// the integrand (these vanish off G_e^-). Requires p = 2, ord 2 >= 2.
ABResult coefficient_A_B(const CoefficientTable& table);

/// Classification of alpha by the torus strata.
StratumKind stratum_of(const Elem& alpha);

struct SupportWitness {
    int i = 0;
    int j = 0;
    Elem b;
    std::array<int, 4> kappa{};  // entries mod p^2 as d0 + q d1
    int exponent = 0;            // f_G value zeta_p^exponent
};

struct SupportScanResult {
    StratumKind regime;
    std::optional<SupportWitness> witness;
    long strata_searched = 0;  // (i, b-orbit) cells examined
    int depth_requested = 0;
    int depth_effective = 2;
};

/// Searches g = kappa n_b a_i with f_G(g S(gamma)^-1 g^|-) != 0, b-orbits in order of j, kappa in scan order.
SupportScanResult support_scan(const KutzkoDatum& f, const TorusElem& g, int depth, int b_window);

/// R_G = integral over T of |D_eps| integral over K of f(kappa S^-1 kappa^|-), from the b = 0, i = 0 cells.
CharacterValue r_g_term(const CoefficientTable& table);

}  // namespace twres
