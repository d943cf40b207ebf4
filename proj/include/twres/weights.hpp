#pragma once

#include "twres/matlattice.hpp"

#include <map>
#include <optional>
#include <vector>

namespace twres {

/// Torus T = A T_c with A = diag(a_1..a_r, 1..1, a_r^-1..a_1^-1) and T_c in the lattice stabilizer.
struct ClubsuitTorus {
    int n = 2;
    int r = 1;
};

struct WeightQuery {
    Mat g;
    std::optional<Mat> h;  // identity when absent
    int k = 0;
    LatticeSpec L{};
    ClubsuitTorus torus{};
};

/// (Delta_1(g), ..., Delta_r(g)).
std::vector<int> delta_vector(const Mat& g, int r);

/// Closed form: 0 if some Delta_i < -2k' or a fixed middle column leaves the lattice,
/// else prod (Delta_i + 2k' + 1), with k' = k + i for L = pi^(-i) M_n(O). Requires h = 1.
long w_k_closed(const WeightQuery& q);

/// Volume of T cap pi^(-k) g^(-1) L h^(-1) by enumeration of split valuation vectors
/// (and of unit residues when h is present). General h requires r = n/2.
Rational w_k_oracle(const WeightQuery& q);

/// x_alpha = diag(alpha I_m, I_m).
Mat x_alpha(const Elem& alpha, int n);

/// sum over square classes of omega(alpha)^(-1) w_k(g x_alpha^(-1), h) at s = 0.
/// omega holds +-1 per representative of set.reps; empty means trivial.
Rational W_k(const Mat& g, const std::optional<Mat>& h, const SquareClassSet& set, const std::vector<int>& omega,
             int k, const ClubsuitTorus& torus, LatticeSpec L = {});

/// The same sum keyed by ord(alpha): the term carries |alpha|^(-ns) = q^(n s ord(alpha)).
std::map<int, Rational> W_k_symbolic(const Mat& g, const std::optional<Mat>& h, const SquareClassSet& set,
                                     const std::vector<int>& omega, int k, const ClubsuitTorus& torus,
                                     LatticeSpec L = {});

}  // namespace twres
