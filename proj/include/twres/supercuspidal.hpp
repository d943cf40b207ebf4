#pragma once

#include "twres/matlattice.hpp"

#include <array>
#include <optional>
#include <vector>

namespace twres {

enum class Subgroup { K, I0, I1, I2, C0, C };
/// Kutzko: lambda(h) = Lambda_1(tr(pi_E^-1 (h - 1))). Trivial: lambda = 1, so f_G = 1_C.
enum class LambdaChoice { Kutzko, Trivial };

/// Value of psi or f_G: zero, or zeta_p^exponent.
struct FValue {
    bool nonzero = false;
    int exponent = 0;
};

/// O / p^2 with lookup tables; an element is d0 + q*d1 for pi-adic digits d0, d1.
class ResidueRing2 {
public:
    explicit ResidueRing2(const LocalField& F);
    int q() const { return q_; }
    int size() const { return q_ * q_; }
    int add(int a, int b) const { return add_[static_cast<std::size_t>(a * size() + b)]; }
    int mul(int a, int b) const { return mul_[static_cast<std::size_t>(a * size() + b)]; }
    int d0(int a) const { return a % q_; }
    int d1(int a) const { return a / q_; }
    /// Inverse in F_p^x of a nonzero residue.
    int inv_residue(int r) const { return inv_[static_cast<std::size_t>(r)]; }
    int from_elem(const Elem& x) const;

private:
    int q_;
    std::vector<int> add_, mul_, inv_;
};

class KutzkoDatum {
public:
    explicit KutzkoDatum(FieldPtr F, LambdaChoice choice = LambdaChoice::Kutzko);

    const LocalField& field() const { return *F_; }
    FieldPtr field_ptr() const { return F_; }
    LambdaChoice choice() const { return choice_; }
    /// [[0, 1], [pi, 0]], squaring to pi I.
    Mat varpi_E() const;
    Mat varpi_E_inv() const;

    bool member(const Mat& g, Subgroup s) const;
    /// Exponent of lambda(g) for g in I_1 (DomainError otherwise).
    int lambda_exponent(const Mat& g) const;
    CharacterValue lambda(const Mat& g) const;
    /// Extension by zero of lambda from E^x I_1.
    FValue psi_value(const Mat& g) const;
    /// psi times the indicator of C = C_0 u pi_E C_0.
    FValue f_value(const Mat& g) const;
    CharacterValue psi(const Mat& g) const;
    CharacterValue f_G(const Mat& g) const;

    /// f(kappa X kappa^|-) from residues mod p^2; X integral with ord det X = j in {0, 1}.
    FValue f_conj_fast(const std::array<int, 4>& kappa, const std::array<int, 4>& X, int j) const;

    /// Exact average of f(kappa X kappa^|-) over kappa in GL_2(O) (vol K = 1), computed over GL_2(O/p^2).
    struct KAverage {
        std::vector<long> counts;  // per exponent
        long total = 1;            // |GL_2(O/p^2)|
        long support = 0;          // kappa classes in the support
        CharacterValue value(int p) const;
        bool is_zero(int p) const { return value(p).is_zero(); }
    };
    KAverage k_average(const Mat& X) const;
    /// First kappa mod p^2 (residues first, then lifts, lexicographically) with f(kappa X kappa^|-) != 0.
    std::optional<std::array<int, 4>> first_witness(const Mat& X) const;
    /// X integral with ord det in {0, 1}; otherwise f(kappa X kappa^|-) = 0 for every kappa.
    bool may_meet_support(const Mat& X, int* j) const;

    const ResidueRing2& ring2() const { return ring_; }

private:
    template <class Visit>
    void scan_kappa(const Mat& X, Visit&& visit) const;

    FieldPtr F_;
    LambdaChoice choice_;
    ResidueRing2 ring_;
};

/// kappa kappa^|- det(kappa)^-1 lies in I_2 (orthogonal n = 2 form).
bool kappa_vdash_congruence(const Mat& kappa);

}  // namespace twres
