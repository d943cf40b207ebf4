#pragma once

#include "twres/cyclotomic.hpp"
#include "twres/errors.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace twres {

inline constexpr int kInfOrd = std::numeric_limits<int>::max() / 4;
inline constexpr int kMaxRamification = 6;

/// Residues of O = Z_p[pi]/(E(pi)) modulo p^M, as e coefficients in base 1, pi, ..., pi^(e-1).
struct RingVec {
    std::array<std::uint64_t, kMaxRamification> a{};
    friend bool operator==(const RingVec&, const RingVec&) = default;
};

class Elem;

/// A totally ramified extension F/Q_p cut out by an Eisenstein polynomial.
///
/// Storage works modulo p^M with p^M < 2^62, so every element carries up to
/// capacity() = e*M known pi-adic digits. The context precision N is the
/// absolute level below which a cancellation zero counts as undetermined.
class LocalField {
public:
    /// eisenstein lists integer coefficients constant-to-leading; leading must be 1.
    static std::shared_ptr<const LocalField> make(int p, int e, std::vector<long> eisenstein,
                                                  int precision);

    int p() const { return p_; }
    int e() const { return e_; }
    int q() const { return p_; }
    int precision() const { return n_; }
    int capacity() const { return e_ * m_; }
    std::uint64_t modulus() const { return mod_; }
    const std::vector<long>& eisenstein() const { return eis_; }
    /// ord_pi(2); equals e when p = 2 and 0 otherwise.
    int ord2() const { return p_ == 2 ? e_ : 0; }

    // Ring arithmetic on residues mod p^M.
    RingVec ring_from_int(long n) const;
    RingVec add(const RingVec& x, const RingVec& y) const;
    RingVec sub(const RingVec& x, const RingVec& y) const;
    RingVec neg(const RingVec& x) const;
    RingVec mul(const RingVec& x, const RingVec& y) const;
    RingVec mul_pi(const RingVec& x) const;
    /// Exact division by pi; x must have ord >= 1. The top pi-adic digit becomes garbage.
    RingVec div_pi(const RingVec& x) const;
    /// Multiplicative inverse of a ring unit (ord 0).
    RingVec inv_unit(const RingVec& x) const;
    /// pi-adic valuation of a ring residue; capacity() when it is zero mod p^M.
    int ring_ord(const RingVec& x) const;
    RingVec ring_pi_pow(int k) const;
    RingVec random_ring(std::mt19937_64& rng) const;

    /// Serialize as the plain-text config block (keys p, e, eisenstein, precision).
    std::string to_config_block() const;

private:
    LocalField() = default;
    std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) const;

    int p_ = 0, e_ = 0, n_ = 0, m_ = 0;
    std::uint64_t mod_ = 0;
    std::vector<long> eis_;
    std::array<std::uint64_t, kMaxRamification> neg_c_{};  // pi^e = sum neg_c_[i] pi^i
    RingVec div_num_{};                                     // pi^(e-1) + c_(e-1) pi^(e-2) + ... + c_1
    std::uint64_t div_unit_inv_ = 0;                        // (-c_0/p)^(-1) mod p^M
};

using FieldPtr = std::shared_ptr<const LocalField>;

/// Field element pi^val * unit, with `rel` known pi-adic digits of the unit.
///
/// Zero is val == kInfOrd; its `rel` slot then holds the absolute precision
/// (kInfOrd for a literal zero, finite for a cancellation zero).
class Elem {
public:
    Elem() = default;

    static Elem zero(const LocalField& F);
    static Elem from_int(const LocalField& F, long n);
    static Elem pi_pow(const LocalField& F, int k);
    /// pi^val * (d_0 + d_1 pi + ...), digits in [0, p).
    static Elem from_digits(const LocalField& F, int val, const std::vector<int>& digits);
    static Elem from_ring(const LocalField& F, const RingVec& r, int base_val, int known_digits);
    /// Uniform unit times pi^val.
    static Elem random_unit(const LocalField& F, std::mt19937_64& rng, int val = 0);
    /// Random element of pi^lo O with val in [lo, hi] or zero with small probability.
    static Elem random(const LocalField& F, std::mt19937_64& rng, int lo, int hi);

    const LocalField& field() const { return *f_; }
    const LocalField* field_ptr() const { return f_; }
    bool is_zero() const { return val_ == kInfOrd; }
    bool is_exact_zero() const { return is_zero() && rel_ == kInfOrd; }
    /// Valuation; kInfOrd for zero. Throws PrecisionExhausted for a cancellation
    /// zero whose absolute precision is below the context precision N.
    int ord() const;
    /// Decides ord(x) >= j; throws PrecisionExhausted when undecidable.
    bool ord_ge(int j) const;
    int raw_val() const { return val_; }
    int rel() const { return rel_; }
    /// Absolute precision val + rel (kInfOrd for exact values beyond capacity).
    int absprec() const;
    const RingVec& unit() const { return u_; }

    /// Residue in F_p of an integral element; 0 for elements of p.
    int residue() const;
    /// The first `count` pi-adic digits of x starting at pi^from (x integral at that level).
    std::vector<int> digits(int from, int count) const;
    /// Unit digits d_0, d_1, ... of the unit part (up to rel, capped at count).
    std::vector<int> unit_digits(int count) const;

    Elem operator-() const;
    Elem inverse() const;
    friend Elem operator+(const Elem& x, const Elem& y);
    friend Elem operator-(const Elem& x, const Elem& y) { return x + (-y); }
    friend Elem operator*(const Elem& x, const Elem& y);
    friend Elem operator/(const Elem& x, const Elem& y) { return x * y.inverse(); }
    Elem& operator+=(const Elem& y) { return *this = *this + y; }
    Elem& operator-=(const Elem& y) { return *this = *this - y; }
    Elem& operator*=(const Elem& y) { return *this = *this * y; }
    /// Equal at the tracked precision: the difference is a zero.
    friend bool operator==(const Elem& x, const Elem& y) { return (x - y).is_zero(); }
    friend bool operator!=(const Elem& x, const Elem& y) { return !(x == y); }

    /// "pi^v * (d_0 + d_1 pi + ...)" over at most `max_digits` digits.
    std::string to_string(int max_digits = 8) const;

private:
    static Elem make_zero(const LocalField* F, int absprec);

    const LocalField* f_ = nullptr;
    int val_ = kInfOrd;
    int rel_ = kInfOrd;
    RingVec u_{};
};

/// Representatives of F^x / F^x2 and O^x / O^x2.
struct SquareClassSet {
    std::vector<Elem> reps;       // F^x / F^x2, unit classes first
    std::vector<Elem> unit_reps;  // O^x / O^x2
    int level = 1;                // Hensel level 2*ord(2)+1 used to decide squares
    std::size_t size() const { return reps.size(); }
    std::size_t unit_count() const { return unit_reps.size(); }
};

SquareClassSet square_class_reps(const LocalField& F);
/// x is a square in F^x (decided at the Hensel level).
bool is_square(const Elem& x);
/// Index of the class of x in set.reps.
std::size_t square_class_of(const SquareClassSet& set, const Elem& x);

/// The additive character with kernel exactly p: x -> zeta_p^(residue of x), defined on O.
CharacterValue additive_char(const Elem& x);
/// Residue exponent of additive_char; avoids building a CharacterValue in hot loops.
int additive_char_exponent(const Elem& x);

/// Parse "1+pi^2", "-1+3*pi", "pi^-1", "5", "2*pi^3+1" into a field element.
Elem parse_elem(const LocalField& F, const std::string& text);

}  // namespace twres
