#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace twres {

using Rational = mpq_class;

/// Exact element of Q[zeta_p], kept in the basis 1, zeta, ..., zeta^(p-2).
///
/// Internally a length-p coefficient vector over the group ring Q[Z/p];
/// canonicalization subtracts the zeta^(p-1) coordinate from every slot,
/// which is the relation 1 + zeta + ... + zeta^(p-1) = 0.
class CharacterValue {
public:
    CharacterValue() = default;
    explicit CharacterValue(int p);

    static CharacterValue zero(int p) { return CharacterValue(p); }
    static CharacterValue one(int p) { return root_of_unity(p, 0); }
    static CharacterValue rational(int p, const Rational& r);
    /// zeta_p^exponent, exponent taken mod p.
    static CharacterValue root_of_unity(int p, long exponent);

    int p() const { return p_; }
    /// Coefficient of zeta^i in the canonical basis (i < p-1; slot p-1 is always 0).
    const Rational& coeff(int i) const { return c_[static_cast<std::size_t>(i)]; }
    const std::vector<Rational>& coeffs() const { return c_; }

    bool is_zero() const;
    /// True when the value is exactly zeta^j for some j; j is written to *exponent.
    bool is_root_of_unity(int* exponent = nullptr) const;
    /// True when every non-constant coordinate vanishes.
    bool is_rational() const;

    CharacterValue& operator+=(const CharacterValue& o);
    CharacterValue& operator-=(const CharacterValue& o);
    CharacterValue& operator*=(const Rational& r);
    friend CharacterValue operator+(CharacterValue a, const CharacterValue& b) { return a += b; }
    friend CharacterValue operator-(CharacterValue a, const CharacterValue& b) { return a -= b; }
    friend CharacterValue operator*(CharacterValue a, const Rational& r) { return a *= r; }
    friend CharacterValue operator*(const CharacterValue& a, const CharacterValue& b);
    friend bool operator==(const CharacterValue& a, const CharacterValue& b);
    friend bool operator!=(const CharacterValue& a, const CharacterValue& b) { return !(a == b); }

    /// Complex embedding zeta -> exp(2 pi i / p); used only by numeric cross-checks.
    double real_part() const;

    std::string to_string() const;

private:
    void canonicalize();

    int p_ = 0;
    std::vector<Rational> c_;
};

std::string rational_to_string(const Rational& r);

}  // namespace twres
