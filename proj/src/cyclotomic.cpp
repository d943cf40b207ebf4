#include "twres/cyclotomic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace twres {

CharacterValue::CharacterValue(int p) : p_(p), c_(static_cast<std::size_t>(p)) {
    if (p < 2) throw std::invalid_argument("CharacterValue: p must be >= 2");
}

CharacterValue CharacterValue::rational(int p, const Rational& r) {
    CharacterValue v(p);
    v.c_[0] = r;
    return v;
}

CharacterValue CharacterValue::root_of_unity(int p, long exponent) {
    CharacterValue v(p);
    long j = exponent % p;
    if (j < 0) j += p;
    v.c_[static_cast<std::size_t>(j)] = 1;
    v.canonicalize();
    return v;
}

void CharacterValue::canonicalize() {
    const Rational last = c_.back();
    if (last == 0) return;
    for (auto& x : c_) x -= last;
}

bool CharacterValue::is_zero() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

bool CharacterValue::is_rational() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

bool CharacterValue::is_root_of_unity(int* exponent) const {
    if (p_ == 0) return false;
    for (int j = 0; j < p_; ++j) {
        if (*this == root_of_unity(p_, j)) {
            if (exponent) *exponent = j;
            return true;
        }
    }
    return false;
}

CharacterValue& CharacterValue::operator+=(const CharacterValue& o) {
    if (p_ == 0) *this = CharacterValue(o.p_);
    if (o.p_ == 0) return *this;
    if (o.p_ != p_) throw std::invalid_argument("CharacterValue: mismatched p");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

CharacterValue& CharacterValue::operator-=(const CharacterValue& o) {
    if (p_ == 0) *this = CharacterValue(o.p_);
    if (o.p_ == 0) return *this;
    if (o.p_ != p_) throw std::invalid_argument("CharacterValue: mismatched p");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

CharacterValue& CharacterValue::operator*=(const Rational& r) {
    for (auto& x : c_) x *= r;
    return *this;
}

CharacterValue operator*(const CharacterValue& a, const CharacterValue& b) {
    if (a.p_ != b.p_) throw std::invalid_argument("CharacterValue: mismatched p");
    CharacterValue out(a.p_);
    const std::size_t p = static_cast<std::size_t>(a.p_);
    for (std::size_t i = 0; i < p; ++i) {
        if (a.c_[i] == 0) continue;
        for (std::size_t j = 0; j < p; ++j) {
            if (b.c_[j] == 0) continue;
            out.c_[(i + j) % p] += a.c_[i] * b.c_[j];
        }
    }
    out.canonicalize();
    return out;
}

bool operator==(const CharacterValue& a, const CharacterValue& b) {
    if (a.p_ == 0 || b.p_ == 0) return (a.p_ == 0 ? b.is_zero() || b.p_ == 0 : a.is_zero());
    return a.p_ == b.p_ && a.c_ == b.c_;
}

double CharacterValue::real_part() const {
    double s = 0.0;
    for (int j = 0; j < p_; ++j)
        s += c_[static_cast<std::size_t>(j)].get_d() * std::cos(2.0 * std::numbers::pi * j / p_);
    return s;
}

std::string rational_to_string(const Rational& r) { return r.get_str(); }

std::string CharacterValue::to_string() const {
    if (p_ == 0 || is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int j = 0; j < p_; ++j) {
        const auto& x = c_[static_cast<std::size_t>(j)];
        if (x == 0) continue;
        if (!first) os << " + ";
        first = false;
        if (j == 0) {
            os << x.get_str();
        } else {
            os << "(" << x.get_str() << ")*z^" << j;
        }
    }
    return os.str();
}

}  // namespace twres
