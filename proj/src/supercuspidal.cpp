#include "twres/supercuspidal.hpp"

namespace twres {

ResidueRing2::ResidueRing2(const LocalField& F) : q_(F.q()) {
    const int s = size();
    std::vector<Elem> el;
    el.reserve(static_cast<std::size_t>(s));
    for (int a = 0; a < s; ++a) el.push_back(Elem::from_digits(F, 0, {a % q_, a / q_}));
    add_.resize(static_cast<std::size_t>(s * s));
    mul_.resize(static_cast<std::size_t>(s * s));
    for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b) {
            add_[static_cast<std::size_t>(a * s + b)] = from_elem(el[a] + el[b]);
            mul_[static_cast<std::size_t>(a * s + b)] = from_elem(el[a] * el[b]);
        }
    inv_.assign(static_cast<std::size_t>(q_), 0);
    for (int r = 1; r < q_; ++r)
        for (int t = 1; t < q_; ++t)
            if (r * t % q_ == 1) inv_[static_cast<std::size_t>(r)] = t;
}

int ResidueRing2::from_elem(const Elem& x) const {
    if (!x.ord_ge(0)) throw DomainError("residue mod p^2 of a non-integral element");
    auto d = x.digits(0, 2);
    return d[0] + q_ * d[1];
}

KutzkoDatum::KutzkoDatum(FieldPtr F, LambdaChoice choice)
    : F_(std::move(F)), choice_(choice), ring_(*F_) {
    if (F_->p() == 2 && F_->ord2() < 2)
        throw DomainError("even residue characteristic needs ord(2) >= 2");
}

Mat KutzkoDatum::varpi_E() const {
    const auto& F = *F_;
    return Mat::from_rows({{Elem::zero(F), Elem::from_int(F, 1)}, {Elem::pi_pow(F, 1), Elem::zero(F)}});
}

Mat KutzkoDatum::varpi_E_inv() const {
    const auto& F = *F_;
    return Mat::from_rows({{Elem::zero(F), Elem::pi_pow(F, -1)}, {Elem::from_int(F, 1), Elem::zero(F)}});
}

namespace {

bool is_unit(const Elem& x) { return x.ord_ge(0) && !x.ord_ge(1); }
bool one_mod(const Elem& x, int j) { return (x - Elem::from_int(x.field(), 1)).ord_ge(j); }

bool in_i0(const Mat& g) {
    return g(0, 1).ord_ge(0) && g(1, 0).ord_ge(1) && is_unit(g(0, 0)) && is_unit(g(1, 1));
}

bool in_c0(const Mat& g) { return in_i0(g) && g(0, 0).residue() == g(1, 1).residue(); }

// Y in C_0 reduced to lambda: residue of (Y12 + Y21/pi) / Y11.
int c0_exponent(const Mat& Y) {
    const auto& F = Y.field();
    Elem t = (Y(0, 1) + Y(1, 0) * Elem::pi_pow(F, -1)) / Y(0, 0);
    return t.residue();
}

}  // namespace

bool KutzkoDatum::member(const Mat& g, Subgroup s) const {
    if (g.n() != 2) throw DomainError("subgroup membership is for GL_2");
    switch (s) {
    case Subgroup::K:
        return mat_ord_ge(g, 0) && is_unit(g.det());
    case Subgroup::I0:
        return in_i0(g);
    case Subgroup::I1:
        return in_i0(g) && one_mod(g(0, 0), 1) && one_mod(g(1, 1), 1);
    case Subgroup::I2:
        return g(0, 1).ord_ge(1) && g(1, 0).ord_ge(2) && one_mod(g(0, 0), 2) && one_mod(g(1, 1), 2);
    case Subgroup::C0:
        return in_c0(g);
    case Subgroup::C: {
        int j = g.det().ord();
        if (j == 0) return in_c0(g);
        if (j == 1) return in_c0(varpi_E_inv() * g);
        return false;
    }
    }
    return false;
}

int KutzkoDatum::lambda_exponent(const Mat& g) const {
    if (!member(g, Subgroup::I1)) throw DomainError("lambda is defined on I_1");
    if (choice_ == LambdaChoice::Trivial) return 0;
    return c0_exponent(g);
}

CharacterValue KutzkoDatum::lambda(const Mat& g) const {
    return CharacterValue::root_of_unity(F_->p(), lambda_exponent(g));
}

FValue KutzkoDatum::psi_value(const Mat& g) const {
    const auto& F = *F_;
    int j = g.det().ord();
    // pi_E^-j = pi^(-floor(j/2)) pi_E^-(j mod 2)
    int h = j >= 0 ? j / 2 : -((-j + 1) / 2);
    Mat Y = Elem::pi_pow(F, -h) * g;
    if (j - 2 * h == 1) Y = varpi_E_inv() * Y;
    if (!in_c0(Y)) return {};
    return {true, choice_ == LambdaChoice::Trivial ? 0 : c0_exponent(Y)};
}

FValue KutzkoDatum::f_value(const Mat& g) const {
    int j = g.det().ord();
    if (j != 0 && j != 1) return {};
    return psi_value(g);
}

CharacterValue KutzkoDatum::psi(const Mat& g) const {
    auto v = psi_value(g);
    return v.nonzero ? CharacterValue::root_of_unity(F_->p(), v.exponent) : CharacterValue::zero(F_->p());
}

CharacterValue KutzkoDatum::f_G(const Mat& g) const {
    auto v = f_value(g);
    return v.nonzero ? CharacterValue::root_of_unity(F_->p(), v.exponent) : CharacterValue::zero(F_->p());
}

FValue KutzkoDatum::f_conj_fast(const std::array<int, 4>& k, const std::array<int, 4>& X, int j) const {
    const auto& R = ring_;
    auto dot = [&](int a, int x, int b, int y) { return R.add(R.mul(a, x), R.mul(b, y)); };
    const int A = k[0], B = k[1], C = k[2], D = k[3];
    // M = kappa X, Z = M kappa^|- with kappa^|- = [[D, B], [C, A]]
    int m11 = dot(A, X[0], B, X[2]), m12 = dot(A, X[1], B, X[3]);
    int m21 = dot(C, X[0], D, X[2]), m22 = dot(C, X[1], D, X[3]);
    int z11 = dot(m11, D, m12, C), z12 = dot(m11, B, m12, A);
    int z21 = dot(m21, D, m22, C), z22 = dot(m21, B, m22, A);
    const int p = R.q();
    if (j == 0) {
        if (R.d0(z21) != 0 || R.d0(z11) == 0 || R.d0(z11) != R.d0(z22)) return {};
        if (choice_ == LambdaChoice::Trivial) return {true, 0};
        return {true, (R.d0(z12) + R.d1(z21)) * R.inv_residue(R.d0(z11)) % p};
    }
    if (R.d0(z21) != 0 || R.d1(z21) == 0 || R.d0(z22) != 0 || R.d0(z11) != 0 || R.d0(z12) != R.d1(z21))
        return {};
    if (choice_ == LambdaChoice::Trivial) return {true, 0};
    return {true, (R.d1(z22) + R.d1(z11)) * R.inv_residue(R.d1(z21)) % p};
}

bool KutzkoDatum::may_meet_support(const Mat& X, int* j) const {
    if (!mat_ord_ge(X, 0)) return false;
    int d = X.det().ord();
    if (d != 0 && d != 1) return false;
    if (j) *j = d;
    return true;
}

// Visits kappa mod p^2 whose reduction mod p passes the mod-p shape test, ordered by
// (residues, then first-digit lifts) lexicographically; visit returns false to stop.
template <class Visit>
void KutzkoDatum::scan_kappa(const Mat& X, Visit&& visit) const {
    int j = 0;
    if (!may_meet_support(X, &j)) return;
    const auto& R = ring_;
    const int q = R.q();
    std::array<int, 4> x{R.from_elem(X(0, 0)), R.from_elem(X(0, 1)), R.from_elem(X(1, 0)), R.from_elem(X(1, 1))};
    std::array<int, 4> xr{};
    for (int i = 0; i < 4; ++i) xr[i] = R.d0(x[i]);
    auto md = [q](long v) { return static_cast<int>(((v % q) + q) % q); };
    const int q4 = q * q * q * q;
    for (int rc = 0; rc < q4; ++rc) {
        const int a = rc / (q * q * q), b = rc / (q * q) % q, c = rc / q % q, d = rc % q;
        if (md(long(a) * d - long(b) * c) == 0) continue;
        int m11 = md(a * xr[0] + b * xr[2]), m12 = md(a * xr[1] + b * xr[3]);
        int m21 = md(c * xr[0] + d * xr[2]), m22 = md(c * xr[1] + d * xr[3]);
        int z11 = md(m11 * d + m12 * c), z12 = md(m11 * b + m12 * a);
        int z21 = md(m21 * d + m22 * c), z22 = md(m21 * b + m22 * a);
        bool shape = j == 0 ? (z21 == 0 && z11 != 0 && z11 == z22)
                            : (z11 == 0 && z22 == 0 && z21 == 0 && z12 != 0);
        if (!shape) continue;
        for (int lc = 0; lc < q4; ++lc) {
            std::array<int, 4> k{a + q * (lc / (q * q * q)), b + q * (lc / (q * q) % q), c + q * (lc / q % q),
                                 d + q * (lc % q)};
            if (!visit(k, f_conj_fast(k, x, j))) return;
        }
    }
}

CharacterValue KutzkoDatum::KAverage::value(int p) const {
    CharacterValue v = CharacterValue::zero(p);
    for (std::size_t i = 0; i < counts.size(); ++i)
        if (counts[i]) v += CharacterValue::root_of_unity(p, static_cast<long>(i)) * Rational(counts[i]);
    Rational inv(1, total);
    inv.canonicalize();
    return v * inv;
}

KutzkoDatum::KAverage KutzkoDatum::k_average(const Mat& X) const {
    const long q = F_->q();
    KAverage out;
    out.counts.assign(static_cast<std::size_t>(q), 0);
    out.total = (q * q - 1) * (q * q - q) * q * q * q * q;
    scan_kappa(X, [&](const std::array<int, 4>&, const FValue& v) {
        if (v.nonzero) {
            ++out.counts[static_cast<std::size_t>(v.exponent)];
            ++out.support;
        }
        return true;
    });
    return out;
}

std::optional<std::array<int, 4>> KutzkoDatum::first_witness(const Mat& X) const {
    std::optional<std::array<int, 4>> w;
    scan_kappa(X, [&](const std::array<int, 4>& k, const FValue& v) {
        if (!v.nonzero) return true;
        w = k;
        return false;
    });
    return w;
}

bool kappa_vdash_congruence(const Mat& kappa) {
    const auto& F = kappa.field();
    auto form = GroupForm::orthogonal(F, 2);
    Mat y = kappa.det().inverse() * (kappa * vdash(kappa, form));
    Elem one = Elem::from_int(F, 1);
    return y(0, 1).ord_ge(1) && y(1, 0).ord_ge(2) && (y(0, 0) - one).ord_ge(2) && (y(1, 1) - one).ord_ge(2);
}

}  // namespace twres
