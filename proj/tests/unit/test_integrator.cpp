#include <doctest.h>

#include "twres/integrator.hpp"

#include <map>
#include <set>

using namespace twres;

namespace {

FieldPtr q5() { return LocalField::make(5, 1, {-5, 1}, 24); }
FieldPtr q3() { return LocalField::make(3, 1, {-3, 1}, 24); }
FieldPtr q2s2() { return LocalField::make(2, 2, {-2, 0, 1}, 40); }

Elem I(const LocalField& F, long n) { return Elem::from_int(F, n); }
Elem pi(const LocalField& F, int k) { return Elem::pi_pow(F, k); }

TruncationSpec spec(int e_max, int workers = 1) {
    TruncationSpec t;
    t.e_max = e_max;
    t.b_window = e_max + 1;
    t.k_max = 6;
    t.workers = workers;
    return t;
}

// Orbits of (O/p^j)^x under squares, by direct enumeration; returns sorted sizes.
std::multiset<long> brute_orbit_sizes(const LocalField& F, int j) {
    const int q = F.q();
    long n = 1;
    for (int t = 0; t < j; ++t) n *= q;
    auto el = [&](long c) {
        std::vector<int> d;
        for (int t = 0; t < j; ++t, c /= q) d.push_back(static_cast<int>(c % q));
        return Elem::from_digits(F, 0, d);
    };
    auto code = [&](const Elem& x) {
        auto d = x.digits(0, j);
        long c = 0;
        for (int t = j - 1; t >= 0; --t) c = c * q + d[static_cast<std::size_t>(t)];
        return c;
    };
    std::set<long> squares;
    for (long s = 0; s < n; ++s)
        if (s % q) squares.insert(code(el(s) * el(s)));
    std::vector<long> comp(static_cast<std::size_t>(n), -1);
    std::multiset<long> sizes;
    for (long u = 0; u < n; ++u) {
        if (u % q == 0 || comp[static_cast<std::size_t>(u)] >= 0) continue;
        long size = 0;
        for (long s : squares) {
            long c = code(el(u) * el(s));
            if (comp[static_cast<std::size_t>(c)] < 0) ++size;
            comp[static_cast<std::size_t>(c)] = u;
        }
        sizes.insert(size);
    }
    return sizes;
}

Rational stratum_weight(const KutzkoDatum& K, const Elem& alpha, const Rational& vol, const TruncationSpec& t) {
    auto mv = orbital_twisted(K, TorusElem{alpha}, t);
    Rational r = mv.value.coeff(0) * vol;
    REQUIRE(mv.value.is_rational());
    for (int s = 0; s < -mv.half_q_exp; ++s) r /= K.field().q();
    return r;
}

}  // namespace

TEST_CASE("b-orbits match brute-force square orbits") {
    for (auto F : {q5(), q2s2(), q3()}) {
        const int q = F->q();
        for (int j = 0; j <= (q == 2 ? 7 : 4); ++j) {
            auto orbits = b_orbits(*F, j);
            long total = 0;
            std::multiset<long> sizes;
            for (const auto& o : orbits) {
                total += o.mult;
                sizes.insert(o.mult);
                if (j > 0) CHECK(o.b.ord() == -j);
            }
            long expect = j == 0 ? 1 : (q - 1);
            for (int t = 1; t < j; ++t) expect *= q;
            CHECK(total == expect);
            if (j > 0) CHECK(sizes == brute_orbit_sizes(*F, j));
        }
    }
}

TEST_CASE("torus strata volumes add up") {
    for (auto F : {q5(), q2s2(), q3()}) {
        auto t = spec(4);
        Rational sum = 0;
        for (const auto& s : gamma_strata(*F, t)) sum += s.vol;
        const int q = F->q();
        Rational tail(1, (q - 1) * q * q * q * q);
        tail.canonicalize();
        CHECK(sum == Rational(2 * t.e_max + 1) - tail);
    }
}

TEST_CASE("relative depth 2 resolves the torus integrand") {
    // Refine every representative alpha_0 (1 + p^(v+2)) into q cosets at depth 3.
    for (auto F : {q2s2(), q3()}) {
        for (auto choice : {LambdaChoice::Kutzko, LambdaChoice::Trivial}) {
            KutzkoDatum K(F, choice);
            auto t = spec(3);
            const int q = F->q();
            for (const auto& s : gamma_strata(*F, t)) {
                if (s.kind == StratumKind::NonUnit && std::abs(s.level) > 1) continue;
                Rational coarse = stratum_weight(K, s.alpha, s.vol, t);
                Rational fine = 0;
                int v = s.kind == StratumKind::PlusOne ? s.level : (s.kind == StratumKind::NonUnit ? s.level : 0);
                for (int c = 0; c < q; ++c) {
                    Elem shift = Elem::from_digits(*F, v + 2, {c});
                    Elem a = s.kind == StratumKind::NonUnit ? s.alpha * (I(*F, 1) + Elem::from_digits(*F, 2, {c}))
                                                            : s.alpha + shift;
                    fine += stratum_weight(K, a, s.vol / q, t);
                }
                CHECK(coarse == fine);
            }
        }
    }
}

TEST_CASE("orbit-reduced orbital integral equals the brute-force coset sum") {
    struct Case {
        FieldPtr F;
        Elem alpha;
        int level;
        int i_window;
        int b_window;
    };
    auto F2 = q2s2();
    auto F3 = q3();
    std::vector<Case> cases{
        {F2, I(*F2, 1) + pi(*F2, 1), 2, 3, 3},
        {F2, I(*F2, 1) + pi(*F2, 2), 3, 3, 3},
        {F2, I(*F2, 1) + pi(*F2, 2) + pi(*F2, 3), 2, 3, 4},
        {F2, pi(*F2, 1), 2, 2, 2},
        {F3, I(*F3, -1) + pi(*F3, 1), 2, 2, 2},
        {F3, I(*F3, 1) + pi(*F3, 1), 2, 2, 2},
    };
    for (const auto& c : cases) {
        for (auto choice : {LambdaChoice::Kutzko, LambdaChoice::Trivial}) {
            KutzkoDatum K(c.F, choice);
            TruncationSpec t = spec(3);
            t.b_window = c.b_window;
            auto fast = orbital_twisted(K, TorusElem{c.alpha}, t);
            auto brute = orbital_twisted_bruteforce(
                TorusElem{c.alpha}, [&](const Mat& g) { return K.f_G(g); }, c.level, c.i_window, c.b_window);
            CHECK(fast.half_q_exp == brute.half_q_exp);
            CHECK(fast.value == brute.value);
        }
    }
    // f = 0 integrates to 0
    auto zero = orbital_twisted_bruteforce(
        TorusElem{I(*F3, 2)}, [&](const Mat&) { return CharacterValue::zero(3); }, 1, 1, 1);
    CHECK(zero.value.is_zero());
}

TEST_CASE("vanishing strata and the odd factorization") {
    auto F = q5();
    for (auto choice : {LambdaChoice::Kutzko, LambdaChoice::Trivial}) {
        KutzkoDatum K(F, choice);
        auto t = spec(5);
        auto tab = assemble_coefficients(K, t);
        for (const auto& row : tab.rows)
            if (row.stratum.kind != StratumKind::MinusOne) CHECK(row.profile.cells.empty());
        for (int k = 0; k <= t.k_max; ++k) CHECK(tab.c[k] == tab.c[0] * Rational(4 * k + 1));
        CHECK(tab.c[0] == CharacterValue::rational(5, 2 * tab.unit_square_classes * r_g_term(tab).coeff(0)));
        if (choice == LambdaChoice::Kutzko) {
            CHECK(tab.c[0].is_zero());
        } else {
            CHECK(tab.c[0] == CharacterValue::rational(5, Rational(1, 3)));
        }
        // psi_k at alpha = -1 + pi: weight constant multiple of 4k+1
        TorusElem g{I(*F, -1) + pi(*F, 1)};
        auto base = orbital_twisted(K, g, t).value;
        for (int k = 0; k <= 3; ++k)
            CHECK(psi_k(K, g, k, t).value == base * Rational(tab.unit_square_classes * (4 * k + 1)));
        CHECK(psi_k(K, TorusElem{pi(*F, 1)}, 2, t).value.is_zero());
    }
}

TEST_CASE("even pipeline: affine coefficients and vanishing twisted orbital integrals") {
    auto F = q2s2();
    for (auto choice : {LambdaChoice::Kutzko, LambdaChoice::Trivial}) {
        KutzkoDatum K(F, choice);
        auto t = spec(6);
        t.k_max = 8;
        auto tab = assemble_coefficients(K, t);
        auto ab = coefficient_A_B(tab);
        CHECK(ab.A.value.coeff(0) > 0);
        for (int k = 0; k <= t.k_max; ++k)
            CHECK(tab.c[k] == (ab.A.value + ab.B.value * Rational(k)) * Rational(2 * tab.unit_square_classes));
        for (std::size_t s = 1; s < ab.shells.size(); ++s) CHECK(ab.A_inc[s].coeff(0) < ab.A_inc[s - 1].coeff(0));
        if (choice == LambdaChoice::Kutzko) {
            // I_eps(S(gamma)^-1, f_G) = 0 on every stratum, hence B = 0.
            for (const auto& row : tab.rows) {
                CharacterValue s = CharacterValue::zero(2);
                for (const auto& c : row.profile.cells) s += c.kavg * Rational(c.mult);
                CHECK(s.is_zero());
            }
            CHECK(ab.B.value.is_zero());
        } else {
            CHECK(ab.B.value.coeff(0) > 0);
        }
        TorusElem g{I(*F, 1) + pi(*F, 2)};
        CHECK(psi_k(K, g, 1, t).value.coeff(0) > 0);
    }
}

TEST_CASE("f is not constant on K-orbits of the G_e^- cosets") {
    // alpha = 1 + pi^3, b = pi^-2: X lies in scalar * I_2, yet conjugating by w flips lambda.
    auto F = q2s2();
    KutzkoDatum K(F);
    auto form = GroupForm::orthogonal(*F, 2);
    TorusElem g{I(*F, 1) + pi(*F, 3)};
    Mat delta = S_of(g, form).inverse();
    Mat X = twisted_conj(n_b(pi(*F, -2)) * a_e(*F, 3), delta, form);
    Mat w = Mat::antidiag(*F, 2);
    auto fx = K.f_value(X), fw = K.f_value(w * X * vdash(w, form));
    REQUIRE(fx.nonzero);
    REQUIRE(fw.nonzero);
    CHECK(fx.exponent == 0);
    CHECK(fw.exponent == 1);
}

TEST_CASE("truncation honesty and determinism") {
    auto F = q2s2();
    KutzkoDatum K(F, LambdaChoice::Trivial);
    auto t = spec(4);
    t.b_window = 3;
    CHECK_THROWS_AS(assemble_coefficients(K, t), TailNonzero);
    auto a = assemble_coefficients(K, spec(4, 1));
    auto b = assemble_coefficients(K, spec(4, 3));
    CHECK(a.c == b.c);
    TruncationSpec bad;
    bad.e_max = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("support scan: vanishing regimes and the even witness") {
    auto F5 = q5();
    KutzkoDatum K5(F5);
    for (const Elem& a : {pi(*F5, 1), pi(*F5, 2), pi(*F5, -1), I(*F5, 2), I(*F5, 3) + pi(*F5, 1), I(*F5, 1) + pi(*F5, 1),
                          I(*F5, 1) + pi(*F5, 3) * I(*F5, 2)}) {
        auto r = support_scan(K5, TorusElem{a}, 6, 7);
        CHECK_FALSE(r.witness.has_value());
        CHECK(r.strata_searched > 0);
    }
    CHECK(support_scan(K5, TorusElem{I(*F5, -1) + pi(*F5, 1)}, 6, 7).witness.has_value());
    auto F2 = q2s2();
    KutzkoDatum K2(F2);
    auto form = GroupForm::orthogonal(*F2, 2);
    TorusElem g{I(*F2, 1) + pi(*F2, 2)};
    auto r = support_scan(K2, g, 6, 7);
    REQUIRE(r.witness.has_value());
    CHECK(r.regime == StratumKind::PlusOne);
    CHECK(r.depth_effective == 2);
    // the witness is a genuine support point
    const auto& w = *r.witness;
    auto el = [&](int c) { return Elem::from_digits(*F2, 0, {c % 2, c / 2}); };
    Mat kappa = Mat::from_rows({{el(w.kappa[0]), el(w.kappa[1])}, {el(w.kappa[2]), el(w.kappa[3])}});
    Mat gg = kappa * n_b(w.b) * a_e(*F2, w.i);
    auto v = K2.f_value(twisted_conj(gg, S_of(g, form).inverse(), form));
    CHECK(v.nonzero);
    CHECK(v.exponent == w.exponent);
    for (const Elem& a : {pi(*F2, 1), pi(*F2, 2), pi(*F2, -1)})
        CHECK_FALSE(support_scan(K2, TorusElem{a}, 6, 7).witness.has_value());
}
