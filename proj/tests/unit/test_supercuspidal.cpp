#include <doctest.h>

#include "twres/supercuspidal.hpp"

#include <random>

using namespace twres;

namespace {

FieldPtr q5() { return LocalField::make(5, 1, {-5, 1}, 20); }
FieldPtr q2s2() { return LocalField::make(2, 2, {-2, 0, 1}, 30); }

Elem I(const LocalField& F, long n) { return Elem::from_int(F, n); }
Elem pi(const LocalField& F, int k) { return Elem::pi_pow(F, k); }

Mat random_i1(const LocalField& F, std::mt19937_64& rng) {
    return Mat::from_rows({{I(F, 1) + Elem::random(F, rng, 1, 4), Elem::random(F, rng, 0, 3)},
                           {Elem::random(F, rng, 1, 4), I(F, 1) + Elem::random(F, rng, 1, 4)}});
}

Mat from_code(const LocalField& F, const std::array<int, 4>& k) {
    const int q = F.q();
    auto el = [&](int a) { return Elem::from_digits(F, 0, {a % q, a / q}); };
    return Mat::from_rows({{el(k[0]), el(k[1])}, {el(k[2]), el(k[3])}});
}

std::array<int, 4> code_of(const ResidueRing2& R, const Mat& m) {
    return {R.from_elem(m(0, 0)), R.from_elem(m(0, 1)), R.from_elem(m(1, 0)), R.from_elem(m(1, 1))};
}

}  // namespace

TEST_CASE("pi_E and subgroup chain") {
    for (auto F : {q5(), q2s2()}) {
        KutzkoDatum K(F);
        Mat w = K.varpi_E();
        CHECK(w * w == pi(*F, 1) * Mat::identity(*F, 2));
        CHECK(K.member(w, Subgroup::C));
        CHECK_FALSE(K.member(w, Subgroup::C0));
        CHECK(K.member(Mat::identity(*F, 2), Subgroup::I2));
        std::mt19937_64 rng(7);
        for (int t = 0; t < 50; ++t) {
            Mat h = random_i1(*F, rng);
            CHECK(K.member(h, Subgroup::I1));
            CHECK(K.member(h, Subgroup::C0));
            CHECK(K.member(h, Subgroup::K));
        }
        Mat s = Mat::from_rows({{I(*F, 0), I(*F, 1)}, {I(*F, 1), I(*F, 0)}});
        CHECK(K.member(s, Subgroup::K));
        CHECK_FALSE(K.member(s, Subgroup::I0));
    }
}

TEST_CASE("lambda is a character of I_1, trivial on I_2") {
    for (auto F : {q5(), q2s2()}) {
        KutzkoDatum K(F);
        std::mt19937_64 rng(11);
        const int p = F->p();
        int nontrivial = 0;
        for (int t = 0; t < 200; ++t) {
            Mat a = random_i1(*F, rng), b = random_i1(*F, rng);
            CHECK((K.lambda_exponent(a) + K.lambda_exponent(b)) % p == K.lambda_exponent(a * b));
            nontrivial += K.lambda_exponent(a) != 0;
            Mat c = Mat::from_rows({{I(*F, 1) + Elem::random(*F, rng, 2, 5), Elem::random(*F, rng, 1, 4)},
                                    {Elem::random(*F, rng, 2, 5), I(*F, 1) + Elem::random(*F, rng, 2, 5)}});
            CHECK(K.member(c, Subgroup::I2));
            CHECK(K.lambda_exponent(c) == 0);
        }
        CHECK(nontrivial > 20);
        CHECK_THROWS_AS(K.lambda_exponent(K.varpi_E()), DomainError);
    }
}

TEST_CASE("psi is E^x-equivariant and central-character trivial") {
    auto F = q2s2();
    KutzkoDatum K(F);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 100; ++t) {
        Mat h = random_i1(*F, rng);
        // gamma = x + y pi_E in E^x, shifted by a power of pi_E
        Elem x = Elem::random_unit(*F, rng), y = Elem::random(*F, rng, 0, 3);
        Mat g = x * Mat::identity(*F, 2) + y * K.varpi_E();
        for (int j = 0; j < (t % 3); ++j) g = K.varpi_E() * g;
        auto a = K.psi_value(h), b = K.psi_value(g * h);
        REQUIRE(a.nonzero);
        REQUIRE(b.nonzero);
        CHECK(a.exponent == b.exponent);
        CHECK(K.psi_value(pi(*F, -2) * h).exponent == a.exponent);
    }
    Mat off = Mat::from_rows({{I(*F, 1), I(*F, 0)}, {I(*F, 1), I(*F, 1)}});
    CHECK_FALSE(K.psi_value(off).nonzero);
    CHECK_FALSE(K.f_value(pi(*F, 1) * Mat::identity(*F, 2)).nonzero);
    CHECK(K.psi_value(pi(*F, 1) * Mat::identity(*F, 2)).nonzero);
}

TEST_CASE("fast residue path agrees with the direct evaluation") {
    for (auto F : {q5(), q2s2()}) {
        for (auto choice : {LambdaChoice::Kutzko, LambdaChoice::Trivial}) {
            KutzkoDatum K(F, choice);
            auto form = GroupForm::orthogonal(*F, 2);
            std::mt19937_64 rng(19);
            int hits = 0;
            for (int t = 0; t < 3000; ++t) {
                Mat kappa = Mat::random_gl_o(*F, rng, 2);
                // X near the support so that hits are common
                Mat X = (t % 2 == 0) ? random_i1(*F, rng) : K.varpi_E() * random_i1(*F, rng);
                if (t % 7 == 0) X = Mat::random(*F, rng, 2, 0, 2);
                int j = 0;
                if (!K.may_meet_support(X, &j)) continue;
                auto slow = K.f_value(kappa * X * vdash(kappa, form));
                auto fast = K.f_conj_fast(code_of(K.ring2(), kappa), code_of(K.ring2(), X), j);
                REQUIRE(slow.nonzero == fast.nonzero);
                if (slow.nonzero) {
                    CHECK(slow.exponent == fast.exponent);
                    ++hits;
                }
            }
            CHECK(hits > 100);
        }
    }
}

TEST_CASE("K-average at level 2 equals a level-3 brute force") {
    auto F = q2s2();
    KutzkoDatum K(F);
    auto form = GroupForm::orthogonal(*F, 2);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 4; ++t) {
        Mat X = t < 2 ? random_i1(*F, rng) : K.varpi_E() * random_i1(*F, rng);
        if (t == 3) X(0, 1) = X(0, 1) + pi(*F, 1);
        CharacterValue brute = CharacterValue::zero(2);
        long count = 0;
        // kappa mod p^3: digits 0..2 of each entry
        for (int code = 0; code < 1 << 12; ++code) {
            auto el = [&](int i) {
                int c = (code >> (3 * i)) & 7;
                return Elem::from_digits(*F, 0, {c & 1, (c >> 1) & 1, (c >> 2) & 1});
            };
            Mat k = Mat::from_rows({{el(0), el(1)}, {el(2), el(3)}});
            if (k.det().ord_ge(1)) continue;
            ++count;
            brute += K.f_G(k * X * vdash(k, form));
        }
        CHECK(count == 6 * 16 * 16);
        brute *= Rational(1, count);
        CHECK(brute == K.k_average(X).value(2));
    }
}

TEST_CASE("first witness is a genuine support point") {
    auto F = q5();
    KutzkoDatum K(F);
    auto form = GroupForm::orthogonal(*F, 2);
    Mat X = Mat::diag({I(*F, 2), I(*F, 2)});
    auto w = K.first_witness(X);
    REQUIRE(w.has_value());
    CHECK(K.f_value(from_code(*F, *w) * X * vdash(from_code(*F, *w), form)).nonzero);
    CHECK_FALSE(K.first_witness(Mat::diag({I(*F, 1), pi(*F, 2)})).has_value());
    CHECK_FALSE(K.first_witness(Mat::diag({pi(*F, -1), pi(*F, 1)})).has_value());
}

TEST_CASE("kappa kappa^|- = det kappa mod I_2 needs 2 in p^2") {
    std::mt19937_64 rng(23);
    auto F = q2s2();
    for (int t = 0; t < 500; ++t) CHECK(kappa_vdash_congruence(Mat::random_gl_o(*F, rng, 2)));
    auto Q2 = LocalField::make(2, 1, {-2, 1}, 30);
    int failures = 0;
    for (int t = 0; t < 500; ++t) failures += !kappa_vdash_congruence(Mat::random_gl_o(*Q2, rng, 2));
    CHECK(failures > 0);
    Mat k = Mat::from_rows({{I(*Q2, 1), I(*Q2, 1)}, {I(*Q2, 1), I(*Q2, 0)}});
    CHECK_FALSE(kappa_vdash_congruence(k));
    CHECK_THROWS_AS(KutzkoDatum{Q2}, DomainError);
}
