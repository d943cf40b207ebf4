#include <doctest.h>

#include "twres/localfield.hpp"

#include <gmpxx.h>

#include <random>
#include <set>

using namespace twres;

namespace {

FieldPtr q5() { return LocalField::make(5, 1, {-5, 1}, 12); }
FieldPtr q2s2() { return LocalField::make(2, 2, {-2, 0, 1}, 14); }

int vp_mpz(mpz_class x, int p) {
    int v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

}  // namespace

TEST_CASE("make_field validation") {
    CHECK_NOTHROW(q5());
    CHECK_NOTHROW(q2s2());
    CHECK_NOTHROW(LocalField::make(2, 1, {-2, 1}, 14));
    CHECK_THROWS_AS(LocalField::make(5, 1, {-25, 1}, 12), NotEisenstein);
    CHECK_THROWS_AS(LocalField::make(5, 2, {-5, 1, 1}, 12), NotEisenstein);
    CHECK_THROWS_AS(LocalField::make(6, 1, {-6, 1}, 12), NotEisenstein);
    CHECK_THROWS_AS(LocalField::make(2, 2, {-2, 0, 1}, 5), PrecisionTooSmall);
    auto F = q2s2();
    CHECK(Elem::from_int(*F, 2).ord() == 2);
    CHECK(Elem::from_int(*q5(), 5).ord() == 1);
}

TEST_CASE("ord examples") {
    auto F = q5();
    CHECK(Elem::from_int(*F, 50).ord() == 2);
    CHECK((Elem::pi_pow(*F, 3) * Elem::from_int(*F, 7)).ord() == 3);
    CHECK(Elem::zero(*F).ord() == kInfOrd);
}

TEST_CASE("Q_5 integers agree with a bignum oracle") {
    auto F = q5();
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<long> d(-1000000, 1000000);
    for (int t = 0; t < 1000; ++t) {
        long a = d(rng), b = d(rng);
        if (a == 0 || b == 0) continue;
        Elem x = Elem::from_int(*F, a), y = Elem::from_int(*F, b);
        mpz_class A = a, B = b;
        CHECK((x * y).ord() == vp_mpz(A * B, 5));
        if (A + B != 0) CHECK((x + y).ord() == vp_mpz(A + B, 5));
        CHECK(((x * y) / y) == x);
        // residue of a unit quotient matches modular arithmetic
        if (a % 5 != 0 && b % 5 != 0) {
            Elem r = x / y;
            long expect = ((a % 5 + 5) % 5) * [&] {
                for (long k = 1; k < 5; ++k)
                    if ((((b % 5 + 5) % 5) * k) % 5 == 1) return k;
                return 0L;
            }() % 5;
            CHECK(r.residue() == expect);
        }
    }
}

TEST_CASE("ring axioms and valuation on random triples") {
    for (auto F : {q5(), q2s2(), LocalField::make(3, 3, {3, -6, 3, 1}, 20)}) {
        std::mt19937_64 rng(7);
        for (int t = 0; t < 1000; ++t) {
            Elem x = Elem::random(*F, rng, -3, 3);
            Elem y = Elem::random(*F, rng, -3, 3);
            Elem z = Elem::random(*F, rng, -3, 3);
            CHECK(((x + y) + z) == (x + (y + z)));
            CHECK(((x * y) * z) == (x * (y * z)));
            CHECK((x * (y + z)) == (x * y + x * z));
            CHECK((x + y) == (y + x));
            if (!x.is_zero() && !y.is_zero()) {
                CHECK((x * y).ord() == x.ord() + y.ord());
                Elem s = x + y;
                if (!s.is_zero()) CHECK(s.ord() >= std::min(x.ord(), y.ord()));
                CHECK((x * x.inverse()) == Elem::from_int(*F, 1));
            }
        }
    }
}

TEST_CASE("pi^e equals the Eisenstein tail") {
    auto F = LocalField::make(3, 3, {3, -6, 3, 1}, 20);
    // pi^3 = -3 + 6 pi - 3 pi^2
    Elem pi = Elem::pi_pow(*F, 1);
    Elem rhs = Elem::from_int(*F, -3) + Elem::from_int(*F, 6) * pi - Elem::from_int(*F, 3) * pi * pi;
    CHECK((pi * pi * pi) == rhs);
    CHECK(rhs.ord() == 3);
}

TEST_CASE("digits round trip") {
    auto F = q2s2();
    std::vector<int> d = {1, 0, 1, 1, 0, 1};
    Elem x = Elem::from_digits(*F, -2, d);
    CHECK(x.ord() == -2);
    CHECK(x.unit_digits(6) == d);
    CHECK(x.digits(-2, 6) == d);
    CHECK(x.digits(-4, 3) == std::vector<int>{0, 0, 1});
    CHECK(x.to_string(3) == "ϖ^-2 * (1 + 0 ϖ + 1 ϖ^2 + …)");
}

TEST_CASE("cancellation zero and precision") {
    auto F = q5();
    Elem x = Elem::from_int(*F, 1);
    Elem zero = x - x;
    CHECK(zero.is_zero());
    CHECK(zero.ord() == kInfOrd);  // literal inputs are exact to capacity
    RingVec r = F->ring_from_int(3);
    Elem coarse = Elem::from_ring(*F, r, 0, 4);  // known to pi^4 only
    Elem c0 = coarse - Elem::from_int(*F, 3);
    CHECK(c0.is_zero());
    CHECK(c0.absprec() == 4);
    CHECK_THROWS_AS((void)c0.ord(), PrecisionExhausted);
    CHECK(c0.ord_ge(3));
    CHECK_THROWS_AS((void)c0.ord_ge(5), PrecisionExhausted);
}

TEST_CASE("square classes") {
    auto F = q5();
    auto S = square_class_reps(*F);
    CHECK(S.size() == 4);
    CHECK(S.unit_count() == 2);
    CHECK(S.reps[0] == Elem::from_int(*F, 1));

    auto G = q2s2();
    auto T = square_class_reps(*G);
    // Independent oracle: O = Z_2[sqrt2], units mod pi^5 are (a mod 8, b mod 4), a odd.
    std::set<std::pair<int, int>> sq;
    for (int a = 1; a < 8; a += 2)
        for (int b = 0; b < 4; ++b) sq.insert({(a * a + 2 * b * b) % 8, (2 * a * b) % 4});
    const std::size_t unit_classes = 16 / sq.size();
    CHECK(unit_classes == 8);
    CHECK(T.unit_count() == unit_classes);
    CHECK(T.size() == 2 * unit_classes);
    CHECK(T.level == 5);

    for (auto Fp : {F, G}) {
        auto set = square_class_reps(*Fp);
        std::mt19937_64 rng(3);
        std::set<std::size_t> seen;
        for (int t = 0; t < 500; ++t) {
            Elem x = Elem::random_unit(*Fp, rng, std::uniform_int_distribution<int>(-4, 4)(rng));
            std::size_t c = square_class_of(set, x);
            seen.insert(c);
            int hits = 0;
            for (const auto& r : set.reps) hits += is_square(x / r) ? 1 : 0;
            CHECK(hits == 1);
            CHECK(square_class_of(set, x * set.reps[c].inverse() * set.reps[c]) == c);
        }
        CHECK(seen.size() == set.size());
    }
}

TEST_CASE("additive character") {
    auto F = q5();
    CHECK(additive_char(Elem::from_int(*F, 5)) == CharacterValue::one(5));
    CHECK(additive_char(Elem::from_int(*F, 3)) == CharacterValue::root_of_unity(5, 3));
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b)
            CHECK(additive_char(Elem::from_int(*F, a + b)) ==
                  additive_char(Elem::from_int(*F, a)) * additive_char(Elem::from_int(*F, b)));
    auto G = q2s2();
    CHECK(additive_char(Elem::from_int(*G, 1)) == CharacterValue::rational(2, -1));
    CHECK(additive_char(Elem::pi_pow(*G, 1)) == CharacterValue::one(2));
    CHECK_THROWS_AS(additive_char(Elem::pi_pow(*G, -1)), DomainError);
}

TEST_CASE("parse_elem") {
    auto F = q2s2();
    Elem pi = Elem::pi_pow(*F, 1);
    CHECK(parse_elem(*F, "1+pi^2") == Elem::from_int(*F, 1) + pi * pi);
    CHECK(parse_elem(*F, "1+ϖ^2") == Elem::from_int(*F, 3));
    CHECK(parse_elem(*F, "-1 + 3*pi") == Elem::from_int(*F, -1) + Elem::from_int(*F, 3) * pi);
    CHECK(parse_elem(*F, "pi^-1") == pi.inverse());
    CHECK(parse_elem(*F, "5") == Elem::from_int(*F, 5));
    CHECK_THROWS_AS(parse_elem(*F, "x"), ConfigError);
}
