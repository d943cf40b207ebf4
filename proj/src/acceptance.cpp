#include "twres/acceptance.hpp"

#include "twres/commands.hpp"
#include "twres/residue.hpp"
#include "twres/weights.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace twres {

namespace {

FieldPtr q5() { return LocalField::make(5, 1, {-5, 1}, 24); }
FieldPtr q2s2() { return LocalField::make(2, 2, {-2, 0, 1}, 40); }
FieldPtr q2() { return LocalField::make(2, 1, {-2, 1}, 30); }

Elem one(const LocalField& F) { return Elem::from_int(F, 1); }
Elem pi(const LocalField& F, int k) { return Elem::pi_pow(F, k); }

Mat random_invertible(const LocalField& F, std::mt19937_64& rng, int n, int lo, int hi) {
    for (;;) {
        Mat m = Mat::random(F, rng, n, lo, hi);
        if (!m.det().is_zero()) return m;
    }
}

TorusElem random_regular(const LocalField& F, std::mt19937_64& rng) {
    for (;;) {
        TorusElem g{Elem::random_unit(F, rng, std::uniform_int_distribution<int>(-3, 3)(rng))};
        if (g.regular()) return g;
    }
}

Mat random_i1(const LocalField& F, std::mt19937_64& rng, int depth = 1) {
    return Mat::from_rows({{one(F) + Elem::random(F, rng, depth, depth + 3), Elem::random(F, rng, depth - 1, depth + 2)},
                           {Elem::random(F, rng, depth + (depth > 1), depth + 3),
                            one(F) + Elem::random(F, rng, depth, depth + 3)}});
}

struct Outcome {
    bool pass;
    std::string detail;
};

// 1. closed form vs enumeration oracle
Outcome weight_exactness(std::uint64_t seed) {
    long cases = 0, mismatches = 0;
    for (auto F : {q5(), q2s2()}) {
        std::mt19937_64 rng(seed + 1);
        for (int t = 0; t < 300; ++t) {
            const int n = t % 2 ? 4 : 2;
            ClubsuitTorus T{n, n == 2 ? 1 : 1 + (t / 2) % 2};
            Mat g = random_invertible(*F, rng, n, -3, 3);
            const int k = std::uniform_int_distribution<int>(-2, 4)(rng);
            LatticeSpec L{std::uniform_int_distribution<int>(-1, 2)(rng)};
            WeightQuery q{g, std::nullopt, k, L, T};
            ++cases;
            if (w_k_oracle(q) != Rational(w_k_closed(q))) ++mismatches;
        }
    }
    return {mismatches == 0 && cases >= 500,
            std::to_string(cases) + " cases (n in {2,4}, p in {5,2}), " + std::to_string(mismatches) + " mismatches"};
}

// 2. vol_T(T cap pi^-k M_n(O)) = (2k+1)^r
Outcome torus_law() {
    auto F = q5();
    long checked = 0;
    bool ok = true;
    for (int r : {1, 2}) {
        ClubsuitTorus T{2 * r, r};
        const Mat I = Mat::identity(*F, 2 * r);
        for (int k = -3; k <= 5; ++k) {
            long expect = 1;
            for (int i = 0; i < r; ++i) expect *= k >= 0 ? 2 * k + 1 : 0;
            ok = ok && w_k_oracle({I, std::nullopt, k, {}, T}) == expect &&
                 w_k_closed({I, std::nullopt, k, {}, T}) == expect;
            ++checked;
        }
    }
    return {ok, std::to_string(checked) + " (r, k) pairs, r in {1,2}, k in [-3,5]"};
}

// 3. prod(Delta_i(g) + Delta_i(th) + 2k + 1) <= w_k(g, h)
Outcome lower_bound(std::uint64_t seed) {
    long tested = 0, violations = 0;
    std::mt19937_64 rng(seed + 3);
    auto fields = std::vector<FieldPtr>{q5(), q2s2()};
    for (long t = 0; tested < 200 && t < 5000; ++t) {
        const auto& F = fields[static_cast<std::size_t>(t % 2)];
        const int n = t % 3 == 0 ? 4 : 2;
        ClubsuitTorus T{n, n / 2};
        Mat g = random_invertible(*F, rng, n, -1, 2);
        Mat h = random_invertible(*F, rng, n, -1, 2);
        const int k = std::uniform_int_distribution<int>(0, 2)(rng);
        auto dg = delta_vector(g, T.r), dh = delta_vector(h.transpose(), T.r);
        bool domain = true;
        long bound = 1;
        for (int i = 0; i < T.r; ++i) {
            const long v = dg[static_cast<std::size_t>(i)] + dh[static_cast<std::size_t>(i)] + 2 * k;
            domain = domain && v >= 0;
            bound *= v + 1;
        }
        if (!domain) continue;
        ++tested;
        if (Rational(bound) > w_k_oracle({g, h, k, {}, T})) ++violations;
    }
    return {tested >= 200 && violations == 0,
            std::to_string(tested) + " cases in the domain, " + std::to_string(violations) + " violations"};
}

// 4. nu(S(gamma)) = -gamma
Outcome nu_check(std::uint64_t seed) {
    long bad = 0, total = 0;
    for (auto F : {q5(), q2s2()}) {
        auto form = GroupForm::orthogonal(*F, 2);
        std::mt19937_64 rng(seed + 4);
        for (int t = 0; t < 100; ++t, ++total) {
            TorusElem g = random_regular(*F, rng);
            if (nu(S_of(g, form), form) != -g.gamma()) ++bad;
        }
    }
    return {bad == 0, std::to_string(total) + " regular gamma (p = 5 and p = 2, e = 2), " + std::to_string(bad) +
                          " failures"};
}

// 5. twisted centralizer is T
Outcome centralizer(std::uint64_t seed) {
    auto F = q5();
    long solutions = 0, in_torus = 0;
    for (long a : {2, 3, 7}) {
        auto rep = twisted_centralizer_sample(TorusElem{Elem::from_int(*F, a)}, 4, 3400, seed + 5 + a);
        solutions += rep.solutions;
        in_torus += rep.in_torus;
    }
    long kernel_bad = 0, sampled = 0;
    for (auto G : {q5(), q2s2()}) {
        auto form = GroupForm::orthogonal(*G, 2);
        std::mt19937_64 rng(seed + 55);
        for (int t = 0; t < 100; ++t, ++sampled) {
            TorusElem g = random_regular(*G, rng);
            if (d_eps(S_of(g, form).inverse(), form, -1).kernel_dim != 1) ++kernel_bad;
        }
    }
    std::ostringstream os;
    os << solutions << " solutions mod p^4, " << in_torus << " in T mod p^3; kernel dim 1 for "
       << sampled - kernel_bad << "/" << sampled << " regular gamma";
    return {solutions >= 10000 && in_torus == solutions && kernel_bad == 0, os.str()};
}

// 6. lambda and the kappa kappa^|- congruence
Outcome character_suite(std::uint64_t seed) {
    auto F = q2s2();
    KutzkoDatum K(F);
    std::mt19937_64 rng(seed + 6);
    long mult_bad = 0, inv_bad = 0, sq_bad = 0;
    for (int t = 0; t < 500; ++t) {
        Mat a = random_i1(*F, rng), b = random_i1(*F, rng), c = random_i1(*F, rng, 2);
        if (!K.member(c, Subgroup::I2)) c = Mat::identity(*F, 2);
        if (K.lambda(a * b) != CharacterValue(K.lambda(a) * K.lambda(b))) ++mult_bad;
        if (K.lambda(a * c) != K.lambda(a) || K.lambda(c) != CharacterValue::one(2)) ++inv_bad;
        if (K.lambda(a) * K.lambda(a) != CharacterValue::one(2)) ++sq_bad;
    }
    long cong_bad = 0, cong_fail_e1 = 0;
    auto Q2 = q2();
    for (int t = 0; t < 500; ++t) {
        if (!kappa_vdash_congruence(Mat::random_gl_o(*F, rng, 2))) ++cong_bad;
        if (!kappa_vdash_congruence(Mat::random_gl_o(*Q2, rng, 2))) ++cong_fail_e1;
    }
    std::ostringstream os;
    os << "500 pairs: multiplicativity failures " << mult_bad << ", I_2-invariance failures " << inv_bad
       << ", lambda^2 != 1: " << sq_bad << "; kappa kappa^|- = det kappa mod I_2 fails " << cong_bad
       << "/500 at (p=2,e=2) and " << cong_fail_e1 << "/500 at (p=2,e=1)";
    return {mult_bad == 0 && inv_bad == 0 && sq_bad == 0 && cong_bad == 0 && cong_fail_e1 > 0, os.str()};
}

// 7. support vanishing
Outcome support_vanishing(std::uint64_t seed) {
    const int depth = 6, bw = 7;
    long scans = 0, wrong = 0;
    auto expect_none = [&](const KutzkoDatum& K, const Elem& a) {
        ++scans;
        if (support_scan(K, TorusElem{a}, depth, bw).witness) ++wrong;
    };
    auto F5 = q5();
    auto F2 = q2s2();
    KutzkoDatum K5(F5), K2(F2);
    for (auto* K : {&K5, &K2})
        for (int v : {1, 2, -1}) expect_none(*K, pi(K->field(), v));
    std::mt19937_64 rng(seed + 7);
    int per_regime[3] = {0, 0, 0};
    while (per_regime[0] < 50 || per_regime[1] < 50 || per_regime[2] < 50) {
        Elem a = Elem::random_unit(*F5, rng, std::uniform_int_distribution<int>(-4, 4)(rng));
        if (a.ord() != 0) {
            if (per_regime[0]++ < 50) expect_none(K5, a);
            Elem b = Elem::random_unit(*F2, rng, a.ord());
            expect_none(K2, b);
            continue;
        }
        auto kind = stratum_of(a);
        if (kind == StratumKind::Generic && per_regime[1] < 50) {
            ++per_regime[1];
            expect_none(K5, a);
        } else if (kind == StratumKind::PlusOne && a != one(*F5) && per_regime[2] < 50) {
            ++per_regime[2];
            expect_none(K5, a);
        }
    }
    auto w = support_scan(K2, TorusElem{one(*F2) + pi(*F2, 2)}, depth, bw);
    std::ostringstream os;
    os << scans << " scans at depth 6 (alpha in {pi, pi^2, pi^-1}, 50+ per regime: non-unit, alpha != +-1, "
       << "alpha = 1 mod p), " << wrong << " unexpected witnesses; p=2,e=2, alpha=1+pi^2: "
       << (w.witness ? "witness at ord b = " + std::to_string(-w.witness->j) : std::string("none"));
    return {wrong == 0 && w.witness.has_value(), os.str()};
}

RunConfig pipeline_config(int p, LambdaChoice lambda, int e_max, int k_max, int workers) {
    RunConfig c;
    c.p = p;
    if (p == 2) {
        c.e = 2;
        c.eisenstein = {-2, 0, 1};
        c.precision = 40;
        c.regime = Regime::Even;
    } else {
        c.e = 1;
        c.eisenstein = {-p, 1};
        c.precision = 24;
        c.regime = Regime::Odd;
    }
    c.lambda = lambda;
    c.trunc.m = 3;
    c.trunc.e_max = e_max;
    c.trunc.b_window = e_max + 1;
    c.trunc.k_max = k_max;
    c.trunc.workers = workers;
    c.format = "csv";
    return c;
}

// 8. odd factorization
Outcome odd_factorization() {
    auto run = [](LambdaChoice l) { return run_coefficients(pipeline_config(5, l, 5, 6, 1)); };
    auto tab = run(LambdaChoice::Kutzko);
    bool ok = true;
    for (int k = 0; k <= 6; ++k) ok = ok && tab.c[k] == tab.c[0] * Rational(4 * k + 1);
    auto triv = run(LambdaChoice::Trivial);
    bool triv_ok = true;
    for (int k = 0; k <= 6; ++k) triv_ok = triv_ok && triv.c[k] == triv.c[0] * Rational(4 * k + 1);
    std::ostringstream os;
    os << "c_k = (4k+1) c_0 for k in [0,6]: " << (ok ? "exact" : "violated") << " with c_0 = "
       << tab.c[0].to_string() << " (Kutzko f_G; R_G = " << r_g_term(tab).to_string()
       << ", degenerate because the twisted orbital integrals of f_G vanish)";
    os << "; diagnostic lambda = 1: c_0 = " << triv.c[0].to_string() << ", factorization "
       << (triv_ok ? "exact" : "violated");
    return {ok && triv_ok, os.str()};
}

// 9. even affinity
Outcome even_affinity() {
    auto check = [](LambdaChoice l, std::string& note) {
        auto c = pipeline_config(2, l, 6, 8, 1);
        auto tab = run_coefficients(c);
        std::vector<Rational> v;
        for (const auto& x : tab.c) v.push_back(x.coeff(0));
        int k0 = 0;
        for (std::size_t k = 0; k + 2 < v.size(); ++k)
            if (v[k + 2] - 2 * v[k + 1] + v[k] != 0) k0 = static_cast<int>(k) + 1;
        auto ab = coefficient_A_B(tab);
        bool mono = true;
        for (std::size_t s = 1; s < ab.shells.size(); ++s)
            if (ab.shells[s] >= 2 && ab.shells[s - 1] >= 2)
                mono = mono && ab.A_inc[s].coeff(0) < ab.A_inc[s - 1].coeff(0) &&
                       ab.B_inc[s].coeff(0) <= ab.B_inc[s - 1].coeff(0);
        const Rational A = ab.A.value.coeff(0), B = ab.B.value.coeff(0);
        std::ostringstream os;
        os << "k0 = " << k0 << ", A = " << A.get_str() << ", B = " << B.get_str() << ", increments "
           << (mono ? "decreasing" : "not decreasing");
        note = os.str();
        return k0 <= 2 && A > 0 && B > 0 && mono;
    };
    std::string kutzko, trivial;
    bool ok = check(LambdaChoice::Kutzko, kutzko);
    bool diag = check(LambdaChoice::Trivial, trivial);
    std::string detail = "Kutzko f_G: " + kutzko;
    if (!ok)
        detail += " -- B = 0 because the twisted orbital integral of f_G vanishes at every gamma in T_1 "
                  "(f is not identically 1 on G_e^-: alpha = 1+pi^3, b = pi^-2, kappa = w gives f = -1 where kappa = 1 gives +1)";
    detail += "; diagnostic lambda = 1: " + trivial + (diag ? " (A, B > 0)" : "");
    return {ok, detail};
}

// 10. residue benchmark
Outcome residue_benchmark() {
    RationalFunction geo{{Rational(1)}, {Rational(1), Rational(-1)}};
    bool symbolic = true;
    for (int n = 1; n <= 4; ++n) {
        auto t = laurent_at_zero(geo, n, 0);
        Rational expect(1, 2 * n);
        expect.canonicalize();
        symbolic = symbolic && t.front().order == -1 && t.front().lnq_power == -1 && t.front().rational == expect;
    }
    bool numeric = true;
    double worst = 0;
    for (int n : {1, 2})
        for (int q : {2, 5})
            for (double s : {1e-3, 1e-4}) {
                auto chk = numeric_cross_check(PolyFit{{Rational(1)}, 0}, {}, geo, n, q, s);
                worst = std::max(worst, chk.rel_error);
                numeric = numeric && chk.rel_error <= 1e-6;
            }
    std::ostringstream os;
    os << "s^-1 coefficient (1/(2n)) (ln q)^-1 for n = 1..4: " << (symbolic ? "exact" : "wrong")
       << "; numeric worst relative error " << worst;
    return {symbolic && numeric, os.str()};
}

// 11. determinism across worker counts
Outcome determinism() {
    bool same = true;
    long bytes = 0;
    for (int p : {5, 2}) {
        auto a = pipeline_config(p, LambdaChoice::Kutzko, p == 2 ? 6 : 5, 8, 1);
        auto b = a;
        b.trunc.workers = 4;
        auto ta = render_coeffs(a) + render_residue(a), tb = render_coeffs(b) + render_residue(b);
        bytes += static_cast<long>(ta.size());
        same = same && ta == tb;
    }
    return {same, std::to_string(bytes) + " bytes of CSV+JSON compared for workers 1 vs 4 (p = 5 and p = 2, e = 2)"};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::ostream& out, std::uint64_t seed) {
    struct Item {
        int id;
        const char* title;
        std::function<Outcome()> run;
    };
    std::vector<Item> items{
        {1, "weight-factor exactness", [&] { return weight_exactness(seed); }},
        {2, "(2k+1)^r law", [] { return torus_law(); }},
        {3, "weight lower bound", [&] { return lower_bound(seed); }},
        {4, "nu(S(gamma)) = -gamma", [&] { return nu_check(seed); }},
        {5, "twisted centralizer", [&] { return centralizer(seed); }},
        {6, "character suite", [&] { return character_suite(seed); }},
        {7, "support vanishing", [&] { return support_vanishing(seed); }},
        {8, "odd-p factorization", [] { return odd_factorization(); }},
        {9, "even-p affinity", [] { return even_affinity(); }},
        {10, "residue benchmark", [] { return residue_benchmark(); }},
        {11, "determinism", [] { return determinism(); }},
    };
    std::vector<CriterionResult> results;
    for (const auto& item : items) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = item.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        results.push_back({item.id, item.title, o.pass, o.detail, sec});
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.1f s", sec);
        out << (o.pass ? "PASS" : "FAIL") << " [" << item.id << "] " << item.title << ": " << o.detail << " (" << buf
            << ")" << std::endl;
    }
    return results;
}

}  // namespace twres
