#include <doctest.h>

#include "twres/twisted.hpp"

#include <random>

using namespace twres;

namespace {

FieldPtr q5() { return LocalField::make(5, 1, {-5, 1}, 20); }
FieldPtr q2s2() { return LocalField::make(2, 2, {-2, 0, 1}, 30); }

TorusElem random_regular(const LocalField& F, std::mt19937_64& rng) {
    for (;;) {
        TorusElem t{Elem::random(F, rng, -3, 3)};
        if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
            // near 1: alpha = 1 + pi^e u
            const int e = std::uniform_int_distribution<int>(1, 5)(rng);
            t.alpha = Elem::from_int(F, 1) + Elem::random_unit(F, rng, e);
        }
        if (!t.alpha.is_zero() && t.regular()) return t;
    }
}

// Oracle: determinant of A restricted to its column space.
int image_det_ord(const std::vector<std::vector<Elem>>& A) {
    const std::size_t N = A.size();
    const LocalField& F = A[0][0].field();
    // Column-space basis by greedy independence (rank test with Gaussian elimination).
    std::vector<std::vector<Elem>> basis;
    auto rank_of = [&](std::vector<std::vector<Elem>> cols) {
        std::size_t rank = 0;
        const std::size_t c = cols.size();
        for (std::size_t row = 0; row < N && rank < c; ++row) {
            std::size_t piv = c;
            int best = kInfOrd;
            for (std::size_t j = rank; j < c; ++j)
                if (!cols[j][row].is_zero() && cols[j][row].ord() < best) {
                    best = cols[j][row].ord();
                    piv = j;
                }
            if (piv == c) continue;
            std::swap(cols[rank], cols[piv]);
            for (std::size_t j = rank + 1; j < c; ++j) {
                if (cols[j][row].is_zero()) continue;
                const Elem f = cols[j][row] / cols[rank][row];
                for (std::size_t i = 0; i < N; ++i) cols[j][i] -= f * cols[rank][i];
            }
            ++rank;
        }
        return rank;
    };
    for (std::size_t j = 0; j < N; ++j) {
        std::vector<Elem> col(N);
        for (std::size_t i = 0; i < N; ++i) col[i] = A[i][j];
        auto trial = basis;
        trial.push_back(col);
        if (rank_of(trial) == trial.size()) basis = trial;
    }
    const std::size_t r = basis.size();
    // Coordinates of A b_k in the basis: solve the overdetermined but consistent system.
    Mat M(F, static_cast<int>(r));
    for (std::size_t k = 0; k < r; ++k) {
        std::vector<Elem> img(N, Elem::zero(F));
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) img[i] += A[i][j] * basis[k][j];
        // augmented [B | img], eliminate rows
        std::vector<std::vector<Elem>> aug(N, std::vector<Elem>(r + 1));
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t c = 0; c < r; ++c) aug[i][c] = basis[c][i];
            aug[i][r] = img[i];
        }
        std::vector<std::size_t> prow;
        std::size_t row = 0;
        for (std::size_t c = 0; c < r; ++c) {
            std::size_t piv = N;
            int best = kInfOrd;
            for (std::size_t i = row; i < N; ++i)
                if (!aug[i][c].is_zero() && aug[i][c].ord() < best) {
                    best = aug[i][c].ord();
                    piv = i;
                }
            std::swap(aug[row], aug[piv]);
            const Elem inv = aug[row][c].inverse();
            for (auto& x : aug[row]) x *= inv;
            for (std::size_t i = 0; i < N; ++i) {
                if (i == row || aug[i][c].is_zero()) continue;
                const Elem f = aug[i][c];
                for (std::size_t cc = 0; cc <= r; ++cc) aug[i][cc] -= f * aug[row][cc];
            }
            ++row;
        }
        for (std::size_t c = 0; c < r; ++c) M(static_cast<int>(c), static_cast<int>(k)) = aug[c][r];
    }
    return M.det().ord();
}

}  // namespace

TEST_CASE("S(gamma) and nu") {
    for (auto F : {q5(), q2s2()}) {
        auto form = GroupForm::orthogonal(*F, 2);
        std::mt19937_64 rng(41);
        const Elem one = Elem::from_int(*F, 1);
        for (int t = 0; t < 100; ++t) {
            TorusElem g = random_regular(*F, rng);
            Mat S = S_of(g, form);
            CHECK(S == Mat::diag({g.alpha - one, g.alpha.inverse() - one}));
            CHECK(nu(S, form) == -g.gamma());
        }
        TorusElem m1{-one};
        CHECK(S_of(m1, form) == Mat::diag({Elem::from_int(*F, -2), Elem::from_int(*F, -2)}));
        CHECK_THROWS_AS(S_of(TorusElem{one}, form), SingularGammaMinusOne);
    }
}

TEST_CASE("twisted conjugation") {
    auto F = q5();
    auto form = GroupForm::orthogonal(*F, 2);
    std::mt19937_64 rng(43);
    for (int t = 0; t < 100; ++t) {
        Mat a = Mat::random_gl_o(*F, rng, 2), b = Mat::random(*F, rng, 2, -2, 2);
        Mat d = Mat::random(*F, rng, 2, -2, 2);
        CHECK(twisted_conj(Mat::identity(*F, 2), d, form) == d);
        CHECK(twisted_conj(a * b, d, form) == twisted_conj(a, twisted_conj(b, d, form), form));
        Mat sym = d + vdash(d, form);
        CHECK(is_eps_symmetric(sym, form));
        CHECK(is_eps_symmetric(twisted_conj(b, sym, form), form));
    }
    CHECK(is_eps_symmetric(Mat::diag({Elem::from_int(*F, 3), Elem::from_int(*F, 3)}), form));
    CHECK(!is_eps_symmetric(Mat::from_ints(*F, {{1, 0}, {0, 2}}), form));
    // mod-p variant on I_1-type matrices: symmetric iff diagonal residues agree.
    for (int t = 0; t < 200; ++t) {
        Mat X = Mat::random(*F, rng, 2, 0, 2);
        const bool residues_match = X(0, 0).residue() == X(1, 1).residue();
        CHECK(is_eps_symmetric_mod(X, form, 1) == residues_match);
    }
}

TEST_CASE("charpoly") {
    auto F = q5();
    // [[1,2],[3,4]]: t^2 - 5t - 2
    auto cp = charpoly({{Elem::from_int(*F, 1), Elem::from_int(*F, 2)}, {Elem::from_int(*F, 3), Elem::from_int(*F, 4)}});
    CHECK(cp[0] == Elem::from_int(*F, 1));
    CHECK(cp[1] == Elem::from_int(*F, -5));
    CHECK(cp[2] == Elem::from_int(*F, -2));
    std::mt19937_64 rng(47);
    for (int t = 0; t < 30; ++t) {
        Mat A = Mat::random(*F, rng, 4, -1, 2);
        std::vector<std::vector<Elem>> rows(4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) rows[static_cast<std::size_t>(i)].push_back(A(i, j));
        auto c = charpoly(rows);
        CHECK(c[4] == A.det());  // (-1)^4 det
        CHECK(-c[1] == A(0, 0) + A(1, 1) + A(2, 2) + A(3, 3));
    }
}

TEST_CASE("D_eps kernel and value") {
    for (auto F : {q5(), q2s2()}) {
        auto form = GroupForm::orthogonal(*F, 2);
        std::mt19937_64 rng(53);
        const Elem one = Elem::from_int(*F, 1);
        for (int t = 0; t < 60; ++t) {
            TorusElem g = random_regular(*F, rng);
            const Mat delta = S_of(g, form).inverse();
            auto rep = d_eps(delta, form);
            CHECK(rep.kernel_dim == 1);
            // closed form: |2| |alpha-1|^2 / |alpha|
            const int expect = F->ord2() + 2 * (g.alpha - one).ord() - g.alpha.ord();
            CHECK(rep.ord == expect);
            CHECK(image_det_ord(d_eps_operator(delta, form)) == rep.ord);
            CHECK(phi_S(g, form) >= 0);
            CHECK(phi_S(g, form) == std::max(0, rep.ord));
            // S(gamma) itself has the same |D_eps|
            CHECK(d_eps(S_of(g, form), form).ord == rep.ord);
        }
        // diag(x, -x) has a two-dimensional twisted centralizer
        CHECK(d_eps(Mat::identity(*F, 2), form).kernel_dim == 1);
        CHECK_THROWS_AS(d_eps(Mat::diag({one, -one}), form), NotRegular);
    }
}

TEST_CASE("D_eps stratum constancy") {
    auto F = q2s2();
    auto form = GroupForm::orthogonal(*F, 2);
    std::mt19937_64 rng(59);
    const Elem one = Elem::from_int(*F, 1);
    for (int e = 1; e <= 5; ++e) {
        int first = kInfOrd;
        for (int t = 0; t < 10; ++t) {
            TorusElem g{one + Elem::random_unit(*F, rng, e)};
            const int o = d_eps(S_of(g, form).inverse(), form).ord;
            if (first == kInfOrd) first = o;
            CHECK(o == first);
        }
        CHECK(first == 2 + 2 * e);
    }
}

TEST_CASE("weyl discriminant") {
    auto F = q5();
    std::mt19937_64 rng(61);
    auto O2 = GroupForm::orthogonal(*F, 2);
    auto S2 = GroupForm::symplectic(*F, 2);
    CHECK(lie_h_basis(O2, *F).size() == 1);
    CHECK(lie_h_basis(S2, *F).size() == 3);
    CHECK(lie_h_basis(GroupForm::orthogonal(*F, 4), *F).size() == 6);
    const Elem one = Elem::from_int(*F, 1);
    for (int t = 0; t < 40; ++t) {
        TorusElem g = random_regular(*F, rng);
        auto d = weyl_disc(g.gamma(), O2);
        CHECK(d.ord == 0);
        auto s = weyl_disc(g.gamma(), S2);
        CHECK(s.kernel_dim == 1);
        const Elem a2 = g.alpha * g.alpha;
        CHECK(s.ord == (a2 - one).ord() + (a2.inverse() - one).ord());
    }
}

TEST_CASE("twisted centralizer sampling") {
    auto F = q5();
    for (long a : {2, 3}) {
        TorusElem g{Elem::from_int(*F, a)};
        auto rep = twisted_centralizer_sample(g, 4, 300, 7);
        CHECK(rep.solutions > 0);
        CHECK(rep.in_torus == rep.solutions);
    }
    // torus elements solve the equation exactly
    auto form = GroupForm::orthogonal(*F, 2);
    TorusElem g{Elem::from_int(*F, 2)};
    const Mat delta = S_of(g, form).inverse();
    for (int a = 1; a < 5; ++a) {
        Mat t = Mat::diag({Elem::from_int(*F, a), Elem::from_int(*F, a).inverse()});
        CHECK(twisted_conj(t, delta, form) == delta);
    }
}

TEST_CASE("solve_mod_p") {
    std::vector<int> part;
    std::vector<std::vector<int>> null;
    CHECK(solve_mod_p({{1, 1}, {2, 2}}, {1, 2}, 5, part, null));
    CHECK(null.size() == 1);
    CHECK((part[0] + part[1]) % 5 == 1);
    CHECK(!solve_mod_p({{1, 1}, {1, 1}}, {1, 2}, 5, part, null));
}
