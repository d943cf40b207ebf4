#include "twres/twisted.hpp"

#include <algorithm>

namespace twres {

namespace {

using ElemMatrix = std::vector<std::vector<Elem>>;

int ord_or_inf(const Elem& x) { return x.is_zero() ? kInfOrd : x.raw_val(); }

std::vector<Elem> berkowitz(const ElemMatrix& M, const LocalField& F) {
    const std::size_t n = M.size();
    if (n == 0) return {Elem::from_int(F, 1)};
    if (n == 1) return {Elem::from_int(F, 1), -M[0][0]};
    const std::size_t k = n - 1;
    ElemMatrix sub(k, std::vector<Elem>(k));
    std::vector<Elem> R(k), C(k);
    for (std::size_t i = 0; i < k; ++i) {
        R[i] = M[0][i + 1];
        C[i] = M[i + 1][0];
        for (std::size_t j = 0; j < k; ++j) sub[i][j] = M[i + 1][j + 1];
    }
    // diags = [1, -a, -R C, -R A C, -R A^2 C, ...]
    std::vector<Elem> diags = {Elem::from_int(F, 1), -M[0][0]};
    std::vector<Elem> v = C;
    for (std::size_t step = 0; step < k; ++step) {
        Elem s = Elem::zero(F);
        for (std::size_t i = 0; i < k; ++i) s += R[i] * v[i];
        diags.push_back(-s);
        if (step + 1 < k) {
            std::vector<Elem> nv(k, Elem::zero(F));
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j)
                    if (!sub[i][j].is_exact_zero()) nv[i] += sub[i][j] * v[j];
            v = std::move(nv);
        }
    }
    const std::vector<Elem> inner = berkowitz(sub, F);
    std::vector<Elem> out(n + 1, Elem::zero(F));
    for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = 0; j < n && j <= i; ++j) out[i] += diags[i - j] * inner[j];
    return out;
}

/// Nullspace basis of A (rows x cols) over F; each basis vector is 1 at its free column.
std::vector<std::vector<Elem>> nullspace(ElemMatrix A, const LocalField& F, std::vector<int>* free_cols) {
    const std::size_t rows = A.size(), cols = A.empty() ? 0 : A[0].size();
    std::vector<int> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = rows;
        int best = kInfOrd;
        for (std::size_t i = r; i < rows; ++i) {
            const int o = ord_or_inf(A[i][c]);
            if (o < best) {
                best = o;
                piv = i;
            }
        }
        if (piv == rows) continue;
        std::swap(A[r], A[piv]);
        const Elem inv = A[r][c].inverse();
        for (auto& x : A[r]) x *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || A[i][c].is_zero()) continue;
            const Elem f = A[i][c];
            for (std::size_t j = 0; j < cols; ++j) A[i][j] -= f * A[r][j];
        }
        pivot_col.push_back(static_cast<int>(c));
        ++r;
    }
    std::vector<std::vector<Elem>> basis;
    std::vector<int> frees;
    for (std::size_t c = 0; c < cols; ++c) {
        if (std::find(pivot_col.begin(), pivot_col.end(), static_cast<int>(c)) != pivot_col.end()) continue;
        std::vector<Elem> v(cols, Elem::zero(F));
        v[c] = Elem::from_int(F, 1);
        for (std::size_t i = 0; i < pivot_col.size(); ++i) v[static_cast<std::size_t>(pivot_col[i])] = -A[i][c];
        basis.push_back(std::move(v));
        frees.push_back(static_cast<int>(c));
    }
    if (free_cols) *free_cols = frees;
    return basis;
}

int mod_p(long x, int p) {
    long r = x % p;
    return static_cast<int>(r < 0 ? r + p : r);
}

}  // namespace

Mat TorusElem::gamma() const { return Mat::diag({alpha, alpha.inverse()}); }

bool TorusElem::regular() const {
    const LocalField& F = alpha.field();
    const Elem one = Elem::from_int(F, 1);
    return !alpha.is_zero() && !(alpha == one) && !(alpha == -one);
}

std::vector<Elem> charpoly(const std::vector<std::vector<Elem>>& A) {
    if (A.empty()) throw DomainError("charpoly of an empty matrix");
    return berkowitz(A, A[0][0].field());
}

DiscriminantReport lowterm_report(const std::vector<std::vector<Elem>>& A) {
    const auto cp = charpoly(A);
    const int N = static_cast<int>(A.size());
    DiscriminantReport rep;
    rep.dim = N;
    int r = 0;
    while (r < N && cp[static_cast<std::size_t>(N - r)].is_zero()) ++r;
    rep.kernel_dim = r;
    rep.lowterm = cp[static_cast<std::size_t>(N - r)];
    rep.ord = rep.lowterm.ord();
    return rep;
}

Mat S_of(const Mat& gamma, const GroupForm& form) {
    const LocalField& F = gamma.field();
    const Mat gm1 = gamma - Mat::identity(F, gamma.n());
    if (gm1.det().is_zero()) throw SingularGammaMinusOne("gamma - I is singular");
    return form.w * form.J.inverse() * gm1;
}

Mat S_of(const TorusElem& g, const GroupForm& form) { return S_of(g.gamma(), form); }

Mat twisted_conj(const Mat& g, const Mat& delta, const GroupForm& form) {
    return g * delta * vdash(g, form);
}

bool is_eps_symmetric(const Mat& X, const GroupForm& form) { return vdash(X, form) == X; }

bool is_eps_symmetric_mod(const Mat& X, const GroupForm& form, int m) {
    return mat_ord_ge(X - vdash(X, form), m);
}

std::vector<std::vector<Elem>> d_eps_operator(const Mat& delta, const GroupForm& form) {
    const LocalField& F = delta.field();
    const int n = delta.n();
    const int N = n * n;
    const Mat dinv = delta.inverse();
    ElemMatrix A(static_cast<std::size_t>(N), std::vector<Elem>(static_cast<std::size_t>(N), Elem::zero(F)));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Mat E(F, n);
            E(a, b) = Elem::from_int(F, 1);
            const Mat img = -(delta * vdash(E, form) * dinv) - E;
            const int col = a * n + b;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    A[static_cast<std::size_t>(i * n + j)][static_cast<std::size_t>(col)] = img(i, j);
        }
    return A;
}

DiscriminantReport d_eps(const Mat& delta, const GroupForm& form, int expected_kernel) {
    if (delta.det().is_zero()) throw Singular("d_eps of a singular matrix");
    auto rep = lowterm_report(d_eps_operator(delta, form));
    if (expected_kernel >= 0 && rep.kernel_dim != expected_kernel)
        throw NotRegular("twisted centralizer has dimension " + std::to_string(rep.kernel_dim) +
                         ", expected " + std::to_string(expected_kernel));
    return rep;
}

int phi_S(const TorusElem& g, const GroupForm& form) {
    const auto rep = d_eps(S_of(g, form), form);
    return std::max(0, rep.ord);
}

std::vector<std::vector<Elem>> lie_h_basis(const GroupForm& form, const LocalField& F) {
    const int n = form.n;
    const int N = n * n;
    ElemMatrix A(static_cast<std::size_t>(N), std::vector<Elem>(static_cast<std::size_t>(N), Elem::zero(F)));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Mat E(F, n);
            E(a, b) = Elem::from_int(F, 1);
            const Mat img = E * form.J + form.J * E.transpose();
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    A[static_cast<std::size_t>(i * n + j)][static_cast<std::size_t>(a * n + b)] = img(i, j);
        }
    return nullspace(A, F, nullptr);
}

DiscriminantReport weyl_disc(const Mat& gamma, const GroupForm& form) {
    const LocalField& F = gamma.field();
    const int n = form.n;
    const int N = n * n;
    ElemMatrix A(static_cast<std::size_t>(N), std::vector<Elem>(static_cast<std::size_t>(N), Elem::zero(F)));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Mat E(F, n);
            E(a, b) = Elem::from_int(F, 1);
            const Mat img = E * form.J + form.J * E.transpose();
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    A[static_cast<std::size_t>(i * n + j)][static_cast<std::size_t>(a * n + b)] = img(i, j);
        }
    std::vector<int> frees;
    const auto basis = nullspace(A, F, &frees);
    const std::size_t r = basis.size();
    const Mat ginv = gamma.inverse();
    ElemMatrix M(r, std::vector<Elem>(r, Elem::zero(F)));
    for (std::size_t k = 0; k < r; ++k) {
        Mat X(F, n);
        for (int i = 0; i < N; ++i) X(i / n, i % n) = basis[k][static_cast<std::size_t>(i)];
        const Mat Y = gamma * X * ginv - X;
        for (std::size_t i = 0; i < r; ++i) {
            const int f = frees[i];
            M[i][k] = Y(f / n, f % n);
        }
    }
    auto rep = lowterm_report(M);
    if (rep.kernel_dim == static_cast<int>(r)) {
        // Lie(H) = Lie(T): the quotient is zero-dimensional and D = 1.
        rep.lowterm = Elem::from_int(F, 1);
        rep.ord = 0;
    }
    return rep;
}

bool solve_mod_p(std::vector<std::vector<int>> L, std::vector<int> r, int p, std::vector<int>& particular,
                 std::vector<std::vector<int>>& nullspace_out) {
    const std::size_t rows = L.size(), cols = L.empty() ? 0 : L[0].size();
    auto inv = [p](int a) {
        for (int x = 1; x < p; ++x)
            if ((a * x) % p == 1) return x;
        return 0;
    };
    std::vector<int> pivot_col;
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < rows; ++c) {
        std::size_t piv = rows;
        for (std::size_t i = row; i < rows; ++i)
            if (L[i][c] % p != 0) {
                piv = i;
                break;
            }
        if (piv == rows) continue;
        std::swap(L[row], L[piv]);
        std::swap(r[row], r[piv]);
        const int iv = inv(mod_p(L[row][c], p));
        for (auto& x : L[row]) x = mod_p(static_cast<long>(x) * iv, p);
        r[row] = mod_p(static_cast<long>(r[row]) * iv, p);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == row || L[i][c] % p == 0) continue;
            const int f = L[i][c];
            for (std::size_t j = 0; j < cols; ++j) L[i][j] = mod_p(L[i][j] - static_cast<long>(f) * L[row][j], p);
            r[i] = mod_p(r[i] - static_cast<long>(f) * r[row], p);
        }
        pivot_col.push_back(static_cast<int>(c));
        ++row;
    }
    for (std::size_t i = row; i < rows; ++i)
        if (mod_p(r[i], p) != 0) return false;
    particular.assign(cols, 0);
    for (std::size_t i = 0; i < pivot_col.size(); ++i) particular[static_cast<std::size_t>(pivot_col[i])] = r[i];
    nullspace_out.clear();
    for (std::size_t c = 0; c < cols; ++c) {
        if (std::find(pivot_col.begin(), pivot_col.end(), static_cast<int>(c)) != pivot_col.end()) continue;
        std::vector<int> v(cols, 0);
        v[c] = 1;
        for (std::size_t i = 0; i < pivot_col.size(); ++i)
            v[static_cast<std::size_t>(pivot_col[i])] = mod_p(-L[i][c], p);
        nullspace_out.push_back(std::move(v));
    }
    return true;
}

CentralizerSampleReport twisted_centralizer_sample(const TorusElem& tg, int m, long trials, std::uint64_t seed,
                                                   int slack) {
    if (!tg.regular()) throw NotRegular("gamma must be regular");
    const LocalField& F = tg.alpha.field();
    const int p = F.p();
    const auto form = GroupForm::orthogonal(F, 2);
    const Mat delta = S_of(tg, form).inverse();
    if (!mat_ord_ge(delta, 0) || delta.det().ord() != 0)
        throw DomainError("twisted_centralizer_sample needs S(gamma)^-1 in GL_2(O)");

    // Level 0: all g mod p with g delta g^|- = delta mod p.
    std::vector<std::array<int, 4>> level0;
    for (int code = 0; code < p * p * p * p; ++code) {
        std::array<int, 4> d{code % p, (code / p) % p, (code / (p * p)) % p, code / (p * p * p)};
        if (mod_p(static_cast<long>(d[0]) * d[3] - static_cast<long>(d[1]) * d[2], p) == 0) continue;
        Mat g = Mat::from_ints(F, {{d[0], d[1]}, {d[2], d[3]}});
        if (mat_ord_ge(twisted_conj(g, delta, form) - delta, 1)) level0.push_back(d);
    }
    CentralizerSampleReport rep;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> digit(0, p - 1);
    for (long t = 0; t < trials; ++t) {
        ++rep.trials;
        const auto& d = level0[std::uniform_int_distribution<std::size_t>(0, level0.size() - 1)(rng)];
        Mat g = Mat::from_ints(F, {{d[0], d[1]}, {d[2], d[3]}});
        bool ok = true;
        for (int j = 1; j < m && ok; ++j) {
            const Elem pij = Elem::pi_pow(F, j);
            const Mat E = pij.inverse() * (twisted_conj(g, delta, form) - delta);
            // L(Y) = Y delta g^|- + g delta Y^|-  (mod p), on the basis E_ab.
            std::vector<std::vector<int>> L(4, std::vector<int>(4, 0));
            const Mat right = delta * vdash(g, form);
            const Mat left = g * delta;
            for (int ab = 0; ab < 4; ++ab) {
                Mat Y(F, 2);
                Y(ab / 2, ab % 2) = Elem::from_int(F, 1);
                const Mat img = Y * right + left * vdash(Y, form);
                for (int ij = 0; ij < 4; ++ij) L[static_cast<std::size_t>(ij)][static_cast<std::size_t>(ab)] = img(ij / 2, ij % 2).residue();
            }
            std::vector<int> rhs(4);
            for (int ij = 0; ij < 4; ++ij) rhs[static_cast<std::size_t>(ij)] = mod_p(-E(ij / 2, ij % 2).residue(), p);
            std::vector<int> part;
            std::vector<std::vector<int>> null;
            if (!solve_mod_p(L, rhs, p, part, null)) {
                ok = false;
                ++rep.restarts;
                break;
            }
            std::vector<int> y = part;
            for (const auto& v : null) {
                const int c = digit(rng);
                for (std::size_t i = 0; i < 4; ++i) y[i] = mod_p(y[i] + static_cast<long>(c) * v[i], p);
            }
            Mat Y = Mat::from_ints(F, {{y[0], y[1]}, {y[2], y[3]}});
            g = g + pij * Y;
        }
        if (!ok) continue;
        if (!mat_ord_ge(twisted_conj(g, delta, form) - delta, m)) continue;
        ++rep.solutions;
        const int lvl = m - slack;
        const bool torus = g(0, 1).ord_ge(lvl) && g(1, 0).ord_ge(lvl) &&
                           (g(0, 0) * g(1, 1) - Elem::from_int(F, 1)).ord_ge(lvl);
        if (torus) ++rep.in_torus;
    }
    return rep;
}

}  // namespace twres
