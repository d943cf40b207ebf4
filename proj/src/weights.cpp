#include "twres/weights.hpp"

#include <algorithm>

namespace twres {

namespace {

void check_torus(const ClubsuitTorus& t) {
    if (t.r < 1 || 2 * t.r > t.n) throw ClubsuitViolated("split rank must satisfy 1 <= r <= n/2");
}

// Column index j (0-based) -> (split coordinate, exponent sign), or (-1, 0) for a middle column.
std::pair<int, int> column_role(int j, const ClubsuitTorus& t) {
    if (j < t.r) return {j, 1};
    if (j >= t.n - t.r) return {t.n - 1 - j, -1};
    return {-1, 0};
}

// Volume of {u in (O^x)^r : pi^k g t_val u h in L} for one valuation vector.
Rational unit_volume(const Mat& g, const Mat& h, const std::vector<int>& a, int k, const LatticeSpec& L,
                     const ClubsuitTorus& torus) {
    const LocalField& F = g.field();
    const int n = torus.n;
    const int level = -L.i;
    // c[x][y][j] = pi^k g_xj t_j h_jy with the valuation part of t only.
    std::vector<Elem> coef(static_cast<std::size_t>(n * n * n), Elem::zero(F));
    int min_term = kInfOrd;
    for (int j = 0; j < n; ++j) {
        const auto [c, sgn] = column_role(j, torus);
        const int tv = c < 0 ? 0 : sgn * a[static_cast<std::size_t>(c)];
        const Elem scale = Elem::pi_pow(F, k + tv);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                Elem v = scale * g(x, j) * h(j, y);
                if (!v.is_zero()) min_term = std::min(min_term, v.ord());
                coef[static_cast<std::size_t>((x * n + y) * n + j)] = v;
            }
    }
    if (min_term >= level) return Rational(1);
    // Adaptive refinement over unit digits: at depth d each unit is known mod pi^d,
    // so every entry of the product is known mod pi^(min ord c_j + d).
    const int q = F.q();
    const int r = torus.r;
    Rational vol = 0;
    struct Node {
        std::vector<std::vector<int>> digits;  // per unit, d digits
    };
    std::vector<Node> stack;
    {
        // depth 1: leading digits
        long count = 1;
        for (int c = 0; c < r; ++c) count *= (q - 1);
        for (long code = 0; code < count; ++code) {
            Node nd;
            long cc = code;
            for (int c = 0; c < r; ++c) {
                nd.digits.push_back({static_cast<int>(cc % (q - 1)) + 1});
                cc /= (q - 1);
            }
            stack.push_back(std::move(nd));
        }
    }
    long visited = 0;
    while (!stack.empty()) {
        Node nd = std::move(stack.back());
        stack.pop_back();
        if (++visited > 2000000) throw DomainError("w_k_oracle: unit refinement too large");
        const int d = static_cast<int>(nd.digits[0].size());
        std::vector<Elem> u, uinv;
        for (int c = 0; c < r; ++c) {
            u.push_back(Elem::from_digits(F, 0, nd.digits[static_cast<std::size_t>(c)]));
            uinv.push_back(u.back().inverse());
        }
        bool fail = false, all_in = true;
        for (int x = 0; x < n && !fail; ++x)
            for (int y = 0; y < n && !fail; ++y) {
                Elem s = Elem::zero(F);
                int known = kInfOrd;
                for (int j = 0; j < n; ++j) {
                    const Elem& cf = coef[static_cast<std::size_t>((x * n + y) * n + j)];
                    if (cf.is_zero()) continue;
                    const auto [c, sgn] = column_role(j, torus);
                    if (c < 0) {
                        s += cf;
                        continue;
                    }
                    s += cf * (sgn > 0 ? u : uinv)[static_cast<std::size_t>(c)];
                    known = std::min(known, cf.ord() + d);
                }
                if (known >= level) {
                    if (!s.ord_ge(level)) fail = true;
                } else {
                    if (!s.ord_ge(known)) fail = true;
                    else all_in = false;
                }
            }
        if (fail) continue;
        if (all_in) {
            Rational cell = 1;
            for (int c = 0; c < r; ++c) cell /= Rational((q - 1) * [&] {
                long pw = 1;
                for (int i = 1; i < d; ++i) pw *= q;
                return pw;
            }());
            vol += cell;
            continue;
        }
        if (d > 60) throw DomainError("w_k_oracle: refinement depth exceeded");
        long count = 1;
        for (int c = 0; c < r; ++c) count *= q;
        for (long code = 0; code < count; ++code) {
            Node ch = nd;
            long cc = code;
            for (int c = 0; c < r; ++c) {
                ch.digits[static_cast<std::size_t>(c)].push_back(static_cast<int>(cc % q));
                cc /= q;
            }
            stack.push_back(std::move(ch));
        }
    }
    vol.canonicalize();
    return vol;
}

// h = 1: membership is column by column and independent of units.
bool columns_in_lattice(const std::vector<int>& colord, const std::vector<int>& a, int k, const LatticeSpec& L,
                        const ClubsuitTorus& torus) {
    for (int j = 0; j < torus.n; ++j) {
        const auto [c, sgn] = column_role(j, torus);
        const int tv = c < 0 ? 0 : sgn * a[static_cast<std::size_t>(c)];
        if (colord[static_cast<std::size_t>(j)] >= kInfOrd / 2) continue;
        if (colord[static_cast<std::size_t>(j)] + k + tv < -L.i) return false;
    }
    return true;
}

}  // namespace

std::vector<int> delta_vector(const Mat& g, int r) {
    std::vector<int> d;
    for (int i = 1; i <= r; ++i) d.push_back(delta(g, i));
    return d;
}

long w_k_closed(const WeightQuery& q) {
    check_torus(q.torus);
    if (q.h) throw DomainError("w_k_closed is only valid for h = 1");
    const int kk = q.k + q.L.i;
    for (int j = q.torus.r; j < q.torus.n - q.torus.r; ++j)
        if (column_ord(q.g, j) + kk < 0) return 0;
    long prod = 1;
    for (int d : delta_vector(q.g, q.torus.r)) {
        if (d < -2 * kk) return 0;
        prod *= d + 2 * kk + 1;
    }
    return prod;
}

Rational w_k_oracle(const WeightQuery& q) {
    check_torus(q.torus);
    const ClubsuitTorus& T = q.torus;
    if (q.h && 2 * T.r != T.n) throw DomainError("w_k_oracle with general h needs r = n/2");
    const Mat& g = q.g;
    const int hinv_ord = q.h ? mat_ord(q.h->inverse()) : 0;
    // t in pi^(-k) g^-1 L h^-1 forces every diagonal entry to have ord >= o.
    const int o = mat_ord(g.inverse()) + hinv_ord - q.L.i - q.k;
    const int W = -o;
    if (W < 0) return Rational(0);
    std::vector<int> colord(static_cast<std::size_t>(T.n));
    for (int j = 0; j < T.n; ++j) colord[static_cast<std::size_t>(j)] = column_ord(g, j);

    auto volume = [&](const std::vector<int>& a) -> Rational {
        if (!q.h) return columns_in_lattice(colord, a, q.k, q.L, T) ? Rational(1) : Rational(0);
        return unit_volume(g, *q.h, a, q.k, q.L, T);
    };

    Rational total = 0;
    std::vector<int> a(static_cast<std::size_t>(T.r), -W);
    for (;;) {
        total += volume(a);
        int c = 0;
        while (c < T.r && a[static_cast<std::size_t>(c)] == W) a[static_cast<std::size_t>(c++)] = -W;
        if (c == T.r) break;
        ++a[static_cast<std::size_t>(c)];
    }
    // Bug detector: nothing just outside the window may lie in the lattice.
    for (int c = 0; c < T.r; ++c)
        for (int s : {-1, 1}) {
            std::vector<int> b(static_cast<std::size_t>(T.r), 0);
            b[static_cast<std::size_t>(c)] = s * (W + 1);
            if (volume(b) != 0) throw WindowOverflow("valuation vector outside the proven window contributes");
        }
    return total;
}

Mat x_alpha(const Elem& alpha, int n) {
    if (alpha.is_zero()) throw DomainError("x_alpha needs alpha != 0");
    const LocalField& F = alpha.field();
    std::vector<Elem> d;
    for (int i = 0; i < n; ++i) d.push_back(i < n / 2 ? alpha : Elem::from_int(F, 1));
    return Mat::diag(d);
}

std::map<int, Rational> W_k_symbolic(const Mat& g, const std::optional<Mat>& h, const SquareClassSet& set,
                                     const std::vector<int>& omega, int k, const ClubsuitTorus& torus,
                                     LatticeSpec L) {
    std::map<int, Rational> out;
    for (std::size_t a = 0; a < set.reps.size(); ++a) {
        const Elem& alpha = set.reps[a];
        const int sign = omega.empty() ? 1 : omega[a];
        if (sign != 1 && sign != -1) throw DomainError("omega must take values +-1");
        WeightQuery q{g * x_alpha(alpha, torus.n).inverse(), h, k, L, torus};
        Rational w = h ? w_k_oracle(q) : Rational(w_k_closed(q));
        out[alpha.ord()] += sign * w;
    }
    return out;
}

Rational W_k(const Mat& g, const std::optional<Mat>& h, const SquareClassSet& set, const std::vector<int>& omega,
             int k, const ClubsuitTorus& torus, LatticeSpec L) {
    Rational total = 0;
    for (const auto& [ord, c] : W_k_symbolic(g, h, set, omega, k, torus, L)) total += c;
    return total;
}

}  // namespace twres
