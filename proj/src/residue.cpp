#include "twres/residue.hpp"

#include "twres/errors.hpp"

#include <unsupported/Eigen/Polynomials>

#include <cmath>
#include <sstream>

namespace twres {

namespace {

using Poly = std::vector<Rational>;

void trim(Poly& a) {
    while (a.size() > 1 && a.back() == 0) a.pop_back();
    if (a.empty()) a.push_back(0);
}

Poly mul(const Poly& a, const Poly& b) {
    Poly r(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

Poly add(Poly a, const Poly& b) {
    if (a.size() < b.size()) a.resize(b.size(), Rational(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    return a;
}

Poly one_minus_u_pow(int m) {
    Poly r{Rational(1)};
    for (int t = 0; t < m; ++t) r = mul(r, {Rational(1), Rational(-1)});
    return r;
}

Rational at_one(const Poly& a) {
    Rational s = 0;
    for (const auto& x : a) s += x;
    return s;
}

// a / (1 - u), exact when a(1) = 0.
Poly div_one_minus_u(const Poly& a) {
    // a = (1 - u) b  =>  b_i = sum_{t <= i} a_t
    Poly b(a.size() > 1 ? a.size() - 1 : 1, Rational(0));
    Rational run = 0;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        run += a[i];
        b[i] = run;
    }
    return b;
}

Poly series_inverse(const Poly& a, int len) {
    if (a[0] == 0) throw DomainError("series inverse of a non-unit");
    Poly r(static_cast<std::size_t>(len), Rational(0));
    r[0] = 1 / a[0];
    for (int t = 1; t < len; ++t) {
        Rational s = 0;
        for (int i = 1; i <= t && i < static_cast<int>(a.size()); ++i) s += a[i] * r[t - i];
        r[t] = -s / a[0];
    }
    return r;
}

Poly series_mul(const Poly& a, const Poly& b, int len) {
    Poly r(static_cast<std::size_t>(len), Rational(0));
    for (int i = 0; i < len && i < static_cast<int>(a.size()); ++i)
        for (int j = 0; i + j < len && j < static_cast<int>(b.size()); ++j) r[i + j] += a[i] * b[j];
    return r;
}

// P(e^-x) as a power series in x.
Poly exp_substitute(const Poly& a, int len) {
    Poly r(static_cast<std::size_t>(len), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        Rational term = a[i];  // a_i (-i)^t / t!
        for (int t = 0; t < len; ++t) {
            r[t] += term;
            term *= Rational(-static_cast<long>(i));
            term /= (t + 1);
        }
    }
    return r;
}

Rational rpow(const Rational& b, int e) {
    Rational r = 1;
    for (int t = 0; t < std::abs(e); ++t) r *= b;
    return e < 0 ? Rational(1 / r) : r;
}

std::vector<std::string> strings(const Poly& a) {
    std::vector<std::string> out;
    for (const auto& x : a) out.push_back(rational_to_string(x));
    return out;
}

}  // namespace

Rational PolyFit::operator()(long k) const {
    Rational r = 0, kk = 1;
    for (const auto& c : coeffs) {
        r += c * kk;
        kk *= k;
    }
    return r;
}

PolyFit fit_polynomial(const std::vector<Rational>& c, int max_degree) {
    const int K = static_cast<int>(c.size());
    const int order = max_degree + 1;
    std::vector<Poly> table{c};
    for (int o = 1; o <= order && static_cast<int>(table.back().size()) > 1; ++o) {
        const auto& prev = table.back();
        Poly d;
        for (std::size_t k = 0; k + 1 < prev.size(); ++k) d.push_back(prev[k + 1] - prev[k]);
        table.push_back(d);
    }
    auto report = [&](const std::string& why) {
        std::ostringstream os;
        os << why << "; difference table:";
        for (std::size_t o = 0; o < table.size(); ++o) {
            os << "\n  d^" << o << ":";
            for (const auto& x : table[o]) os << ' ' << rational_to_string(x);
        }
        return os.str();
    };
    if (K < max_degree + 3 || static_cast<int>(table.size()) <= order)
        throw NoStabilization(report("need at least " + std::to_string(max_degree + 3) + " coefficients"));
    const auto& top = table[static_cast<std::size_t>(order)];
    int k0 = 0;
    for (int k = 0; k < static_cast<int>(top.size()); ++k)
        if (top[k] != 0) k0 = k + 1;
    if (K - k0 < max_degree + 3)
        throw NoStabilization(report("differences of order " + std::to_string(order) + " do not vanish from k0 = " +
                                     std::to_string(k0) + " with " + std::to_string(max_degree + 3) +
                                     " stabilized coefficients"));
    // Newton form at k0: P(k) = sum_j Delta^j c_{k0} binom(k - k0, j)
    Poly P{Rational(0)}, basis{Rational(1)};
    for (int j = 0; j <= max_degree; ++j) {
        P = add(P, mul(basis, {table[static_cast<std::size_t>(j)][static_cast<std::size_t>(k0)]}));
        Rational inv(1, j + 1);
        inv.canonicalize();
        basis = mul(basis, {Rational(-(k0 + j)) * inv, inv});
    }
    trim(P);
    return {P, k0};
}

std::vector<Rational> RationalFunction::expand(int count) const {
    return series_mul(num, series_inverse(den, count), count);
}

long double RationalFunction::eval(long double u) const {
    auto ev = [u](const Poly& a) {
        long double r = 0;
        for (std::size_t i = a.size(); i-- > 0;) r = r * u + a[i].get_d();
        return r;
    };
    return ev(num) / ev(den);
}

RationalFunction closed_form(const PolyFit& P, const std::vector<Rational>& head) {
    const int d = std::max(0, P.degree());
    // beta_j = Delta^j P(0); sum_k binom(k, j) u^k = u^j / (1 - u)^(j + 1)
    Poly vals;
    for (int k = 0; k <= d; ++k) vals.push_back(P(k));
    Poly num{Rational(0)};
    for (int j = 0; j <= d; ++j) {
        Poly uj(static_cast<std::size_t>(j + 1), Rational(0));
        uj[static_cast<std::size_t>(j)] = vals[0];
        num = add(num, mul(uj, one_minus_u_pow(d - j)));
        for (std::size_t k = 0; k + 1 < vals.size(); ++k) vals[k] = vals[k + 1] - vals[k];
        vals.pop_back();
    }
    Poly h(static_cast<std::size_t>(std::max(P.k0, 1)), Rational(0));
    for (int k = 0; k < P.k0; ++k) h[static_cast<std::size_t>(k)] = head.at(static_cast<std::size_t>(k)) - P(k);
    num = add(num, mul(h, one_minus_u_pow(d + 1)));
    Poly den = one_minus_u_pow(d + 1);
    trim(num);
    int m = d + 1;
    while (m > 0 && at_one(num) == 0 && !(num.size() == 1 && num[0] == 0)) {
        num = div_one_minus_u(num);
        --m;
    }
    if (num.size() == 1 && num[0] == 0) m = 0;
    den = one_minus_u_pow(m);
    trim(num);
    return {num, den};
}

int pole_order(const RationalFunction& R) {
    Poly num = R.num, den = R.den;
    trim(num);
    trim(den);
    int m = 0;
    while (den.size() > 1 && at_one(den) == 0) {
        den = div_one_minus_u(den);
        if (num.size() > 1 && at_one(num) == 0)
            num = div_one_minus_u(num);
        else
            ++m;
    }
    return m;
}

std::vector<LaurentTerm> laurent_at_zero(const RationalFunction& R, int n, int max_order) {
    if (max_order < 0) throw DomainError("laurent_at_zero needs max_order >= 0");
    Poly num = R.num, den = R.den;
    trim(num);
    trim(den);
    if (den.size() == 1 && den[0] == 0) throw DomainError("zero denominator");
    int m = 0;
    while (den.size() > 1 && at_one(den) == 0) {
        den = div_one_minus_u(den);
        if (num.size() > 1 && at_one(num) == 0)
            num = div_one_minus_u(num);
        else
            ++m;
    }
    if (den.size() > 1) {
        Eigen::VectorXd coeffs(static_cast<Eigen::Index>(den.size()));
        for (std::size_t i = 0; i < den.size(); ++i) coeffs[static_cast<Eigen::Index>(i)] = den[i].get_d();
        Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(coeffs);
        for (Eigen::Index i = 0; i < solver.roots().size(); ++i) {
            double r = std::abs(solver.roots()[i]);
            if (std::abs(r - 1.0) < 1e-9) {
                std::ostringstream os;
                os << "denominator root " << solver.roots()[i] << " on the unit circle";
                throw UnexpectedPole(os.str());
            }
        }
    }
    const int len = m + max_order + 1;
    // 1 - e^-x = x g(x)
    Poly g(static_cast<std::size_t>(len), Rational(0));
    Rational fact = 1;
    for (int t = 0; t < len; ++t) {
        fact *= (t + 1);
        g[static_cast<std::size_t>(t)] = Rational(t % 2 == 0 ? 1 : -1) / fact;
    }
    Poly ginv = series_inverse(g, len);
    Poly h = series_mul(exp_substitute(num, len), series_inverse(exp_substitute(den, len), len), len);
    for (int t = 0; t < m; ++t) h = series_mul(h, ginv, len);
    std::vector<LaurentTerm> out;
    for (int r = -m; r <= max_order; ++r)
        out.push_back({r, h[static_cast<std::size_t>(r + m)] * rpow(Rational(2 * n), r), r});
    return out;
}

NumericCheck numeric_cross_check(const PolyFit& P, const std::vector<Rational>& head, const RationalFunction& R,
                                 int n, int q, double s) {
    const long double lnq = std::log(static_cast<long double>(q));
    const long double u = std::exp(-2.0L * n * s * lnq);
    // coefficients are P(k) beyond the head; sum until the tail is negligible
    long double total = 0, uk = 1;
    std::vector<long double> pc;
    for (const auto& c : P.coeffs) pc.push_back(c.get_d());
    for (long k = 0;; ++k) {
        long double ck;
        if (k < P.k0) {
            ck = head.at(static_cast<std::size_t>(k)).get_d();
        } else {
            ck = 0;
            for (std::size_t i = pc.size(); i-- > 0;) ck = ck * k + pc[i];
        }
        total += ck * uk;
        uk *= u;
        if (k > P.k0 + 10 && uk * (std::fabs(ck) + 1) * (k + 1) < 1e-30L * (std::fabs(total) + 1e-300L)) break;
        if (k > 100000000) break;
    }
    long double laurent = 0;
    for (const auto& t : laurent_at_zero(R, n, 1))
        laurent += t.rational.get_d() * std::pow(lnq, static_cast<long double>(t.lnq_power)) *
                   std::pow(static_cast<long double>(s), static_cast<long double>(t.order));
    double rel = total == 0 ? static_cast<double>(std::fabs(laurent))
                            : static_cast<double>(std::fabs((total - laurent) / total));
    return {s, total, laurent, rel};
}

std::string polynomial_to_string(const std::vector<Rational>& a, const std::string& var) {
    std::string s;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        if (!s.empty()) s += " + ";
        s += rational_to_string(a[i]);
        if (i >= 1) s += "*" + var;
        if (i >= 2) s += "^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
}

namespace {

nlohmann::json series_json(const std::vector<Rational>& c, const ResidueInput& in, nlohmann::json& checks,
                           PolyFit* fit_out = nullptr) {
    nlohmann::json j;
    bool zero = true;
    for (const auto& x : c) zero = zero && x == 0;
    PolyFit P = zero ? PolyFit{{Rational(0)}, 0} : fit_polynomial(c, in.max_degree);
    RationalFunction R = closed_form(P, c);
    auto re = R.expand(static_cast<int>(c.size()));
    bool exact = true;
    for (std::size_t k = 0; k < c.size(); ++k) exact = exact && re[k] == c[k];
    checks["reexpansion_exact"] = exact;
    auto terms = laurent_at_zero(R, in.n, 0);
    j["k0"] = P.k0;
    j["P"] = strings(P.coeffs);
    j["closed_form"] = {{"num", strings(R.num)}, {"den", strings(R.den)}};
    nlohmann::json lj = nlohmann::json::array();
    std::string residue = "0";
    for (const auto& t : terms) {
        lj.push_back({{"order", t.order}, {"rational", rational_to_string(t.rational)}, {"lnq_power", t.lnq_power}});
        if (t.order == -1) residue = rational_to_string(t.rational);
    }
    j["laurent"] = lj;
    j["residue_s_minus_1"] = {{"rational", residue}, {"lnq_power", -1}};
    j["pole_order"] = pole_order(R);
    // Dropping leading terms only changes the holomorphic part.
    std::vector<Rational> shifted = c;
    for (std::size_t k = 0; k < shifted.size() && k < 2; ++k) shifted[k] = 0;
    bool shifted_zero = true;
    for (const auto& x : shifted) shifted_zero = shifted_zero && x == 0;
    PolyFit Ps = shifted_zero ? PolyFit{{Rational(0)}, 0} : fit_polynomial(shifted, in.max_degree);
    auto ts = laurent_at_zero(closed_form(Ps, shifted), in.n, 0);
    bool same = true;
    for (const auto& t : terms)
        if (t.order < 0) {
            bool found = false;
            for (const auto& u : ts) found = found || (u.order == t.order && u.rational == t.rational);
            same = same && (found || t.rational == 0);
        }
    for (const auto& u : ts)
        if (u.order < 0 && u.order < terms.front().order && u.rational != 0) same = false;
    checks["principal_part_shift_invariant"] = same;
    nlohmann::json nc = nlohmann::json::array();
    bool ok = true;
    double values[2] = {0, 0};
    const double ss[2] = {1e-3, 1e-4};
    for (int t = 0; t < 2; ++t) {
        auto chk = numeric_cross_check(P, c, R, in.n, in.q, ss[t]);
        values[t] = static_cast<double>(chk.series);
        ok = ok && chk.rel_error <= 1e-6;
        std::ostringstream se, le;
        se.precision(12);
        le.precision(12);
        se << static_cast<double>(chk.series);
        le << static_cast<double>(chk.laurent);
        nc.push_back({{"s", ss[t]}, {"series", se.str()}, {"laurent", le.str()}, {"rel_error_ok", chk.rel_error <= 1e-6}});
    }
    checks["numeric_cross_check"] = nc;
    checks["numeric_rel_error_le_1e-6"] = ok;
    if (values[0] != 0 && values[1] != 0) {
        double order = std::log(std::fabs(values[1] / values[0])) / std::log(10.0);
        checks["numeric_pole_order"] = std::lround(order);
        checks["numeric_pole_order_matches"] = std::lround(order) == pole_order(R);
    }
    if (fit_out) *fit_out = P;
    return j;
}

}  // namespace

nlohmann::json residue_report(const ResidueInput& in) {
    if (in.c.empty()) throw DomainError("residue_report needs coefficients");
    const int p = in.p;
    auto coord = [&](int i) {
        std::vector<Rational> v;
        for (const auto& x : in.c) v.push_back(x.coeff(i));
        return v;
    };
    nlohmann::json checks = nlohmann::json::object();
    std::vector<Rational> c0 = coord(0);
    PolyFit fit;
    nlohmann::json main = series_json(c0, in, checks, &fit);
    bool all_zero = true;
    for (const auto& x : in.c) all_zero = all_zero && x.is_zero();
    bool rational = true;
    for (const auto& x : in.c) rational = rational && x.is_rational();
    nlohmann::json out;
    std::string regime;
    if (all_zero) {
        regime = "zero";
    } else if (p % 2 == 1) {
        bool fact = true;
        for (std::size_t k = 0; k < in.c.size(); ++k) fact = fact && in.c[k] == in.c[0] * Rational(4 * long(k) + 1);
        checks["factorization_4k_plus_1"] = fact;
        regime = fact ? "odd-factorized" : "odd-unfactorized";
    } else {
        regime = "even-weighted";
    }
    if (p == 2 && !all_zero) {
        // P(k) = 2|U| (A + B k)
        Rational scale = 2 * Rational(in.unit_square_classes);
        Rational A = fit.coeffs[0] / scale;
        Rational B = fit.coeffs.size() > 1 ? Rational(fit.coeffs[1] / scale) : Rational(0);
        checks["affine"] = fit.degree() <= 1;
        checks["A"] = rational_to_string(A);
        checks["B"] = rational_to_string(B);
        checks["A_positive"] = A > 0;
        checks["B_positive"] = B > 0;
    }
    out["regime"] = regime;
    out["k0"] = main["k0"];
    out["P"] = main["P"];
    out["closed_form"] = main["closed_form"];
    out["laurent"] = main["laurent"];
    out["residue_s_minus_1"] = main["residue_s_minus_1"];
    out["pole_order"] = main["pole_order"];
    std::vector<std::string> cs;
    for (const auto& x : in.c) cs.push_back(x.to_string());
    out["coefficients"] = cs;
    out["variable"] = "u = q^(-" + std::to_string(2 * in.n) + "s)";
    if (!rational) {
        nlohmann::json extra = nlohmann::json::array();
        for (int i = 1; i < std::max(p - 1, 1); ++i) {
            auto v = coord(i);
            bool z = true;
            for (const auto& x : v) z = z && x == 0;
            if (z) continue;
            nlohmann::json sub_checks = nlohmann::json::object();
            auto sub = series_json(v, in, sub_checks);
            sub["coordinate"] = "zeta^" + std::to_string(i);
            sub["checks"] = sub_checks;
            extra.push_back(sub);
        }
        out["cyclotomic_coordinates"] = extra;
    }
    out["checks"] = checks;
    out["metadata"] = in.metadata;
    return out;
}

}  // namespace twres
