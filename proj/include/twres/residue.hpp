#pragma once

#include "twres/cyclotomic.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace twres {

/// P(k) = sum coeffs[i] k^i, valid for k >= k0.
struct PolyFit {
    std::vector<Rational> coeffs;
    int k0 = 0;
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    Rational operator()(long k) const;
};

/// Exact finite-difference fit of degree <= max_degree; NoStabilization unless at least
/// max_degree + 3 coefficients follow the onset k0.
PolyFit fit_polynomial(const std::vector<Rational>& c, int max_degree);

/// N(u) / D(u), ascending coefficient lists.
struct RationalFunction {
    std::vector<Rational> num, den;
    std::vector<Rational> expand(int count) const;
    long double eval(long double u) const;
};

/// sum_{k >= 0} c_k u^k where c_k = P(k) for k >= k0 and c_k = head[k] below;
/// reduced so that D(u) = (1 - u)^m.
RationalFunction closed_form(const PolyFit& P, const std::vector<Rational>& head);

/// rational * (ln q)^lnq_power * s^order.
struct LaurentTerm {
    int order;
    Rational rational;
    int lnq_power;
};

/// Expansion at s = 0 of R(q^(-2ns)) through s^max_order (max_order >= 0):
/// the principal part and the holomorphic terms up to max_order.
/// UnexpectedPole when D has a root other than 1 within 1e-9 of the unit circle.
std::vector<LaurentTerm> laurent_at_zero(const RationalFunction& R, int n, int max_order = 0);

/// Pole order at u = 1 (multiplicity of 1 - u in the reduced denominator).
int pole_order(const RationalFunction& R);

struct NumericCheck {
    double s;
    long double series;
    long double laurent;
    double rel_error;
};

/// Truncated-series evaluation of sum c_k u^k (c_k = P(k) beyond the head) at u = q^(-2ns)
/// against the Laurent expansion through s^1.
NumericCheck numeric_cross_check(const PolyFit& P, const std::vector<Rational>& head, const RationalFunction& R,
                                 int n, int q, double s);

struct ResidueInput {
    int p = 0;
    int q = 0;
    int n = 2;
    int max_degree = 1;  // split rank
    std::vector<CharacterValue> c;
    long unit_square_classes = 1;
    nlohmann::json metadata = nlohmann::json::object();
};

/// c_k -> P -> closed form -> Laurent data, with regime classification and checks.
nlohmann::json residue_report(const ResidueInput& in);

std::string polynomial_to_string(const std::vector<Rational>& a, const std::string& var);

}  // namespace twres
