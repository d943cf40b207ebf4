#include "twres/integrator.hpp"

#include "twres/parallel.hpp"
#include "twres/weights.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace twres {

std::string MeasureValue::to_string() const {
    std::string s = value.to_string();
    if (half_q_exp != 0) s += " * q^(" + std::to_string(half_q_exp) + "/2)";
    return s;
}

void TruncationSpec::validate() const {
    if (m < 1) throw ConfigError("pipeline.depth must be >= 1");
    if (b_window < 1) throw ConfigError("pipeline.b_window must be >= 1");
    if (e_max < 1) throw ConfigError("pipeline.e_max must be >= 1");
    if (k_max < 0) throw ConfigError("pipeline.k_max must be >= 0");
    if (workers < 1) throw ConfigError("pipeline.workers must be >= 1");
}

namespace {

std::string field_key(const LocalField& F) {
    std::ostringstream os;
    os << F.p() << ':' << F.e() << ':' << F.precision();
    for (long c : F.eisenstein()) os << ',' << c;
    return os.str();
}

// Caches hold digit data only: Elems point at their field, which may not outlive the cache.
struct DigitElem {
    int val;
    std::vector<int> digits;
    Elem build(const LocalField& F) const { return Elem::from_digits(F, val, digits); }
};

DigitElem to_digit_elem(const Elem& x, int count) { return {x.ord(), x.unit_digits(count)}; }

SquareClassSet cached_square_classes(const LocalField& F) {
    struct Entry {
        std::vector<DigitElem> reps, unit_reps;
        int level;
    };
    static std::mutex mu;
    static std::map<std::string, Entry> cache;
    std::unique_lock<std::mutex> lock(mu);
    auto key = field_key(F);
    auto it = cache.find(key);
    if (it == cache.end()) {
        lock.unlock();
        auto set = square_class_reps(F);
        Entry e{{}, {}, set.level};
        for (const auto& r : set.reps) e.reps.push_back(to_digit_elem(r, set.level + 2));
        for (const auto& r : set.unit_reps) e.unit_reps.push_back(to_digit_elem(r, set.level + 2));
        lock.lock();
        it = cache.emplace(key, std::move(e)).first;
    }
    SquareClassSet out;
    out.level = it->second.level;
    for (const auto& r : it->second.reps) out.reps.push_back(r.build(F));
    for (const auto& r : it->second.unit_reps) out.unit_reps.push_back(r.build(F));
    return out;
}

long ipow(long b, int e) {
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

std::vector<int> code_digits(long code, int q, int len) {
    std::vector<int> d(static_cast<std::size_t>(len));
    for (int t = 0; t < len; ++t, code /= q) d[static_cast<std::size_t>(t)] = static_cast<int>(code % q);
    return d;
}

long digits_code(const std::vector<int>& d, int q) {
    long c = 0;
    for (std::size_t t = d.size(); t-- > 0;) c = c * q + d[t];
    return c;
}

std::vector<BOrbit> compute_b_orbits(const LocalField& F, int j) {
    const Elem zero = Elem::zero(F);
    if (j == 0) return {BOrbit{0, zero, 1}};
    const int q = F.q();
    const auto set = cached_square_classes(F);
    std::vector<BOrbit> out;
    if (j >= set.level) {
        // 1 + p^j lies in O^x2, so the orbits are the unit square classes.
        const long size = (q - 1) * ipow(q, j - 1) / static_cast<long>(set.unit_count());
        for (const auto& u : set.unit_reps) out.push_back({j, Elem::pi_pow(F, -j) * u, size});
        return out;
    }
    const long n = ipow(q, j);
    auto elem = [&](long code) { return Elem::from_digits(F, 0, code_digits(code, q, j)); };
    std::vector<long> squares;
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (long s = 0; s < n; ++s) {
        if (s % q == 0) continue;
        Elem x = elem(s);
        long c = digits_code((x * x).digits(0, j), q);
        if (!seen[static_cast<std::size_t>(c)]) squares.push_back(c);
        seen[static_cast<std::size_t>(c)] = 1;
    }
    std::fill(seen.begin(), seen.end(), 0);
    for (long u = 0; u < n; ++u) {
        if (u % q == 0 || seen[static_cast<std::size_t>(u)]) continue;
        Elem x = elem(u);
        long size = 0;
        for (long s : squares) {
            long c = digits_code((x * elem(s)).digits(0, j), q);
            if (!seen[static_cast<std::size_t>(c)]) ++size;
            seen[static_cast<std::size_t>(c)] = 1;
        }
        out.push_back({j, Elem::pi_pow(F, -j) * x, size});
    }
    return out;
}

std::vector<BOrbit> cached_b_orbits(const LocalField& F, int j) {
    struct Entry {
        DigitElem b;
        long mult;
    };
    static std::mutex mu;
    static std::map<std::pair<std::string, int>, std::vector<Entry>> cache;
    const auto key = std::make_pair(field_key(F), j);
    std::unique_lock<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it == cache.end()) {
        lock.unlock();
        std::vector<Entry> entries;
        for (const auto& o : compute_b_orbits(F, j))
            entries.push_back({o.b.is_zero() ? DigitElem{0, {}} : to_digit_elem(o.b, j + 1), o.mult});
        lock.lock();
        it = cache.emplace(key, std::move(entries)).first;
    }
    std::vector<BOrbit> out;
    for (const auto& e : it->second)
        out.push_back({j, j == 0 ? Elem::zero(F) : e.b.build(F), e.mult});
    return out;
}

Rational pow_q(int q, int e) {
    Rational r = 1;
    for (int t = 0; t < std::abs(e); ++t) r *= q;
    if (e < 0) r = 1 / r;
    return r;
}

// a_i level with ord det(g delta g^|-) in {0, 1}.
int forced_level(int ord_det_delta) {
    return ord_det_delta % 2 == 0 ? -ord_det_delta / 2 : (1 - ord_det_delta) / 2;
}

}  // namespace

std::vector<BOrbit> b_orbits(const LocalField& F, int j) {
    if (j < 0) throw DomainError("b_orbits needs j >= 0");
    return cached_b_orbits(F, j);
}

const char* stratum_name(StratumKind k) {
    switch (k) {
    case StratumKind::NonUnit: return "nonunit";
    case StratumKind::Generic: return "generic";
    case StratumKind::PlusOne: return "plus_one";
    case StratumKind::MinusOne: return "minus_one";
    }
    return "?";
}

std::vector<GammaStratum> gamma_strata(const LocalField& F, const TruncationSpec& t) {
    t.validate();
    const int q = F.q();
    const Elem one = Elem::from_int(F, 1);
    Rational unit_cell(1, (q - 1) * q);
    unit_cell.canonicalize();
    std::vector<GammaStratum> out;
    auto units2 = [&](auto&& emit) {
        for (int d0 = 1; d0 < q; ++d0)
            for (int d1 = 0; d1 < q; ++d1) emit(d0, d1, Elem::from_digits(F, 0, {d0, d1}));
    };
    for (int v = -t.e_max; v <= t.e_max; ++v) {
        if (v == 0) continue;
        units2([&](int, int, const Elem& u) {
            out.push_back({StratumKind::NonUnit, v, Elem::pi_pow(F, v) * u, unit_cell});
        });
    }
    if (q > 2) {
        units2([&](int d0, int, const Elem& u) {
            if (d0 == 1 || d0 == q - 1) return;
            out.push_back({StratumKind::Generic, 0, u, unit_cell});
        });
        for (int c = 0; c < q; ++c) {
            Elem a = c == 0 ? Elem::pi_pow(F, 2) - one : Elem::from_digits(F, 1, {c}) - one;
            out.push_back({StratumKind::MinusOne, 0, a, unit_cell});
        }
    }
    for (int e = 1; e <= t.e_max; ++e) {
        Rational vol = unit_cell * pow_q(q, -e);
        units2([&](int, int, const Elem& u) {
            out.push_back({StratumKind::PlusOne, e, one + Elem::pi_pow(F, e) * u, vol});
        });
    }
    return out;
}

GammaProfile gamma_profile(const KutzkoDatum& f, const TorusElem& g, const TruncationSpec& t) {
    const LocalField& F = f.field();
    auto form = GroupForm::orthogonal(F, 2);
    Mat delta = S_of(g, form).inverse();
    GammaProfile prof;
    prof.d_eps_ord = d_eps(delta, form).ord;
    prof.i = forced_level(delta.det().ord());
    const Mat a = a_e(F, prof.i);
    std::vector<std::vector<BOrbit>> orbits;
    for (int j = 0; j <= t.b_window; ++j) orbits.push_back(cached_b_orbits(F, j));
    for (int j = 0; j <= t.b_window; ++j) {
        for (const auto& orb : orbits[static_cast<std::size_t>(j)]) {
            Mat gc = n_b(orb.b) * a;
            auto avg = f.k_average(twisted_conj(gc, delta, form));
            ++prof.cells_scanned;
            CharacterValue v = avg.value(F.p());
            if (v.is_zero()) continue;
            if (j == t.b_window)
                throw TailNonzero("b-window boundary ord b = -" + std::to_string(j) + " contributes for alpha = " +
                                  g.alpha.to_string());
            prof.cells.push_back({j, orb.mult, prof.i, v});
        }
    }
    return prof;
}

MeasureValue orbital_twisted(const KutzkoDatum& f, const TorusElem& g, const TruncationSpec& t) {
    auto prof = gamma_profile(f, g, t);
    MeasureValue mv{CharacterValue::zero(f.field().p()), -prof.d_eps_ord};
    for (const auto& c : prof.cells) mv.value += c.kavg * Rational(c.mult);
    return mv;
}

MeasureValue orbital_twisted_bruteforce(const TorusElem& g, const std::function<CharacterValue(const Mat&)>& f,
                                        int level, int i_window, int b_window) {
    const LocalField& F = g.alpha.field();
    const int q = F.q();
    auto form = GroupForm::orthogonal(F, 2);
    Mat delta = S_of(g, form).inverse();
    const int ord = d_eps(delta, form).ord;
    // kappa mod p^level
    std::vector<Mat> kappas;
    const long per_entry = ipow(q, level);
    for (long code = 0; code < per_entry * per_entry * per_entry * per_entry; ++code) {
        long c = code;
        std::vector<Elem> e;
        for (int t = 0; t < 4; ++t, c /= per_entry) e.push_back(Elem::from_digits(F, 0, code_digits(c % per_entry, q, level)));
        Mat k = Mat::from_rows({{e[0], e[1]}, {e[2], e[3]}});
        if (!k.det().ord_ge(1)) kappas.push_back(k);
    }
    Rational inv(1, static_cast<long>(kappas.size()));
    inv.canonicalize();
    CharacterValue total = CharacterValue::zero(F.p());
    for (int i = -i_window; i <= i_window; ++i) {
        const Mat a = a_e(F, i);
        for (int j = 0; j <= b_window; ++j) {
            const long n = j == 0 ? 1 : ipow(q, j);
            for (long u = 0; u < n; ++u) {
                if (j > 0 && u % q == 0) continue;
                Elem b = j == 0 ? Elem::zero(F) : Elem::pi_pow(F, -j) * Elem::from_digits(F, 0, code_digits(u, q, j));
                Mat X = twisted_conj(n_b(b) * a, delta, form);
                CharacterValue s = CharacterValue::zero(F.p());
                for (const auto& k : kappas) s += f(k * X * vdash(k, form));
                if (s.is_zero()) continue;
                if (j == b_window || std::abs(i) == i_window)
                    throw TailNonzero("brute-force window boundary contributes at i = " + std::to_string(i) +
                                      ", j = " + std::to_string(j));
                total += s * inv;
            }
        }
    }
    return {total, -ord};
}

Rational coset_weight(const LocalField& F, int i, int j, int k) {
    Elem b = j == 0 ? Elem::zero(F) : Elem::pi_pow(F, -j);
    return W_k(n_b(b) * a_e(F, i), std::nullopt, cached_square_classes(F), {}, k, ClubsuitTorus{2, 1});
}

MeasureValue psi_k(const KutzkoDatum& f, const TorusElem& g, int k, const TruncationSpec& t) {
    auto prof = gamma_profile(f, g, t);
    MeasureValue mv{CharacterValue::zero(f.field().p()), 0};
    for (const auto& c : prof.cells) mv.value += c.kavg * (coset_weight(f.field(), c.i, c.j, k) * c.mult);
    return mv;
}

CoefficientTable assemble_coefficients(const KutzkoDatum& f, const TruncationSpec& t) {
    const LocalField& F = f.field();
    auto strata = gamma_strata(F, t);
    cached_square_classes(F);
    for (int j = 0; j <= t.b_window; ++j) cached_b_orbits(F, j);
    auto profiles = parallel_map<GammaProfile>(strata.size(), t.workers, [&](std::size_t s) {
        return gamma_profile(f, TorusElem{strata[s].alpha}, t);
    });
    CoefficientTable out;
    out.p = F.p();
    out.unit_square_classes = static_cast<long>(cached_square_classes(F).unit_count());
    out.c.assign(static_cast<std::size_t>(t.k_max + 1), CharacterValue::zero(F.p()));
    std::map<std::tuple<int, int, int>, Rational> wcache;
    for (std::size_t s = 0; s < strata.size(); ++s) {
        const auto& st = strata[s];
        const auto& prof = profiles[s];
        Rational scale = 2 * st.vol * pow_q(F.q(), -prof.d_eps_ord);
        for (int k = 0; k <= t.k_max; ++k) {
            for (const auto& c : prof.cells) {
                auto key = std::make_tuple(c.i, c.j, k);
                auto it = wcache.find(key);
                if (it == wcache.end()) it = wcache.emplace(key, coset_weight(F, c.i, c.j, k)).first;
                out.c[static_cast<std::size_t>(k)] += c.kavg * (scale * it->second * c.mult);
            }
        }
        // Non-unit strata are bounded by e_max; their outer shell must be empty.
        if (st.kind == StratumKind::NonUnit && std::abs(st.level) == t.e_max && !prof.cells.empty())
            throw TailNonzero("alpha-window boundary ord(alpha) = " + std::to_string(st.level) + " contributes");
        out.rows.push_back({st, prof});
    }
    return out;
}

ABResult coefficient_A_B(const CoefficientTable& table) {
    if (table.p != 2) throw DomainError("A, B are defined for the p = 2 pipeline");
    ABResult r;
    r.A.value = r.B.value = CharacterValue::zero(2);
    std::map<int, std::pair<CharacterValue, CharacterValue>> inc;
    for (const auto& row : table.rows) {
        if (row.profile.cells.empty()) continue;
        const int q = 2;
        Rational scale = row.stratum.vol * pow_q(q, -row.profile.d_eps_ord);
        CharacterValue a = CharacterValue::zero(2), b = CharacterValue::zero(2);
        for (const auto& c : row.profile.cells) {
            a += c.kavg * (scale * (2 * c.delta() + 1) * c.mult);
            b += c.kavg * (scale * 4 * c.mult);
        }
        r.A.value += a;
        r.B.value += b;
        auto& slot = inc.try_emplace(row.stratum.kind == StratumKind::PlusOne ? row.stratum.level : 0,
                                     CharacterValue::zero(2), CharacterValue::zero(2))
                         .first->second;
        slot.first += a;
        slot.second += b;
    }
    for (auto& [e, ab] : inc) {
        r.shells.push_back(e);
        r.A_inc.push_back(ab.first);
        r.B_inc.push_back(ab.second);
    }
    return r;
}

StratumKind stratum_of(const Elem& alpha) {
    if (alpha.ord() != 0) return StratumKind::NonUnit;
    const LocalField& F = alpha.field();
    const int r = alpha.residue();
    if (r == 1) return StratumKind::PlusOne;
    if (r == F.p() - 1) return StratumKind::MinusOne;
    return StratumKind::Generic;
}

SupportScanResult support_scan(const KutzkoDatum& f, const TorusElem& g, int depth, int b_window) {
    if (depth < 1) throw ConfigError("support-scan depth must be >= 1");
    const LocalField& F = f.field();
    auto form = GroupForm::orthogonal(F, 2);
    Mat delta = S_of(g, form).inverse();
    SupportScanResult out;
    out.regime = stratum_of(g.alpha);
    out.depth_requested = depth;
    out.depth_effective = std::min(depth, 2);
    const int i = forced_level(delta.det().ord());
    for (int j = 0; j <= b_window && !out.witness; ++j) {
        for (const auto& orb : cached_b_orbits(F, j)) {
            ++out.strata_searched;
            Mat X = twisted_conj(n_b(orb.b) * a_e(F, i), delta, form);
            auto k = f.first_witness(X);
            if (!k) continue;
            auto v = f.f_conj_fast(*k, {f.ring2().from_elem(X(0, 0)), f.ring2().from_elem(X(0, 1)),
                                        f.ring2().from_elem(X(1, 0)), f.ring2().from_elem(X(1, 1))},
                                   X.det().ord());
            out.witness = SupportWitness{i, j, orb.b, *k, v.exponent};
            break;
        }
    }
    return out;
}

CharacterValue r_g_term(const CoefficientTable& table) {
    CharacterValue r = CharacterValue::zero(table.p);
    for (const auto& row : table.rows) {
        if (row.profile.cells.empty()) continue;
        Rational scale = row.stratum.vol;
        for (int t = 0; t < row.profile.d_eps_ord; ++t) scale /= table.p;
        for (int t = 0; t > row.profile.d_eps_ord; --t) scale *= table.p;
        for (const auto& c : row.profile.cells)
            if (c.i == 0 && c.j == 0) r += c.kavg * scale;
    }
    return r;
}

}  // namespace twres
