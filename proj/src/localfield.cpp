#include "twres/localfield.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace twres {

namespace {

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

int vp(long x, long p) {
    if (x == 0) return 1 << 20;
    int v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
    __int128 t = 0, nt = 1, r = static_cast<__int128>(m), nr = static_cast<__int128>(a % m);
    while (nr != 0) {
        __int128 qq = r / nr;
        __int128 tmp = t - qq * nt;
        t = nt;
        nt = tmp;
        tmp = r - qq * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) throw DomainError("inv_mod: not invertible");
    if (t < 0) t += static_cast<__int128>(m);
    return static_cast<std::uint64_t>(t);
}

int sat_add(int a, int b) {
    if (a >= kInfOrd || b >= kInfOrd) return kInfOrd;
    long s = static_cast<long>(a) + b;
    if (s >= kInfOrd) return kInfOrd;
    return static_cast<int>(s);
}

}  // namespace

// ---------------------------------------------------------------------------
// LocalField

std::shared_ptr<const LocalField> LocalField::make(int p, int e, std::vector<long> eisenstein,
                                                   int precision) {
    if (!is_prime(p)) throw NotEisenstein("p = " + std::to_string(p) + " is not prime");
    if (e < 1 || e > kMaxRamification)
        throw DomainError("ramification degree must lie in [1, " +
                          std::to_string(kMaxRamification) + "]");
    if (eisenstein.size() != static_cast<std::size_t>(e) + 1)
        throw NotEisenstein("polynomial must have degree e");
    if (eisenstein.back() != 1) throw NotEisenstein("polynomial must be monic");
    if (vp(eisenstein[0], p) != 1) throw NotEisenstein("constant term must have p-valuation 1");
    for (int i = 1; i < e; ++i)
        if (vp(eisenstein[static_cast<std::size_t>(i)], p) < 1)
            throw NotEisenstein("middle coefficients must be divisible by p");
    if (precision < 2 * e + 2)
        throw PrecisionTooSmall("need N >= 2e+2 = " + std::to_string(2 * e + 2));

    std::shared_ptr<LocalField> F(new LocalField());
    F->p_ = p;
    F->e_ = e;
    F->n_ = precision;
    F->eis_ = std::move(eisenstein);
    std::uint64_t mod = 1;
    int m = 0;
    while (static_cast<unsigned __int128>(mod) * static_cast<unsigned>(p) < (1ULL << 62)) {
        mod *= static_cast<std::uint64_t>(p);
        ++m;
    }
    F->mod_ = mod;
    F->m_ = m;
    if (precision > e * m)
        throw DomainError("precision " + std::to_string(precision) + " exceeds storage capacity " +
                          std::to_string(e * m));
    auto reduce = [&](long c) {
        long r = c % static_cast<long>(mod);
        if (r < 0) r += static_cast<long>(mod);
        return static_cast<std::uint64_t>(r);
    };
    for (int i = 0; i < e; ++i)
        F->neg_c_[static_cast<std::size_t>(i)] = reduce(-F->eis_[static_cast<std::size_t>(i)]);
    for (int j = 0; j + 1 < e; ++j)
        F->div_num_.a[static_cast<std::size_t>(j)] = reduce(F->eis_[static_cast<std::size_t>(j) + 1]);
    F->div_num_.a[static_cast<std::size_t>(e) - 1] = 1;
    const long w = F->eis_[0] / p;
    F->div_unit_inv_ = inv_mod(reduce(-w), mod);
    return F;
}

std::uint64_t LocalField::mulmod(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % mod_);
}

RingVec LocalField::ring_from_int(long n) const {
    RingVec r;
    long m = static_cast<long>(mod_);
    long v = n % m;
    if (v < 0) v += m;
    r.a[0] = static_cast<std::uint64_t>(v);
    return r;
}

RingVec LocalField::add(const RingVec& x, const RingVec& y) const {
    RingVec r;
    for (int i = 0; i < e_; ++i) {
        std::uint64_t s = x.a[i] + y.a[i];
        r.a[i] = s >= mod_ ? s - mod_ : s;
    }
    return r;
}

RingVec LocalField::neg(const RingVec& x) const {
    RingVec r;
    for (int i = 0; i < e_; ++i) r.a[i] = x.a[i] == 0 ? 0 : mod_ - x.a[i];
    return r;
}

RingVec LocalField::sub(const RingVec& x, const RingVec& y) const { return add(x, neg(y)); }

RingVec LocalField::mul(const RingVec& x, const RingVec& y) const {
    if (e_ == 1) {
        RingVec r;
        r.a[0] = mulmod(x.a[0], y.a[0]);
        return r;
    }
    std::array<std::uint64_t, 2 * kMaxRamification> prod{};
    for (int i = 0; i < e_; ++i) {
        if (x.a[i] == 0) continue;
        for (int j = 0; j < e_; ++j) {
            std::uint64_t t = prod[i + j] + mulmod(x.a[i], y.a[j]);
            prod[i + j] = t >= mod_ ? t - mod_ : t;
        }
    }
    for (int k = 2 * e_ - 2; k >= e_; --k) {
        const std::uint64_t t = prod[k];
        if (t == 0) continue;
        prod[k] = 0;
        for (int i = 0; i < e_; ++i) {
            std::uint64_t s = prod[k - e_ + i] + mulmod(t, neg_c_[i]);
            prod[k - e_ + i] = s >= mod_ ? s - mod_ : s;
        }
    }
    RingVec r;
    for (int i = 0; i < e_; ++i) r.a[i] = prod[i];
    return r;
}

RingVec LocalField::mul_pi(const RingVec& x) const {
    RingVec r;
    const std::uint64_t top = x.a[e_ - 1];
    for (int i = e_ - 1; i > 0; --i) r.a[i] = x.a[i - 1];
    r.a[0] = 0;
    if (top != 0) {
        for (int i = 0; i < e_; ++i) {
            std::uint64_t s = r.a[i] + mulmod(top, neg_c_[i]);
            r.a[i] = s >= mod_ ? s - mod_ : s;
        }
    }
    return r;
}

RingVec LocalField::div_pi(const RingVec& x) const {
    // x = a_0 + pi*(a_1 + ... ), and a_0/pi = (a_0/p) * p/pi with p/pi = -P(pi)/w.
    RingVec r;
    for (int i = 0; i + 1 < e_; ++i) r.a[i] = x.a[i + 1];
    const std::uint64_t t = mulmod(x.a[0] / static_cast<std::uint64_t>(p_), div_unit_inv_);
    for (int i = 0; i < e_; ++i) {
        std::uint64_t s = r.a[i] + mulmod(t, div_num_.a[i]);
        r.a[i] = s >= mod_ ? s - mod_ : s;
    }
    return r;
}

RingVec LocalField::inv_unit(const RingVec& x) const {
    if (x.a[0] % static_cast<std::uint64_t>(p_) == 0) throw DomainError("inv_unit: not a unit");
    RingVec y;
    y.a[0] = inv_mod(x.a[0], mod_);
    const RingVec two = ring_from_int(2);
    // Newton: each step doubles the number of correct pi-adic digits.
    for (int known = 1; known < 2 * capacity() + 2; known *= 2)
        y = mul(y, sub(two, mul(x, y)));
    return y;
}

int LocalField::ring_ord(const RingVec& x) const {
    int best = capacity();
    for (int i = 0; i < e_; ++i) {
        std::uint64_t v = x.a[i];
        if (v == 0) continue;
        int k = 0;
        while (v % static_cast<std::uint64_t>(p_) == 0) {
            v /= static_cast<std::uint64_t>(p_);
            ++k;
        }
        best = std::min(best, e_ * k + i);
    }
    return best;
}

RingVec LocalField::ring_pi_pow(int k) const {
    RingVec r = ring_from_int(1);
    if (k >= capacity()) return RingVec{};
    for (int i = 0; i < k; ++i) r = mul_pi(r);
    return r;
}

RingVec LocalField::random_ring(std::mt19937_64& rng) const {
    std::uniform_int_distribution<std::uint64_t> dist(0, mod_ - 1);
    RingVec r;
    for (int i = 0; i < e_; ++i) r.a[i] = dist(rng);
    return r;
}

std::string LocalField::to_config_block() const {
    std::ostringstream os;
    os << "[field]\n"
       << "p = " << p_ << "\n"
       << "e = " << e_ << "\n"
       << "eisenstein = ";
    for (std::size_t i = 0; i < eis_.size(); ++i) os << (i ? ", " : "") << eis_[i];
    os << "\nprecision = " << n_ << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Elem

Elem Elem::make_zero(const LocalField* F, int absprec) {
    Elem z;
    z.f_ = F;
    z.val_ = kInfOrd;
    z.rel_ = absprec;
    return z;
}

Elem Elem::zero(const LocalField& F) { return make_zero(&F, kInfOrd); }

Elem Elem::from_ring(const LocalField& F, const RingVec& r, int base_val, int known_digits) {
    const int t = F.ring_ord(r);
    if (t >= known_digits) return make_zero(&F, sat_add(base_val, known_digits));
    Elem x;
    x.f_ = &F;
    RingVec u = r;
    for (int i = 0; i < t; ++i) u = F.div_pi(u);
    x.u_ = u;
    x.val_ = base_val + t;
    x.rel_ = known_digits - t;
    return x;
}

Elem Elem::from_int(const LocalField& F, long n) {
    if (n == 0) return zero(F);
    return from_ring(F, F.ring_from_int(n), 0, F.capacity());
}

Elem Elem::pi_pow(const LocalField& F, int k) {
    Elem x;
    x.f_ = &F;
    x.val_ = k;
    x.rel_ = F.capacity();
    x.u_ = F.ring_from_int(1);
    return x;
}

Elem Elem::from_digits(const LocalField& F, int val, const std::vector<int>& digits) {
    RingVec r;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it)
        r = F.add(F.mul_pi(r), F.ring_from_int(*it));
    if (F.ring_ord(r) >= F.capacity()) return zero(F);
    return from_ring(F, r, val, F.capacity());
}

Elem Elem::random_unit(const LocalField& F, std::mt19937_64& rng, int val) {
    RingVec r = F.random_ring(rng);
    std::uniform_int_distribution<int> d(1, F.p() - 1);
    const auto p = static_cast<std::uint64_t>(F.p());
    r.a[0] = r.a[0] - r.a[0] % p + static_cast<std::uint64_t>(d(rng));
    if (r.a[0] >= F.modulus()) r.a[0] -= p;
    Elem x;
    x.f_ = &F;
    x.val_ = val;
    x.rel_ = F.capacity();
    x.u_ = r;
    return x;
}

Elem Elem::random(const LocalField& F, std::mt19937_64& rng, int lo, int hi) {
    std::uniform_int_distribution<int> dv(lo, hi + 1);
    const int v = dv(rng);
    if (v == hi + 1 && std::uniform_int_distribution<int>(0, 3)(rng) == 0) return zero(F);
    return random_unit(F, rng, std::min(v, hi));
}

int Elem::absprec() const {
    if (is_zero()) return rel_;
    return sat_add(val_, rel_);
}

int Elem::ord() const {
    if (!is_zero()) return val_;
    if (rel_ >= f_->precision()) return kInfOrd;
    throw PrecisionExhausted("cancellation zero known only to pi^" + std::to_string(rel_) +
                             " (N = " + std::to_string(f_->precision()) + ")");
}

bool Elem::ord_ge(int j) const {
    if (!is_zero()) return val_ >= j;
    if (rel_ >= j || rel_ >= f_->precision()) return true;
    throw PrecisionExhausted("cannot decide ord >= " + std::to_string(j) +
                             " for zero known to pi^" + std::to_string(rel_));
}

int Elem::residue() const {
    if (!ord_ge(0)) throw DomainError("residue of a non-integral element");
    if (is_zero() || val_ > 0) return 0;
    return static_cast<int>(u_.a[0] % static_cast<std::uint64_t>(f_->p()));
}

std::vector<int> Elem::unit_digits(int count) const {
    std::vector<int> out;
    if (is_zero()) return out;
    RingVec r = u_;
    const int n = std::min(count, rel_);
    const auto p = static_cast<std::uint64_t>(f_->p());
    for (int j = 0; j < n; ++j) {
        const auto d = r.a[0] % p;
        out.push_back(static_cast<int>(d));
        if (j + 1 < n) {
            r = f_->sub(r, f_->ring_from_int(static_cast<long>(d)));
            r = f_->div_pi(r);
        }
    }
    return out;
}

std::vector<int> Elem::digits(int from, int count) const {
    std::vector<int> out(static_cast<std::size_t>(std::max(count, 0)), 0);
    if (count <= 0) return out;
    if (!ord_ge(from)) throw DomainError("digits: element not in pi^" + std::to_string(from) + "O");
    if (absprec() < from + count && !(is_zero() && rel_ >= f_->precision()))
        throw PrecisionExhausted("digits requested beyond known precision");
    if (is_zero()) return out;
    const int skip = val_ - from;
    if (skip >= count) return out;
    const auto ud = unit_digits(count - skip);
    for (std::size_t i = 0; i < ud.size(); ++i) out[static_cast<std::size_t>(skip) + i] = ud[i];
    return out;
}

Elem Elem::operator-() const {
    if (is_zero()) return *this;
    Elem r = *this;
    r.u_ = f_->neg(u_);
    return r;
}

Elem Elem::inverse() const {
    if (is_zero()) throw Singular("inverse of zero");
    Elem r;
    r.f_ = f_;
    r.val_ = -val_;
    r.rel_ = rel_;
    r.u_ = f_->inv_unit(u_);
    return r;
}

Elem operator+(const Elem& x, const Elem& y) {
    const LocalField* F = x.f_ ? x.f_ : y.f_;
    if (x.is_zero() || y.is_zero()) {
        if (x.is_zero() && y.is_zero()) return Elem::make_zero(F, std::min(x.rel_, y.rel_));
        const Elem& z = x.is_zero() ? x : y;
        const Elem& w = x.is_zero() ? y : x;
        const int A = z.rel_;
        if (A >= w.absprec()) return w;
        if (A > w.val_) {
            Elem r = w;
            r.rel_ = A - w.val_;
            return r;
        }
        return Elem::make_zero(F, A);
    }
    const Elem& lo = x.val_ <= y.val_ ? x : y;
    const Elem& hi = x.val_ <= y.val_ ? y : x;
    const int shift = hi.val_ - lo.val_;
    const int known = std::min(lo.rel_, shift + hi.rel_);
    if (shift >= lo.rel_) return lo;
    RingVec s = F->add(lo.u_, F->mul(F->ring_pi_pow(shift), hi.u_));
    return Elem::from_ring(*F, s, lo.val_, known);
}

Elem operator*(const Elem& x, const Elem& y) {
    const LocalField* F = x.f_ ? x.f_ : y.f_;
    if (x.is_exact_zero() || y.is_exact_zero()) return Elem::zero(*F);
    if (x.is_zero() || y.is_zero()) {
        const int ax = x.is_zero() ? x.rel_ : x.val_;
        const int ay = y.is_zero() ? y.rel_ : y.val_;
        return Elem::make_zero(F, sat_add(ax, ay));
    }
    Elem r;
    r.f_ = F;
    r.val_ = x.val_ + y.val_;
    r.rel_ = std::min(x.rel_, y.rel_);
    r.u_ = F->mul(x.u_, y.u_);
    return r;
}

std::string Elem::to_string(int max_digits) const {
    if (!f_) return "<null>";
    if (is_zero()) {
        if (rel_ >= kInfOrd) return "0";
        return "O(ϖ^" + std::to_string(rel_) + ")";
    }
    std::ostringstream os;
    os << "ϖ^" << val_ << " * (";
    const auto d = unit_digits(max_digits);
    for (std::size_t j = 0; j < d.size(); ++j) {
        if (j) os << " + ";
        os << d[j];
        if (j == 1) os << " ϖ";
        if (j > 1) os << " ϖ^" << j;
    }
    if (rel_ > max_digits) os << " + …";
    os << ")";
    return os.str();
}

// ---------------------------------------------------------------------------
// Square classes

namespace {

int hensel_level(const LocalField& F) { return 2 * F.ord2() + 1; }

long digit_code(const std::vector<int>& d, int p) {
    long c = 0;
    for (auto it = d.rbegin(); it != d.rend(); ++it) c = c * p + *it;
    return c;
}

// Indicator over codes of units mod pi^L that are squares mod pi^L.
std::vector<char> square_codes(const LocalField& F, int L) {
    long total = 1;
    for (int i = 0; i < L; ++i) total *= F.p();
    std::vector<char> sq(static_cast<std::size_t>(total), 0);
    std::vector<int> d(static_cast<std::size_t>(L), 0);
    for (long code = 0; code < total; ++code) {
        long c = code;
        for (int i = 0; i < L; ++i) {
            d[static_cast<std::size_t>(i)] = static_cast<int>(c % F.p());
            c /= F.p();
        }
        if (d[0] == 0) continue;
        const Elem u = Elem::from_digits(F, 0, d);
        const Elem s = u * u;
        sq[static_cast<std::size_t>(digit_code(s.unit_digits(L), F.p()))] = 1;
    }
    return sq;
}

}  // namespace

bool is_square(const Elem& x) {
    if (x.is_zero()) throw DomainError("is_square: zero");
    if (x.ord() % 2 != 0) return false;
    const LocalField& F = x.field();
    const int L = hensel_level(F);
    if (x.rel() < L) throw PrecisionExhausted("is_square: unit known to fewer digits than Hensel level");
    const auto sq = square_codes(F, L);
    return sq[static_cast<std::size_t>(digit_code(x.unit_digits(L), F.p()))] != 0;
}

SquareClassSet square_class_reps(const LocalField& F) {
    SquareClassSet out;
    const int L = hensel_level(F);
    out.level = L;
    const auto sq = square_codes(F, L);
    long total = static_cast<long>(sq.size());
    std::vector<char> covered(sq.size(), 0);
    std::vector<int> d(static_cast<std::size_t>(L), 0);
    std::vector<Elem> squares;
    for (long code = 0; code < total; ++code)
        if (sq[static_cast<std::size_t>(code)]) {
            long c = code;
            for (int i = 0; i < L; ++i) {
                d[static_cast<std::size_t>(i)] = static_cast<int>(c % F.p());
                c /= F.p();
            }
            squares.push_back(Elem::from_digits(F, 0, d));
        }
    for (long code = 0; code < total; ++code) {
        long c = code;
        for (int i = 0; i < L; ++i) {
            d[static_cast<std::size_t>(i)] = static_cast<int>(c % F.p());
            c /= F.p();
        }
        if (d[0] == 0 || covered[static_cast<std::size_t>(code)]) continue;
        const Elem u = Elem::from_digits(F, 0, d);
        out.unit_reps.push_back(u);
        for (const auto& s : squares)
            covered[static_cast<std::size_t>(digit_code((u * s).unit_digits(L), F.p()))] = 1;
    }
    for (const auto& u : out.unit_reps) out.reps.push_back(u);
    for (const auto& u : out.unit_reps) out.reps.push_back(u * Elem::pi_pow(F, 1));
    return out;
}

std::size_t square_class_of(const SquareClassSet& set, const Elem& x) {
    for (std::size_t i = 0; i < set.reps.size(); ++i)
        if (is_square(x / set.reps[i])) return i;
    throw DomainError("square_class_of: no representative matched");
}

int additive_char_exponent(const Elem& x) {
    if (!x.ord_ge(0)) throw DomainError("additive character is only defined on O");
    return x.residue();
}

CharacterValue additive_char(const Elem& x) {
    return CharacterValue::root_of_unity(x.field().p(), additive_char_exponent(x));
}

// ---------------------------------------------------------------------------
// Parsing

Elem parse_elem(const LocalField& F, const std::string& text) {
    std::string s;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) continue;
        // Accept the UTF-8 uniformizer symbol as an alias for "pi".
        if (text.compare(i, 2, "ϖ") == 0) {
            s += "pi";
            ++i;
            continue;
        }
        s += text[i];
    }
    if (s.empty()) throw ConfigError("empty element");
    Elem acc = Elem::zero(F);
    std::size_t i = 0;
    auto read_int = [&](long& out) {
        std::size_t j = i;
        if (j < s.size() && (s[j] == '-' || s[j] == '+')) ++j;
        std::size_t k = j;
        while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
        if (k == j) return false;
        out = std::stol(s.substr(i, k - i));
        i = k;
        return true;
    };
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        }
        long coef = 1;
        bool have_coef = false;
        if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            read_int(coef);
            have_coef = true;
        }
        int power = 0;
        bool have_pi = false;
        if (i < s.size() && s[i] == '*') ++i;
        if (s.compare(i, 2, "pi") == 0) {
            have_pi = true;
            i += 2;
            power = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                long pw = 0;
                if (!read_int(pw)) throw ConfigError("bad exponent in '" + text + "'");
                power = static_cast<int>(pw);
            }
        }
        if (!have_coef && !have_pi) throw ConfigError("cannot parse element '" + text + "'");
        Elem term = Elem::from_int(F, sign * coef);
        if (have_pi) term = term * Elem::pi_pow(F, power);
        acc = acc + term;
    }
    return acc;
}

}  // namespace twres
