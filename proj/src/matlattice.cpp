#include "twres/matlattice.hpp"

#include <algorithm>
#include <sstream>

namespace twres {

namespace {

int ord_or_inf(const Elem& x) { return x.is_zero() ? kInfOrd : x.raw_val(); }

}  // namespace

Mat::Mat(const LocalField& F, int n) : f_(&F), n_(n), a_(static_cast<std::size_t>(n * n), Elem::zero(F)) {}

Mat Mat::identity(const LocalField& F, int n) {
    Mat m(F, n);
    for (int i = 0; i < n; ++i) m(i, i) = Elem::from_int(F, 1);
    return m;
}

Mat Mat::diag(const std::vector<Elem>& d) {
    Mat m(d.at(0).field(), static_cast<int>(d.size()));
    for (int i = 0; i < m.n_; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
    return m;
}

Mat Mat::from_rows(const std::vector<std::vector<Elem>>& rows) {
    Mat m(rows.at(0).at(0).field(), static_cast<int>(rows.size()));
    for (int i = 0; i < m.n_; ++i)
        for (int j = 0; j < m.n_; ++j) m(i, j) = rows[static_cast<std::size_t>(i)].at(static_cast<std::size_t>(j));
    return m;
}

Mat Mat::from_ints(const LocalField& F, const std::vector<std::vector<long>>& rows) {
    Mat m(F, static_cast<int>(rows.size()));
    for (int i = 0; i < m.n_; ++i)
        for (int j = 0; j < m.n_; ++j)
            m(i, j) = Elem::from_int(F, rows[static_cast<std::size_t>(i)].at(static_cast<std::size_t>(j)));
    return m;
}

Mat Mat::antidiag(const LocalField& F, int n) {
    Mat m(F, n);
    for (int i = 0; i < n; ++i) m(i, n - 1 - i) = Elem::from_int(F, 1);
    return m;
}

Mat Mat::random(const LocalField& F, std::mt19937_64& rng, int n, int lo, int hi) {
    Mat m(F, n);
    for (auto& x : m.a_) x = Elem::random(F, rng, lo, hi);
    return m;
}

Mat Mat::random_gl_o(const LocalField& F, std::mt19937_64& rng, int n) {
    for (;;) {
        Mat m = random(F, rng, n, 0, 2);
        Elem d = m.det();
        if (!d.is_zero() && d.ord() == 0) return m;
    }
}

Mat Mat::transpose() const {
    Mat t(*f_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Elem Mat::det() const {
    Mat m = *this;
    Elem d = Elem::from_int(*f_, 1);
    for (int c = 0; c < n_; ++c) {
        int piv = -1, best = kInfOrd;
        for (int r = c; r < n_; ++r) {
            const int o = ord_or_inf(m(r, c));
            if (o < best) {
                best = o;
                piv = r;
            }
        }
        if (piv < 0) return Elem::zero(*f_) * m(c, c);
        if (piv != c) {
            for (int j = 0; j < n_; ++j) std::swap(m(c, j), m(piv, j));
            d = -d;
        }
        const Elem inv = m(c, c).inverse();
        d *= m(c, c);
        for (int r = c + 1; r < n_; ++r) {
            if (m(r, c).is_exact_zero()) continue;
            const Elem f = m(r, c) * inv;
            for (int j = c; j < n_; ++j) m(r, j) -= f * m(c, j);
        }
    }
    return d;
}

Mat Mat::inverse() const {
    Mat m = *this;
    Mat inv = identity(*f_, n_);
    for (int c = 0; c < n_; ++c) {
        int piv = -1, best = kInfOrd;
        for (int r = c; r < n_; ++r) {
            const int o = ord_or_inf(m(r, c));
            if (o < best) {
                best = o;
                piv = r;
            }
        }
        if (piv < 0) throw Singular("matrix is singular");
        if (piv != c)
            for (int j = 0; j < n_; ++j) {
                std::swap(m(c, j), m(piv, j));
                std::swap(inv(c, j), inv(piv, j));
            }
        const Elem pinv = m(c, c).inverse();
        for (int j = 0; j < n_; ++j) {
            m(c, j) *= pinv;
            inv(c, j) *= pinv;
        }
        for (int r = 0; r < n_; ++r) {
            if (r == c || m(r, c).is_exact_zero()) continue;
            const Elem f = m(r, c);
            for (int j = 0; j < n_; ++j) {
                m(r, j) -= f * m(c, j);
                inv(r, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

bool Mat::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Elem& x) { return x.is_zero(); });
}

Mat operator+(const Mat& x, const Mat& y) {
    Mat r = x;
    for (std::size_t k = 0; k < r.a_.size(); ++k) r.a_[k] += y.a_[k];
    return r;
}

Mat operator-(const Mat& x, const Mat& y) {
    Mat r = x;
    for (std::size_t k = 0; k < r.a_.size(); ++k) r.a_[k] -= y.a_[k];
    return r;
}

Mat Mat::operator-() const {
    Mat r = *this;
    for (auto& v : r.a_) v = -v;
    return r;
}

Mat operator*(const Mat& x, const Mat& y) {
    Mat r(*x.f_, x.n_);
    for (int i = 0; i < x.n_; ++i)
        for (int k = 0; k < x.n_; ++k) {
            const Elem& xik = x(i, k);
            if (xik.is_exact_zero()) continue;
            for (int j = 0; j < x.n_; ++j) r(i, j) += xik * y(k, j);
        }
    return r;
}

Mat operator*(const Elem& c, const Mat& x) {
    Mat r = x;
    for (auto& v : r.a_) v = c * v;
    return r;
}

bool operator==(const Mat& x, const Mat& y) {
    if (x.n_ != y.n_) return false;
    for (std::size_t k = 0; k < x.a_.size(); ++k)
        if (!(x.a_[k] == y.a_[k])) return false;
    return true;
}

std::string Mat::to_string(int max_digits) const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < n_; ++i) {
        os << (i ? "; " : "") << "[";
        for (int j = 0; j < n_; ++j) os << (j ? ", " : "") << (*this)(i, j).to_string(max_digits);
        os << "]";
    }
    os << "]";
    return os.str();
}

int mat_ord(const Mat& X) {
    int best = kInfOrd;
    for (int i = 0; i < X.n(); ++i)
        for (int j = 0; j < X.n(); ++j) best = std::min(best, X(i, j).ord());
    return best;
}

bool mat_ord_ge(const Mat& X, int j) {
    for (int a = 0; a < X.n(); ++a)
        for (int b = 0; b < X.n(); ++b)
            if (!X(a, b).ord_ge(j)) return false;
    return true;
}

int lattice_ord(const LatticeSpec& L) { return -L.i; }
int lattice_ord_star(const LatticeSpec& L) { return -L.i; }
bool in_lattice(const Mat& X, const LatticeSpec& L) { return mat_ord_ge(X, -L.i); }

int lattice_ord(const Mat& g, const LatticeSpec& L, const Mat& h) {
    return mat_ord(g) + mat_ord(h) - L.i;
}

int lattice_ord_star(const Mat& g, const LatticeSpec& L, const Mat& h) {
    return -L.i - mat_ord(g.inverse()) - mat_ord(h.inverse());
}

int gnorm_exponent(const Mat& g) {
    const Elem d = g.det();
    if (d.is_zero()) throw Singular("gnorm of a singular matrix");
    return std::max(-mat_ord(g), d.ord());
}

// ---------------------------------------------------------------------------
// Forms

Mat symplectic_u(const LocalField& F, int n) {
    Mat u(F, n);
    for (int r = 0; r < n; ++r) u(r, n - 1 - r) = Elem::from_int(F, r % 2 == 0 ? 1 : -1);
    return u;
}

GroupForm GroupForm::orthogonal(const LocalField& F, int n) {
    if (n < 2 || n % 2 != 0) throw DomainError("orthogonal form needs even n >= 2");
    GroupForm f;
    f.kind = FormKind::Orthogonal;
    f.n = n;
    f.w = Mat::antidiag(F, n);
    // J_n = [[0,0,w_i],[0,Lambda,0],[w_i,0,0]] with Lambda = w_2 is again antidiagonal.
    f.J = Mat::antidiag(F, n);
    return f;
}

GroupForm GroupForm::symplectic(const LocalField& F, int n) {
    if (n < 2 || n % 2 != 0) throw DomainError("symplectic form needs even n >= 2");
    GroupForm f;
    f.kind = FormKind::Symplectic;
    f.n = n;
    f.w = Mat::antidiag(F, n);
    f.u = symplectic_u(F, n);
    f.u_inv = -f.u;
    f.J = f.u;
    return f;
}

Mat vdash(const Mat& g, const GroupForm& form) {
    // Both forms are signed antidiagonals, so g^|- is a signed anti-transpose.
    const int n = g.n();
    Mat r(g.field(), n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Elem v = g(n - 1 - j, n - 1 - i);
            if (form.kind == FormKind::Symplectic && ((i + j) % 2 != 0)) v = -v;
            r(i, j) = v;
        }
    return r;
}

Mat eps(const Mat& g, const GroupForm& form) { return vdash(g.inverse(), form); }

Mat nu(const Mat& g, const GroupForm& form) { return eps(g, form) * g; }

Mat x_prime(const Mat& X, const GroupForm& form) {
    if (form.kind == FormKind::Orthogonal) return -(form.J * X.transpose() * form.w);
    return form.u * X.transpose() * form.u;
}

Mat n_of(const Mat& X, const Mat& Y, const GroupForm& form) {
    const Mat Xp = x_prime(X, form);
    const Mat residual = Y + vdash(Y, form) - X * Xp;
    if (!residual.is_zero()) throw RelationViolated("Y + Y^|- != X X'; residual " + residual.to_string());
    const int n = X.n();
    Mat N = Mat::identity(X.field(), 3 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            N(i, n + j) = X(i, j);
            N(i, 2 * n + j) = Y(i, j);
            N(n + i, 2 * n + j) = Xp(i, j);
        }
    return N;
}

// ---------------------------------------------------------------------------
// Iwasawa coordinates on GL_2

Mat n_b(const Elem& b) {
    const LocalField& F = b.field();
    Mat m = Mat::identity(F, 2);
    m(0, 1) = b;
    return m;
}

Mat a_e(const LocalField& F, int e) {
    return Mat::diag({Elem::pi_pow(F, e), Elem::from_int(F, 1)});
}

Elem principal_part(const Elem& b) {
    const LocalField& F = b.field();
    if (b.ord_ge(0)) return Elem::zero(F);
    const int v = b.ord();
    return Elem::from_digits(F, v, b.digits(v, -v));
}

IwasawaResult iwasawa(const Mat& g) {
    if (g.n() != 2) throw DomainError("iwasawa is implemented for GL_2 only");
    const LocalField& F = g.field();
    if (g.det().is_zero()) throw Singular("iwasawa of a singular matrix");
    Mat k = Mat::identity(F, 2);
    Mat h = g;
    const int oa = ord_or_inf(h(0, 0)), oc = ord_or_inf(h(1, 0));
    if (oc < oa) {
        std::swap(h(0, 0), h(1, 0));
        std::swap(h(0, 1), h(1, 1));
        k = Mat::antidiag(F, 2);
    }
    if (!h(1, 0).is_exact_zero()) {
        const Elem f = h(1, 0) / h(0, 0);
        h(1, 1) -= f * h(0, 1);
        h(1, 0) = Elem::zero(F);
        Mat lower = Mat::identity(F, 2);
        lower(1, 0) = f;
        k = k * lower;
    }
    // h = [[a', b'], [0, d']] with a' = u1 pi^i1, d' = u2 pi^i2.
    const Elem& a1 = h(0, 0);
    const Elem& d1 = h(1, 1);
    const int i1 = a1.ord(), i2 = d1.ord();
    const Elem u1 = a1 / Elem::pi_pow(F, i1);
    const Elem u2 = d1 / Elem::pi_pow(F, i2);
    const Elem b = h(0, 1) / d1 * u2 / u1;
    const Elem bp = principal_part(b);
    const Elem bint = b - bp;
    IwasawaResult r;
    r.rep.kappa = k * Mat::diag({u1, u2}) * n_b(bint);
    r.rep.b = bp;
    r.rep.e = i1 + i2;
    r.t = Mat::diag({Elem::pi_pow(F, -i2), Elem::pi_pow(F, i2)});
    return r;
}

Mat reconstruct(const IwasawaResult& r) {
    const LocalField& F = r.rep.kappa.field();
    return r.rep.kappa * n_b(r.rep.b.is_zero() ? Elem::zero(F) : r.rep.b) * a_e(F, r.rep.e) * r.t;
}

int column_ord(const Mat& g, int j) {
    int best = kInfOrd;
    for (int i = 0; i < g.n(); ++i) best = std::min(best, g(i, j).ord());
    return best;
}

int delta(const Mat& g, int i) {
    const int n = g.n();
    if (i < 1 || 2 * i > n) throw DomainError("delta index out of range");
    return column_ord(g, i - 1) + column_ord(g, n - i);
}

}  // namespace twres
