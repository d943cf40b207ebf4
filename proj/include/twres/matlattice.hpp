#pragma once

#include "twres/localfield.hpp"

#include <string>
#include <vector>

namespace twres {

/// Square matrix over F, row-major.
class Mat {
public:
    Mat() = default;
    Mat(const LocalField& F, int n);

    static Mat identity(const LocalField& F, int n);
    static Mat diag(const std::vector<Elem>& d);
    static Mat from_rows(const std::vector<std::vector<Elem>>& rows);
    static Mat from_ints(const LocalField& F, const std::vector<std::vector<long>>& rows);
    /// Antidiagonal permutation matrix w_n.
    static Mat antidiag(const LocalField& F, int n);
    static Mat random(const LocalField& F, std::mt19937_64& rng, int n, int lo, int hi);
    /// Random element of GL_n(O).
    static Mat random_gl_o(const LocalField& F, std::mt19937_64& rng, int n);

    int n() const { return n_; }
    const LocalField& field() const { return *f_; }
    Elem& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * n_ + j)]; }
    const Elem& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * n_ + j)]; }

    Mat transpose() const;
    Elem det() const;
    /// Throws Singular when the determinant is zero.
    Mat inverse() const;
    bool is_zero() const;

    friend Mat operator+(const Mat& x, const Mat& y);
    friend Mat operator-(const Mat& x, const Mat& y);
    friend Mat operator*(const Mat& x, const Mat& y);
    friend Mat operator*(const Elem& c, const Mat& x);
    Mat operator-() const;
    friend bool operator==(const Mat& x, const Mat& y);
    friend bool operator!=(const Mat& x, const Mat& y) { return !(x == y); }

    /// Row-major digit lists, one Elem per entry.
    std::string to_string(int max_digits = 6) const;

private:
    const LocalField* f_ = nullptr;
    int n_ = 0;
    std::vector<Elem> a_;
};

/// min ord of the entries; kInfOrd for the zero matrix.
int mat_ord(const Mat& X);
/// ord(X) >= j, decided entrywise.
bool mat_ord_ge(const Mat& X, int j);

/// The lattice pi^(-i) M_n(O).
struct LatticeSpec {
    int i = 0;
};
int lattice_ord(const LatticeSpec& L);
int lattice_ord_star(const LatticeSpec& L);
bool in_lattice(const Mat& X, const LatticeSpec& L);
/// ord(g L h) and ord_*(g L h) for L = pi^(-i) M_n(O).
int lattice_ord(const Mat& g, const LatticeSpec& L, const Mat& h);
int lattice_ord_star(const Mat& g, const LatticeSpec& L, const Mat& h);

/// log_q ||g|| where ||g|| = max{|g|, |det g|^(-1)}.
int gnorm_exponent(const Mat& g);

enum class FormKind { Orthogonal, Symplectic };

struct GroupForm {
    FormKind kind = FormKind::Orthogonal;
    int n = 2;
    Mat J;      // J_n
    Mat w;      // w_n
    Mat u;      // u_n (symplectic only)
    Mat u_inv;  // u_n^(-1)

    /// J_n with Lambda = w_2, so that SO(J_2) is the split diagonal torus.
    static GroupForm orthogonal(const LocalField& F, int n);
    static GroupForm symplectic(const LocalField& F, int n);
};

/// u_i: antidiagonal with signs +1, -1, ... read from the top row.
Mat symplectic_u(const LocalField& F, int n);

/// g^|- : w tg w^(-1) (orthogonal) or u tg u^(-1) (symplectic).
Mat vdash(const Mat& g, const GroupForm& form);
/// eps(g) = (g^(-1))^|-.
Mat eps(const Mat& g, const GroupForm& form);
/// nu(g) = eps(g) g.
Mat nu(const Mat& g, const GroupForm& form);

/// Iwasawa coordinates of a point of GL_2(F)/T.
struct CosetRep {
    Mat kappa;  // in GL_2(O)
    Elem b;     // principal part: zero or negative valuation
    int e = 0;
};

struct IwasawaResult {
    CosetRep rep;
    Mat t;  // diag(alpha, alpha^(-1))
};

Mat n_b(const Elem& b);
/// a_e = diag(pi^e, 1).
Mat a_e(const LocalField& F, int e);
/// Principal part of b: the digits of negative degree.
Elem principal_part(const Elem& b);
/// g = kappa n_b a_e t.
IwasawaResult iwasawa(const Mat& g);
Mat reconstruct(const IwasawaResult& r);

/// Delta_i(g) = ord(v_i) + ord(v_(n+1-i)), columns v_j, i in [1, n/2].
int delta(const Mat& g, int i);
/// ord of column j (0-based).
int column_ord(const Mat& g, int j);

/// n(X, Y) after verifying Y + Y^|- = X X'; throws RelationViolated.
Mat n_of(const Mat& X, const Mat& Y, const GroupForm& form);
/// X' for the given form.
Mat x_prime(const Mat& X, const GroupForm& form);

}  // namespace twres
