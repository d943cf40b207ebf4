#pragma once

#include "twres/matlattice.hpp"

#include <random>
#include <vector>

namespace twres {

/// gamma = diag(alpha, alpha^(-1)) in the split torus of SO(J_2).
struct TorusElem {
    Elem alpha;

    Mat gamma() const;
    bool regular() const;
};

/// det(tI - A) coefficients, highest degree first (Berkowitz, division free).
std::vector<Elem> charpoly(const std::vector<std::vector<Elem>>& A);

struct DiscriminantReport {
    int ord = 0;          // |D| = q^(-ord)
    int kernel_dim = 0;
    Elem lowterm;         // lowest nonzero charpoly coefficient
    int dim = 0;          // dimension of the ambient space
};

/// Low-term analysis of an operator given as a square matrix.
DiscriminantReport lowterm_report(const std::vector<std::vector<Elem>>& A);

/// S(gamma) = w J^(-1) (gamma - I).
Mat S_of(const Mat& gamma, const GroupForm& form);
Mat S_of(const TorusElem& g, const GroupForm& form);

/// g delta g^|-.
Mat twisted_conj(const Mat& g, const Mat& delta, const GroupForm& form);
bool is_eps_symmetric(const Mat& X, const GroupForm& form);
/// X^|- = X modulo p^m (entries of X must be integral).
bool is_eps_symmetric_mod(const Mat& X, const GroupForm& form, int m);

/// Matrix of X -> -delta X^|- delta^(-1) - X on the basis E_ab of M_n.
std::vector<std::vector<Elem>> d_eps_operator(const Mat& delta, const GroupForm& form);
/// |D_eps(delta)| by the charpoly low term; NotRegular if the kernel dimension
/// differs from expected_kernel (pass -1 to skip the check).
DiscriminantReport d_eps(const Mat& delta, const GroupForm& form, int expected_kernel = 1);
/// phi^S(gamma) = log_q max{1, |D_eps(S(gamma))|^(-1)}.
int phi_S(const TorusElem& g, const GroupForm& form);

/// Basis of Lie(H) = {X : X J + J tX = 0}, as flattened row-major vectors.
std::vector<std::vector<Elem>> lie_h_basis(const GroupForm& form, const LocalField& F);
/// D(gamma) = det(Ad(gamma) - 1; Lie(H)/Lie(T)) for gamma in H.
DiscriminantReport weyl_disc(const Mat& gamma, const GroupForm& form);

struct CentralizerSampleReport {
    long trials = 0;
    long solutions = 0;      // random lifts that solved the congruence mod p^m
    long in_torus = 0;       // of those, congruent to an element of T mod p^(m - slack)
    long restarts = 0;       // lifts abandoned because no lift existed
};

/// Random solutions of g S^-1 g^|- = S^-1 mod p^m, built digit by digit;
/// counts how many lie in T mod p^(m-slack). Requires S(gamma)^-1 in GL_2(O).
CentralizerSampleReport twisted_centralizer_sample(const TorusElem& g, int m, long trials,
                                                   std::uint64_t seed, int slack = 1);

/// Solve L y = r over F_p (L rows x cols). Returns false when inconsistent;
/// otherwise writes a particular solution and a nullspace basis.
bool solve_mod_p(std::vector<std::vector<int>> L, std::vector<int> r, int p, std::vector<int>& particular,
                 std::vector<std::vector<int>>& nullspace);

}  // namespace twres
