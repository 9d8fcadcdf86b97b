#ifndef CAVREC_ANALYTIC_QUBIT_HPP
#define CAVREC_ANALYTIC_QUBIT_HPP

#include <array>

#include "cavrec/jc.hpp"

namespace cavrec {

/// Closed-form conditional-measurement path for fields spanned by |0> and
/// |1>. Independent oracle for the general evolve-and-project pipeline;
/// production flows use the general path, which covers arbitrary dimension.
namespace analytic_qubit {

/// The 24 bilinear coefficients of the post-measurement field matrix for a
/// qubit field. Half carry explicit formulas; the partners are fixed by the
/// conjugation relations (A = A*, B = E*, C = M*, D = R*, F = F*, G = W*,
/// H = N*, I = S*, L = X*, O = O*, K = T*, Q = Y*, U = U*, V = J*, Z = Z*).
struct CoeffTable {
    complexd A, B, C, D, E, F, G, H, I, J, K, L;
    complexd M, N, O, Q, R, S, T, U, V, W, X, Y, Z;
};

/// 2x2 damped matrix of the qubit field c0|0> + c1|1> after gamma_t.
DensityMatrix damped_qubit_matrix(complexd c0, complexd c1, double gamma_t);

CoeffTable compute_coeffs(const DensityMatrix& rho_t, const AtomState& atom_i,
                          const JcTime& t);

/// 3x3 post-measurement field matrix (levels 0..2) and success probability.
CmOutcome analytic_cm(const DensityMatrix& rho_t, const AtomState& atom_i,
                      const JcTime& t, const AtomState& atom_f);

/// Absolute residuals of the recovery condition, ordered
/// (0,0) (0,1) (1,0) (1,1) (0,2) (2,0) (1,2) (2,1) (2,2). The last five
/// quantify the leaked two-photon amplitudes that an optimized CM must keep
/// near zero.
std::array<double, 9> recovery_residuals(const CmOutcome& outcome,
                                         const DensityMatrix& target);

}  // namespace analytic_qubit

}  // namespace cavrec

#endif
