#ifndef CAVREC_JC_HPP
#define CAVREC_JC_HPP

#include <optional>

#include "cavrec/fock.hpp"

namespace cavrec {

/// Resonant JC interaction strength: the dimensionless product of the vacuum
/// Rabi frequency and the interaction time.
struct JcTime {
    double lambda_tau = 0.0;

    JcTime() = default;
    explicit JcTime(double lambda_tau_) : lambda_tau(lambda_tau_) {
        if (lambda_tau < 0.0) {
            throw InvalidState("JcTime: lambda_tau must be >= 0");
        }
    }

    double c(int n) const {
        return n < 0 ? 1.0 : std::cos(lambda_tau * std::sqrt(n + 1.0));
    }
    double s(int n) const {
        return n < 0 ? 0.0 : std::sin(lambda_tau * std::sqrt(n + 1.0));
    }
};

/// Result of post-selecting the atom: the normalized field state and the
/// probability of that outcome. `field` is empty when the outcome is
/// impossible (probability below tol::zero_probability).
struct CmOutcome {
    std::optional<DensityMatrix> field;
    double probability = 0.0;
};

/// One conditional measurement's control knobs.
struct CmParams {
    AtomState atom_i;
    AtomState atom_f;
    JcTime t;
};

/// Explicit JC evolution operator on the (field_dim photons) x (2 levels)
/// space, flat index a*D + n as in JointState. The top excited level
/// |D-1>|e> has no partner inside the truncation and is held fixed, which
/// keeps the matrix exactly unitary; callers must keep that level empty.
Matrix jc_unitary(int field_dim, const JcTime& t);

JointState jc_evolve(const JointState& joint, const JcTime& t);

CmOutcome conditional_measure(const JointState& joint,
                              const AtomState& final_atom);

/// embed(+1) -> tensor_with_atom -> jc_evolve -> conditional_measure.
CmOutcome apply_cm(const DensityMatrix& rho, const CmParams& params);

}  // namespace cavrec

#endif
