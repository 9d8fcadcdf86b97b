#ifndef CAVREC_DISSIPATION_HPP
#define CAVREC_DISSIPATION_HPP

#include "cavrec/fock.hpp"

namespace cavrec {

/// Zero-temperature amplitude damping, parameterized by the dimensionless
/// product gamma * t (damping constant times elapsed time).
struct DampingSpec {
    double gamma_t = 0.0;

    DampingSpec() = default;
    explicit DampingSpec(double gamma_t_) : gamma_t(gamma_t_) {
        if (gamma_t < 0.0) {
            throw InvalidState("DampingSpec: gamma_t must be >= 0");
        }
    }
};

/// Closed-form solution of the damping master equation in the Fock basis.
DensityMatrix dissipate(const DensityMatrix& rho, const DampingSpec& spec);

/// Fixed-step RK4 integration of rho' = 2 a rho a+ - a+a rho - rho a+a
/// (gamma absorbed into the time axis). Validation oracle for dissipate().
DensityMatrix dissipate_ode_oracle(const DensityMatrix& rho,
                                   const DampingSpec& spec, int steps);

}  // namespace cavrec

#endif
