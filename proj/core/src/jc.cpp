#include "cavrec/jc.hpp"

namespace cavrec {

Matrix jc_unitary(int field_dim, const JcTime& t) {
    const int d = field_dim;
    Matrix u = Matrix::Zero(2 * d, 2 * d);
    const complexd minus_i(0.0, -1.0);
    // U couples the pairs (|n>|e>, |n+1>|g>); |0>|g> and |D-1>|e> are fixed
    for (int n = 0; n + 1 < d; ++n) {
        const int idx_e = n;
        const int idx_g = d + n + 1;
        u(idx_e, idx_e) = t.c(n);
        u(idx_g, idx_e) = minus_i * t.s(n);
        u(idx_e, idx_g) = minus_i * t.s(n);
        u(idx_g, idx_g) = t.c(n);
    }
    u(d - 1, d - 1) = 1.0;
    u(d, d) = 1.0;
    return u;
}

JointState jc_evolve(const JointState& joint, const JcTime& t) {
    const int d = joint.field_dim();
    const Matrix& rho = joint.entries();
    const double top_pop =
        rho(d - 1, d - 1).real() + rho(2 * d - 1, 2 * d - 1).real();
    if (top_pop > tol::truncation) {
        throw InvalidState(
            "jc_evolve: top Fock level populated; embed the field first");
    }
    const Matrix u = jc_unitary(d, t);
    Matrix evolved = u * rho * u.adjoint();
    evolved = 0.5 * (evolved + evolved.adjoint().eval());
    return JointState(std::move(evolved), d);
}

CmOutcome conditional_measure(const JointState& joint,
                              const AtomState& final_atom) {
    const complexd v[2] = {final_atom.excited(), final_atom.ground()};
    Matrix m = Matrix::Zero(joint.field_dim(), joint.field_dim());
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            m += std::conj(v[a]) * v[b] * joint.block(a, b);
        }
    }
    const double p = m.trace().real();
    if (p < tol::zero_probability) {
        return CmOutcome{std::nullopt, std::max(p, 0.0)};
    }
    m /= p;
    m = 0.5 * (m + m.adjoint().eval());
    return CmOutcome{DensityMatrix(std::move(m)), p};
}

CmOutcome apply_cm(const DensityMatrix& rho, const CmParams& params) {
    // each CM may widen the photon-number distribution by one photon
    const DensityMatrix grown = embed(rho, rho.dim() + 1);
    const JointState joint = tensor_with_atom(grown, params.atom_i);
    const JointState evolved = jc_evolve(joint, params.t);
    return conditional_measure(evolved, params.atom_f);
}

}  // namespace cavrec
