#include "cavrec/analytic_qubit.hpp"

namespace cavrec::analytic_qubit {

DensityMatrix damped_qubit_matrix(complexd c0, complexd c1, double gamma_t) {
    const double norm2 = std::norm(c0) + std::norm(c1);
    if (std::abs(norm2 - 1.0) > 1e-9) {
        throw InvalidState("damped_qubit_matrix: |c0|^2 + |c1|^2 must be 1");
    }
    const double eta = std::exp(-2.0 * gamma_t);
    Matrix m(2, 2);
    m(0, 0) = std::norm(c0) + (1.0 - eta) * std::norm(c1);
    m(0, 1) = std::exp(-gamma_t) * c0 * std::conj(c1);
    m(1, 0) = std::conj(m(0, 1));
    m(1, 1) = eta * std::norm(c1);
    return DensityMatrix(std::move(m));
}

CoeffTable compute_coeffs(const DensityMatrix& rho_t, const AtomState& atom_i,
                          const JcTime& t) {
    if (rho_t.dim() != 2) {
        throw InvalidState("compute_coeffs: field matrix must be 2x2");
    }
    const complexd r00 = rho_t(0, 0), r01 = rho_t(0, 1);
    const complexd r10 = rho_t(1, 0), r11 = rho_t(1, 1);
    const complexd a = atom_i.excited();
    const complexd b = atom_i.ground();
    const double aa = std::norm(a), bb = std::norm(b);
    const complexd ab = a * std::conj(b);   // alpha beta*
    const complexd ba = std::conj(a) * b;   // alpha* beta
    const double c0 = t.c(0), s0 = t.s(0), c1 = t.c(1), s1 = t.s(1);
    const complexd i1(0.0, 1.0);

    CoeffTable k{};
    k.A = r00 * aa * c0 * c0 + i1 * r01 * ab * c0 * s0 + r11 * bb * s0 * s0 -
          i1 * r10 * ba * s0 * c0;
    k.B = r01 * aa * c0 * c1 - i1 * r11 * ba * c1 * s0;
    k.C = r00 * ab * c0 - i1 * r10 * bb * s0;
    k.D = i1 * r00 * aa * c0 * s0 - i1 * r11 * bb * s0 * c0 +
          r01 * ab * c0 * c0 + r10 * ba * s0 * s0;
    k.F = r11 * aa * c1 * c1;
    k.G = r11 * ba * s0 * s1 + i1 * r01 * aa * c0 * s1;
    k.H = r10 * ab * c1;
    k.I = r11 * ab * c1 * c0 + i1 * r10 * aa * c1 * s0;
    k.K = i1 * r00 * ba * s0 + r01 * bb * c0;
    k.L = i1 * r11 * aa * c1 * s1;
    k.O = r00 * bb;
    k.Q = i1 * r01 * ba * s1;
    k.U = r00 * aa * s0 * s0 - i1 * r01 * ab * s0 * c0 + r11 * bb * c0 * c0 +
          i1 * r10 * ba * c0 * s0;
    k.V = i1 * r11 * ba * c0 * s1 + r01 * aa * s0 * s1;
    k.Z = r11 * aa * s1 * s1;

    // partners fixed by conjugation
    k.E = std::conj(k.B);
    k.M = std::conj(k.C);
    k.R = std::conj(k.D);
    k.W = std::conj(k.G);
    k.N = std::conj(k.H);
    k.S = std::conj(k.I);
    k.T = std::conj(k.K);
    k.X = std::conj(k.L);
    k.Y = std::conj(k.Q);
    k.J = std::conj(k.V);
    return k;
}

CmOutcome analytic_cm(const DensityMatrix& rho_t, const AtomState& atom_i,
                      const JcTime& t, const AtomState& atom_f) {
    const CoeffTable k = compute_coeffs(rho_t, atom_i, t);
    const complexd af = atom_f.excited();
    const complexd bf = atom_f.ground();
    const double ff = std::norm(af), gg = std::norm(bf);
    const complexd fg = af * std::conj(bf);  // alpha_f beta_f*
    const complexd gf = bf * std::conj(af);  // beta_f alpha_f*

    Matrix m(3, 3);
    m(0, 0) = ff * k.A + fg * k.M + gf * k.C + gg * k.O;
    m(0, 1) = ff * k.B + fg * k.N + gf * k.D + gg * k.K;
    m(1, 0) = ff * k.E + fg * k.R + gf * k.H + gg * k.T;
    m(1, 1) = ff * k.F + fg * k.S + gf * k.I + gg * k.U;
    m(2, 0) = fg * k.W + gg * k.Y;
    m(0, 2) = gf * k.G + gg * k.Q;
    m(2, 1) = fg * k.X + gg * k.J;
    m(1, 2) = gf * k.L + gg * k.V;
    m(2, 2) = gg * k.Z;

    const double p = (ff * (k.A + k.F) + fg * (k.M + k.S) + gf * (k.C + k.I) +
                      gg * (k.O + k.U + k.Z))
                         .real();
    if (p < tol::zero_probability) {
        return CmOutcome{std::nullopt, std::max(p, 0.0)};
    }
    m /= p;
    m = 0.5 * (m + m.adjoint().eval());
    return CmOutcome{DensityMatrix(std::move(m)), p};
}

std::array<double, 9> recovery_residuals(const CmOutcome& outcome,
                                         const DensityMatrix& target) {
    if (!outcome.field) {
        throw InvalidState("recovery_residuals: outcome carries no field");
    }
    if (target.dim() != 2) {
        throw InvalidState("recovery_residuals: target must be 2x2");
    }
    const Matrix f = pad_to(outcome.field->entries(), 3);
    const Matrix tgt = pad_to(target.entries(), 3);
    return {
        std::abs(f(0, 0) - tgt(0, 0)), std::abs(f(0, 1) - tgt(0, 1)),
        std::abs(f(1, 0) - tgt(1, 0)), std::abs(f(1, 1) - tgt(1, 1)),
        std::abs(f(0, 2)),             std::abs(f(2, 0)),
        std::abs(f(1, 2)),             std::abs(f(2, 1)),
        std::abs(f(2, 2)),
    };
}

}  // namespace cavrec::analytic_qubit
