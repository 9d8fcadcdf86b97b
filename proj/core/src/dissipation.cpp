#include "cavrec/dissipation.hpp"

namespace cavrec {

namespace {

double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// sqrt( C(n+k, n) eta^n (1-eta)^k ), computed in log space
double damping_weight(int n, int k, double eta, double one_minus_eta) {
    if (one_minus_eta == 0.0) {
        return k == 0 ? std::pow(eta, 0.5 * n) : 0.0;
    }
    if (eta == 0.0 && n > 0) {
        return 0.0;
    }
    double log_w = log_binomial(n + k, n) + k * std::log(one_minus_eta);
    if (n > 0) {
        log_w += n * std::log(eta);
    }
    return std::exp(0.5 * log_w);
}

}  // namespace

DensityMatrix dissipate(const DensityMatrix& rho, const DampingSpec& spec) {
    const int d = rho.dim();
    const double eta = std::exp(-2.0 * spec.gamma_t);
    const double one_minus_eta = -std::expm1(-2.0 * spec.gamma_t);
    const Matrix& in = rho.entries();

    Matrix out = Matrix::Zero(d, d);
    for (int n = 0; n < d; ++n) {
        for (int m = 0; m < d; ++m) {
            // k-sum truncates where rho(n+k, m+k) runs off the stored matrix;
            // exact for finite-support states
            const int k_max = d - 1 - std::max(n, m);
            complexd acc = 0.0;
            for (int k = 0; k <= k_max; ++k) {
                acc += in(n + k, m + k) *
                       damping_weight(n, k, eta, one_minus_eta) *
                       damping_weight(m, k, eta, one_minus_eta);
            }
            out(n, m) = acc;
        }
    }
    return DensityMatrix(std::move(out));
}

DensityMatrix dissipate_ode_oracle(const DensityMatrix& rho,
                                   const DampingSpec& spec, int steps) {
    if (steps < 1) {
        throw InvalidState("dissipate_ode_oracle: steps must be >= 1");
    }
    const int d = rho.dim();
    Matrix a = Matrix::Zero(d, d);
    for (int n = 1; n < d; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    const Matrix num_op = a.adjoint() * a;

    auto lindblad = [&](const Matrix& r) -> Matrix {
        return 2.0 * a * r * a.adjoint() - num_op * r - r * num_op;
    };

    const double h = spec.gamma_t / steps;
    Matrix r = rho.entries();
    for (int i = 0; i < steps; ++i) {
        const Matrix k1 = lindblad(r);
        const Matrix k2 = lindblad(r + 0.5 * h * k1);
        const Matrix k3 = lindblad(r + 0.5 * h * k2);
        const Matrix k4 = lindblad(r + h * k3);
        r += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    // RK4 leaves ~1e-15 Hermiticity noise; symmetrize before validation
    r = 0.5 * (r + r.adjoint().eval());
    return DensityMatrix(std::move(r));
}

}  // namespace cavrec
