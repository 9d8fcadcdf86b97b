#include "cavrec/fock.hpp"

#include <Eigen/Eigenvalues>

namespace cavrec {

StateVector::StateVector(Vector amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.size() < 1) {
        throw InvalidState("StateVector: dim must be >= 1");
    }
    const double norm = amps_.norm();
    if (norm < 1e-14) {
        throw InvalidState("StateVector: zero vector cannot be normalized");
    }
    amps_ /= norm;
}

DensityMatrix::DensityMatrix(Matrix entries) : m_(std::move(entries)) {
    if (m_.rows() < 1 || m_.rows() != m_.cols()) {
        throw InvalidState("DensityMatrix: entries must be square, dim >= 1");
    }
    const double herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol::hermiticity) {
        throw InvalidState("DensityMatrix: not Hermitian");
    }
    if (std::abs(m_.trace().real() - 1.0) > tol::trace ||
        std::abs(m_.trace().imag()) > tol::trace) {
        throw InvalidState("DensityMatrix: trace is not 1");
    }
}

AtomState::AtomState(double theta_, double phi_) : theta(theta_), phi(phi_) {
    if (theta < 0.0 || theta > M_PI_2 + 1e-12) {
        throw InvalidState("AtomState: theta outside [0, pi/2]");
    }
}

JointState::JointState(Matrix entries, int field_dim)
    : m_(std::move(entries)), field_dim_(field_dim) {
    if (field_dim_ < 1 || m_.rows() != 2 * field_dim_ || m_.cols() != m_.rows()) {
        throw InvalidState("JointState: entries must be 2D x 2D");
    }
    const double herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol::hermiticity) {
        throw InvalidState("JointState: not Hermitian");
    }
    if (std::abs(m_.trace().real() - 1.0) > tol::trace ||
        std::abs(m_.trace().imag()) > tol::trace) {
        throw InvalidState("JointState: trace is not 1");
    }
}

DensityMatrix pure_to_density(const StateVector& psi) {
    const Vector& c = psi.amplitudes();
    return DensityMatrix(c * c.adjoint());
}

JointState tensor_with_atom(const DensityMatrix& rho, const AtomState& atom) {
    const int d = rho.dim();
    const complexd a = atom.excited();
    const complexd b = atom.ground();
    Matrix joint(2 * d, 2 * d);
    joint.block(0, 0, d, d) = std::norm(a) * rho.entries();
    joint.block(0, d, d, d) = a * std::conj(b) * rho.entries();
    joint.block(d, 0, d, d) = b * std::conj(a) * rho.entries();
    joint.block(d, d, d, d) = std::norm(b) * rho.entries();
    return JointState(std::move(joint), d);
}

DensityMatrix embed(const DensityMatrix& rho, int new_dim) {
    if (new_dim < rho.dim()) {
        throw InvalidState("embed: new_dim must be >= current dim");
    }
    return DensityMatrix(pad_to(rho.entries(), new_dim));
}

DensityMatrix partial_trace_atom(const JointState& joint) {
    Matrix m = joint.block(0, 0) + joint.block(1, 1);
    return DensityMatrix(std::move(m));
}

DensityMatrix truncate_negligible(const DensityMatrix& rho, double threshold) {
    const Matrix& m = rho.entries();
    int d = rho.dim();
    while (d > 1) {
        const int top = d - 1;
        if (std::abs(m(top, top)) > threshold) {
            break;
        }
        // couplings to a level with negligible population are noise
        bool clean = true;
        for (int n = 0; n < top && clean; ++n) {
            clean = std::abs(m(n, top)) <= threshold;
        }
        if (!clean) {
            break;
        }
        --d;
    }
    if (d == rho.dim()) {
        return rho;
    }
    Matrix out = m.topLeftCorner(d, d);
    // restore exact unit trace lost with the discarded tail
    out /= out.trace().real();
    return DensityMatrix(std::move(out));
}

Matrix pad_to(const Matrix& m, int dim) {
    if (m.rows() >= dim) {
        return m;
    }
    Matrix out = Matrix::Zero(dim, dim);
    out.topLeftCorner(m.rows(), m.cols()) = m;
    return out;
}

bool is_positive_semidefinite(const DensityMatrix& rho, double threshold) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.entries(),
                                                 Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff() >= -threshold;
}

}  // namespace cavrec
