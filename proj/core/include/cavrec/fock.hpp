#ifndef CAVREC_FOCK_HPP
#define CAVREC_FOCK_HPP

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace cavrec {

using complexd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Numerical tolerances used across validity checks.
namespace tol {
inline constexpr double state_norm = 1e-12;
inline constexpr double hermiticity = 1e-12;
inline constexpr double trace = 1e-10;
inline constexpr double psd = 1e-10;
inline constexpr double truncation = 1e-12;
inline constexpr double zero_probability = 1e-14;
}  // namespace tol

class InvalidState : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Pure cavity-field state: amplitudes c_0..c_N on the truncated Fock basis.
/// Normalized on construction.
class StateVector {
public:
    explicit StateVector(Vector amplitudes);

    int dim() const { return static_cast<int>(amps_.size()); }
    const Vector& amplitudes() const { return amps_; }
    complexd operator[](int n) const { return amps_(n); }

private:
    Vector amps_;
};

/// Field density matrix on the truncated Fock space.
/// Hermiticity and unit trace are enforced at construction; positivity is
/// checked separately (eigen-decomposition is not worth paying on every op).
class DensityMatrix {
public:
    explicit DensityMatrix(Matrix entries);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& entries() const { return m_; }
    complexd operator()(int n, int m) const { return m_(n, m); }

private:
    Matrix m_;
};

/// Two-level atom superposition cos(theta)|e> + sin(theta) e^{i phi}|g>.
/// Global phase is quotiented out: the excited amplitude is real nonnegative.
struct AtomState {
    double theta = 0.0;  // [0, pi/2]
    double phi = 0.0;    // [0, 2 pi)

    AtomState() = default;
    AtomState(double theta_, double phi_);

    complexd excited() const { return {std::cos(theta), 0.0}; }
    complexd ground() const { return std::polar(std::sin(theta), phi); }
};

/// Joint field-atom density matrix, stored as a 2D x 2D matrix with flat
/// index a*D + n (atom index a: 0 = excited, 1 = ground; n = photon number).
class JointState {
public:
    JointState(Matrix entries, int field_dim);

    int field_dim() const { return field_dim_; }
    const Matrix& entries() const { return m_; }

    /// D x D block <a n| rho |b m> for atom bra a, ket b.
    Eigen::Block<const Matrix> block(int a, int b) const {
        return m_.block(a * field_dim_, b * field_dim_, field_dim_, field_dim_);
    }

private:
    Matrix m_;
    int field_dim_;
};

DensityMatrix pure_to_density(const StateVector& psi);
JointState tensor_with_atom(const DensityMatrix& rho, const AtomState& atom);
DensityMatrix embed(const DensityMatrix& rho, int new_dim);
DensityMatrix partial_trace_atom(const JointState& joint);

/// Drop trailing Fock levels whose population (and all couplings to them)
/// stay below `threshold`. Never shrinks below dim 1.
DensityMatrix truncate_negligible(const DensityMatrix& rho,
                                  double threshold = tol::truncation);

/// Pads the smaller of the two to the larger dimension.
Matrix pad_to(const Matrix& m, int dim);

bool is_positive_semidefinite(const DensityMatrix& rho,
                              double threshold = tol::psd);

}  // namespace cavrec

#endif
