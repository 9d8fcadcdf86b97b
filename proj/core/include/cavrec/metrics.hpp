#ifndef CAVREC_METRICS_HPP
#define CAVREC_METRICS_HPP

#include <iosfwd>
#include <vector>

#include "cavrec/fock.hpp"

namespace cavrec {

/// Probability weight in the cost function G = d / P^r. r = 0 ignores the
/// success probability entirely.
struct CostConfig {
    double r = 2.0;

    CostConfig() = default;
    explicit CostConfig(double r_) : r(r_) {
        if (r < 0.0) {
            throw InvalidState("CostConfig: r must be >= 0");
        }
    }
};

/// Frobenius distance between two density matrices. The smaller matrix is
/// zero-padded to the larger dimension.
double distance(const DensityMatrix& a, const DensityMatrix& b);
double distance(const Matrix& a, const Matrix& b);

/// G = d / p^r; nonpositive p yields an infinite cost sentinel.
double cost(double d, double p, const CostConfig& cfg);

/// Re Tr(a b). For pure a this is the overlap probability (the "filtering
/// probability" when b is the damped state).
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

/// Husimi Q-function <alpha|rho|alpha>, truncated at rho's dimension.
/// The Matrix overload accepts Hermitian non-states (error matrices), whose
/// Q values may be negative.
double q_function(const Matrix& rho, complexd alpha);
double q_function(const DensityMatrix& rho, complexd alpha);

struct QGridPoint {
    double re;
    double im;
    double q;
};

struct QGrid {
    double extent;
    double step;
    std::vector<QGridPoint> points;  // row-major: im outer, re inner
};

QGrid q_grid(const Matrix& rho, double extent, double step);
QGrid q_grid(const DensityMatrix& rho, double extent, double step);

/// CSV with header `re,im,q`, 9 significant digits.
void write_q_grid_csv(std::ostream& os, const QGrid& grid);

}  // namespace cavrec

#endif
