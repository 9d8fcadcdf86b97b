#include "cavrec/metrics.hpp"

#include <cstdio>
#include <limits>
#include <ostream>

namespace cavrec {

double distance(const Matrix& a, const Matrix& b) {
    const int d = static_cast<int>(std::max(a.rows(), b.rows()));
    return (pad_to(a, d) - pad_to(b, d)).norm();
}

double distance(const DensityMatrix& a, const DensityMatrix& b) {
    return distance(a.entries(), b.entries());
}

double cost(double d, double p, const CostConfig& cfg) {
    if (p <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return d / std::pow(p, cfg.r);
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    const int d = std::max(a.dim(), b.dim());
    return (pad_to(a.entries(), d) * pad_to(b.entries(), d)).trace().real();
}

namespace {

// <n|alpha> for n = 0..dim-1
Vector coherent_components(complexd alpha, int dim) {
    Vector v(dim);
    v(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < dim; ++n) {
        v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    }
    return v;
}

}  // namespace

double q_function(const Matrix& rho, complexd alpha) {
    const Vector v = coherent_components(alpha, static_cast<int>(rho.rows()));
    return (v.adjoint() * rho * v)(0).real();
}

double q_function(const DensityMatrix& rho, complexd alpha) {
    return q_function(rho.entries(), alpha);
}

QGrid q_grid(const Matrix& rho, double extent, double step) {
    if (extent <= 0.0 || step <= 0.0) {
        throw InvalidState("q_grid: extent and step must be positive");
    }
    const int n = static_cast<int>(std::floor(2.0 * extent / step + 0.5)) + 1;
    QGrid grid{extent, step, {}};
    grid.points.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        const double im = -extent + i * step;
        for (int j = 0; j < n; ++j) {
            const double re = -extent + j * step;
            grid.points.push_back({re, im, q_function(rho, complexd(re, im))});
        }
    }
    return grid;
}

QGrid q_grid(const DensityMatrix& rho, double extent, double step) {
    return q_grid(rho.entries(), extent, step);
}

void write_q_grid_csv(std::ostream& os, const QGrid& grid) {
    os << "re,im,q\n";
    char buf[96];
    for (const QGridPoint& p : grid.points) {
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g\n", p.re, p.im, p.q);
        os << buf;
    }
}

}  // namespace cavrec
