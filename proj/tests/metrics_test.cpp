#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "cavrec/dissipation.hpp"
#include "cavrec/metrics.hpp"
#include "test_helpers.hpp"

using namespace cavrec;
using cavrec::testing::random_density;

namespace {

DensityMatrix fock_state(int n, int dim) {
    Vector c = Vector::Zero(dim);
    c(n) = 1.0;
    return pure_to_density(StateVector(c));
}

}  // namespace

TEST_CASE("distance reference values") {
    const DensityMatrix vac = fock_state(0, 2);
    CHECK(distance(vac, vac) == 0.0);
    CHECK(distance(vac, fock_state(1, 2)) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

    const DensityMatrix rho0 = cavrec::testing::example_state(1);
    const DensityMatrix damped = dissipate(rho0, DampingSpec(0.3));
    CHECK(distance(damped, rho0) == doctest::Approx(0.368).epsilon(1e-3));
}

TEST_CASE("distance pads mismatched dimensions") {
    const DensityMatrix vac2 = fock_state(0, 2);
    const DensityMatrix vac5 = fock_state(0, 5);
    CHECK(distance(vac2, vac5) == 0.0);
    CHECK(distance(vac5, fock_state(1, 2)) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("distance is a metric on random states") {
    std::mt19937_64 rng(127);
    for (int i = 0; i < 20; ++i) {
        const DensityMatrix a = random_density(4, rng);
        const DensityMatrix b = random_density(4, rng);
        const DensityMatrix c = random_density(4, rng);
        CHECK(distance(a, b) == doctest::Approx(distance(b, a)).epsilon(1e-14));
        CHECK(distance(a, b) >= 0.0);
        CHECK(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-12);
        CHECK(distance(a, a) < 1e-14);
    }
}

TEST_CASE("cost combines distance and probability") {
    const CostConfig r2(2.0);
    CHECK(cost(0.4, 0.5, r2) == doctest::Approx(1.6).epsilon(1e-14));
    CHECK(cost(0.4, 1.0, r2) == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(cost(0.4, 0.5, CostConfig(0.0)) ==
          doctest::Approx(0.4).epsilon(1e-14));
    CHECK(std::isinf(cost(0.4, 0.0, r2)));
    CHECK(std::isinf(cost(0.4, -0.1, r2)));
    // an impossible outcome is never a candidate, even when r = 0
    CHECK(std::isinf(cost(0.4, 0.0, CostConfig(0.0))));
    CHECK_THROWS_AS(CostConfig(-1.0), InvalidState);
    // larger r punishes low probability harder
    CHECK(cost(0.4, 0.5, CostConfig(4.0)) > cost(0.4, 0.5, r2));
}

TEST_CASE("fidelity of the damped state against the original") {
    SUBCASE("equal superposition, growing damping") {
        const DensityMatrix rho0 = cavrec::testing::example_state(1);
        const double f03 =
            fidelity(rho0, dissipate(rho0, DampingSpec(0.3)));
        const double f10 =
            fidelity(rho0, dissipate(rho0, DampingSpec(1.0)));
        // 1/2 + e^{-0.3}/2
        CHECK(f03 == doctest::Approx(0.8704).epsilon(0.001));
        CHECK(f10 < f03);
    }
    SUBCASE("strongly unequal superposition decays much faster") {
        const DensityMatrix rho0 = cavrec::testing::example_state(2);
        CHECK(fidelity(rho0, dissipate(rho0, DampingSpec(1.0))) ==
              doctest::Approx(0.15).epsilon(0.04));
    }
    SUBCASE("symmetric and normalized") {
        std::mt19937_64 rng(131);
        const DensityMatrix a = random_density(3, rng);
        const DensityMatrix b = random_density(3, rng);
        CHECK(fidelity(a, b) == doctest::Approx(fidelity(b, a)).epsilon(1e-14));
        const DensityMatrix pure =
            pure_to_density(cavrec::testing::random_pure_qubit(rng));
        CHECK(fidelity(pure, pure) == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("Husimi function of the vacuum is a Gaussian") {
    const DensityMatrix vac = fock_state(0, 3);
    for (double re : {0.0, 0.5, -1.2}) {
        for (double im : {0.0, 0.8}) {
            const complexd alpha(re, im);
            CHECK(q_function(vac, alpha) ==
                  doctest::Approx(std::exp(-std::norm(alpha))).epsilon(1e-12));
        }
    }
}

TEST_CASE("Husimi function at the origin is the vacuum population") {
    std::mt19937_64 rng(137);
    for (int i = 0; i < 10; ++i) {
        const DensityMatrix rho = random_density(4, rng);
        CHECK(q_function(rho, complexd(0.0, 0.0)) ==
              doctest::Approx(rho(0, 0).real()).epsilon(1e-12));
    }
}

TEST_CASE("Husimi function integrates to one over phase space") {
    std::mt19937_64 rng(139);
    const DensityMatrix rho = random_density(3, rng);
    const QGrid grid = q_grid(rho, 6.0, 0.05);
    double sum = 0.0;
    for (const QGridPoint& p : grid.points) {
        sum += p.q;
    }
    CHECK(sum * 0.05 * 0.05 / M_PI == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("error-matrix overload can go negative but sums to zero") {
    const DensityMatrix rho0 = cavrec::testing::example_state(1);
    const DensityMatrix damped = dissipate(rho0, DampingSpec(0.3));
    const Matrix err = damped.entries() - embed(rho0, damped.dim()).entries();
    const QGrid grid = q_grid(err, 6.0, 0.05);
    double sum = 0.0;
    double min_q = 0.0;
    for (const QGridPoint& p : grid.points) {
        sum += p.q;
        min_q = std::min(min_q, p.q);
    }
    CHECK(min_q < -1e-4);
    CHECK(std::abs(sum * 0.05 * 0.05 / M_PI) < 1e-3);
}

TEST_CASE("q_grid layout and CSV formatting") {
    const DensityMatrix vac = fock_state(0, 2);
    const QGrid grid = q_grid(vac, 1.0, 1.0);
    REQUIRE(grid.points.size() == 9);
    // row-major: imaginary axis outer, real axis inner
    CHECK(grid.points[0].re == doctest::Approx(-1.0));
    CHECK(grid.points[0].im == doctest::Approx(-1.0));
    CHECK(grid.points[1].re == doctest::Approx(0.0));
    CHECK(grid.points[1].im == doctest::Approx(-1.0));
    CHECK(grid.points[3].re == doctest::Approx(-1.0));
    CHECK(grid.points[3].im == doctest::Approx(0.0));
    CHECK(grid.points[4].q == doctest::Approx(1.0).epsilon(1e-14));

    std::ostringstream csv;
    write_q_grid_csv(csv, grid);
    const std::string text = csv.str();
    CHECK(text.rfind("re,im,q\n", 0) == 0);
    CHECK(text.find("0,0,1\n") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 10);

    CHECK_THROWS_AS(q_grid(vac, -1.0, 0.1), InvalidState);
    CHECK_THROWS_AS(q_grid(vac, 1.0, 0.0), InvalidState);
}
