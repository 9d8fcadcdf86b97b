#include <doctest.h>

#include "cavrec/dissipation.hpp"
#include "cavrec/metrics.hpp"
#include "test_helpers.hpp"

using namespace cavrec;
using cavrec::testing::random_atom;
using cavrec::testing::random_density;

namespace {

JointState pure_joint(const DensityMatrix& rho, const AtomState& atom) {
    return tensor_with_atom(rho, atom);
}

DensityMatrix fock_state(int n, int dim) {
    Vector c = Vector::Zero(dim);
    c(n) = 1.0;
    return pure_to_density(StateVector(c));
}

}  // namespace

TEST_CASE("zero interaction time is the identity") {
    std::mt19937_64 rng(67);
    const JointState joint =
        pure_joint(embed(random_density(4, rng), 5), random_atom(rng));
    const JointState out = jc_evolve(joint, JcTime(0.0));
    CHECK((out.entries() - joint.entries()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("ground atom with empty cavity is stationary") {
    const JointState joint = pure_joint(fock_state(0, 2), AtomState(M_PI_2, 0.0));
    const JointState out = jc_evolve(joint, JcTime(13.7));
    CHECK((out.entries() - joint.entries()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("excited atom emits one photon at lambda_tau = pi/2") {
    const JointState joint = pure_joint(fock_state(0, 2), AtomState(0.0, 0.0));
    const JointState out = jc_evolve(joint, JcTime(M_PI_2));
    // all weight on |1>|g>
    CHECK(out.block(1, 1)(1, 1).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(out.block(0, 0)(0, 0)) < 1e-12);
}

TEST_CASE("evolution operator is exactly unitary on the truncated space") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 30; ++i) {
        const int dim = 2 + static_cast<int>(u(rng) * 10);
        const Matrix U = jc_unitary(dim, JcTime(40.0 * u(rng)));
        const Matrix err =
            U.adjoint() * U - Matrix::Identity(2 * dim, 2 * dim);
        CHECK(err.cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("jc_evolve preserves trace and Hermiticity") {
    std::mt19937_64 rng(73);
    for (int i = 0; i < 10; ++i) {
        const DensityMatrix rho = embed(random_density(4, rng), 5);
        const JointState out =
            jc_evolve(pure_joint(rho, random_atom(rng)), JcTime(17.0));
        CHECK(std::abs(out.entries().trace() - complexd(1.0)) < 1e-12);
        CHECK((out.entries() - out.entries().adjoint()).cwiseAbs().maxCoeff() <
              1e-12);
    }
}

TEST_CASE("populated top level is rejected") {
    const JointState joint = pure_joint(fock_state(1, 2), AtomState(0.3, 0.0));
    CHECK_THROWS_AS(jc_evolve(joint, JcTime(1.0)), InvalidState);
}

TEST_CASE("post-selection without interaction") {
    std::mt19937_64 rng(79);
    const DensityMatrix rho = random_density(3, rng);
    const AtomState atom(1.1, 0.9);

    SUBCASE("matching projector keeps the field and P = 1") {
        const CmOutcome out = conditional_measure(pure_joint(rho, atom), atom);
        CHECK(out.probability == doctest::Approx(1.0).epsilon(1e-12));
        REQUIRE(out.field.has_value());
        CHECK((out.field->entries() - rho.entries()).cwiseAbs().maxCoeff() <
              1e-12);
    }
    SUBCASE("orthogonal projector is an impossible outcome") {
        const AtomState ortho(M_PI_2 - atom.theta, atom.phi + M_PI);
        const CmOutcome out = conditional_measure(pure_joint(rho, atom), ortho);
        CHECK(out.probability < tol::zero_probability);
        CHECK(!out.field.has_value());
    }
}

TEST_CASE("outcome probabilities over an atomic basis sum to one") {
    std::mt19937_64 rng(83);
    for (int i = 0; i < 15; ++i) {
        const DensityMatrix rho = embed(random_density(3, rng), 4);
        const JointState evolved =
            jc_evolve(pure_joint(rho, random_atom(rng)), JcTime(9.3));
        const AtomState f = random_atom(rng);
        const AtomState f_perp(M_PI_2 - f.theta, f.phi + M_PI);
        const double p1 = conditional_measure(evolved, f).probability;
        const double p2 = conditional_measure(evolved, f_perp).probability;
        CHECK(p1 + p2 == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("post-selected fields are valid states") {
    std::mt19937_64 rng(89);
    for (int i = 0; i < 15; ++i) {
        const DensityMatrix rho = random_density(3, rng);
        const CmOutcome out = apply_cm(
            rho, CmParams{random_atom(rng), random_atom(rng), JcTime(25.0)});
        if (out.probability <= 1e-10) {
            continue;
        }
        REQUIRE(out.field.has_value());
        CHECK(std::abs(out.field->entries().trace().real() - 1.0) < 1e-10);
        CHECK(is_positive_semidefinite(*out.field));
    }
}

TEST_CASE("identity parameters leave the field untouched") {
    std::mt19937_64 rng(97);
    const DensityMatrix rho = random_density(3, rng);
    const AtomState atom = random_atom(rng);
    const CmOutcome out = apply_cm(rho, CmParams{atom, atom, JcTime(0.0)});
    CHECK(out.probability == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((truncate_negligible(*out.field).entries() - rho.entries())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}

TEST_CASE("apply_cm equals the composed pipeline") {
    std::mt19937_64 rng(101);
    const DensityMatrix rho = random_density(3, rng);
    const CmParams params{random_atom(rng), random_atom(rng), JcTime(12.3)};
    const CmOutcome composed = conditional_measure(
        jc_evolve(tensor_with_atom(embed(rho, 4), params.atom_i), params.t),
        params.atom_f);
    const CmOutcome direct = apply_cm(rho, params);
    CHECK(direct.probability ==
          doctest::Approx(composed.probability).epsilon(1e-14));
    CHECK((direct.field->entries() - composed.field->entries())
              .cwiseAbs()
              .maxCoeff() < 1e-14);
}

TEST_CASE("reference one-CM recovery on the equal superposition") {
    const DensityMatrix rho0 = cavrec::testing::example_state(1);
    const DensityMatrix damped = dissipate(rho0, DampingSpec(0.3));
    const CmOutcome out =
        apply_cm(damped, cavrec::testing::example1_cm_params());
    CHECK(out.probability == doctest::Approx(0.74).epsilon(0.01));
    const double d_before = distance(damped, rho0);
    const double d_after = distance(truncate_negligible(*out.field), rho0);
    CHECK(d_before / d_after == doctest::Approx(2.5).epsilon(0.1));
}
