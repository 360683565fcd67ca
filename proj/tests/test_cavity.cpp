// test_cavity.cpp — two-qubit cavity model, pencil eigenvalues, concurrence and steady states

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unsupported/Eigen/KroneckerProduct>

#include "qrobust/cavity.hpp"
#include "qrobust/robust_perf.hpp"
#include "test_support.hpp"

using namespace qrobust;
using namespace qrobust::testing;

namespace {

MatrixXc sigma_minus() {
    MatrixXc s = MatrixXc::Zero(2, 2);
    s(0, 1) = 1.0;
    return s;
}

HermitianOperator pure(const VectorXc& psi) {
    return HermitianOperator::symmetrized(psi.normalized() * psi.normalized().adjoint());
}

} // namespace

TEST_CASE("jump operator is the collective lowering operator") {
    const CavityParams p{1.0, 1.0, 0.0, 0.0, 0.7, 1.3};
    const MatrixXc I2 = MatrixXc::Identity(2, 2);
    const MatrixXc expected = 0.7 * Eigen::kroneckerProduct(sigma_minus(), I2).eval() +
                              1.3 * Eigen::kroneckerProduct(I2, sigma_minus()).eval();
    CHECK((cavity_jump(p) - expected).norm() < 1e-15);
    CHECK_THROWS_AS(cavity_jump(CavityParams{1.0, 1.0, 0.0, 0.0, -1.0, 1.0}), ValidationError);
}

TEST_CASE("Hamiltonian is linear in the drive and detuning structures") {
    const OperatorBasis b = build_basis(4);
    const CavityParams p = CavityParams::symmetric(0.8, 0.3, 1.0);
    const MatrixXr AH = bloch_hamiltonian(cavity_hamiltonian(p), b);
    const MatrixXr sum = 0.8 * structure_matrix(1, b) + 0.8 * structure_matrix(2, b) +
                         0.3 * structure_matrix(3, b) + 0.3 * structure_matrix(4, b);
    CHECK((AH - sum).norm() < 1e-13);
    // collective emission equals the jump of the unit-gamma model
    const CavityParams unit = CavityParams::symmetric(0.0, 0.0, 1.0);
    CHECK((structure_matrix(5, b) - bloch_lindblad(cavity_jump(unit), b)).norm() < 1e-14);
}

TEST_CASE("structure names") {
    CHECK(structure_name(3) == "S3");
    CHECK(parse_structure("S7") == 7);
    CHECK(parse_structure("2") == 2);
    CHECK_THROWS_AS(parse_structure("S8"), ValidationError);
    CHECK_THROWS_AS(parse_structure("S1x"), ValidationError);
    CHECK_THROWS_AS(structure_name(0), ValidationError);
    CHECK(parse_cavity_param("Delta") == CavityParam::Delta);
    CHECK_THROWS_AS(parse_cavity_param("beta"), ValidationError);
}

TEST_CASE("generalized eigenvalues make the reduced pencil singular") {
    const BlochModel m = cavity_model(nominal_mu());
    const int n = static_cast<int>(m.A.rows()) - 1;
    for (int k = 1; k <= kNumStructures; ++k) {
        const MatrixXr& S = m.structure(structure_name(k));
        for (const auto& ge : generalized_eigs(m.A, S)) {
            const MatrixXr P = m.A.topLeftCorner(n, n) + ge.value * S.topLeftCorner(n, n);
            Eigen::JacobiSVD<MatrixXr> svd(P);
            const auto& sv = svd.singularValues();
            CHECK(sv(n - 1) < 1e-4 * sv(0));
        }
    }
    // drive-amplitude perturbations never make the generator singular
    CHECK(generalized_eigs(m.A, m.structure("S1")).empty());
    CHECK(generalized_eigs(m.A, m.structure("S2")).empty());
}

TEST_CASE("pencil values at the mu-study parameters") {
    const BlochModel m = cavity_model(nominal_mu());
    const auto s3 = generalized_eigs(m.A, m.structure("S3"));
    REQUIRE(s3.size() == 1);
    CHECK(s3[0].value == doctest::Approx(-0.2).epsilon(1e-8));
    CHECK(s3[0].multiplicity == 2);
    const auto s6 = generalized_eigs(m.A, m.structure("S6"));
    REQUIRE(s6.size() == 4);
    const double ref[] = {-2.6465, -1.0462, -0.6346, -0.0057};
    for (int i = 0; i < 4; ++i) CHECK(std::abs(s6[i].value - ref[i]) < 2e-3);
}

TEST_CASE("collective-emission pencil: reported multiplicity equals the nullity") {
    const BlochModel m = cavity_model(nominal_mu());
    const MatrixXr& S5 = m.structure("S5");
    const auto ev = generalized_eigs(m.A, S5);
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].value == doctest::Approx(-1.0).epsilon(1e-10));
    const ReducedBloch a = reduce(m.A, 4), s = reduce(S5, 4);
    const int nullity = 15 - rank_profile(a.A_bar + ev[0].value * s.A_bar).rank;
    CHECK(ev[0].multiplicity == nullity);
}

TEST_CASE("concurrence of reference states") {
    VectorXc bell(4);
    bell << 0.0, 1.0, -1.0, 0.0;
    VectorXc product(4);
    product << 1.0, 0.0, 0.0, 0.0;
    for (auto route : {ConcurrenceRoute::automatic, ConcurrenceRoute::definition}) {
        CHECK(concurrence(pure(bell), route) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(concurrence(pure(product), route) == doctest::Approx(0.0));
    }
    // Werner states: C = max(0, (3p - 1)/2)
    const MatrixXc bell_proj = pure(bell).matrix();
    for (double p : {0.2, 0.5, 0.9}) {
        const MatrixXc rho = p * bell_proj + (1.0 - p) * MatrixXc::Identity(4, 4) / 4.0;
        CHECK(concurrence(HermitianOperator::symmetrized(rho)) ==
              doctest::Approx(std::max(0.0, 1.5 * p - 0.5)).epsilon(1e-10));
    }
}

TEST_CASE("concurrence routes agree on random states") {
    std::mt19937_64 rng(61);
    for (int rep = 0; rep < 10; ++rep) {
        const HermitianOperator rho = random_density(4, rng);
        CHECK(concurrence(rho, ConcurrenceRoute::product) ==
              doctest::Approx(concurrence(rho, ConcurrenceRoute::definition)).epsilon(1e-9));
    }
    // on pure states the definition route stays accurate; C = 2 |ad - bc|
    for (int rep = 0; rep < 10; ++rep) {
        VectorXc psi = random_complex(4, 1, rng).col(0);
        psi.normalize();
        const double exact = 2.0 * std::abs(psi(0) * psi(3) - psi(1) * psi(2));
        CHECK(std::abs(concurrence(pure(psi)) - exact) < 1e-10);
    }
}

TEST_CASE("concurrence rejects invalid states") {
    CHECK_THROWS_AS(concurrence(HermitianOperator(MatrixXc::Identity(2, 2) / 2.0)), DimensionError);
    CHECK_THROWS_AS(concurrence(HermitianOperator(MatrixXc::Identity(4, 4))), ValidationError);
    MatrixXc neg = MatrixXc::Identity(4, 4) * 0.5;
    neg(0, 0) = -0.5;
    CHECK_THROWS_AS(concurrence(HermitianOperator(neg)), ValidationError);
}

TEST_CASE("closed-form steady state") {
    for (auto [a, d] : {std::pair{1.0, 1.0}, std::pair{0.5, 2.0}, std::pair{2.0, 0.1}}) {
        const CavitySteadyState ss = cavity_steady_state(a, d);
        const double r = d / a;
        CHECK(ss.C_ss == doctest::Approx(1.0 / (0.5 * r * r + 1.0)).epsilon(1e-14));
        CHECK(concurrence(pure(ss.psi), ConcurrenceRoute::definition) ==
              doctest::Approx(ss.C_ss).epsilon(1e-10));
        const MatrixXc rho = numerical_steady_state(a, d, 1.0).matrix();
        CHECK((rho - ss.psi * ss.psi.adjoint()).norm() < 1e-10);
    }
    CHECK(cavity_steady_state(1.0, 1.0).C_ss == doctest::Approx(2.0 / 3.0));
    CHECK(cavity_steady_state(0.0, 1.0).alpha_zero);
    CHECK_THROWS_AS(cavity_steady_state(0.0, 0.0), ValidationError);
}

TEST_CASE("log-sensitivities match the closed form") {
    const double a = 1.3, d = 0.9, r2 = (d / a) * (d / a);
    const double expect = r2 / (0.5 * r2 + 1.0);
    CHECK(concurrence_log_sensitivity(a, d, 1.0, CavityParam::Delta) == doctest::Approx(-expect).epsilon(1e-6));
    CHECK(concurrence_log_sensitivity(a, d, 1.0, CavityParam::alpha) == doctest::Approx(expect).epsilon(1e-6));
    CHECK(std::abs(concurrence_log_sensitivity(a, d, 1.0, CavityParam::gamma)) < 1e-6);
    CHECK_THROWS_AS(concurrence_log_sensitivity(a, 0.0, 1.0, CavityParam::Delta), ValidationError);
}

TEST_CASE("rank profile of the cavity generator") {
    CHECK(rank_profile(cavity_model(nominal_gain()).A).rank == 15);
    CHECK(rank_profile(cavity_model(CavityParams::symmetric(1.0, 0.0, 1.0)).A).rank == 14);
    CHECK(rank_profile(cavity_model(CavityParams::symmetric(1.0, 1.0, 0.0)).A).rank == 10);
    const CavityParams generic{cplx(1.0, 0.0), cplx(0.6, 0.3), 0.8, -0.3, 0.0, 0.0};
    CHECK(rank_profile(cavity_model(generic).A).rank == 12);
}

TEST_CASE("stability margin") {
    CHECK(stability_margin(1.0, 0.0, 1.0) < 1e-9);
    CHECK(stability_margin(1.0, 1.0, 1.0) > 0.1);
}

TEST_CASE("paired structures have identical gains") {
    const BlochModel m = cavity_model(nominal_gain());
    for (auto [a, b] : {std::pair{"S1", "S2"}, std::pair{"S3", "S4"}, std::pair{"S6", "S7"}}) {
        for (double w : {0.01, 0.5, 3.0}) {
            const double ga = transfer_dynamic(cplx(0.0, w), 0.1, m.A, m.structure(a)).norm;
            const double gb = transfer_dynamic(cplx(0.0, w), 0.1, m.A, m.structure(b)).norm;
            CHECK(std::abs(ga - gb) < 1e-10);
        }
    }
}
