// test_dephasing.cpp — joint diagonalization, analytic dephasing solution and the unit transfer bound

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include <unsupported/Eigen/MatrixFunctions>

#include "qrobust/bloch_model.hpp"
#include "qrobust/dephasing.hpp"
#include "test_support.hpp"

using namespace qrobust;
using namespace qrobust::testing;

TEST_CASE("joint eigenbasis diagonalizes both operators") {
    std::mt19937_64 rng(31);
    for (int N : {2, 3, 4, 5}) {
        const CommutingSample c = random_commuting(N, rng);
        const CommutingPair p = simultaneous_diag(HermitianOperator(c.H), HermitianOperator(c.V));
        CHECK((p.U.adjoint() * p.U - MatrixXc::Identity(N, N)).norm() < 1e-12);
        CHECK((p.U.adjoint() * c.H * p.U - MatrixXc(p.lamH.cast<cplx>().asDiagonal())).norm() < 1e-10);
        CHECK((p.U.adjoint() * c.V * p.U - MatrixXc(p.lamV.cast<cplx>().asDiagonal())).norm() < 1e-10);
        VectorXr h_sorted = p.lamH, ref = c.h;
        std::sort(h_sorted.data(), h_sorted.data() + N);
        std::sort(ref.data(), ref.data() + N);
        CHECK((h_sorted - ref).norm() < 1e-10);
    }
}

TEST_CASE("degenerate joint eigenspaces get a canonical basis and phase") {
    // H is degenerate on span(e0, e1); V splits e2 off from e0 + e1
    MatrixXc H = MatrixXc::Zero(3, 3), V = MatrixXc::Zero(3, 3);
    H(0, 0) = H(1, 1) = 1.0;
    H(2, 2) = 2.0;
    const CommutingPair p = simultaneous_diag(HermitianOperator(H), HermitianOperator(V));
    CHECK((p.U - MatrixXc::Identity(3, 3)).norm() < 1e-12);
    CHECK(p.lamH(0) == doctest::Approx(1.0));
    CHECK(p.lamH(2) == doctest::Approx(2.0));

    std::mt19937_64 rng(32);
    const CommutingSample c = random_commuting(4, rng);
    const CommutingPair q = simultaneous_diag(HermitianOperator(c.H), HermitianOperator(c.V));
    for (int j = 0; j < 4; ++j) {
        int first = 0;
        while (std::abs(q.U(first, j)) < 1e-10) ++first;
        CHECK(std::abs(q.U(first, j).imag()) < 1e-14);
        CHECK(q.U(first, j).real() > 0.0);
    }
}

TEST_CASE("non-commuting operators are rejected with the commutator norm") {
    try {
        simultaneous_diag(HermitianOperator(pauli::x()), HermitianOperator(pauli::z()));
        FAIL("expected CommutatorError");
    } catch (const CommutatorError& e) {
        CHECK(e.commutator_norm == doctest::Approx(2.0 * std::sqrt(2.0)));
    }
}

TEST_CASE("projector-form solution equals the Liouvillian exponential") {
    std::mt19937_64 rng(33);
    for (int N : {2, 3, 4}) {
        const CommutingSample c = random_commuting(N, rng);
        const CommutingPair p = simultaneous_diag(HermitianOperator(c.H), HermitianOperator(c.V));
        const HermitianOperator rho0 = random_density(N, rng);
        for (auto [delta, t] : {std::pair{0.3, 0.7}, std::pair{2.0, 1.3}}) {
            const OpenSystem sys(HermitianOperator(c.H), {JumpTerm{c.V, delta}});
            const MatrixXc L = liouvillian(sys);
            const MatrixXc expected = unvec((t * L).exp() * vec(rho0.matrix()), N);
            CHECK((dephasing_solution(rho0, p, delta, t).matrix() - expected).norm() < 1e-10);
        }
    }
}

TEST_CASE("spectrum of coherence modes") {
    MatrixXc H = MatrixXc::Zero(3, 3), V = MatrixXc::Zero(3, 3);
    H(0, 0) = 0.0;
    H(1, 1) = 1.0;
    H(2, 2) = 1.0;
    V(0, 0) = 0.0;
    V(1, 1) = 1.0;
    V(2, 2) = 3.0;
    const DephasingSpectrum s =
        dephasing_spectrum(simultaneous_diag(HermitianOperator(H), HermitianOperator(V)));
    REQUIRE(s.omegas.size() == 6);
    CHECK(s.kernel_dim == 5);  // N diagonal modes plus the two degenerate coherences
    for (size_t i = 0; i < s.gammas.size(); ++i) CHECK(s.gammas[i] < 0.0);
    CHECK(*std::min_element(s.gammas.begin(), s.gammas.end()) == doctest::Approx(-4.5));
}

TEST_CASE("commuting Bloch matrices share an N-dimensional kernel") {
    std::mt19937_64 rng(34);
    for (int N : {2, 3, 4}) {
        CAPTURE(N);
        const CommutingSample c = random_commuting(N, rng);
        const OperatorBasis b = build_basis(N);
        const MatrixXr A = bloch_hamiltonian(HermitianOperator(c.H), b);
        const MatrixXr S = bloch_lindblad(c.V, b);
        const CommutingBlochSpectrum cb = commuting_bloch_spectrum(A, S, b);
        CHECK(cb.commutator_norm < 1e-10);
        CHECK(cb.kernel_angle < 1e-8);
        CHECK(cb.spectrum.kernel_dim == N);
        // the Bloch spectrum reproduces the operator-level frequencies and rates
        const DephasingSpectrum ref = dephasing_spectrum(
            simultaneous_diag(HermitianOperator(c.H), HermitianOperator(c.V)));
        auto w1 = cb.spectrum.omegas, w2 = ref.omegas;
        auto g1 = cb.spectrum.gammas, g2 = ref.gammas;
        REQUIRE(w1.size() == w2.size());
        std::sort(w1.begin(), w1.end());
        std::sort(w2.begin(), w2.end());
        std::sort(g1.begin(), g1.end());
        std::sort(g2.begin(), g2.end());
        for (size_t i = 0; i < w1.size(); ++i) {
            CHECK(w1[i] == doctest::Approx(w2[i]).epsilon(1e-9));
            CHECK(g1[i] == doctest::Approx(g2[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("theorem checks fail loudly on non-commuting input") {
    const OperatorBasis b = build_basis(2);
    const MatrixXr A = bloch_hamiltonian(HermitianOperator(pauli::z()), b);
    const MatrixXr S = bloch_lindblad(pauli::x(), b);
    CHECK_THROWS_AS(commuting_bloch_spectrum(A, S, b), TheoremViolation);
    // a zero structure leaves only the kernel-dimension check on A
    CHECK_NOTHROW(commuting_bloch_spectrum(A, MatrixXr::Zero(4, 4), b));
}

TEST_CASE("principal angles and null spaces") {
    MatrixXc P = MatrixXc::Zero(3, 1), Q = MatrixXc::Zero(3, 1);
    P(0, 0) = 1.0;
    Q(1, 0) = 1.0;
    CHECK(max_principal_angle(P, P) < 1e-15);
    CHECK(max_principal_angle(P, Q) == doctest::Approx(M_PI / 2));
    MatrixXc R = MatrixXc::Zero(3, 1);
    R(0, 0) = std::cos(1e-9);
    R(1, 0) = std::sin(1e-9);
    CHECK(max_principal_angle(P, R) == doctest::Approx(1e-9).epsilon(1e-6));
    MatrixXc M = MatrixXc::Zero(3, 3);
    M(0, 0) = 1.0;
    CHECK(null_space(M).cols() == 2);
}

TEST_CASE("dephasing transfer entries peak at one on resonance") {
    std::mt19937_64 rng(35);
    const CommutingSample c = random_commuting(3, rng);
    const DephasingSpectrum s =
        dephasing_spectrum(simultaneous_diag(HermitianOperator(c.H), HermitianOperator(c.V)));
    for (double delta : {1e-3, 0.1, 1.0, 10.0}) {
        CHECK(dephasing_hinf(delta, s) == doctest::Approx(1.0).epsilon(1e-9));
        const MatrixXc T = dephasing_transfer(s.omegas[0], delta, s);
        CHECK(std::abs(T(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(T.norm() - T.diagonal().norm() < 1e-15);
        // off resonance the gain drops below one
        CHECK(dephasing_transfer(s.omegas[0] + 100.0, delta, s).cwiseAbs().maxCoeff() < 1.0);
    }
    CHECK(dephasing_hinf(0.0, s) == 0.0);
    CHECK_THROWS_AS(dephasing_hinf(-1.0, s), ValidationError);
}
