// test_lindblad.cpp — master-equation RHS, Bloch propagation and the dephasing/mixture example

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <boost/numeric/odeint.hpp>

#include "qrobust/bloch_model.hpp"
#include "qrobust/lindblad.hpp"
#include "test_support.hpp"

using namespace qrobust;
using namespace qrobust::testing;

namespace {

// Integrates d rho/dt = L(rho) with an adaptive Dormand-Prince stepper on the real and
// imaginary parts of rho; independent of both the Bloch generator and the matrix exponential.
MatrixXc integrate_density(const OpenSystem& sys, const MatrixXc& rho0, double t) {
    namespace ode = boost::numeric::odeint;
    const int N = sys.dim();
    using State = std::vector<double>;
    State x(2 * N * N);
    for (int i = 0; i < N * N; ++i) {
        x[i] = rho0.data()[i].real();
        x[N * N + i] = rho0.data()[i].imag();
    }
    const MatrixXc& H = sys.H.matrix();
    const auto rhs = [&](const State& s, State& ds, double) {
        MatrixXc r(N, N);
        for (int i = 0; i < N * N; ++i) r.data()[i] = cplx(s[i], s[N * N + i]);
        MatrixXc d = -I_unit * (H * r - r * H);
        for (const auto& j : sys.jumps) d += j.rate * dissipator(j.V, r);
        for (int i = 0; i < N * N; ++i) {
            ds[i] = d.data()[i].real();
            ds[N * N + i] = d.data()[i].imag();
        }
    };
    ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_dopri5<State>>(1e-13, 1e-13),
                            rhs, x, 0.0, t, 1e-3);
    MatrixXc out(N, N);
    for (int i = 0; i < N * N; ++i) out.data()[i] = cplx(x[i], x[N * N + i]);
    return out;
}

OpenSystem random_system(int N, int n_jumps, std::mt19937_64& rng) {
    std::vector<JumpTerm> jumps;
    std::uniform_real_distribution<double> rate(0.1, 1.0);
    for (int k = 0; k < n_jumps; ++k) jumps.push_back({random_complex(N, N, rng), rate(rng)});
    return OpenSystem(HermitianOperator(random_hermitian(N, rng)), jumps);
}

} // namespace

TEST_CASE("dissipator preserves trace and Hermiticity") {
    std::mt19937_64 rng(1);
    for (int N : {2, 3, 4}) {
        const MatrixXc V = random_complex(N, N, rng);
        const MatrixXc rho = random_density(N, rng).matrix();
        const MatrixXc d = dissipator(V, rho);
        CHECK(std::abs(d.trace()) < 1e-13);
        CHECK(hermiticity_defect(d) < 1e-13);
    }
}

TEST_CASE("lindblad_rhs matches the vectorized Liouvillian") {
    std::mt19937_64 rng(2);
    for (int N : {2, 3, 4}) {
        const OpenSystem sys = random_system(N, 2, rng);
        const HermitianOperator rho = random_density(N, rng);
        const MatrixXc expected = unvec(liouvillian(sys) * vec(rho.matrix()), N);
        CHECK((lindblad_rhs(rho, sys).matrix() - expected).norm() < 1e-12);
    }
}

TEST_CASE("Bloch propagation agrees with direct ODE integration") {
    std::mt19937_64 rng(3);
    for (int N : {2, 3}) {
        const OpenSystem sys = random_system(N, 2, rng);
        const BlochModel m = assemble(sys);
        const HermitianOperator rho0 = random_density(N, rng);
        for (double t : {0.3, 1.5}) {
            const BlochVector r = propagate_bloch(to_bloch(rho0, m.basis), m.A, t);
            const MatrixXc rho_t = from_bloch(r, m.basis).matrix();
            CHECK((rho_t - integrate_density(sys, rho0.matrix(), t)).norm() < 1e-9);
            CHECK(std::abs(rho_t.trace() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("propagation to t = 0 is the identity; negative times are rejected") {
    std::mt19937_64 rng(4);
    const OpenSystem sys = random_system(2, 1, rng);
    const BlochModel m = assemble(sys);
    const BlochVector r0 = to_bloch(random_density(2, rng), m.basis);
    CHECK((propagate_bloch(r0, m.A, 0.0).coords - r0.coords).norm() == 0.0);
    CHECK_THROWS_AS(propagate_bloch(r0, m.A, -1.0), ValidationError);
    CHECK_THROWS_AS(propagate_bloch(r0, MatrixXr::Zero(3, 3), 1.0), DimensionError);
}

TEST_CASE("dephased trajectory closed form solves the master equation") {
    for (auto [omega, delta] : {std::pair{1.0, 0.3}, std::pair{5.0, 1.0}, std::pair{0.0, 0.7}}) {
        const OpenSystem sys(HermitianOperator(omega * pauli::z()), {JumpTerm{pauli::z(), delta}});
        MatrixXc plus(2, 2);
        plus << 0.5, 0.5, 0.5, 0.5;
        for (double t : {0.25, 1.0}) {
            const MatrixXc ode = integrate_density(sys, plus, t);
            CHECK((example1_dephased(omega, delta, t) - ode).norm() < 1e-10);
        }
    }
}

TEST_CASE("dephasing and pre-mixed unitary evolution coincide at half the dephasing time") {
    for (auto [omega, delta, tau] : {std::tuple{1.0, 0.3, 2.0}, std::tuple{5.0, 1.0, 0.5},
                                     std::tuple{0.0, 0.7, 1.0}}) {
        const auto [a, b] = example1_pair(omega, delta, tau);
        CHECK((a.matrix() - b.matrix()).norm() < 1e-12);
        CHECK((a.matrix() - example1_dephased(omega, delta, 0.5 * tau)).norm() < 1e-12);
        CHECK((b.matrix() - example1_mixed(omega, delta, tau, 0.5 * tau)).norm() < 1e-12);
    }
    // away from t = tau/2 the two trajectories differ
    CHECK((example1_dephased(1.0, 0.3, 0.2) - example1_mixed(1.0, 0.3, 2.0, 0.2)).norm() > 1e-3);
    CHECK_THROWS_AS(example1_pair(1.0, -0.1, 1.0), ValidationError);
}

TEST_CASE("open system validation") {
    CHECK_THROWS_AS(OpenSystem(HermitianOperator(pauli::z()), {JumpTerm{MatrixXc::Zero(3, 3), 1.0}}),
                    DimensionError);
    CHECK_THROWS_AS(OpenSystem(HermitianOperator(pauli::z()), {JumpTerm{pauli::x(), -1.0}}),
                    ValidationError);
}
