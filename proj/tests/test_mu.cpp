// test_mu.cpp — structured singular value bounds, scaling gradients and robust-performance sampling

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qrobust/cavity.hpp"
#include "qrobust/mu.hpp"
#include "test_support.hpp"

using namespace qrobust;
using namespace qrobust::testing;

namespace {

// 1 / min over a dense delta grid of max(|delta|, 1 / ||F_u(G, delta)||).
double brute_force_lower(const MatrixXc& G, int n_real, double range, int points) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < points; ++i) {
        const double d = -range + 2.0 * range * i / (points - 1);
        double f;
        try {
            f = std::max(std::abs(d), 1.0 / spectral_norm(lft_close(G, n_real, d)));
        } catch (const NumericalError&) {
            f = std::abs(d);
        }
        best = std::min(best, f);
    }
    return 1.0 / best;
}

std::vector<double> random_scaling(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    MuScaling sc{MatrixXc::Identity(n, n) + 0.3 * random_complex(n, n, rng),
                 0.2 * random_hermitian(n, rng)};
    (void)nd;
    return pack_scaling(sc);
}

} // namespace

TEST_CASE("scaling objective gradient matches central differences") {
    std::mt19937_64 rng(51);
    for (double tau : {0.0, 0.5}) {
        CAPTURE(tau);
        const MatrixXc G = random_complex(6, 6, rng);
        const std::vector<double> x = random_scaling(3, rng);
        std::vector<double> grad;
        mu_scaling_objective(G, 3, x, &grad, tau);
        const double h = 1e-6;
        double worst = 0.0;
        for (size_t i = 0; i < x.size(); ++i) {
            std::vector<double> xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            const double fd =
                (mu_scaling_objective(G, 3, xp, nullptr, tau) - mu_scaling_objective(G, 3, xm, nullptr, tau)) /
                (2.0 * h);
            worst = std::max(worst, std::abs(fd - grad[i]) / std::max(1.0, std::abs(fd)));
        }
        CHECK(worst < 1e-5);
    }
}

TEST_CASE("packing round trip") {
    std::mt19937_64 rng(52);
    const std::vector<double> x = random_scaling(4, rng);
    CHECK(x.size() == 48);
    const MuScaling sc = unpack_scaling(x, 4);
    CHECK((sc.G1 - sc.G1.adjoint()).norm() < 1e-15);
    CHECK(pack_scaling(sc) == x);
    CHECK_THROWS_AS(unpack_scaling(x, 3), DimensionError);
}

TEST_CASE("lower bound matches a dense scan; bounds are ordered") {
    std::mt19937_64 rng(53);
    for (int rep = 0; rep < 4; ++rep) {
        const MatrixXc G = random_complex(4, 4, rng);
        MuOptions o;
        o.delta_max = 2.0;
        const MuBound b = mu_two_block(G, 2, o);
        const double scan = brute_force_lower(G, 2, 40.0, 200001);
        CHECK(b.lower >= scan * (1.0 - 1e-6));
        CHECK(b.lower <= b.upper * (1.0 + 1e-9));
        // the reported scaling certifies the reported upper bound
        const double lam = mu_scaling_objective(G, 2, pack_scaling(b.scaling), nullptr);
        CHECK(std::sqrt(lam) == doctest::Approx(b.upper).epsilon(1e-9));
    }
}

TEST_CASE("without real feedback mu is the norm of the performance block") {
    std::mt19937_64 rng(54);
    MatrixXc G = MatrixXc::Zero(6, 6);
    G.bottomRightCorner(3, 3) = random_complex(3, 3, rng);
    G.bottomLeftCorner(3, 3) = random_complex(3, 3, rng);
    const double s = spectral_norm(G.bottomRightCorner(3, 3));
    const MuBound b = mu_two_block(G, MuOptions{});
    CHECK(b.lower == doctest::Approx(s).epsilon(1e-9));
    CHECK(b.upper == doctest::Approx(s).epsilon(1e-4));
}

TEST_CASE("scalar resonant loop: mu of [[a, a], [1, 0]] with a imaginary") {
    // T(delta) = delta a / (1 - delta a) and 1/|T|^2 = 1 + 1/(delta b)^2; the minimax over delta
    // balances |delta|^2 = 1 + 1/(delta b)^2, i.e. delta^2 = (1 + sqrt(1 + 4/b^2)) / 2
    for (double b : {0.5, 3.0, 2000.0}) {
        MatrixXc G(2, 2);
        G << cplx(0.0, b), cplx(0.0, b), 1.0, 0.0;
        const MuBound mb = mu_two_block(G, 1, MuOptions{});
        const double exact = 1.0 / std::sqrt(0.5 * (1.0 + std::sqrt(1.0 + 4.0 / (b * b))));
        CHECK(mb.lower == doctest::Approx(exact).epsilon(1e-6));
        CHECK(mb.upper == doctest::Approx(exact).epsilon(1e-6));
    }
}

TEST_CASE("decoupled modes: bound is the worst mode") {
    // two independent resonant loops rotated by a unitary
    std::mt19937_64 rng(55);
    const MatrixXc U = random_unitary(2, rng);
    MatrixXc D = MatrixXc::Zero(2, 2);
    D(0, 0) = cplx(0.0, 500.0);
    D(1, 1) = cplx(0.0, -0.8);
    const MatrixXc M11 = U * D * U.adjoint();
    MatrixXc G(4, 4);
    G << M11, M11, MatrixXc::Identity(2, 2), MatrixXc::Zero(2, 2);
    const MuBound mb = mu_two_block(G, 2, MuOptions{});
    const double exact = 1.0 / std::sqrt(0.5 * (1.0 + std::sqrt(1.0 + 4.0 / (500.0 * 500.0))));
    CHECK(mb.lower == doctest::Approx(exact).epsilon(1e-6));
    CHECK(mb.upper == doctest::Approx(exact).epsilon(1e-6));
}

TEST_CASE("diagonal mu and argument validation") {
    MatrixXc T = MatrixXc::Zero(3, 3);
    T(0, 0) = cplx(0.0, 0.5);
    T(2, 2) = -2.0;
    CHECK(mu_diagonal(T) == doctest::Approx(2.0));
    T(0, 1) = 1.0;
    CHECK_THROWS_AS(mu_diagonal(T), ValidationError);
    CHECK_THROWS_AS(mu_two_block(MatrixXc::Zero(3, 3), MuOptions{}), DimensionError);
    CHECK_THROWS_AS(mu_upper_bound(MatrixXc::Zero(4, 4), 0), DimensionError);
    MuOptions bad;
    bad.grid_points = 2;
    CHECK_THROWS_AS(mu_lower_bound(MatrixXc::Identity(4, 4), 2, bad), ValidationError);
}

TEST_CASE("sampled transfers stay below the upper bound") {
    const BlochModel m = cavity_model(nominal_mu());
    const MatrixXr& S = m.structure("S5");
    const cplx s(0.0, 0.5);
    const MuBound b = mu_two_block(interconnection(s, m.A, S, Variant::dynamic), MuOptions{});
    const RobustPerfReport rep = robust_perf_check(s, m.A, S, Variant::dynamic, b.upper, 50);
    CHECK(rep.samples == 50);
    CHECK(rep.violations == 0);
    CHECK(rep.max_ratio <= 1.0);
    int total = 0;
    for (int c : rep.histogram) total += c;
    CHECK(total == 50);
    CHECK_THROWS_AS(robust_perf_check(s, m.A, S, Variant::dynamic, b.upper, 0), ValidationError);
}
