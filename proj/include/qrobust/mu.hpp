// mu.hpp — Structured singular value bounds for diag(delta I, Delta_f) uncertainty

#pragma once

#include <array>
#include <vector>

#include "qrobust/robust_perf.hpp"

namespace qrobust {

// Scaling that certifies the upper bound: R1 invertible (D1 = R1^* R1) on the real
// block and Hermitian G1 for the real-scalar G-scaling.
struct MuScaling {
    MatrixXc R1;
    MatrixXc G1;
};

struct MuOptions {
    double delta_max = 5.0;       // lower-bound search covers [-2 delta_max, 2 delta_max]
    int grid_points = 512;
    int golden_iterations = 48;
    int refine_candidates = 4;
    int max_iterations = 200;     // per smoothing stage of the upper-bound optimizer
    bool compute_upper = true;
    const MuScaling* warm_start = nullptr;
    double known_lower = 0.0;     // upper-bound search stops once it meets this value
};

struct MuBound {
    cplx s{0.0, 0.0};
    double lower = 0.0;
    double upper = 0.0;
    double delta_star = 0.0;
    Variant variant = Variant::dynamic;
    bool converged = true;
    MuScaling scaling;
};

struct MuLower {
    double lower = 0.0;
    double delta_star = 0.0;
};

// Exact reduction for one repeated real scalar (first n_real channels) and one full
// complex block: mu = 1 / inf_delta max(|delta|, 1 / sigma_max(T(delta))).
MuLower mu_lower_bound(const MatrixXc& G, int n_real, const MuOptions& opts = {});

struct MuUpper {
    double upper = 0.0;
    bool converged = true;
    MuScaling scaling;
};

// Mixed real/complex (D,G)-scaling bound: sqrt(lambda_max(Y)) minimized over the scaling,
// Y = Mh^* Mh + j (Gh Mh - Mh^* Gh), Mh = R G R^{-1}, R = diag(R1, I), Gh = diag(G1, 0).
MuUpper mu_upper_bound(const MatrixXc& G, int n_real, const MuOptions& opts = {});

// lambda_max(Y) and its gradient for a packed scaling; exposed for derivative checks.
// Packing: [Re R1 (row-major), Im R1, diag G1, Re G1 upper, Im G1 upper].
double mu_scaling_objective(const MatrixXc& G, int n_real, const std::vector<double>& x,
                            std::vector<double>* grad, double tau = 0.0);
std::vector<double> pack_scaling(const MuScaling& sc);
MuScaling unpack_scaling(const std::vector<double>& x, int n_real);

// Both bounds for a two-block interconnection with equal block sizes.
MuBound mu_two_block(const MatrixXc& G, const MuOptions& opts = {});
MuBound mu_two_block(const MatrixXc& G, int n_real, const MuOptions& opts);

// max_i |T_ii| for diagonal T.
double mu_diagonal(const MatrixXc& T);

struct RobustPerfReport {
    int samples = 0;
    int violations = 0;
    double max_ratio = 0.0;           // max ||T|| / mu_upper
    std::array<int, 10> histogram{};  // counts of ||T|| / mu_upper in [0,0.1), ..., [0.9, 1]
};

// Samples delta uniformly in (0, 0.999 / mu_upper) and checks ||T(s, delta)|| <= mu_upper.
RobustPerfReport robust_perf_check(cplx s, const MatrixXr& A, const MatrixXr& S, Variant variant,
                                   double mu_upper, int n_samples, unsigned seed = 7);

} // namespace qrobust
