// mu.cpp — mu lower bound by 1-D real search, upper bound by smoothed (D,G)-scaling with L-BFGS

#include "qrobust/mu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <ceres/ceres.h>

#include "qrobust/optimize.hpp"

namespace qrobust {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double largest_singular_value(const MatrixXc& T) {
    if (T.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(T.adjoint() * T, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

// max(|delta|, 1/sigma_max(T(delta))); the size of the smallest destabilizing
// perturbation whose real part is delta.
double destabilizing_size(const MatrixXc& G, int n_real, double delta) {
    const int n = static_cast<int>(G.rows());
    const int m = n - n_real;
    const MatrixXc G22 = G.bottomRightCorner(m, m);
    MatrixXc T;
    if (delta == 0.0) {
        T = G22;
    } else {
        MatrixXc K = -delta * G.topLeftCorner(n_real, n_real);
        K.diagonal().array() += 1.0;
        Eigen::FullPivLU<MatrixXc> lu(K);
        if (!lu.isInvertible()) return std::abs(delta);
        T = G22 + delta * G.bottomLeftCorner(m, n_real) * lu.solve(G.topRightCorner(n_real, m));
    }
    const double sig = largest_singular_value(T);
    if (!std::isfinite(sig)) return std::abs(delta);
    return std::max(std::abs(delta), sig > 0.0 ? 1.0 / sig : kInf);
}

struct Partition {
    int n = 0;  // real block size
    int m = 0;  // complex block size
    MatrixXc M11, M12, M21, M22;

    Partition(const MatrixXc& G, int n_real)
        : n(n_real), m(static_cast<int>(G.rows()) - n_real),
          M11(G.topLeftCorner(n, n)), M12(G.topRightCorner(n, m)),
          M21(G.bottomLeftCorner(m, n)), M22(G.bottomRightCorner(m, m)) {}
};

int num_params(int n) { return 3 * n * n; }

// Evaluates lambda_max(Y) (tau = 0) or its soft-max smoothing at scale tau, with gradient.
// Returns false when R1 is numerically singular. exact_out receives lambda_max(Y).
bool evaluate_scaling(const Partition& p, const double* x, double tau, double* value,
                      double* grad, double* exact_out) {
    const int n = p.n, m = p.m, N = n + m;
    MatrixXc R1(n, n), Gh = MatrixXc::Zero(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) R1(a, b) = cplx(x[a * n + b], x[n * n + a * n + b]);
    const double* g = x + 2 * n * n;
    for (int a = 0; a < n; ++a) Gh(a, a) = g[a];
    int k = 0;
    const int nu = n * (n - 1) / 2;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b, ++k) {
            Gh(a, b) = cplx(g[n + k], g[n + nu + k]);
            Gh(b, a) = std::conj(Gh(a, b));
        }

    Eigen::PartialPivLU<MatrixXc> lu(R1);
    if (!(lu.rcond() > 1e-13)) return false;
    const MatrixXc Rinv = lu.inverse();

    MatrixXc Mh(N, N);
    Mh.topLeftCorner(n, n) = R1 * p.M11 * Rinv;
    Mh.topRightCorner(n, m) = R1 * p.M12;
    Mh.bottomLeftCorner(m, n) = p.M21 * Rinv;
    Mh.bottomRightCorner(m, m) = p.M22;

    MatrixXc Y = Mh.adjoint() * Mh;
    Y.topRows(n) += I_unit * (Gh * Mh.topRows(n));
    Y.leftCols(n) -= I_unit * (Mh.topRows(n).adjoint() * Gh);
    Y = 0.5 * (Y + Y.adjoint()).eval();

    Eigen::SelfAdjointEigenSolver<MatrixXc> es(
        Y, grad ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    const VectorXr& lam = es.eigenvalues();
    const double lmax = lam(N - 1);
    if (!std::isfinite(lmax)) return false;
    if (exact_out) *exact_out = lmax;

    VectorXr weights = VectorXr::Zero(N);
    if (tau > 0.0) {
        double sum = 0.0;
        for (int i = 0; i < N; ++i) sum += std::exp((lam(i) - lmax) / tau);
        *value = lmax + tau * std::log(sum);
        for (int i = 0; i < N; ++i) weights(i) = std::exp((lam(i) - lmax) / tau) / sum;
    } else {
        *value = lmax;
        weights(N - 1) = 1.0;
    }
    if (!grad) return true;

    std::fill(grad, grad + num_params(n), 0.0);
    double* gR = grad;
    double* gI = grad + n * n;
    double* gG = grad + 2 * n * n;
    for (int i = 0; i < N; ++i) {
        const double w_i = weights(i);
        if (w_i < 1e-14) continue;
        const VectorXc xv = es.eigenvectors().col(i);
        const VectorXc y = Mh * xv;
        VectorXc w = y;
        w.head(n) -= I_unit * (Gh * xv.head(n));
        const Eigen::RowVectorXcd wM = w.adjoint() * Mh;
        const MatrixXc P11 = y.head(n) * w.head(n).adjoint() - xv.head(n) * wM.head(n);
        const MatrixXc K = Rinv * P11;
        const MatrixXc Z = I_unit * (y.head(n) * xv.head(n).adjoint() -
                                     xv.head(n) * y.head(n).adjoint());
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                gR[a * n + b] += w_i * 2.0 * K(b, a).real();
                gI[a * n + b] -= w_i * 2.0 * K(b, a).imag();
            }
        for (int a = 0; a < n; ++a) gG[a] += w_i * Z(a, a).real();
        int kk = 0;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b, ++kk) {
                gG[n + kk] += w_i * 2.0 * Z(b, a).real();
                gG[n + nu + kk] -= w_i * 2.0 * Z(b, a).imag();
            }
    }
    return true;
}

// Ends a solver stage as soon as the bound meets the known lower bound.
class GapCallback final : public ceres::IterationCallback {
public:
    GapCallback(const double* best, double target) : best_(best), target_(target) {}
    ceres::CallbackReturnType operator()(const ceres::IterationSummary&) override {
        return *best_ <= target_ ? ceres::SOLVER_TERMINATE_SUCCESSFULLY : ceres::SOLVER_CONTINUE;
    }

private:
    const double* best_;
    double target_;
};

class ScalingCost final : public ceres::FirstOrderFunction {
public:
    ScalingCost(const Partition& p, double tau, double* best, std::vector<double>* best_x)
        : p_(p), tau_(tau), best_(best), best_x_(best_x) {}

    bool Evaluate(const double* params, double* cost, double* gradient) const override {
        double exact = kInf;
        if (!evaluate_scaling(p_, params, tau_, cost, gradient, &exact)) return false;
        if (exact < *best_) {
            *best_ = exact;
            best_x_->assign(params, params + NumParameters());
        }
        return true;
    }

    int NumParameters() const override { return num_params(p_.n); }

private:
    const Partition& p_;
    double tau_;
    double* best_;
    std::vector<double>* best_x_;
};

std::vector<double> identity_scaling(int n, double r) {
    std::vector<double> x(num_params(n), 0.0);
    for (int a = 0; a < n; ++a) x[a * n + a] = r;
    return x;
}

// When a unitary Schur basis U of M11 diagonalizes every block of G, the problem splits
// into independent modes (one real, one complex scalar each) and the bound is the largest
// per-mode bound. Each mode's (log r, g) is found by nested golden-section searches, the
// inner one over g being convex. Returns R1 = diag(r) U^*, G1 = diag(g), or an empty vector
// when G does not decouple.
std::vector<double> modal_scaling(const Partition& p, double t0) {
    const int n = p.n;
    if (p.m != n) return {};
    Eigen::ComplexSchur<MatrixXc> schur(p.M11);
    if (schur.info() != Eigen::Success) return {};
    const MatrixXc& U = schur.matrixU();
    const MatrixXc B[4] = {schur.matrixT(), U.adjoint() * p.M12 * U, U.adjoint() * p.M21 * U,
                           U.adjoint() * p.M22 * U};
    double scale = 0.0, off = 0.0;
    for (const auto& blk : B) {
        scale = std::max(scale, blk.cwiseAbs().maxCoeff());
        MatrixXc o = blk;
        o.diagonal().setZero();
        off = std::max(off, o.cwiseAbs().maxCoeff());
    }
    if (!(off <= 1e-10 * std::max(scale, 1.0))) return {};

    constexpr double kSpan = 14.0;  // keeps R1 well conditioned
    std::vector<double> x(num_params(n), 0.0);
    for (int i = 0; i < n; ++i) {
        const cplx t = B[0](i, i), b = B[1](i, i), c = B[2](i, i), d = B[3](i, i);
        const auto mode_value = [&](double lr, double g) {
            const double r = std::exp(lr);
            Eigen::Matrix2cd Mh;
            Mh << t, r * b, c / r, d;
            Eigen::Matrix2cd Gh = Eigen::Matrix2cd::Zero();
            Gh(0, 0) = g;
            Eigen::Matrix2cd Y = Mh.adjoint() * Mh + I_unit * (Gh * Mh - Mh.adjoint() * Gh);
            Y = 0.5 * (Y + Y.adjoint()).eval();
            return Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd>(Y, Eigen::EigenvaluesOnly)
                .eigenvalues()(1);
        };
        const auto best_g = [&](double lr, double* g_out) {
            const auto fu = [&](double u) { return mode_value(lr, std::sinh(u)); };
            const double u = golden_section_min(fu, -40.0, 40.0, 90);
            if (g_out) *g_out = std::sinh(u);
            return fu(u);
        };
        const double lr = golden_section_min([&](double v) { return best_g(v, nullptr); },
                                             t0 - kSpan, t0 + kSpan, 90);
        double g = 0.0;
        best_g(lr, &g);
        for (int col = 0; col < n; ++col) {
            const cplx e = std::exp(lr) * std::conj(U(col, i));
            x[i * n + col] = e.real();
            x[n * n + i * n + col] = e.imag();
        }
        x[2 * n * n + i] = g;
    }
    return x;
}

} // namespace

std::vector<double> pack_scaling(const MuScaling& sc) {
    const int n = static_cast<int>(sc.R1.rows());
    std::vector<double> x(num_params(n), 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            x[a * n + b] = sc.R1(a, b).real();
            x[n * n + a * n + b] = sc.R1(a, b).imag();
        }
    double* g = x.data() + 2 * n * n;
    const int nu = n * (n - 1) / 2;
    for (int a = 0; a < n; ++a) g[a] = sc.G1(a, a).real();
    int k = 0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b, ++k) {
            g[n + k] = sc.G1(a, b).real();
            g[n + nu + k] = sc.G1(a, b).imag();
        }
    return x;
}

MuScaling unpack_scaling(const std::vector<double>& x, int n) {
    if (static_cast<int>(x.size()) != num_params(n))
        throw DimensionError("unpack_scaling: parameter vector has wrong length");
    MuScaling sc{MatrixXc(n, n), MatrixXc::Zero(n, n)};
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) sc.R1(a, b) = cplx(x[a * n + b], x[n * n + a * n + b]);
    const double* g = x.data() + 2 * n * n;
    const int nu = n * (n - 1) / 2;
    for (int a = 0; a < n; ++a) sc.G1(a, a) = g[a];
    int k = 0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b, ++k) {
            sc.G1(a, b) = cplx(g[n + k], g[n + nu + k]);
            sc.G1(b, a) = std::conj(sc.G1(a, b));
        }
    return sc;
}

double mu_scaling_objective(const MatrixXc& G, int n_real, const std::vector<double>& x,
                            std::vector<double>* grad, double tau) {
    if (G.rows() != G.cols() || n_real <= 0 || n_real >= G.rows())
        throw DimensionError("mu_scaling_objective: invalid partition");
    if (static_cast<int>(x.size()) != num_params(n_real))
        throw DimensionError("mu_scaling_objective: parameter vector has wrong length");
    const Partition p(G, n_real);
    double value = 0.0;
    if (grad) grad->assign(x.size(), 0.0);
    if (!evaluate_scaling(p, x.data(), tau, &value, grad ? grad->data() : nullptr, nullptr))
        throw NumericalError("mu_scaling_objective: singular scaling");
    return value;
}

MuLower mu_lower_bound(const MatrixXc& G, int n_real, const MuOptions& opts) {
    if (G.rows() != G.cols() || n_real < 0 || n_real > G.rows())
        throw DimensionError("mu_lower_bound: invalid partition");
    if (opts.grid_points < 3) throw ValidationError("mu_lower_bound: need at least 3 grid points");
    const auto f = [&](double d) { return destabilizing_size(G, n_real, d); };

    double R = 2.0 * std::max(opts.delta_max, 1e-12);
    double best_f = f(0.0), best_d = 0.0;
    for (int round = 0; round < 8; ++round) {
        const int pts = opts.grid_points;
        const double h = 2.0 * R / (pts - 1);
        std::vector<double> grid(pts), vals(pts);
        for (int i = 0; i < pts; ++i) {
            grid[i] = -R + h * i;
            vals[i] = f(grid[i]);
            if (vals[i] < best_f) {
                best_f = vals[i];
                best_d = grid[i];
            }
        }
        std::vector<int> minima;
        for (int i = 0; i < pts; ++i) {
            const bool left = i == 0 || vals[i] <= vals[i - 1];
            const bool right = i == pts - 1 || vals[i] <= vals[i + 1];
            if (left && right && std::isfinite(vals[i])) minima.push_back(i);
        }
        std::stable_sort(minima.begin(), minima.end(),
                         [&](int a, int b) { return vals[a] < vals[b]; });
        if (static_cast<int>(minima.size()) > opts.refine_candidates)
            minima.resize(opts.refine_candidates);
        for (int i : minima) {
            const double a = grid[std::max(i - 1, 0)];
            const double b = grid[std::min(i + 1, pts - 1)];
            const double d = golden_section_min(f, a, b, opts.golden_iterations);
            const double fd = f(d);
            if (fd < best_f) {
                best_f = fd;
                best_d = d;
            }
        }
        // f(delta) >= |delta|, so nothing beyond |delta| = best_f can improve the infimum.
        if (!std::isfinite(best_f) || best_f <= R) break;
        R = 1.05 * best_f;
    }
    MuLower out;
    if (std::isfinite(best_f) && best_f > 0.0) {
        out.lower = 1.0 / best_f;
        out.delta_star = best_d;
    }
    return out;
}

MuUpper mu_upper_bound(const MatrixXc& G, int n_real, const MuOptions& opts) {
    if (G.rows() != G.cols() || n_real <= 0 || n_real >= G.rows())
        throw DimensionError("mu_upper_bound: invalid partition");
    const int n = n_real;
    MuUpper out;
    if (G.norm() == 0.0) {
        out.scaling = MuScaling{MatrixXc::Identity(n, n), MatrixXc::Zero(n, n)};
        return out;
    }
    const Partition p(G, n_real);

    // Scalar pre-scaling: sigma_max(diag(rI, I) G diag(I/r, I)) is quasi-convex in log r.
    const auto scaled_norm = [&](double t) {
        const double r = std::exp(t);
        MatrixXc M = G;
        M.topRightCorner(n, p.m) *= r;
        M.bottomLeftCorner(p.m, n) /= r;
        return largest_singular_value(M);
    };
    const double t0 = golden_section_min(scaled_norm, -25.0, 25.0, 80);
    std::vector<double> x = identity_scaling(n, std::exp(t0));

    double best = kInf;
    std::vector<double> best_x = x;
    double exact = kInf, dummy = 0.0;
    if (evaluate_scaling(p, x.data(), 0.0, &dummy, nullptr, &exact)) {
        best = exact;
        best_x = x;
    }
    const std::vector<double> xm = modal_scaling(p, t0);
    if (!xm.empty() && evaluate_scaling(p, xm.data(), 0.0, &dummy, nullptr, &exact) &&
        exact < best) {
        best = exact;
        best_x = xm;
        x = xm;
    }
    if (opts.warm_start && opts.warm_start->R1.rows() == n && opts.warm_start->G1.rows() == n) {
        const std::vector<double> xw = pack_scaling(*opts.warm_start);
        if (evaluate_scaling(p, xw.data(), 0.0, &dummy, nullptr, &exact) && exact < best) {
            best = exact;
            best_x = xw;
            x = xw;
        }
    }

    // lambda_max target: the square of the lower bound, with a relative slack of 1e-8 on mu.
    const double target = opts.known_lower > 0.0
                              ? opts.known_lower * opts.known_lower * (1.0 + 2e-8)
                              : -kInf;
    const double lam0 = std::max(best, 1e-300);
    bool converged = false;
    double stage_start = best;
    for (double scale : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
        if (best <= target) {
            converged = true;
            break;
        }
        stage_start = best;
        GapCallback gap(&best, target);
        ceres::GradientProblemSolver::Options o;
        o.line_search_direction_type = ceres::LBFGS;
        o.max_num_iterations = opts.max_iterations;
        o.logging_type = ceres::SILENT;
        o.minimizer_progress_to_stdout = false;
        o.function_tolerance = 1e-13;
        o.gradient_tolerance = 1e-13;
        o.parameter_tolerance = 1e-14;
        o.callbacks.push_back(&gap);
        ceres::GradientProblem problem(new ScalingCost(p, scale * lam0, &best, &best_x));
        ceres::GradientProblemSolver::Summary summary;
        ceres::Solve(o, problem, x.data(), &summary);
        converged = summary.termination_type == ceres::CONVERGENCE || best <= target;
        if (!summary.IsSolutionUsable()) x = best_x;
    }
    if (!converged) converged = std::abs(stage_start - best) <= 1e-6 * std::max(best, 1e-300);

    out.upper = std::sqrt(std::max(best, 0.0));
    out.converged = converged;
    out.scaling = unpack_scaling(best_x, n);
    return out;
}

MuBound mu_two_block(const MatrixXc& G, int n_real, const MuOptions& opts) {
    MuBound out;
    const MuLower lo = mu_lower_bound(G, n_real, opts);
    out.lower = lo.lower;
    out.delta_star = lo.delta_star;
    if (opts.compute_upper) {
        MuOptions o = opts;
        o.known_lower = lo.lower;
        const MuUpper up = mu_upper_bound(G, n_real, o);
        out.upper = up.upper;
        out.converged = up.converged;
        out.scaling = up.scaling;
    } else {
        out.upper = std::numeric_limits<double>::quiet_NaN();
        out.converged = false;
    }
    return out;
}

MuBound mu_two_block(const MatrixXc& G, const MuOptions& opts) {
    if (G.rows() != G.cols() || G.rows() % 2 != 0)
        throw DimensionError("mu_two_block: G must be square with two equal blocks");
    return mu_two_block(G, static_cast<int>(G.rows()) / 2, opts);
}

double mu_diagonal(const MatrixXc& T) {
    if (T.rows() != T.cols()) throw DimensionError("mu_diagonal: T must be square");
    if (T.size() == 0) return 0.0;
    MatrixXc off = T;
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, T.cwiseAbs().maxCoeff()))
        throw ValidationError("mu_diagonal: T is not diagonal");
    return T.diagonal().cwiseAbs().maxCoeff();
}

RobustPerfReport robust_perf_check(cplx s, const MatrixXr& A, const MatrixXr& S, Variant variant,
                                   double mu_upper, int n_samples, unsigned seed) {
    if (n_samples <= 0) throw ValidationError("robust_perf_check: n_samples must be positive");
    RobustPerfReport rep;
    std::mt19937_64 rng(seed);
    const double top = mu_upper > 0.0 ? 0.999 / mu_upper : 1.0;
    std::uniform_real_distribution<double> dist(0.0, top);
    for (int i = 0; i < n_samples; ++i) {
        double d = dist(rng);
        if (d == 0.0) d = 0.5 * top;
        const TransferSample ts = transfer(variant, s, d, A, S, true);
        ++rep.samples;
        const double ratio = mu_upper > 0.0 ? ts.norm / mu_upper : (ts.norm > 0.0 ? kInf : 0.0);
        if (ts.pole || ts.norm > mu_upper * (1.0 + 1e-9) + 1e-12) ++rep.violations;
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        const int bin = std::clamp(static_cast<int>(ratio * 10.0), 0, 9);
        ++rep.histogram[bin];
    }
    return rep;
}

} // namespace qrobust
