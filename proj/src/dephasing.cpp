// dephasing.cpp — joint eigenbases, projector-form solution and the unit H-infinity bound

#include "qrobust/dephasing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qrobust/optimize.hpp"

namespace qrobust {

namespace {

constexpr double kGenericWeight = 0.5772156649015329;

// Orthonormalize the columns of Q deterministically: project unit vectors e_0, e_1, ...
// onto span(Q) and run Gram-Schmidt in index order.
MatrixXc canonical_subspace_basis(const MatrixXc& Q) {
    const int n = static_cast<int>(Q.rows());
    const int m = static_cast<int>(Q.cols());
    if (m <= 1) return Q;
    const MatrixXc P = Q * Q.adjoint();
    MatrixXc out(n, m);
    int found = 0;
    for (int j = 0; j < n && found < m; ++j) {
        VectorXc v = P.col(j);
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i < found; ++i) v -= out.col(i).dot(v) * out.col(i);
        const double nv = v.norm();
        if (nv > 1e-6) out.col(found++) = v / nv;
    }
    if (found < m) throw NumericalError("canonical_subspace_basis: rank deficiency");
    return out;
}

void fix_phase(VectorXc& v) {
    for (int i = 0; i < v.size(); ++i) {
        const double a = std::abs(v(i));
        if (a > 1e-10) {
            v *= std::conj(v(i)) / a;
            v(i) = cplx(v(i).real(), 0.0);
            return;
        }
    }
}

int pivot_index(const VectorXc& v) {
    const double top = v.cwiseAbs().maxCoeff();
    for (int i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) >= top - 1e-9) return i;
    return 0;
}

// Group consecutive sorted values whose gaps are below tol.
template <typename T, typename Dist>
std::vector<std::vector<int>> cluster(const std::vector<T>& vals, double tol, Dist dist) {
    std::vector<std::vector<int>> groups;
    std::vector<bool> used(vals.size(), false);
    for (size_t i = 0; i < vals.size(); ++i) {
        if (used[i]) continue;
        groups.push_back({static_cast<int>(i)});
        used[i] = true;
        for (size_t j = i + 1; j < vals.size(); ++j)
            if (!used[j] && dist(vals[i], vals[j]) < tol) {
                groups.back().push_back(static_cast<int>(j));
                used[j] = true;
            }
    }
    return groups;
}

double entry_modulus(double omega, double delta, double wkl, double gkl) {
    const cplx num = delta * gkl;
    const cplx den = I_unit * (omega - wkl) - delta * gkl;
    return std::abs(num / den);
}

} // namespace

CommutingPair simultaneous_diag(const HermitianOperator& H, const HermitianOperator& V) {
    if (H.dim() != V.dim()) throw DimensionError("simultaneous_diag: H and V differ in size");
    const MatrixXc& h = H.matrix();
    const MatrixXc& v = V.matrix();
    const double comm = (h * v - v * h).norm();
    if (comm > 1e-10 * std::max(1.0, h.norm() * v.norm()))
        throw CommutatorError("simultaneous_diag: H and V do not commute", comm);

    const int n = H.dim();
    const double weight = kGenericWeight * (1.0 + h.norm()) / (1.0 + v.norm());
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(h + weight * v);
    const VectorXr ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    std::vector<double> vals(ev.data(), ev.data() + n);
    const auto groups =
        cluster(vals, 1e-8 * scale, [](double a, double b) { return std::abs(a - b); });

    std::vector<VectorXc> cols;
    for (const auto& g : groups) {
        MatrixXc Q(n, static_cast<int>(g.size()));
        for (size_t i = 0; i < g.size(); ++i) Q.col(i) = es.eigenvectors().col(g[i]);
        const MatrixXc B = canonical_subspace_basis(Q);
        for (int i = 0; i < B.cols(); ++i) cols.emplace_back(B.col(i));
    }
    for (auto& c : cols) fix_phase(c);

    std::vector<double> lh(n), lv(n);
    std::vector<int> order(n), piv(n);
    for (int i = 0; i < n; ++i) {
        lh[i] = (cols[i].adjoint() * h * cols[i])(0, 0).real();
        lv[i] = (cols[i].adjoint() * v * cols[i])(0, 0).real();
        piv[i] = pivot_index(cols[i]);
    }
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (piv[a] != piv[b]) return piv[a] < piv[b];
        if (lh[a] != lh[b]) return lh[a] < lh[b];
        return lv[a] < lv[b];
    });

    CommutingPair pair{H, V, MatrixXc(n, n), VectorXr(n), VectorXr(n)};
    for (int i = 0; i < n; ++i) {
        pair.U.col(i) = cols[order[i]];
        pair.lamH(i) = lh[order[i]];
        pair.lamV(i) = lv[order[i]];
    }
    return pair;
}

DephasingSpectrum dephasing_spectrum(const CommutingPair& pair) {
    DephasingSpectrum spec;
    const int n = static_cast<int>(pair.lamH.size());
    const double scale = std::max(1.0, pair.lamH.cwiseAbs().maxCoeff());
    spec.kernel_dim = n;
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            if (k == l) continue;
            const double w = pair.lamH(k) - pair.lamH(l);
            const double dv = pair.lamV(k) - pair.lamV(l);
            spec.omegas.push_back(w);
            spec.gammas.push_back(-0.5 * dv * dv);
            if (std::abs(w) < 1e-9 * scale) ++spec.kernel_dim;
        }
    return spec;
}

HermitianOperator dephasing_solution(const HermitianOperator& rho0, const CommutingPair& pair,
                                     double delta, double t) {
    if (rho0.dim() != pair.H.dim()) throw DimensionError("dephasing_solution: dimension mismatch");
    if (delta < 0.0 || t < 0.0)
        throw ValidationError("dephasing_solution: delta and t must be non-negative");
    const int n = rho0.dim();
    MatrixXc r = pair.U.adjoint() * rho0.matrix() * pair.U;
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            if (k == l) continue;
            const double w = pair.lamH(k) - pair.lamH(l);
            const double dv = pair.lamV(k) - pair.lamV(l);
            const double g = -0.5 * dv * dv;
            r(k, l) *= std::exp(-t * (I_unit * w - delta * g));
        }
    return HermitianOperator::symmetrized(pair.U * r * pair.U.adjoint(), 1e-10);
}

MatrixXc null_space(const MatrixXc& M, double tol) {
    Eigen::JacobiSVD<MatrixXc> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    int rank = 0;
    if (smax > 0.0)
        for (int i = 0; i < sv.size(); ++i)
            if (sv(i) > tol * smax) ++rank;
    return svd.matrixV().rightCols(M.cols() - rank);
}

double max_principal_angle(const MatrixXc& P, const MatrixXc& Q) {
    if (P.cols() != Q.cols()) return M_PI / 2;
    if (P.cols() == 0) return 0.0;
    Eigen::JacobiSVD<MatrixXc> svd(P.adjoint() * Q);
    const double cmin = std::clamp(svd.singularValues().minCoeff(), 0.0, 1.0);
    // acos loses accuracy near 1; use the sine from the orthogonal complement instead.
    const MatrixXc resid = Q - P * (P.adjoint() * Q);
    Eigen::JacobiSVD<MatrixXc> rs(resid);
    const double smax = std::clamp(rs.singularValues().maxCoeff(), 0.0, 1.0);
    return cmin > 0.7 ? std::asin(smax) : std::acos(cmin);
}

CommutingBlochSpectrum commuting_bloch_spectrum(const MatrixXr& A, const MatrixXr& S,
                                                const OperatorBasis& basis) {
    const int n = basis.size();
    if (A.rows() != n || A.cols() != n || S.rows() != n || S.cols() != n)
        throw DimensionError("commuting_bloch_spectrum: matrices do not match basis size");
    CommutingBlochSpectrum out;
    out.commutator_norm = (A * S - S * A).norm();
    if (out.commutator_norm > 1e-10 * std::max(1.0, A.norm() * S.norm()))
        throw TheoremViolation("commuting_bloch_spectrum: A and S do not commute (norm " +
                               std::to_string(out.commutator_norm) + ")");

    const MatrixXc Ac = A.cast<cplx>();
    const MatrixXc Sc = S.cast<cplx>();
    const MatrixXc kerA = null_space(Ac);
    const bool s_zero = S.norm() < 1e-14;
    if (kerA.cols() != basis.dim)
        throw TheoremViolation("commuting_bloch_spectrum: ker A has dimension " +
                               std::to_string(kerA.cols()) + ", expected " +
                               std::to_string(basis.dim));
    if (!s_zero) {
        const MatrixXc kerS = null_space(Sc);
        if (kerS.cols() != kerA.cols())
            throw TheoremViolation("commuting_bloch_spectrum: kernels of A and S differ in dimension");
        out.kernel_angle = max_principal_angle(kerA, kerS);
        if (out.kernel_angle > 1e-8)
            throw TheoremViolation("commuting_bloch_spectrum: kernels of A and S do not coincide");
    }

    // A + wS is normal when A and S are normal and commute; its eigenvectors diagonalize both.
    const double weight = kGenericWeight * (1.0 + A.norm()) / (1.0 + S.norm());
    Eigen::ComplexEigenSolver<MatrixXc> es(Ac + weight * Sc);
    const VectorXc ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    std::vector<cplx> vals(ev.data(), ev.data() + n);
    const auto groups =
        cluster(vals, 1e-7 * scale, [](cplx a, cplx b) { return std::abs(a - b); });

    out.U.resize(n, n);
    int col = 0;
    for (const auto& g : groups) {
        MatrixXc Q(n, static_cast<int>(g.size()));
        for (size_t i = 0; i < g.size(); ++i) Q.col(i) = es.eigenvectors().col(g[i]);
        Eigen::HouseholderQR<MatrixXc> qr(Q);
        const MatrixXc thin = qr.householderQ() * MatrixXc::Identity(n, Q.cols());
        for (int i = 0; i < thin.cols(); ++i) out.U.col(col++) = thin.col(i);
    }
    out.omega_diag.resize(n);
    out.gamma_diag.resize(n);
    for (int i = 0; i < n; ++i) {
        out.omega_diag(i) = (out.U.col(i).adjoint() * Ac * out.U.col(i))(0, 0);
        out.gamma_diag(i) = (out.U.col(i).adjoint() * Sc * out.U.col(i))(0, 0).real();
    }
    // Kernel modes are the N smallest |omega| + |gamma| entries; the rest form the spectrum.
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        return std::abs(out.omega_diag(a)) + std::abs(out.gamma_diag(a)) <
               std::abs(out.omega_diag(b)) + std::abs(out.gamma_diag(b));
    });
    out.spectrum.kernel_dim = static_cast<int>(kerA.cols());
    for (int i = out.spectrum.kernel_dim; i < n; ++i) {
        out.spectrum.omegas.push_back(-out.omega_diag(idx[i]).imag());
        out.spectrum.gammas.push_back(out.gamma_diag(idx[i]));
    }
    return out;
}

MatrixXc dephasing_transfer(double omega, double delta, const DephasingSpectrum& spec) {
    if (delta < 0.0) throw ValidationError("dephasing_transfer: delta must be non-negative");
    const int m = static_cast<int>(spec.omegas.size());
    MatrixXc T = MatrixXc::Zero(m, m);
    if (delta == 0.0) return T;
    for (int i = 0; i < m; ++i) {
        const double g = spec.gammas[i];
        if (g == 0.0) continue;
        T(i, i) = delta * g / (I_unit * (omega - spec.omegas[i]) - delta * g);
    }
    return T;
}

double dephasing_hinf(double delta, const DephasingSpectrum& spec) {
    if (delta < 0.0) throw ValidationError("dephasing_hinf: delta must be non-negative");
    const int m = static_cast<int>(spec.omegas.size());
    bool any = false;
    for (double g : spec.gammas) any = any || g < 0.0;
    if (delta == 0.0 || !any) return 0.0;

    const auto gain = [&](double w) {
        double best = 0.0;
        for (int i = 0; i < m; ++i)
            if (spec.gammas[i] != 0.0)
                best = std::max(best, entry_modulus(w, delta, spec.omegas[i], spec.gammas[i]));
        return best;
    };

    // Coarse grid over the spectral band, seeded with every omega_kl, then golden-section
    // refinement of each local peak.
    double lo = spec.omegas[0], hi = spec.omegas[0], width = 0.0;
    for (int i = 0; i < m; ++i) {
        lo = std::min(lo, spec.omegas[i]);
        hi = std::max(hi, spec.omegas[i]);
        width = std::max(width, delta * std::abs(spec.gammas[i]));
    }
    lo -= 10.0 * width + 1.0;
    hi += 10.0 * width + 1.0;
    const int pts = 2001;
    const double h = (hi - lo) / (pts - 1);
    std::vector<double> grid(pts), vals(pts);
    for (int i = 0; i < pts; ++i) {
        grid[i] = lo + h * i;
        vals[i] = gain(grid[i]);
    }
    std::vector<double> seeds(spec.omegas);
    for (int i = 1; i + 1 < pts; ++i)
        if (vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1]) seeds.push_back(grid[i]);

    double best = *std::max_element(vals.begin(), vals.end());
    for (double w0 : seeds) {
        const double bracket = std::min(h, 4.0 * width + 1e-12);
        const double w = golden_section_max(gain, w0 - bracket, w0 + bracket, 100);
        best = std::max({best, gain(w0), gain(w)});
    }
    return best;
}

} // namespace qrobust
