// robust_perf.cpp — #-inverse based transfer matrices and their interconnections

#include "qrobust/robust_perf.hpp"

#include <cmath>
#include <limits>

namespace qrobust {

std::string to_string(Variant v) { return v == Variant::dynamic ? "dynamic" : "prep"; }

Variant parse_variant(const std::string& s) {
    if (s == "dynamic") return Variant::dynamic;
    if (s == "prep" || s == "prep_error") return Variant::prep;
    throw ValidationError("unknown variant '" + s + "' (expected dynamic|prep)");
}

MatrixXc phi(cplx s, const MatrixXr& A) {
    if (A.rows() != A.cols()) throw DimensionError("phi: A must be square");
    MatrixXc P = -A.cast<cplx>();
    P.diagonal().array() += s;
    return P;
}

double spectral_norm(const MatrixXc& M) {
    if (M.size() == 0) return 0.0;
    Eigen::JacobiSVD<MatrixXc> svd(M);
    return svd.singularValues()(0);
}

MatrixXc sharp_inverse(const MatrixXc& M) {
    const int n = static_cast<int>(M.rows());
    if (n < 2 || M.cols() != n) throw DimensionError("sharp_inverse: matrix must be square, n >= 2");
    const double scale = std::max(1.0, M.norm());
    if (M.row(n - 1).head(n - 1).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw ValidationError("sharp_inverse: last row must vanish outside the diagonal entry");
    const MatrixXc M11 = M.topLeftCorner(n - 1, n - 1);
    Eigen::JacobiSVD<MatrixXc> svd(M11, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (!(sv(0) > 0.0) || smin < 1e-12 * sv(0))
        throw SharpSingularError("sharp_inverse: 11-block is singular", smin);
    MatrixXc out = MatrixXc::Zero(n, n);
    out.topLeftCorner(n - 1, n - 1) = M11.partialPivLu().inverse();
    return out;
}

namespace {

TransferSample make_sample(cplx s, double delta, MatrixXc T) {
    TransferSample out;
    out.s = s;
    out.delta = delta;
    out.norm = spectral_norm(T);
    out.T = std::move(T);
    return out;
}

TransferSample pole_sample(cplx s, double delta, int n) {
    TransferSample out;
    out.s = s;
    out.delta = delta;
    out.T = MatrixXc::Constant(n, n, cplx(std::numeric_limits<double>::quiet_NaN(), 0.0));
    out.norm = std::numeric_limits<double>::infinity();
    out.pole = true;
    return out;
}

void check_pair(const MatrixXr& A, const MatrixXr& S) {
    if (A.rows() != A.cols() || S.rows() != A.rows() || S.cols() != A.cols())
        throw DimensionError("transfer: A and S must be square and of equal size");
}

} // namespace

TransferSample transfer_dynamic(cplx s, double delta, const MatrixXr& A, const MatrixXr& S,
                                bool allow_pole) {
    check_pair(A, S);
    const MatrixXc dS = delta * S.cast<cplx>();
    try {
        const MatrixXc X = sharp_inverse(phi(s, A) - dS);
        return make_sample(s, delta, X * dS);
    } catch (const SharpSingularError&) {
        if (!allow_pole) throw;
        return pole_sample(s, delta, static_cast<int>(A.rows()));
    }
}

TransferSample transfer_prep(cplx s, double delta, const MatrixXr& A, const MatrixXr& S,
                             bool allow_pole) {
    check_pair(A, S);
    try {
        return make_sample(s, delta, sharp_inverse(phi(s, A) - delta * S.cast<cplx>()));
    } catch (const SharpSingularError&) {
        if (!allow_pole) throw;
        return pole_sample(s, delta, static_cast<int>(A.rows()));
    }
}

TransferSample transfer(Variant v, cplx s, double delta, const MatrixXr& A, const MatrixXr& S,
                        bool allow_pole) {
    return v == Variant::dynamic ? transfer_dynamic(s, delta, A, S, allow_pole)
                                 : transfer_prep(s, delta, A, S, allow_pole);
}

std::pair<double, double> sharp_lemma_residuals(cplx s, double delta, const MatrixXr& A,
                                                const MatrixXr& S) {
    check_pair(A, S);
    const int n = static_cast<int>(A.rows());
    const MatrixXc Id = MatrixXc::Identity(n, n);
    const MatrixXc Sc = S.cast<cplx>();
    const MatrixXc P = phi(s, A);
    const MatrixXc Ps = sharp_inverse(P);
    const MatrixXc Pd = sharp_inverse(P - delta * Sc);

    const MatrixXc lhs1 = Pd * delta * Sc;
    const MatrixXc rhs1 = sharp_inverse(Id - Ps * delta * Sc) * Ps * delta * Sc;
    const MatrixXc rhs2 = Ps + Ps * delta * sharp_inverse(Id - Sc * Ps * delta) * Sc * Ps;
    return {(lhs1 - rhs1).norm(), (Pd - rhs2).norm()};
}

MatrixXc interconnection(cplx s, const MatrixXr& A, const MatrixXr& S, Variant variant) {
    check_pair(A, S);
    const int n = static_cast<int>(A.rows());
    const MatrixXc Ps = sharp_inverse(phi(s, A));
    const MatrixXc Sc = S.cast<cplx>();
    MatrixXc G(2 * n, 2 * n);
    if (variant == Variant::dynamic) {
        const MatrixXc X = Ps * Sc;
        G << X, X, MatrixXc::Identity(n, n), MatrixXc::Zero(n, n);
    } else {
        const MatrixXc X = Sc * Ps;
        G << X, X, Ps, Ps;
    }
    return G;
}

MatrixXc lft_close(const MatrixXc& G, int n_real, double delta) {
    const int n = static_cast<int>(G.rows());
    if (G.cols() != n || n_real < 0 || n_real > n)
        throw DimensionError("lft_close: invalid partition");
    const int m = n - n_real;
    const MatrixXc G11 = G.topLeftCorner(n_real, n_real);
    const MatrixXc G12 = G.topRightCorner(n_real, m);
    const MatrixXc G21 = G.bottomLeftCorner(m, n_real);
    const MatrixXc G22 = G.bottomRightCorner(m, m);
    if (delta == 0.0 || n_real == 0) return G22;
    MatrixXc K = -delta * G11;
    K.diagonal().array() += 1.0;
    Eigen::FullPivLU<MatrixXc> lu(K);
    if (!lu.isInvertible()) throw NumericalError("lft_close: I - delta G11 is singular");
    return G22 + delta * G21 * lu.solve(G12);
}

} // namespace qrobust
