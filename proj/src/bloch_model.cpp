// bloch_model.cpp — Bloch generator construction and reduced steady states

#include "qrobust/bloch_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qrobust {

namespace {

void require_dim(int a, int b, const char* where) {
    if (a != b)
        throw DimensionError(std::string(where) + ": operator dimension " + std::to_string(a) +
                             " does not match basis dimension " + std::to_string(b));
}

double max_imag(const MatrixXc& m) { return m.imag().cwiseAbs().maxCoeff(); }

} // namespace

MatrixXr bloch_hamiltonian(const HermitianOperator& H, const OperatorBasis& basis) {
    require_dim(H.dim(), basis.dim, "bloch_hamiltonian");
    const int n = basis.size();
    const MatrixXc& h = H.matrix();
    MatrixXc out(n, n);
    // Tr(iH[s_m, s_n]) = i Tr(s_n H s_m) - i Tr(s_m H s_n); only products H s_k are needed.
    std::vector<MatrixXc> Hs(n);
    for (int k = 0; k < n; ++k) Hs[k] = h * basis.elements[k];
    for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k)
            out(m, k) = I_unit * ((basis.elements[k] * Hs[m]).trace() -
                                  (basis.elements[m] * Hs[k]).trace());
    if (max_imag(out) > 1e-10 * std::max(1.0, h.norm()))
        throw NumericalError("bloch_hamiltonian: non-real Bloch matrix");
    return out.real();
}

MatrixXr bloch_lindblad(const MatrixXc& V, const OperatorBasis& basis) {
    require_dim(static_cast<int>(V.rows()), basis.dim, "bloch_lindblad");
    require_dim(static_cast<int>(V.cols()), basis.dim, "bloch_lindblad");
    const int n = basis.size();
    const MatrixXc Vd = V.adjoint();
    const MatrixXc VdV = Vd * V;
    std::vector<MatrixXc> left(n), anti(n);
    for (int k = 0; k < n; ++k) {
        left[k] = Vd * basis.elements[k] * V;   // V^+ s_m V
        anti[k] = VdV * basis.elements[k];      // V^+V s_m
    }
    MatrixXc out(n, n);
    for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k) {
            const MatrixXc& sk = basis.elements[k];
            const MatrixXc& sm = basis.elements[m];
            out(m, k) = (left[m] * sk).trace() -
                        0.5 * ((anti[m] * sk).trace() + (anti[k] * sm).trace());
        }
    if (max_imag(out) > 1e-10 * std::max(1.0, VdV.norm()))
        throw NumericalError("bloch_lindblad: non-real Bloch matrix");
    return out.real();
}

MatrixXr structure_bloch(const StructureDef& def, const OperatorBasis& basis) {
    const int n = basis.size();
    MatrixXr S = MatrixXr::Zero(n, n);
    if (def.hamiltonian_term)
        S += bloch_hamiltonian(HermitianOperator(*def.hamiltonian_term), basis);
    if (def.jump_term) S += def.jump_rate * bloch_lindblad(*def.jump_term, basis);
    return S;
}

const MatrixXr& BlochModel::structure(const std::string& id) const {
    const auto it = structures.find(id);
    if (it == structures.end()) throw ValidationError("unknown structure '" + id + "'");
    return it->second;
}

BlochModel assemble(const HermitianOperator& H, const std::vector<JumpTerm>& jumps,
                    const std::vector<StructureDef>& structures) {
    BlochModel model;
    model.dim = H.dim();
    model.basis = build_basis(model.dim);
    model.A = bloch_hamiltonian(H, model.basis);
    for (const auto& j : jumps) {
        if (j.rate < 0.0) throw ValidationError("assemble: negative jump rate");
        model.A += j.rate * bloch_lindblad(j.V, model.basis);
    }
    for (const auto& def : structures) model.structures[def.id] = structure_bloch(def, model.basis);
    return model;
}

BlochModel assemble(const OpenSystem& sys, const std::vector<StructureDef>& structures) {
    return assemble(sys.H, sys.jumps, structures);
}

ReducedBloch reduce(const MatrixXr& M, int N) {
    const int n = N * N;
    if (M.rows() != n || M.cols() != n) throw DimensionError("reduce: matrix is not N^2 x N^2");
    if (M.row(n - 1).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, M.norm()))
        throw ValidationError("reduce: last row of Bloch matrix does not vanish");
    ReducedBloch red;
    red.A_bar = M.topLeftCorner(n - 1, n - 1);
    red.c = M.col(n - 1).head(n - 1) / std::sqrt(static_cast<double>(N));
    return red;
}

ReducedBloch reduce(const BlochModel& model) { return reduce(model.A, model.dim); }

VectorXr steady_state(const ReducedBloch& nominal, double delta, const ReducedBloch& structure) {
    const MatrixXr M = nominal.A_bar + delta * structure.A_bar;
    const VectorXr c = nominal.c + delta * structure.c;
    Eigen::JacobiSVD<MatrixXr> svd(M);
    const auto& sv = svd.singularValues();
    if (sv(0) == 0.0 || sv(sv.size() - 1) < 1e-12 * sv(0))
        throw SteadyStateManifoldError("steady_state: reduced generator is singular; "
                                       "steady states form a manifold");
    return -M.partialPivLu().solve(c);
}

VectorXr steady_state(const ReducedBloch& nominal) {
    ReducedBloch zero{MatrixXr::Zero(nominal.A_bar.rows(), nominal.A_bar.cols()),
                      VectorXr::Zero(nominal.c.size())};
    return steady_state(nominal, 0.0, zero);
}

BlochVector complete_bloch(const VectorXr& s, int N) {
    BlochVector r;
    r.dim = N;
    r.coords.resize(s.size() + 1);
    r.coords.head(s.size()) = s;
    r.coords(s.size()) = 1.0 / std::sqrt(static_cast<double>(N));
    return r;
}

RankProfile rank_profile(const MatrixXr& M, double tol) {
    if (M.rows() != M.cols()) throw DimensionError("rank_profile: matrix must be square");
    RankProfile out;
    Eigen::JacobiSVD<MatrixXr> svd(M);
    out.singular_values = svd.singularValues();
    const double smax = out.singular_values.size() ? out.singular_values(0) : 0.0;
    if (smax > 0.0)
        for (int i = 0; i < out.singular_values.size(); ++i)
            if (out.singular_values(i) > tol * smax) ++out.rank;
    if (M.rows() > 0) {
        Eigen::EigenSolver<MatrixXr> es(M, false);
        const VectorXc ev = es.eigenvalues();
        out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
        std::stable_sort(out.eigenvalues.begin(), out.eigenvalues.end(),
                         [](const cplx& a, const cplx& b) {
                             if (a.real() != b.real()) return a.real() < b.real();
                             return a.imag() < b.imag();
                         });
    }
    return out;
}

} // namespace qrobust
