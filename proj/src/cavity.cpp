// cavity.cpp — two-qubit cavity model, generalized eigenvalues and concurrence

#include "qrobust/cavity.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace qrobust {

CavityParams CavityParams::symmetric(double alpha, double Delta, double gamma) {
    if (gamma < 0.0) throw ValidationError("CavityParams: gamma must be non-negative");
    return CavityParams{cplx(alpha, 0.0), cplx(alpha, 0.0), Delta, -Delta, gamma, gamma};
}

CavityParams nominal_gain() { return CavityParams::symmetric(1.0, 1.0, 1.0); }
CavityParams nominal_mu() { return CavityParams::symmetric(1.0, 0.1, 1.0); }

HermitianOperator cavity_hamiltonian(const CavityParams& p) {
    MatrixXc H(4, 4);
    H << 0.0, p.alpha2, p.alpha1, 0.0,
         std::conj(p.alpha2), p.Delta2, 0.0, p.alpha1,
         std::conj(p.alpha1), 0.0, p.Delta1, p.alpha2,
         0.0, std::conj(p.alpha1), std::conj(p.alpha2), p.Delta1 + p.Delta2;
    return HermitianOperator(std::move(H));
}

MatrixXc cavity_jump(const CavityParams& p) {
    if (p.gamma1 < 0.0 || p.gamma2 < 0.0)
        throw ValidationError("cavity_jump: decay amplitudes must be non-negative");
    MatrixXc V = MatrixXc::Zero(4, 4);
    V(0, 1) = p.gamma2;
    V(0, 2) = p.gamma1;
    V(1, 3) = p.gamma1;
    V(2, 3) = p.gamma2;
    return V;
}

OpenSystem cavity_system(const CavityParams& p) {
    return OpenSystem(cavity_hamiltonian(p), {JumpTerm{cavity_jump(p), 1.0}});
}

std::string structure_name(int k) {
    if (k < 1 || k > kNumStructures)
        throw ValidationError("structure index must be in 1..7, got " + std::to_string(k));
    return "S" + std::to_string(k);
}

int parse_structure(const std::string& id) {
    std::string s = id;
    if (!s.empty() && (s[0] == 'S' || s[0] == 's')) s = s.substr(1);
    int k = 0;
    try {
        size_t used = 0;
        k = std::stoi(s, &used);
        if (used != s.size()) k = 0;
    } catch (const std::exception&) {
        k = 0;
    }
    if (k < 1 || k > kNumStructures) throw ValidationError("unknown structure '" + id + "'");
    return k;
}

StructureDef cavity_structure(int k) {
    StructureDef def;
    def.id = structure_name(k);
    CavityParams zero{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    CavityParams p = zero;
    switch (k) {
    case 1: p.alpha1 = 1.0; break;
    case 2: p.alpha2 = 1.0; break;
    case 3: p.Delta1 = 1.0; break;
    case 4: p.Delta2 = -1.0; break;
    case 5: p.gamma1 = p.gamma2 = 1.0; break;
    case 6: p.gamma1 = 1.0; break;
    case 7: p.gamma2 = 1.0; break;
    }
    if (k <= 4)
        def.hamiltonian_term = cavity_hamiltonian(p).matrix();
    else
        def.jump_term = cavity_jump(p);
    return def;
}

MatrixXr structure_matrix(int k, const OperatorBasis& basis) {
    return structure_bloch(cavity_structure(k), basis);
}

BlochModel cavity_model(const CavityParams& p) {
    std::vector<StructureDef> defs;
    for (int k = 1; k <= kNumStructures; ++k) defs.push_back(cavity_structure(k));
    return assemble(cavity_system(p), defs);
}

std::vector<GeneralizedEigenvalue> generalized_eigs(const MatrixXr& A, const MatrixXr& S,
                                                    double imag_tol, double cluster_tol) {
    const int n = static_cast<int>(A.rows());
    if (A.cols() != n || S.rows() != n || S.cols() != n || n < 2)
        throw DimensionError("generalized_eigs: A and S must be square and equal-sized");
    const MatrixXr A11 = A.topLeftCorner(n - 1, n - 1);
    const MatrixXr B11 = -S.topLeftCorner(n - 1, n - 1);
    Eigen::GeneralizedEigenSolver<MatrixXr> ges(A11, B11, false);
    if (ges.info() != Eigen::Success) throw NumericalError("generalized_eigs: QZ failed");
    const VectorXc alphas = ges.alphas();
    const VectorXr betas = ges.betas();
    const double scale = std::max(1.0, A11.norm());

    std::vector<double> real_vals;
    for (int i = 0; i < alphas.size(); ++i) {
        if (std::abs(betas(i)) <= 1e-10 * std::max(std::abs(alphas(i)), scale * 1e-6)) continue;
        const cplx lam = alphas(i) / betas(i);
        if (!std::isfinite(lam.real()) || std::abs(lam) > 1e8) continue;
        if (std::abs(lam.imag()) <= imag_tol * (1.0 + std::abs(lam))) real_vals.push_back(lam.real());
    }
    std::sort(real_vals.begin(), real_vals.end());
    std::vector<GeneralizedEigenvalue> out;
    for (size_t i = 0; i < real_vals.size();) {
        size_t j = i + 1;
        double sum = real_vals[i];
        while (j < real_vals.size() &&
               real_vals[j] - real_vals[j - 1] <= cluster_tol * (1.0 + std::abs(real_vals[i]))) {
            sum += real_vals[j];
            ++j;
        }
        out.push_back({sum / static_cast<double>(j - i), static_cast<int>(j - i)});
        i = j;
    }
    return out;
}

namespace {

MatrixXc sigma_yy() { return Eigen::kroneckerProduct(pauli::y(), pauli::y()).eval(); }

std::vector<double> descending(std::vector<double> v) {
    std::sort(v.begin(), v.end(), std::greater<double>());
    return v;
}

double wootters(const std::vector<double>& lam) {
    return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

void validate_state(const HermitianOperator& rho, const VectorXr& ev) {
    if (rho.dim() != 4) throw DimensionError("concurrence: two-qubit (4x4) state required");
    const cplx tr = rho.matrix().trace();
    if (std::abs(tr - 1.0) > 1e-9) throw ValidationError("concurrence: state must have unit trace");
    if (ev.minCoeff() < -1e-9) throw ValidationError("concurrence: state is not positive semidefinite");
}

} // namespace

double concurrence(const HermitianOperator& rho, ConcurrenceRoute route) {
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(rho.matrix());
    validate_state(rho, es.eigenvalues());
    const MatrixXc Y = sigma_yy();
    if (route == ConcurrenceRoute::automatic)
        route = es.eigenvalues().minCoeff() < 1e-8 ? ConcurrenceRoute::definition
                                                   : ConcurrenceRoute::product;

    std::vector<double> lam(4);
    if (route == ConcurrenceRoute::product) {
        const MatrixXc rt = Y * rho.matrix().conjugate() * Y;
        Eigen::ComplexEigenSolver<MatrixXc> ces(rho.matrix() * rt, false);
        for (int i = 0; i < 4; ++i) lam[i] = std::sqrt(std::max(0.0, ces.eigenvalues()(i).real()));
    } else {
        const VectorXr sq = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        const MatrixXc sqrt_rho = es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().adjoint();
        const MatrixXc sqrt_rt = Y * sqrt_rho.conjugate() * Y;
        Eigen::JacobiSVD<MatrixXc> svd(sqrt_rt * sqrt_rho);
        for (int i = 0; i < 4; ++i) lam[i] = svd.singularValues()(i);
    }
    return wootters(descending(lam));
}

CavitySteadyState cavity_steady_state(double alpha, double Delta, double gamma) {
    if (alpha == 0.0 && Delta == 0.0)
        throw ValidationError("cavity_steady_state: alpha and Delta cannot both vanish");
    CavitySteadyState out;
    out.psi.resize(4);
    out.psi << Delta, alpha, -alpha, 0.0;
    out.psi /= std::sqrt(Delta * Delta + 2.0 * alpha * alpha);
    if (alpha == 0.0) {
        out.alpha_zero = true;
        out.C_ss = 0.0;
    } else {
        const double r = Delta / alpha;
        out.C_ss = 1.0 / (0.5 * r * r + 1.0);
    }
    const CavityParams p = CavityParams::symmetric(alpha, Delta, gamma);
    const OpenSystem sys = cavity_system(p);
    const double scale = 1.0 + std::abs(alpha) + std::abs(Delta) + gamma;
    const double hres = (sys.H.matrix() * out.psi).norm();
    const double vres = (cavity_jump(p) * out.psi).norm();
    const HermitianOperator rho(out.psi * out.psi.adjoint());
    const double dres = lindblad_rhs(rho, sys).matrix().norm();
    if (hres > 1e-12 * scale || vres > 1e-12 * scale || dres > 1e-12 * scale * scale)
        throw NumericalError("cavity_steady_state: closed-form state is not stationary");
    return out;
}

HermitianOperator numerical_steady_state(double alpha, double Delta, double gamma) {
    const CavityParams p = CavityParams::symmetric(alpha, Delta, gamma);
    const BlochModel model = assemble(cavity_system(p));
    const VectorXr s = steady_state(reduce(model));
    return from_bloch(complete_bloch(s, model.dim), model.basis);
}

CavityParam parse_cavity_param(const std::string& s) {
    if (s == "alpha") return CavityParam::alpha;
    if (s == "Delta" || s == "delta" || s == "detuning") return CavityParam::Delta;
    if (s == "gamma") return CavityParam::gamma;
    throw ValidationError("unknown parameter '" + s + "' (expected alpha|Delta|gamma)");
}

double concurrence_log_sensitivity(double alpha, double Delta, double gamma, CavityParam which) {
    constexpr double h = 1e-6;
    const auto log_c = [&](double factor) {
        double a = alpha, d = Delta, g = gamma;
        switch (which) {
        case CavityParam::alpha: a *= factor; break;
        case CavityParam::Delta: d *= factor; break;
        case CavityParam::gamma: g *= factor; break;
        }
        const double c = concurrence(numerical_steady_state(a, d, g));
        if (c < 1e-12) throw NumericalError("concurrence_log_sensitivity: concurrence vanishes");
        return std::log(c);
    };
    const double theta = which == CavityParam::alpha   ? alpha
                         : which == CavityParam::Delta ? Delta
                                                       : gamma;
    if (theta == 0.0) throw ValidationError("concurrence_log_sensitivity: parameter must be nonzero");
    return (log_c(std::exp(h)) - log_c(std::exp(-h))) / (2.0 * h);
}

double stability_margin(double alpha, double Delta, double gamma) {
    const BlochModel model = assemble(cavity_system(CavityParams::symmetric(alpha, 0.0, gamma)));
    const MatrixXr S34 = structure_matrix(3, model.basis) + structure_matrix(4, model.basis);
    const ReducedBloch a = reduce(model);
    const ReducedBloch s = reduce(S34, model.dim);
    Eigen::EigenSolver<MatrixXr> es(a.A_bar + Delta * s.A_bar, false);
    return std::abs(es.eigenvalues().real().maxCoeff());
}

} // namespace qrobust
