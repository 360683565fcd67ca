// lindblad.cpp — master-equation right-hand side and matrix-exponential propagation

#include "qrobust/lindblad.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace qrobust {

OpenSystem::OpenSystem(HermitianOperator h, std::vector<JumpTerm> j)
    : H(std::move(h)), jumps(std::move(j)) {
    for (const auto& jump : jumps) {
        if (jump.V.rows() != H.dim() || jump.V.cols() != H.dim())
            throw DimensionError("OpenSystem: jump operator dimension does not match H");
        if (!(jump.rate >= 0.0))
            throw ValidationError("OpenSystem: jump rate must be non-negative");
    }
}

MatrixXc dissipator(const MatrixXc& V, const MatrixXc& rho) {
    const MatrixXc VdV = V.adjoint() * V;
    return V * rho * V.adjoint() - 0.5 * (VdV * rho + rho * VdV);
}

HermitianOperator lindblad_rhs(const HermitianOperator& rho, const OpenSystem& sys) {
    if (rho.dim() != sys.dim())
        throw DimensionError("lindblad_rhs: rho has dimension " + std::to_string(rho.dim()) +
                             ", system has " + std::to_string(sys.dim()));
    const MatrixXc& H = sys.H.matrix();
    const MatrixXc& r = rho.matrix();
    MatrixXc out = -I_unit * (H * r - r * H);
    for (const auto& j : sys.jumps) out += j.rate * dissipator(j.V, r);
    return HermitianOperator::symmetrized(out);
}

BlochVector propagate_bloch(const BlochVector& r0, const MatrixXr& A, double t) {
    if (A.rows() != A.cols() || A.rows() != r0.coords.size())
        throw DimensionError("propagate_bloch: generator and state sizes differ");
    if (t < 0.0) throw ValidationError("propagate_bloch: t must be non-negative");
    if (t == 0.0) return r0;
    const MatrixXr prop = (t * A).exp();
    return BlochVector{r0.dim, prop * r0.coords};
}

MatrixXc example1_dephased(double omega, double delta, double t) {
    MatrixXc rho(2, 2);
    const cplx coh = 0.5 * std::exp(-2.0 * delta * t) * std::exp(2.0 * I_unit * omega * t);
    rho << 0.5, coh,
           std::conj(coh), 0.5;
    return rho;
}

MatrixXc example1_mixed(double omega, double delta, double tau, double t) {
    MatrixXc rho(2, 2);
    const cplx coh = 0.5 * std::exp(-tau * delta) * std::exp(2.0 * I_unit * omega * t);
    rho << 0.5, coh,
           std::conj(coh), 0.5;
    return rho;
}

std::pair<HermitianOperator, HermitianOperator> example1_pair(double omega, double delta,
                                                              double tau) {
    if (delta < 0.0 || tau < 0.0)
        throw ValidationError("example1_pair: delta and tau must be non-negative");
    const OperatorBasis basis = build_basis(2);
    const MatrixXc sz = pauli::z();

    // Initial states: pure |+><+| and the partially dephased mixture.
    MatrixXc rho0(2, 2);
    rho0 << 0.5, 0.5,
            0.5, 0.5;
    MatrixXc rho0_mixed(2, 2);
    const double c = std::exp(-tau * delta);
    rho0_mixed << 0.5, 0.5 * c,
                  0.5 * c, 0.5;

    // The two evolutions differ only in whether the dephasing channel is on.
    const HermitianOperator H(omega * sz);
    const auto bloch_generator = [&](const OpenSystem& sys) {
        const int n = basis.size();
        MatrixXr A(n, n);
        for (int col = 0; col < n; ++col) {
            const auto out = lindblad_rhs(HermitianOperator::symmetrized(basis.elements[col]), sys);
            A.col(col) = to_bloch(out, basis).coords;
        }
        return A;
    };
    const MatrixXr A_deph = bloch_generator(OpenSystem(H, {JumpTerm{sz, delta}}));
    const MatrixXr A_unit = bloch_generator(OpenSystem(H));

    const double t = 0.5 * tau;
    const auto r1 = propagate_bloch(to_bloch(HermitianOperator(rho0), basis), A_deph, t);
    const auto r2 = propagate_bloch(to_bloch(HermitianOperator(rho0_mixed), basis), A_unit, t);
    return {from_bloch(r1, basis), from_bloch(r2, basis)};
}

} // namespace qrobust
