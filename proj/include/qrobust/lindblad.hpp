// lindblad.hpp — Lindblad master equation, Bloch-space propagation, dephasing/preparation example

#pragma once

#include <utility>
#include <vector>

#include "qrobust/operator_basis.hpp"

namespace qrobust {

// Dissipator gamma^2 L(V); rate is gamma^2.
struct JumpTerm {
    MatrixXc V;
    double rate = 0.0;
};

struct OpenSystem {
    HermitianOperator H;
    std::vector<JumpTerm> jumps;

    OpenSystem(HermitianOperator h, std::vector<JumpTerm> j = {});

    int dim() const { return H.dim(); }
};

// L(V) rho = V rho V^+ - (V^+ V rho + rho V^+ V)/2
MatrixXc dissipator(const MatrixXc& V, const MatrixXc& rho);

// -i[H, rho] + sum_k rate_k L(V_k) rho
HermitianOperator lindblad_rhs(const HermitianOperator& rho, const OpenSystem& sys);

// exp(tA) r0. A must be N^2 x N^2; t >= 0.
BlochVector propagate_bloch(const BlochVector& r0, const MatrixXr& A, double t);

// Pure state (|0> + |1>)/sqrt(2) under H = omega sigma_z with sigma_z dephasing at
// rate delta, versus the mixed state with coherence exp(-tau delta)/2 evolving
// unitarily; both evaluated at t = tau/2.
std::pair<HermitianOperator, HermitianOperator> example1_pair(double omega, double delta,
                                                              double tau);

// Closed forms of the two trajectories above at arbitrary t.
MatrixXc example1_dephased(double omega, double delta, double t);
MatrixXc example1_mixed(double omega, double delta, double tau, double t);

} // namespace qrobust
