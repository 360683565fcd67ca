// dephasing.hpp — Commuting (H, V) dephasing: joint diagonalization, analytic solution, diagonal transfers

#pragma once

#include <vector>

#include "qrobust/operator_basis.hpp"

namespace qrobust {

struct CommutingPair {
    HermitianOperator H;
    HermitianOperator V;
    MatrixXc U;      // joint eigenvectors as columns
    VectorXr lamH;   // lamH(k) = <u_k|H|u_k>
    VectorXr lamV;
};

// omegas/gammas are indexed over ordered pairs (k, l), k != l.
struct DephasingSpectrum {
    std::vector<double> omegas;  // lamH_k - lamH_l
    std::vector<double> gammas;  // -(lamV_k - lamV_l)^2 / 2
    int kernel_dim = 0;
};

// Joint eigenbasis of commuting Hermitian H, V. Columns are ordered by the index of
// their largest component; within repeated joint eigenspaces the basis is built by
// Gram-Schmidt on the projected unit vectors in index order; each column's first
// nonzero entry is real positive. Throws CommutatorError if ||[H,V]||_F > 1e-10.
CommutingPair simultaneous_diag(const HermitianOperator& H, const HermitianOperator& V);

DephasingSpectrum dephasing_spectrum(const CommutingPair& pair);

// rho(t) for H + rate-delta dephasing by V, via the joint eigenbasis.
HermitianOperator dephasing_solution(const HermitianOperator& rho0, const CommutingPair& pair,
                                     double delta, double t);

// Simultaneous diagonalization of commuting Bloch matrices A (Hamiltonian part) and
// S (dephasing part). omega_diag(i) = u_i^* A u_i, gamma_diag(i) = u_i^* S u_i.
struct CommutingBlochSpectrum {
    MatrixXc U;
    VectorXc omega_diag;
    VectorXr gamma_diag;
    DephasingSpectrum spectrum;  // nonkernel modes: omega = -Im(omega_diag), gamma
    double commutator_norm = 0.0;
    double kernel_angle = 0.0;   // largest principal angle between ker A and ker S
};

// Throws TheoremViolation when [A,S] != 0 or the kernels of A and S do not coincide
// with dimension N (a zero S is accepted and leaves the kernel to A alone).
CommutingBlochSpectrum commuting_bloch_spectrum(const MatrixXr& A, const MatrixXr& S,
                                                const OperatorBasis& basis);

// Largest principal angle between the column spaces of orthonormal bases P and Q.
double max_principal_angle(const MatrixXc& P, const MatrixXc& Q);

// Orthonormal basis of the numerical null space (singular values <= tol * sigma_max).
MatrixXc null_space(const MatrixXc& M, double tol = 1e-9);

// Diagonal entries delta*gamma / (i omega - i omega_kl - delta*gamma).
MatrixXc dephasing_transfer(double omega, double delta, const DephasingSpectrum& spec);

// sup over omega of the spectral norm of dephasing_transfer.
double dephasing_hinf(double delta, const DephasingSpectrum& spec);

} // namespace qrobust
