// bloch_model.hpp — Real Bloch generators A = A_H + sum rate L_k, structured perturbations, reduction

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qrobust/lindblad.hpp"
#include "qrobust/operator_basis.hpp"

namespace qrobust {

// (A_H)_{mn} = Tr(i H [sigma_m, sigma_n])
MatrixXr bloch_hamiltonian(const HermitianOperator& H, const OperatorBasis& basis);

// L_{mn} = Tr(V^+ sigma_m V sigma_n - 1/2 V^+ V {sigma_m, sigma_n})
MatrixXr bloch_lindblad(const MatrixXc& V, const OperatorBasis& basis);

// A structured perturbation given by its defining operators. The Bloch matrix
// is bloch_hamiltonian(hamiltonian_term) + jump_rate * bloch_lindblad(jump_term).
struct StructureDef {
    std::string id;
    std::optional<MatrixXc> hamiltonian_term;
    std::optional<MatrixXc> jump_term;
    double jump_rate = 1.0;
};

MatrixXr structure_bloch(const StructureDef& def, const OperatorBasis& basis);

struct BlochModel {
    int dim = 0;
    MatrixXr A;
    std::map<std::string, MatrixXr> structures;
    OperatorBasis basis;

    const MatrixXr& structure(const std::string& id) const;
};

BlochModel assemble(const HermitianOperator& H, const std::vector<JumpTerm>& jumps,
                    const std::vector<StructureDef>& structures = {});
BlochModel assemble(const OpenSystem& sys, const std::vector<StructureDef>& structures = {});

// Reduced inhomogeneous form ds/dt = A_bar s + c on the unit-trace slice.
struct ReducedBloch {
    MatrixXr A_bar;
    VectorXr c;
};

// Works for any matrix with vanishing last row (the generator or a structure).
ReducedBloch reduce(const MatrixXr& M, int N);
ReducedBloch reduce(const BlochModel& model);

// -(A_bar + delta S_bar)^{-1}(c + delta c_S). Throws SteadyStateManifoldError when
// the reduced generator is singular (condition number >= 1e12).
VectorXr steady_state(const ReducedBloch& nominal, double delta, const ReducedBloch& structure);
VectorXr steady_state(const ReducedBloch& nominal);

// Full Bloch vector [s; 1/sqrt(N)].
BlochVector complete_bloch(const VectorXr& s, int N);

struct RankProfile {
    int rank = 0;
    std::vector<cplx> eigenvalues;  // ascending real part
    VectorXr singular_values;
};

// Numerical rank by thresholding singular values at tol * sigma_max.
RankProfile rank_profile(const MatrixXr& M, double tol = 1e-9);

} // namespace qrobust
