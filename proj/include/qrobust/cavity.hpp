// cavity.hpp — Two driven qubits in a lossy cavity: model, structures, entanglement measures

#pragma once

#include <string>
#include <vector>

#include "qrobust/bloch_model.hpp"

namespace qrobust {

struct CavityParams {
    cplx alpha1{1.0, 0.0};
    cplx alpha2{1.0, 0.0};
    double Delta1 = 1.0;
    double Delta2 = -1.0;
    double gamma1 = 1.0;
    double gamma2 = 1.0;

    // alpha1 = alpha2 = alpha, Delta1 = -Delta2 = Delta, gamma1 = gamma2 = gamma
    static CavityParams symmetric(double alpha, double Delta, double gamma);
};

// Presets: frequency-response studies use Delta = 1, the mu/pencil studies Delta = 0.1.
CavityParams nominal_gain();
CavityParams nominal_mu();

HermitianOperator cavity_hamiltonian(const CavityParams& p);

// sum_n gamma_n sigma_-^(n) (upper triangular in the |00>,|01>,|10>,|11> ordering)
MatrixXc cavity_jump(const CavityParams& p);

// H plus the single collective jump V_gamma at unit rate.
OpenSystem cavity_system(const CavityParams& p);

inline constexpr int kNumStructures = 7;

// Unit-parameter generators: 1,2 drive amplitudes; 3,4 detunings (Delta1 = +1,
// Delta2 = -1); 5 collective emission; 6,7 single-qubit emission.
StructureDef cavity_structure(int k);
std::string structure_name(int k);  // "S1".."S7"
int parse_structure(const std::string& id);
MatrixXr structure_matrix(int k, const OperatorBasis& basis);

// Bloch model with all seven structures attached under ids "S1".."S7".
BlochModel cavity_model(const CavityParams& p);

struct GeneralizedEigenvalue {
    double value = 0.0;
    int multiplicity = 1;
};

// Real finite generalized eigenvalues delta of (A, -S), i.e. det(A11 + delta S11) = 0 on
// the reduced (N^2-1) pencil. Values with |imag| <= imag_tol (1 + |delta|) count as real;
// values within cluster_tol (1 + |delta|) are merged and reported with multiplicity.
std::vector<GeneralizedEigenvalue> generalized_eigs(const MatrixXr& A, const MatrixXr& S,
                                                    double imag_tol = 1e-6,
                                                    double cluster_tol = 1e-5);

enum class ConcurrenceRoute { automatic, product, definition };

// Wootters concurrence of a two-qubit state. product: sqrt of eig(rho rho~);
// definition: singular values of sqrt(rho~) sqrt(rho), i.e. eig(sqrt(sqrt(rho) rho~ sqrt(rho))).
// automatic uses the product route unless rho is near-singular.
double concurrence(const HermitianOperator& rho,
                   ConcurrenceRoute route = ConcurrenceRoute::automatic);

struct CavitySteadyState {
    VectorXc psi;
    double C_ss = 0.0;
    bool alpha_zero = false;  // C_ss reported as its alpha -> 0 limit
};

// Closed-form pure steady state in the symmetric regime; throws NumericalError if the
// annihilation checks (H psi, V psi, d/dt rho) fail at 1e-12.
CavitySteadyState cavity_steady_state(double alpha, double Delta, double gamma = 1.0);

// Steady state of the symmetric-regime Bloch model obtained by linear solve.
HermitianOperator numerical_steady_state(double alpha, double Delta, double gamma);

enum class CavityParam { alpha, Delta, gamma };
CavityParam parse_cavity_param(const std::string& s);

// d ln C_ss / d ln theta by central differences (step 1e-6 in ln theta).
double concurrence_log_sensitivity(double alpha, double Delta, double gamma, CavityParam which);

// |max Re lambda(A_bar + Delta (S3_bar + S4_bar))| with A_bar at zero detuning.
double stability_margin(double alpha, double Delta, double gamma);

} // namespace qrobust
