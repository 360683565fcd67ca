// operator_basis.hpp — Orthonormal Hermitian operator bases and Bloch coordinates

#pragma once

#include <utility>
#include <vector>

#include "qrobust/types.hpp"

namespace qrobust {

// N x N complex matrix that is Hermitian to 1e-12 relative Frobenius norm.
class HermitianOperator {
public:
    static constexpr double kTolerance = 1e-12;

    // Throws ValidationError if m is not square or not Hermitian.
    explicit HermitianOperator(MatrixXc m);

    // Symmetrizes m first; for results that are Hermitian analytically but
    // carry rounding noise. Still throws if the anti-Hermitian part is large.
    static HermitianOperator symmetrized(const MatrixXc& m, double tol = 1e-9);

    int dim() const { return static_cast<int>(m_.rows()); }
    const MatrixXc& matrix() const { return m_; }

private:
    MatrixXc m_;
};

double hermiticity_defect(const MatrixXc& m);

struct BlochVector {
    int dim = 0;          // Hilbert-space dimension N
    VectorXr coords;      // length N^2, last entry is the trace coordinate
};

// Ordered orthonormal basis {sigma_n} of the N x N Hermitian matrices. The
// identity element I/sqrt(N) always sits in the last slot.
struct OperatorBasis {
    int dim = 0;
    std::vector<MatrixXc> elements;
    int trace_index = 0;  // zero-based, equals dim*dim - 1

    int size() const { return static_cast<int>(elements.size()); }
};

namespace pauli {
// Single-qubit matrices in the sign convention used throughout the project:
// sigma_y = [[0, i], [-i, 0]] and sigma_z = diag(-1, 1).
MatrixXc identity();
MatrixXc x();
MatrixXc y();
MatrixXc z();
} // namespace pauli

// N = 2: (sigma_x, sigma_y, sigma_z, I)/sqrt(2).
// N a power of two: lexicographic tensor products of the N = 2 elements
// (I, sigma_x, sigma_y, sigma_z)/sqrt(2) with the all-identity product moved last.
// Otherwise: generalized Gell-Mann matrices / sqrt(2), then I/sqrt(N).
OperatorBasis build_basis(int N);

BlochVector to_bloch(const HermitianOperator& rho, const OperatorBasis& basis);
HermitianOperator from_bloch(const BlochVector& r, const OperatorBasis& basis);

// Bloch coordinates of an arbitrary (not necessarily Hermitian) operator,
// r_n = Tr(sigma_n X). Complex in general.
VectorXc to_bloch_complex(const MatrixXc& X, const OperatorBasis& basis);

// Returns (Tr(P^dagger Q), p^T q).
std::pair<double, double> bloch_orthogonality_check(const HermitianOperator& P,
                                                    const HermitianOperator& Q,
                                                    const OperatorBasis& basis);

MatrixXr gram_matrix(const OperatorBasis& basis);

} // namespace qrobust
