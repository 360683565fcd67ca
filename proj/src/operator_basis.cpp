// operator_basis.cpp — Pauli / Gell-Mann bases and Bloch coordinate maps

#include "qrobust/operator_basis.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace qrobust {

double hermiticity_defect(const MatrixXc& m) {
    return (m - m.adjoint()).norm() / std::max(1.0, m.norm());
}

HermitianOperator::HermitianOperator(MatrixXc m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() < 1)
        throw ValidationError("HermitianOperator: matrix must be square and non-empty");
    const double defect = hermiticity_defect(m_);
    if (defect > kTolerance)
        throw ValidationError("HermitianOperator: matrix is not Hermitian (defect " +
                              std::to_string(defect) + ")");
}

HermitianOperator HermitianOperator::symmetrized(const MatrixXc& m, double tol) {
    if (m.rows() != m.cols())
        throw ValidationError("HermitianOperator: matrix must be square");
    const double defect = hermiticity_defect(m);
    if (defect > tol)
        throw NumericalError("HermitianOperator: anti-Hermitian residue " + std::to_string(defect));
    MatrixXc h = 0.5 * (m + m.adjoint());
    return HermitianOperator(std::move(h));
}

namespace pauli {

MatrixXc identity() { return MatrixXc::Identity(2, 2); }

MatrixXc x() {
    MatrixXc m(2, 2);
    m << 0.0, 1.0,
         1.0, 0.0;
    return m;
}

MatrixXc y() {
    MatrixXc m(2, 2);
    m << 0.0, I_unit,
         -I_unit, 0.0;
    return m;
}

MatrixXc z() {
    MatrixXc m(2, 2);
    m << -1.0, 0.0,
         0.0, 1.0;
    return m;
}

} // namespace pauli

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

OperatorBasis tensor_pauli_basis(int N) {
    const double r2 = 1.0 / std::sqrt(2.0);
    const std::vector<MatrixXc> single = {pauli::identity() * r2, pauli::x() * r2,
                                          pauli::y() * r2, pauli::z() * r2};
    std::vector<MatrixXc> products = {MatrixXc::Ones(1, 1)};
    for (int n = N; n > 1; n /= 2) {
        std::vector<MatrixXc> next;
        next.reserve(products.size() * 4);
        for (const auto& p : products)
            for (const auto& s : single)
                next.push_back(Eigen::kroneckerProduct(p, s).eval());
        products = std::move(next);
    }
    // products[0] is the all-identity element; rotate it to the end.
    OperatorBasis b;
    b.dim = N;
    b.elements.assign(products.begin() + 1, products.end());
    b.elements.push_back(products.front());
    b.trace_index = N * N - 1;
    return b;
}

OperatorBasis gell_mann_basis(int N) {
    const double r2 = 1.0 / std::sqrt(2.0);
    OperatorBasis b;
    b.dim = N;
    for (int j = 0; j < N; ++j) {
        for (int k = j + 1; k < N; ++k) {
            MatrixXc s = MatrixXc::Zero(N, N);
            s(j, k) = 1.0;
            s(k, j) = 1.0;
            b.elements.push_back(s * r2);
            MatrixXc a = MatrixXc::Zero(N, N);
            a(j, k) = -I_unit;
            a(k, j) = I_unit;
            b.elements.push_back(a * r2);
        }
    }
    for (int l = 1; l < N; ++l) {
        MatrixXc d = MatrixXc::Zero(N, N);
        const double scale = std::sqrt(2.0 / (l * (l + 1.0)));
        for (int j = 0; j < l; ++j) d(j, j) = scale;
        d(l, l) = -l * scale;
        b.elements.push_back(d * r2);
    }
    b.elements.push_back(MatrixXc::Identity(N, N) / std::sqrt(static_cast<double>(N)));
    b.trace_index = N * N - 1;
    return b;
}

void check_dims(int a, int b, const char* where) {
    if (a != b)
        throw DimensionError(std::string(where) + ": dimension mismatch (" + std::to_string(a) +
                             " vs " + std::to_string(b) + ")");
}

} // namespace

OperatorBasis build_basis(int N) {
    if (N < 2) throw DimensionError("build_basis: N must be >= 2, got " + std::to_string(N));
    if (is_power_of_two(N)) return tensor_pauli_basis(N);
    return gell_mann_basis(N);
}

VectorXc to_bloch_complex(const MatrixXc& X, const OperatorBasis& basis) {
    check_dims(static_cast<int>(X.rows()), basis.dim, "to_bloch");
    VectorXc r(basis.size());
    for (int n = 0; n < basis.size(); ++n)
        r(n) = (basis.elements[n].cwiseProduct(X.transpose())).sum();  // Tr(sigma_n X)
    return r;
}

BlochVector to_bloch(const HermitianOperator& rho, const OperatorBasis& basis) {
    const VectorXc rc = to_bloch_complex(rho.matrix(), basis);
    const double imag = rc.imag().cwiseAbs().maxCoeff();
    if (imag > 1e-9)
        throw NumericalError("to_bloch: Bloch coordinates have imaginary residue " +
                             std::to_string(imag));
    return BlochVector{basis.dim, rc.real()};
}

HermitianOperator from_bloch(const BlochVector& r, const OperatorBasis& basis) {
    check_dims(r.dim, basis.dim, "from_bloch");
    check_dims(static_cast<int>(r.coords.size()), basis.size(), "from_bloch");
    MatrixXc m = MatrixXc::Zero(basis.dim, basis.dim);
    for (int n = 0; n < basis.size(); ++n) m += r.coords(n) * basis.elements[n];
    return HermitianOperator::symmetrized(m, 1e-12);
}

std::pair<double, double> bloch_orthogonality_check(const HermitianOperator& P,
                                                    const HermitianOperator& Q,
                                                    const OperatorBasis& basis) {
    check_dims(P.dim(), Q.dim(), "bloch_orthogonality_check");
    const double op_inner = (P.matrix().adjoint() * Q.matrix()).trace().real();
    const VectorXr p = to_bloch(P, basis).coords;
    const VectorXr q = to_bloch(Q, basis).coords;
    return {op_inner, p.dot(q)};
}

MatrixXr gram_matrix(const OperatorBasis& basis) {
    const int n = basis.size();
    MatrixXr g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            g(i, j) = (basis.elements[i] * basis.elements[j]).trace().real();
    return g;
}

} // namespace qrobust
