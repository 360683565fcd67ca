// types.hpp — Eigen aliases and the error hierarchy shared by all modules

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qrobust {

using cplx = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;
using MatrixXr = Eigen::MatrixXd;
using VectorXr = Eigen::VectorXd;

inline constexpr cplx I_unit{0.0, 1.0};

// Base class for everything this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

// Residues that should vanish analytically but do not (imaginary parts of
// Bloch coordinates, non-Hermitian results, ...).
class NumericalError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class CommutatorError : public Error {
public:
    CommutatorError(const std::string& what, double norm) : Error(what), commutator_norm(norm) {}
    double commutator_norm;
};

// A structural identity that must hold by construction was found violated.
class TheoremViolation : public Error {
public:
    using Error::Error;
};

// The 11-block of a #-inverse argument is (numerically) singular. At a
// generalized eigenvalue of (A, -S) this is a transfer-function pole.
class SharpSingularError : public Error {
public:
    SharpSingularError(const std::string& what, double sigma) : Error(what), sigma_min(sigma) {}
    double sigma_min;
};

class SteadyStateManifoldError : public Error {
public:
    using Error::Error;
};

} // namespace qrobust
