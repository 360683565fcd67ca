// robust_perf.hpp — Resolvent Phi(s), #-inverse, disturbance/preparation transfers, interconnections

#pragma once

#include <string>
#include <utility>

#include "qrobust/types.hpp"

namespace qrobust {

enum class Variant { dynamic, prep };

std::string to_string(Variant v);
Variant parse_variant(const std::string& s);

// Phi(s) = sI - A
MatrixXc phi(cplx s, const MatrixXr& A);

// diag(M11^{-1}, 0) for M whose last row vanishes except possibly its last entry.
// Throws SharpSingularError when cond(M11) >= 1e12.
MatrixXc sharp_inverse(const MatrixXc& M);

struct TransferSample {
    cplx s;
    double delta = 0.0;
    std::string structure_id;
    MatrixXc T;
    double norm = 0.0;
    bool pole = false;  // set instead of throwing when allow_pole is requested
};

// (Phi(s) - delta S)^# delta S
TransferSample transfer_dynamic(cplx s, double delta, const MatrixXr& A, const MatrixXr& S,
                                bool allow_pole = false);
// (Phi(s) - delta S)^#
TransferSample transfer_prep(cplx s, double delta, const MatrixXr& A, const MatrixXr& S,
                             bool allow_pole = false);
TransferSample transfer(Variant v, cplx s, double delta, const MatrixXr& A, const MatrixXr& S,
                        bool allow_pole = false);

// Frobenius residuals of the two #-inversion identities.
std::pair<double, double> sharp_lemma_residuals(cplx s, double delta, const MatrixXr& A,
                                                const MatrixXr& S);

// 2x2 block interconnection; the first block row/column carries the repeated real delta.
// dynamic: [[Phi#S, Phi#S], [I, 0]];  prep: [[S Phi#, S Phi#], [Phi#, Phi#]].
MatrixXc interconnection(cplx s, const MatrixXr& A, const MatrixXr& S, Variant variant);

// Upper LFT closing the first n_real channels with delta I:
// G22 + delta G21 (I - delta G11)^{-1} G12. Throws NumericalError if I - delta G11 is singular.
MatrixXc lft_close(const MatrixXc& G, int n_real, double delta);

double spectral_norm(const MatrixXc& M);

} // namespace qrobust
