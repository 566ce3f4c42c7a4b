#pragma once

#include "tropt/dft.hpp"

#include <Eigen/Dense>

#include <span>

namespace tropt {

// Derivatives of a sample-separable objective
//     g(d) = sum_{n=0}^{N-1} phi_n(|y_n|^2),   y_n = x_n + sum_l d_l F*_{n,l},
// with respect to the stacked real vector [Re d; Im d]. The caller supplies
//     gamma_n  = 2 phi_n'(|y_n|^2)   and   lambda_n = 4 phi_n''(|y_n|^2).
// Jacobian layout is [q; w]; Hessian layout is [[A, B], [B^T, D]].

/// One N-point DFT of gamma .* y read at the tone bins.
Eigen::VectorXd weighted_jacobian_fast(std::span<const int> tones, std::span<const cplx> y,
                                       std::span<const double> gamma);

/// Per-element sums over n with explicit F_{n,l}; O(N beta).
Eigen::VectorXd weighted_jacobian_direct(std::span<const int> tones, std::span<const cplx> y,
                                         std::span<const double> gamma);

/// Two N-point DFTs, of lambda .* y^2 and of the real gamma + lambda |y|^2 / 2,
/// read at T_l + T_m and T_l - T_m.
Eigen::MatrixXd weighted_hessian_fast(std::span<const int> tones, std::span<const cplx> y,
                                      std::span<const double> gamma, std::span<const double> lambda);

/// Per-element sums over n with explicit F_{n,l}; O(N beta^2).
Eigen::MatrixXd weighted_hessian_direct(std::span<const int> tones, std::span<const cplx> y,
                                        std::span<const double> gamma, std::span<const double> lambda);

/// F_{n,l} = exp(-i 2 pi n T / N) / sqrt(N) with the phase index reduced mod N.
cplx tone_kernel(int n, int tone, int n_fft);

struct CholeskySolve {
    Eigen::VectorXd solution;
    bool regularized = false;
    double shift = 0.0;
};

/// Solves H x = rhs by Cholesky factorization. If H is not numerically positive
/// definite, eps I is added with eps = 1e-8 trace(H) / dim, growing tenfold on
/// repeated failure. Throws NumericError if no shift up to trace(H) helps.
CholeskySolve cholesky_solve(const Eigen::MatrixXd& h, const Eigen::VectorXd& rhs);

struct CholeskyMultiSolve {
    Eigen::MatrixXd solution;
    bool regularized = false;
    double shift = 0.0;
};

/// Same as cholesky_solve with one factorization shared by every column of rhs.
CholeskyMultiSolve cholesky_solve(const Eigen::MatrixXd& h, const Eigen::MatrixXd& rhs);

/// Packs a complex tone vector as [Re; Im] and back.
Eigen::VectorXd stack_complex(std::span<const cplx> d);
CVec unstack_complex(const Eigen::VectorXd& v);

} // namespace tropt
