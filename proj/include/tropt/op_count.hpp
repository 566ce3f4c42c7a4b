#pragma once

#include <cstdint>

namespace tropt {

// Real-operation accounting: one addition, subtraction, multiplication,
// division, power or comparison counts as one operation.

using OpCount = std::int64_t;

/// Accumulates operations charged by the solver kernels.
class OpCounter {
public:
    void add(OpCount n) noexcept { total_ += n; }
    OpCount total() const noexcept { return total_; }
    void reset() noexcept { total_ = 0; }

private:
    OpCount total_ = 0;
};

int log2_exact(int n_fft);

/// Split-radix complex N-point FFT: 4 N log2 N - 6 N + 8.
OpCount split_radix_complex_ops(int n_fft);

// Per-iteration totals. The fractional beta terms always sum to an integer.

/// 14 N log2 N + 13 N + (8/3) b^3 + 12 b^2 + (4/3) b + 28
OpCount count_ops_ac_tr(int n_fft, int beta);

/// 14 N log2 N + 10 N + (8/3) b^3 + 26 b^2 + (1/3) b + 28
OpCount count_ops_papr_tr(int n_fft, int beta);

/// 8 N log2 N + 14 theta + 13
OpCount count_ops_ncc_tr(int n_fft, int theta);

/// Cholesky of a 2b x 2b matrix: (8/3) b^3 + 2 b^2 + (1/3) b.
OpCount cholesky_ops(int beta);

/// Forward plus backward substitution for 2b unknowns: 8 b^2.
OpCount substitution_ops(int beta);

} // namespace tropt
