#include "tropt/op_count.hpp"

#include "tropt/dft.hpp"
#include "tropt/errors.hpp"

#include <string>

namespace tropt {

int log2_exact(int n_fft)
{
    if (!is_power_of_two(n_fft)) {
        throw ConfigError("operation counts need a power-of-two N, got " + std::to_string(n_fft));
    }
    int log = 0;
    while ((1 << log) < n_fft) {
        ++log;
    }
    return log;
}

OpCount split_radix_complex_ops(int n_fft)
{
    const OpCount n = n_fft;
    return 4 * n * log2_exact(n_fft) - 6 * n + 8;
}

OpCount cholesky_ops(int beta)
{
    const OpCount b = beta;
    return (8 * b * b * b + b) / 3 + 2 * b * b;
}

OpCount substitution_ops(int beta)
{
    const OpCount b = beta;
    return 8 * b * b;
}

OpCount count_ops_ac_tr(int n_fft, int beta)
{
    const OpCount n = n_fft;
    const OpCount b = beta;
    return 14 * n * log2_exact(n_fft) + 13 * n + (8 * b * b * b + 4 * b) / 3 + 12 * b * b + 28;
}

OpCount count_ops_papr_tr(int n_fft, int beta)
{
    const OpCount n = n_fft;
    const OpCount b = beta;
    return 14 * n * log2_exact(n_fft) + 10 * n + (8 * b * b * b + b) / 3 + 26 * b * b + 28;
}

OpCount count_ops_ncc_tr(int n_fft, int theta)
{
    const OpCount n = n_fft;
    return 8 * n * log2_exact(n_fft) + 14 * static_cast<OpCount>(theta) + 13;
}

} // namespace tropt
