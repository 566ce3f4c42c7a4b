#pragma once

#include <complex>
#include <span>
#include <vector>

namespace tropt {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

bool is_power_of_two(int n) noexcept;

/// Storage slot of a centered bin index m in {-N/2, ..., N/2-1}: m mod N.
/// Works for any integer m, so T_l + T_m and T_l - T_m wrap cyclically.
inline int bin_slot(int m, int n) noexcept { return ((m % n) + n) % n; }

// Unitary transforms (1/sqrt(N) on both directions). Output of dft is stored in
// natural order; read bin m at slot bin_slot(m, N). Lengths must be powers of two.
CVec dft(std::span<const cplx> x);
CVec idft(std::span<const cplx> spectrum);

/// Real-input forward transform, same normalization and ordering as dft.
CVec dft_real(std::span<const double> x);

/// Single bin by direct summation of the definition, O(N).
cplx dft_bin(std::span<const cplx> x, int m);

} // namespace tropt
