#pragma once

#include "tropt/ofdm.hpp"

#include <limits>
#include <span>
#include <vector>

namespace tropt {

/// Memoryless Rapp AM-AM amplifier. p = +infinity selects the ideal soft limiter.
struct RappPa {
    double p = 10.0;
    double v_sat = 1.0;
    double gain = 1.0;

    bool is_soft_limiter() const noexcept { return p == std::numeric_limits<double>::infinity(); }

    /// Input back-off V^2 / sigma^2 for the given mean input power.
    double ibo(double mean_power) const noexcept { return v_sat * v_sat / mean_power; }
    double ibo_db(double mean_power) const;

    void validate() const;
};

/// Rapp output for one sample: G y / (1 + |y|^2p / V^2p)^(1/2p).
cplx rapp_sample(const RappPa& pa, cplx y) noexcept;

TimeFrame rapp_amplify(const RappPa& pa, const TimeFrame& y);

/// Amplitude min(|y|, V), phase preserved.
TimeFrame soft_limit(double v_sat, const TimeFrame& y);

/// Dispatches to soft_limit when pa.p is infinite, rapp_amplify otherwise.
TimeFrame amplify(const RappPa& pa, const TimeFrame& y);

/// Output = lambda * input + distortion, with lambda from an ensemble correlation.
struct BussgangSplit {
    cplx lambda;
    std::vector<TimeFrame> correlated;
    std::vector<TimeFrame> distortion;
    double mean_power = 0.0;            ///< mean |y_n|^2 of the input
    double distortion_mean_power = 0.0; ///< mean |s_n|^2
};

/// lambda = sum(out * conj(in)) / sum(|in|^2) over every sample of every frame.
/// Throws UndefinedError for an all-zero input, ConfigError on shape mismatch.
BussgangSplit bussgang_split(std::span<const TimeFrame> input, std::span<const TimeFrame> output);

/// Per-frame correlation coefficients (same estimator, one frame at a time).
std::vector<cplx> per_symbol_lambdas(std::span<const TimeFrame> input, std::span<const TimeFrame> output);

/// Correlation coefficient of a Rapp PA driven by complex Gaussian input,
///   lambda = int_0^inf 2 xi^3 (1 + (xi^2/IBO)^p)^(-1/2p) exp(-xi^2) dxi,
/// by adaptive Gauss-Kronrod quadrature on [0, 6.45]. p may be +infinity.
/// Throws NumericError if the error estimate exceeds 1e-10.
double lambda_analytic(double p, double ibo_db);

/// Wideband SDR in dB: |lambda|^2 sum E|d_dc|^2 / (N E|s|^2). +infinity when s is zero.
double sdr_db(cplx lambda, double data_power_sum, double distortion_mean_power, int n_fft);

double db_to_linear(double db);
double linear_to_db(double lin);

} // namespace tropt
