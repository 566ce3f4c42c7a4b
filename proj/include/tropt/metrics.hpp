#pragma once

#include "tropt/actr.hpp"
#include "tropt/baselines.hpp"
#include "tropt/ofdm.hpp"
#include "tropt/pa_model.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tropt {

/// TR scheme applied before the amplifier. Reference leaves the reserved tones empty.
enum class Algorithm { Reference, PaprTr, NccTr, AcTr };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

/// 10 log10(max |y|^2 / mean |y|^2) over the N core samples. Throws UndefinedError on a zero frame.
double papr_db(std::span<const cplx> core);
double papr_db(const TimeFrame& frame);

struct CcdfPoint {
    double threshold_db;
    double probability; ///< P(PAPR > threshold)
};

std::vector<CcdfPoint> ccdf(std::span<const double> samples, std::span<const double> thresholds);

/// Welch estimate over the concatenated sample stream of the frames (CP included).
/// freq is normalized to the sample rate and runs over [-0.5, 0.5); power is linear.
struct PsdEstimate {
    std::vector<double> freq;
    std::vector<double> power;
};

/// Hann window, hop = segment_len - overlap. segment_len must be a power of two
/// not longer than one symbol.
PsdEstimate welch_psd(std::span<const TimeFrame> frames, int segment_len = 256, int overlap = 128);

/// Mean linear power over |f| <= band_edge.
double inband_mean(const PsdEstimate& psd, double band_edge);

/// Clipping threshold V = sqrt(IBO * sigma^2) with sigma^2 = alpha / N, the analytic
/// power of the data-only signal.
double reference_v_sat(const SystemConfig& cfg, double ref_ibo_db);

struct EnsembleSpec {
    SystemConfig cfg;
    double pa_p = 10.0;       ///< simulated amplifier; +infinity is the soft limiter
    double model_p = 10.0;    ///< Rapp p assumed by AC-TR
    double ref_ibo_db = 8.0;
    Algorithm algorithm = Algorithm::Reference;
    int n_symbols = 1000;
    std::uint64_t seed = 1;
    AcTrConfig actr;
    BaselineConfig baseline;  ///< algorithm and v_sat are filled in by the runner
    bool with_psd = false;
    int psd_segment = 256;
    std::vector<double> ccdf_thresholds_db;
    unsigned threads = 0;     ///< 0 = hardware concurrency
};

struct RunMetrics {
    Algorithm algorithm = Algorithm::Reference;
    double v_sat = 0.0;
    double lambda_emp = 0.0;
    double sdr_db = 0.0;
    double distortion_power = 0.0;
    std::vector<double> papr_samples;
    std::vector<CcdfPoint> ccdf;
    PsdEstimate psd_total;      ///< PA output, linear
    PsdEstimate psd_distortion; ///< uncorrelated part, same grid
    double mean_iters = 0.0;
    double mean_ops = 0.0;
    double mean_ops_formula = 0.0;
    double converged_fraction = 1.0;
    int max_iterations = 0;
    int descent_violations = 0; ///< AC-TR objective increases across accepted steps
    bool data_preserved = true; ///< d_dc bit-identical after every solve
};

/// Generates n_symbols random symbols (per-symbol streams from (seed, index)),
/// applies the TR algorithm, amplifies, and measures a single ensemble Bussgang
/// split. V comes from the reference IBO only, so every algorithm sharing a seed
/// and IBO sees the same clipping level. Symbols are processed in parallel; all
/// reductions run in symbol order.
RunMetrics ensemble_sdr(const EnsembleSpec& spec);

} // namespace tropt
