#pragma once

#include "tropt/actr.hpp"
#include "tropt/ofdm.hpp"
#include "tropt/op_count.hpp"

#include <utility>

namespace tropt {

enum class BaselineAlgorithm { PaprTr, NccTr };

struct BaselineConfig {
    BaselineAlgorithm algorithm = BaselineAlgorithm::PaprTr;
    double stop_delta = 0.01;
    int max_iters = 100;
    double v_sat = 0.0;    ///< NCC-TR clipping threshold V
    double ncc_step = 1.0; ///< NCC-TR multiplier on the line-optimal step (< 1 damps)
    double papr_gap = 1e-3; ///< PAPR-TR: barrier duality gap relative to the peak power

    void validate() const;
};

/// Minimizes max_n |y_n| over the TR symbols with a log-barrier method on the
/// epigraph form  min s  s.t. |y_n|^2 <= s. For each d the barrier
/// tau s - sum_n log(s - |y_n|^2) is minimized over s exactly (a 1-D root), and
/// each iteration is one damped Newton step in d on the reduced barrier; the
/// d-block is the FFT-structured Hessian, solved by Cholesky with a Schur
/// correction for s. Stops when the barrier gap is below papr_gap * s and
/// max_l |d_l(k) - d_l(k-1)| < stop_delta. Returns the lowest-peak iterate seen,
/// so the peak never exceeds that of the starting point.
std::pair<FreqSymbol, SolverDiagnostics> solve_papr_tr(const SystemConfig& cfg, const FreqSymbol& sym,
                                                       const BaselineConfig& config);

/// Clipping-noise projection: clip y at V, take the DFT of the clipping noise on
/// the reserved tones and move d_TR against it with the step that minimizes the
/// linearized clipped power (times ncc_step). Stops when
/// no sample exceeds V or max_l |change| < stop_delta. Records theta per iteration.
std::pair<FreqSymbol, SolverDiagnostics> solve_ncc_tr(const SystemConfig& cfg, const FreqSymbol& sym,
                                                      const BaselineConfig& config);

/// Per-iteration operation counts for the baselines; theta is ignored for PAPR-TR, beta for NCC-TR.
OpCount count_ops_baseline(BaselineAlgorithm algorithm, int n_fft, int beta, int theta);

} // namespace tropt
