#pragma once

#include "tropt/ofdm.hpp"
#include "tropt/op_count.hpp"
#include "tropt/pa_model.hpp"

#include <Eigen/Dense>

#include <span>
#include <utility>
#include <vector>

namespace tropt {

enum class HessianMode { FastFft, Direct };

struct AcTrConfig {
    double k_param = 1.0;  ///< K >= 1 keeps the objective convex
    double stop_delta = 0.01;
    int max_iters = 50;
    HessianMode hessian_mode = HessianMode::FastFft;
    bool line_search = true;

    void validate() const;
};

/// Flat per-symbol record shared by AC-TR and the baselines.
struct SolverDiagnostics {
    int iterations = 0;
    OpCount ops_counted = 0;
    OpCount ops_formula = 0;
    double final_objective = 0.0;
    double final_grad_inf = 0.0;
    bool converged = false;
    int regularized_steps = 0;
    int rejected_steps = 0;  ///< Newton steps abandoned after exhausting the line search
    int backtracks = 0;      ///< step halvings over all iterations
    std::vector<double> objective_trace; ///< start value, then one entry per accepted step
    std::vector<int> theta_trace;        ///< clipped-sample count per iteration (NCC-TR)
};

/// Objective multiplicity of core sample n: 2 for the samples repeated in the CP, else 1.
inline int cp_multiplicity(int n, int n_fft, int n_cp) noexcept { return n >= n_fft - n_cp ? 2 : 1; }

/// f = sum over the whole frame (CP included) of |y~_n - K y_n|^2, evaluated on the
/// N core samples with the CP-mirrored tail counted twice.
double objective_core(const SystemConfig& cfg, const RappPa& pa, std::span<const cplx> y, double k_param);
double objective(const SystemConfig& cfg, const RappPa& pa, const TimeFrame& frame, double k_param);

struct SampleWeights {
    std::vector<double> b;      ///< 1 + |y|^2p / V^2p
    std::vector<double> gamma;  ///< first-derivative weights (with CP factor 2 or 4)
    std::vector<double> lambda; ///< second-derivative weights (with CP factor 2 or 4)
};

SampleWeights gamma_lambda(const SystemConfig& cfg, const RappPa& pa, std::span<const cplx> y, double k_param);

/// Derivative of the per-sample objective q (b(q)^(-1/2p) - K)^2 with respect to q = |y|^2.
double per_sample_slope(const RappPa& pa, double q, double k_param);

/// Solver state for one OFDM symbol.
struct NewtonWorkspace {
    CVec d_tr;            ///< current iterate
    CVec y;               ///< core time samples n = 0..N-1 at the iterate
    SampleWeights weights;
    double objective = 0.0;
    Eigen::VectorXd jacobian; ///< [q; w]
    Eigen::MatrixXd hessian;  ///< [[A, B], [C, D]]
    int iter = 0;
    OpCounter ops;
};

Eigen::VectorXd jacobian_fast(const SystemConfig& cfg, const NewtonWorkspace& ws);
Eigen::VectorXd jacobian_direct(const SystemConfig& cfg, const NewtonWorkspace& ws);
Eigen::MatrixXd hessian_fast(const SystemConfig& cfg, const NewtonWorkspace& ws);
Eigen::MatrixXd hessian_direct(const SystemConfig& cfg, const NewtonWorkspace& ws);

struct NewtonStepResult {
    Eigen::VectorXd step;    ///< applied change in [Re d; Im d]
    double max_change = 0.0; ///< max_l |d_l(new) - d_l(old)|
    bool zero_gradient = false;
    bool accepted = true;
    bool regularized = false;
    int halvings = 0;
};

/// Newton iteration for one symbol. Not shareable while solving; construct one
/// per thread. Configuration and PA model are copied and immutable.
class AcTrSolver {
public:
    /// Requires 1 <= pa.p < infinity; throws ConfigError otherwise.
    AcTrSolver(SystemConfig cfg, RappPa pa, AcTrConfig config);

    /// Loads the symbol and evaluates the objective at its TR vector.
    void reset(const FreqSymbol& sym);

    /// Builds the Jacobian and Hessian at the current iterate.
    void assemble();

    /// Solves H delta = grad by Cholesky, moves to d - delta (with backtracking if enabled)
    /// and refreshes the sample weights at the new iterate. Call assemble() first.
    NewtonStepResult newton_step();

    std::pair<FreqSymbol, SolverDiagnostics> solve(const FreqSymbol& sym);

    const NewtonWorkspace& workspace() const noexcept { return ws_; }

private:
    void refresh_weights();

    SystemConfig cfg_;
    RappPa pa_;
    AcTrConfig config_;
    NewtonWorkspace ws_;
};

std::pair<FreqSymbol, SolverDiagnostics> solve_ac_tr(const SystemConfig& cfg, const RappPa& pa,
                                                     const FreqSymbol& sym, const AcTrConfig& config);

} // namespace tropt
