#include "tropt/actr.hpp"

#include "tropt/derivatives.hpp"
#include "tropt/errors.hpp"

#include <algorithm>
#include <cmath>

namespace tropt {

namespace {

constexpr int kMaxHalvings = 20;

// Costs charged per kernel (real operations). The weight pass is split into the
// part shared with an objective evaluation (|y|^2, b, b^(-1/2p), accumulation) and
// the remainder that completes Gamma and Lambda.
OpCount objective_pass_ops(int n) { return 10 * static_cast<OpCount>(n); }
OpCount weight_completion_ops(int n) { return 10 * static_cast<OpCount>(n); }

struct SampleTerms {
    double a1;      // b^(-1/2p)
    double a2;      // b^(-1/2p - 1)
    double inv_b;   // b^-1
    double b;
    double r_pm1_a2; // (|y|^2 / V^2)^(p-1) * a2
};

// All powers go through logarithms so that samples far above V stay finite.
SampleTerms sample_terms(const RappPa& pa, double q)
{
    const double p = pa.p;
    const double r = q / (pa.v_sat * pa.v_sat);
    if (r == 0.0) {
        return {1.0, 1.0, 1.0, 1.0, p == 1.0 ? 1.0 : 0.0};
    }
    const double lr = std::log(r);
    const double lt = p * lr;
    const double log_b = lt > 35.0 ? lt + std::log1p(std::exp(-lt)) : std::log1p(std::exp(lt));
    const double a1 = std::exp(-log_b / (2.0 * p));
    const double inv_b = std::exp(-log_b);
    return {a1, a1 * inv_b, inv_b, std::exp(log_b),
            std::exp((p - 1.0) * lr - log_b * (1.0 + 1.0 / (2.0 * p)))};
}

void check_model(const RappPa& pa)
{
    pa.validate();
    if (pa.p < 1.0 || pa.is_soft_limiter()) {
        throw ConfigError("AC-TR needs a finite Rapp model with p >= 1");
    }
}

} // namespace

void AcTrConfig::validate() const
{
    if (!(k_param >= 1.0)) {
        throw ConfigError("K must be >= 1 for the objective to be convex");
    }
    if (!(stop_delta > 0.0)) {
        throw ConfigError("stop_delta must be positive");
    }
    if (max_iters < 1) {
        throw ConfigError("max_iters must be positive");
    }
}

double objective_core(const SystemConfig& cfg, const RappPa& pa, std::span<const cplx> y, double k_param)
{
    if (y.size() != static_cast<std::size_t>(cfg.n_fft)) {
        throw ConfigError("objective expects N core samples");
    }
    double f = 0.0;
    for (int n = 0; n < cfg.n_fft; ++n) {
        const double q = std::norm(y[static_cast<std::size_t>(n)]);
        const double e = sample_terms(pa, q).a1 - k_param;
        f += cp_multiplicity(n, cfg.n_fft, cfg.n_cp) * q * e * e;
    }
    return f;
}

double objective(const SystemConfig& cfg, const RappPa& pa, const TimeFrame& frame, double k_param)
{
    if (frame.n_cp != cfg.n_cp || frame.n_fft() != cfg.n_fft) {
        throw ConfigError("frame does not match the system configuration");
    }
    return objective_core(cfg, pa, frame.core(), k_param);
}

double per_sample_slope(const RappPa& pa, double q, double k_param)
{
    const auto t = sample_terms(pa, q);
    return (k_param - t.a1) * (k_param - t.a2);
}

SampleWeights gamma_lambda(const SystemConfig& cfg, const RappPa& pa, std::span<const cplx> y, double k_param)
{
    if (y.size() != static_cast<std::size_t>(cfg.n_fft)) {
        throw ConfigError("weights expect N core samples");
    }
    const double p = pa.p;
    const double v2 = pa.v_sat * pa.v_sat;
    SampleWeights w;
    w.b.resize(y.size());
    w.gamma.resize(y.size());
    w.lambda.resize(y.size());
    for (int n = 0; n < cfg.n_fft; ++n) {
        const auto i = static_cast<std::size_t>(n);
        const auto t = sample_terms(pa, std::norm(y[i]));
        const double c = 2.0 * cp_multiplicity(n, cfg.n_fft, cfg.n_cp);
        w.b[i] = t.b;
        w.gamma[i] = c * (k_param - t.a1) * (k_param - t.a2);
        // c / V^2p |y|^(2p-2) = c / V^2 (|y|^2/V^2)^(p-1)
        w.lambda[i] = (c / v2) * t.r_pm1_a2 *
                      (k_param - t.a2 + (1.0 + 2.0 * p) * t.inv_b * (k_param - t.a1));
    }
    return w;
}

Eigen::VectorXd jacobian_fast(const SystemConfig& cfg, const NewtonWorkspace& ws)
{
    return weighted_jacobian_fast(cfg.tr_indices, ws.y, ws.weights.gamma);
}

Eigen::VectorXd jacobian_direct(const SystemConfig& cfg, const NewtonWorkspace& ws)
{
    return weighted_jacobian_direct(cfg.tr_indices, ws.y, ws.weights.gamma);
}

Eigen::MatrixXd hessian_fast(const SystemConfig& cfg, const NewtonWorkspace& ws)
{
    return weighted_hessian_fast(cfg.tr_indices, ws.y, ws.weights.gamma, ws.weights.lambda);
}

Eigen::MatrixXd hessian_direct(const SystemConfig& cfg, const NewtonWorkspace& ws)
{
    return weighted_hessian_direct(cfg.tr_indices, ws.y, ws.weights.gamma, ws.weights.lambda);
}

AcTrSolver::AcTrSolver(SystemConfig cfg, RappPa pa, AcTrConfig config)
    : cfg_(std::move(cfg)), pa_(pa), config_(config)
{
    cfg_.validate();
    config_.validate();
    check_model(pa_);
}

void AcTrSolver::refresh_weights()
{
    ws_.weights = gamma_lambda(cfg_, pa_, ws_.y, config_.k_param);
    ws_.objective = objective_core(cfg_, pa_, ws_.y, config_.k_param);
}

void AcTrSolver::reset(const FreqSymbol& sym)
{
    const TimeFrame frame = modulate(cfg_, sym);
    ws_ = NewtonWorkspace{};
    ws_.d_tr = sym.d_tr;
    ws_.y.assign(frame.core().begin(), frame.core().end());
    refresh_weights();
    if (config_.line_search) {
        ws_.ops.add(objective_pass_ops(cfg_.n_fft));
    }
}

void AcTrSolver::assemble()
{
    const int n = cfg_.n_fft;
    const int beta = static_cast<int>(cfg_.beta());
    const OpCount nn = n;
    // With line search the objective pass at this iterate was already charged.
    ws_.ops.add(weight_completion_ops(n) + (config_.line_search ? 0 : objective_pass_ops(n)));
    if (config_.hessian_mode == HessianMode::FastFft) {
        ws_.jacobian = jacobian_fast(cfg_, ws_);
        ws_.ops.add(2 * nn + split_radix_complex_ops(n));
        ws_.hessian = hessian_fast(cfg_, ws_);
        ws_.ops.add(6 * nn * log2_exact(n) + nn + 12);
        ws_.ops.add(static_cast<OpCount>(beta) * (beta + 1) + static_cast<OpCount>(beta) * beta);
    } else {
        ws_.jacobian = jacobian_direct(cfg_, ws_);
        ws_.ops.add(8 * nn * beta);
        ws_.hessian = hessian_direct(cfg_, ws_);
        ws_.ops.add(18 * nn * beta * beta);
    }
}

NewtonStepResult AcTrSolver::newton_step()
{
    const int n = cfg_.n_fft;
    const int beta = static_cast<int>(cfg_.beta());
    NewtonStepResult result;
    result.step = Eigen::VectorXd::Zero(2 * beta);
    if (beta == 0 || ws_.jacobian.lpNorm<Eigen::Infinity>() == 0.0) {
        result.zero_gradient = true;
        return result;
    }

    const CholeskySolve solved = cholesky_solve(ws_.hessian, ws_.jacobian);
    ws_.ops.add(cholesky_ops(beta) + substitution_ops(beta));
    if (solved.regularized) {
        ws_.ops.add(cholesky_ops(beta));
        result.regularized = true;
    }

    const CVec delta_d = unstack_complex(-solved.solution);
    const CVec delta_y = tr_waveform(cfg_, delta_d);
    ws_.ops.add(split_radix_complex_ops(n) + 2 * static_cast<OpCount>(n));

    double full_change = 0.0;
    for (const auto& v : delta_d) {
        full_change = std::max(full_change, std::abs(v));
    }

    double t = 1.0;
    double f_trial = 0.0;
    CVec trial(ws_.y.size());
    for (;;) {
        for (std::size_t i = 0; i < trial.size(); ++i) {
            trial[i] = ws_.y[i] + t * delta_y[i];
        }
        if (!config_.line_search) {
            break;
        }
        f_trial = objective_core(cfg_, pa_, trial, config_.k_param);
        ws_.ops.add(objective_pass_ops(n));
        if (f_trial <= ws_.objective) {
            break;
        }
        if (result.halvings == kMaxHalvings) {
            result.accepted = false;
            result.max_change = full_change;
            return result;
        }
        t *= 0.5;
        ++result.halvings;
        ws_.ops.add(2 * static_cast<OpCount>(n));
    }

    for (std::size_t l = 0; l < ws_.d_tr.size(); ++l) {
        ws_.d_tr[l] += t * delta_d[l];
    }
    ws_.y = std::move(trial);
    if (config_.line_search) {
        ws_.weights = gamma_lambda(cfg_, pa_, ws_.y, config_.k_param);
        ws_.objective = f_trial;
    } else {
        refresh_weights();
    }
    result.step = -t * solved.solution;
    result.max_change = t * full_change;
    return result;
}

std::pair<FreqSymbol, SolverDiagnostics> AcTrSolver::solve(const FreqSymbol& sym)
{
    reset(sym);
    SolverDiagnostics diag;
    diag.objective_trace.push_back(ws_.objective);
    for (int it = 1; it <= config_.max_iters; ++it) {
        ws_.iter = it;
        assemble();
        const NewtonStepResult step = newton_step();
        diag.iterations = it;
        if (step.zero_gradient) {
            diag.converged = true;
            break;
        }
        diag.backtracks += step.halvings;
        diag.regularized_steps += step.regularized ? 1 : 0;
        if (!step.accepted) {
            // No decrease along the Newton direction: only a numerically converged point
            // counts as a success.
            ++diag.rejected_steps;
            diag.converged = step.max_change < config_.stop_delta;
            break;
        }
        diag.objective_trace.push_back(ws_.objective);
        if (step.max_change < config_.stop_delta) {
            diag.converged = true;
            break;
        }
    }

    FreqSymbol out = sym;
    out.d_tr = ws_.d_tr;
    diag.final_objective = ws_.objective;
    diag.final_grad_inf = cfg_.beta() == 0
                              ? 0.0
                              : jacobian_fast(cfg_, ws_).lpNorm<Eigen::Infinity>();
    diag.ops_counted = ws_.ops.total();
    diag.ops_formula = diag.iterations * count_ops_ac_tr(cfg_.n_fft, static_cast<int>(cfg_.beta()));
    return {std::move(out), std::move(diag)};
}

std::pair<FreqSymbol, SolverDiagnostics> solve_ac_tr(const SystemConfig& cfg, const RappPa& pa,
                                                     const FreqSymbol& sym, const AcTrConfig& config)
{
    AcTrSolver solver(cfg, pa, config);
    return solver.solve(sym);
}

} // namespace tropt
