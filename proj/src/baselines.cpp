#include "tropt/baselines.hpp"

#include "tropt/derivatives.hpp"
#include "tropt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace tropt {

namespace {

constexpr double kCenteringTol = 1e-4; // half squared Newton decrement
constexpr double kBarrierGrowth = 10.0;
constexpr double kArmijo = 0.25;
constexpr int kMaxHalvings = 60;

double peak_power(std::span<const cplx> y)
{
    double peak = 0.0;
    for (const auto& v : y) {
        peak = std::max(peak, std::norm(v));
    }
    return peak;
}

CVec core_of(const SystemConfig& cfg, const FreqSymbol& sym)
{
    const TimeFrame frame = modulate(cfg, sym);
    return CVec(frame.core().begin(), frame.core().end());
}

// Barrier value tau s - sum log(s - |y|^2); +inf outside the domain.
double barrier_value(std::span<const cplx> y, double s, double tau)
{
    double value = tau * s;
    for (const auto& v : y) {
        const double r = s - std::norm(v);
        if (!(r > 0.0)) {
            return std::numeric_limits<double>::infinity();
        }
        value -= std::log(r);
    }
    return value;
}

// The s minimizing tau s - sum log(s - |y|^2) for fixed y: the root of
// sum 1/(s - |y|^2) = tau above the peak. Newton from the left side of the
// root (where the sum exceeds tau) increases monotonically to it.
struct CenteredS {
    double s;
    int sweeps;
};

CenteredS centered_s(std::span<const cplx> y, double tau)
{
    const double peak = peak_power(y);
    double s = peak + 1.0 / tau;
    int sweeps = 0;
    for (; sweeps < 100; ++sweeps) {
        double g = -tau;
        double dg = 0.0;
        for (const auto& v : y) {
            const double inv = 1.0 / (s - std::norm(v));
            g += inv;
            dg += inv * inv;
        }
        const double step = g / dg;
        s += step;
        if (step <= 1e-15 * s) {
            break;
        }
    }
    return {s, sweeps + 1};
}

} // namespace

void BaselineConfig::validate() const
{
    if (!(stop_delta > 0.0)) {
        throw ConfigError("stop_delta must be positive");
    }
    if (max_iters < 1) {
        throw ConfigError("max_iters must be positive");
    }
    if (algorithm == BaselineAlgorithm::NccTr && !(v_sat > 0.0)) {
        throw ConfigError("NCC-TR needs a positive clipping threshold");
    }
    if (!(ncc_step > 0.0) || !(papr_gap > 0.0)) {
        throw ConfigError("ncc_step and papr_gap must be positive");
    }
}

OpCount count_ops_baseline(BaselineAlgorithm algorithm, int n_fft, int beta, int theta)
{
    return algorithm == BaselineAlgorithm::PaprTr ? count_ops_papr_tr(n_fft, beta) : count_ops_ncc_tr(n_fft, theta);
}

std::pair<FreqSymbol, SolverDiagnostics> solve_papr_tr(const SystemConfig& cfg, const FreqSymbol& sym,
                                                       const BaselineConfig& config)
{
    cfg.validate();
    config.validate();
    const int n = cfg.n_fft;
    const OpCount nn = n;
    const int beta = static_cast<int>(cfg.beta());
    std::span<const int> tones = cfg.tr_indices;

    SolverDiagnostics diag;
    FreqSymbol out = sym;
    CVec y = core_of(cfg, sym);
    CVec d = sym.d_tr;
    const double start_peak = peak_power(y);
    diag.objective_trace.push_back(start_peak);
    if (beta == 0 || start_peak == 0.0) {
        diag.converged = true;
        diag.final_objective = start_peak;
        return {out, diag};
    }

    CVec best_d = d;
    double best_peak = start_peak;

    // Epigraph variable s is eliminated: for every d it sits at its barrier
    // minimizer, so Newton runs on d alone with the Schur-reduced Hessian.
    double s = 1.1 * start_peak;
    double tau = 0.0;
    for (const auto& v : y) {
        tau += 1.0 / (s - std::norm(v));
    }

    OpCounter ops;
    auto centre = [&](std::span<const cplx> sig) {
        const CenteredS c = centered_s(sig, tau);
        ops.add(5 * nn * c.sweeps);
        return c.s;
    };
    s = centre(y);

    std::vector<double> gamma(y.size()), lambda(y.size()), cross(y.size());
    for (int it = 1; it <= config.max_iters; ++it) {
        diag.iterations = it;
        double inv_sq_sum = 0.0;
        for (std::size_t k = 0; k < y.size(); ++k) {
            const double inv = 1.0 / (s - std::norm(y[k]));
            gamma[k] = 2.0 * inv;
            lambda[k] = 4.0 * inv * inv;
            cross[k] = -2.0 * inv * inv;
            inv_sq_sum += inv * inv;
        }
        ops.add(10 * nn);

        const Eigen::VectorXd grad_d = weighted_jacobian_fast(tones, y, gamma);
        ops.add(2 * nn + split_radix_complex_ops(n));
        const Eigen::MatrixXd h_dd = weighted_hessian_fast(tones, y, gamma, lambda);
        ops.add(6 * nn * log2_exact(n) + nn + 12 + OpCount{beta} * (beta + 1) + OpCount{beta} * beta);
        const Eigen::VectorXd h_ds = weighted_jacobian_fast(tones, y, cross);
        ops.add(2 * nn + split_radix_complex_ops(n));

        // Reduced Hessian h_dd - h_ds h_ds^T / h_ss through one factorization of h_dd.
        Eigen::MatrixXd rhs(2 * beta, 2);
        rhs.col(0) = grad_d;
        rhs.col(1) = h_ds;
        const CholeskyMultiSolve solved = cholesky_solve(h_dd, rhs);
        const Eigen::MatrixXd& z = solved.solution;
        ops.add(cholesky_ops(beta) + 2 * substitution_ops(beta) + 8 * OpCount{beta} + 6);
        if (solved.regularized) {
            ++diag.regularized_steps;
            ops.add(cholesky_ops(beta));
        }
        const double schur = inv_sq_sum - h_ds.dot(z.col(1));
        const double delta_s = h_ds.dot(z.col(0)) / schur;
        const Eigen::VectorXd delta_stacked = -z.col(0) - z.col(1) * delta_s;
        const double decrement_sq = -grad_d.dot(delta_stacked);

        const CVec delta_d = unstack_complex(delta_stacked);
        const CVec delta_y = tr_waveform(cfg, delta_d);
        ops.add(split_radix_complex_ops(n) + 2 * nn);

        const double phi0 = barrier_value(y, s, tau);
        double t = 1.0;
        double s_trial = s;
        CVec trial(y.size());
        bool accepted = false;
        for (int halving = 0; halving <= kMaxHalvings; ++halving) {
            for (std::size_t k = 0; k < y.size(); ++k) {
                trial[k] = y[k] + t * delta_y[k];
            }
            ops.add(2 * nn);
            s_trial = centre(trial);
            if (barrier_value(trial, s_trial, tau) <= phi0 - kArmijo * t * decrement_sq) {
                accepted = true;
                break;
            }
            t *= 0.5;
            ++diag.backtracks;
        }
        if (!accepted) {
            ++diag.rejected_steps;
            diag.converged = decrement_sq / 2.0 <= kCenteringTol && n / tau <= config.papr_gap * s;
            break;
        }

        double change = 0.0;
        for (std::size_t l = 0; l < d.size(); ++l) {
            d[l] += t * delta_d[l];
            change = std::max(change, t * std::abs(delta_d[l]));
        }
        y.swap(trial);
        s = s_trial;

        const double peak = peak_power(y);
        diag.objective_trace.push_back(peak);
        if (peak < best_peak) {
            best_peak = peak;
            best_d = d;
        }

        if (decrement_sq / 2.0 <= kCenteringTol) {
            if (n / tau <= config.papr_gap * s) {
                if (change < config.stop_delta) {
                    diag.converged = true;
                    break;
                }
            } else {
                tau *= kBarrierGrowth;
                s = centre(y);
            }
        }
    }

    out.d_tr = best_d;
    diag.final_objective = best_peak;
    diag.ops_counted = ops.total();
    diag.ops_formula = diag.iterations * count_ops_papr_tr(n, beta);
    return {out, diag};
}

std::pair<FreqSymbol, SolverDiagnostics> solve_ncc_tr(const SystemConfig& cfg, const FreqSymbol& sym,
                                                      const BaselineConfig& config)
{
    cfg.validate();
    config.validate();
    const int n = cfg.n_fft;
    const double v = config.v_sat;

    SolverDiagnostics diag;
    FreqSymbol out = sym;
    CVec y = core_of(cfg, sym);
    CVec d = sym.d_tr;
    CVec noise(y.size());

    auto clipped_power = [&](std::span<const cplx> sig) {
        double acc = 0.0;
        for (const auto& s : sig) {
            const double excess = std::abs(s) - v;
            if (excess > 0.0) acc += excess * excess;
        }
        return acc;
    };
    diag.objective_trace.push_back(clipped_power(y));

    for (int it = 1; it <= config.max_iters; ++it) {
        diag.iterations = it;
        int theta = 0;
        for (std::size_t k = 0; k < y.size(); ++k) {
            const double r = std::abs(y[k]);
            if (r > v) {
                noise[k] = y[k] * ((r - v) / r);
                ++theta;
            } else {
                noise[k] = cplx{};
            }
        }
        diag.theta_trace.push_back(theta);
        diag.ops_counted += count_ops_ncc_tr(n, theta);
        diag.ops_formula += count_ops_ncc_tr(n, theta);
        if (theta == 0 || cfg.beta() == 0) {
            diag.converged = true;
            break;
        }

        // Descent direction: clipping noise projected on the reserved tones. The step
        // minimizes the linearized clipped power over the clipped samples.
        const CVec spectrum = dft(noise);
        CVec delta = gather_bins(spectrum, cfg.tr_indices);
        const CVec direction = tr_waveform(cfg, delta);
        double num = 0.0;
        double den = 0.0;
        for (std::size_t k = 0; k < y.size(); ++k) {
            if (noise[k] == cplx{}) continue;
            const double r = std::abs(y[k]);
            const double radial = (std::conj(y[k]) * direction[k]).real() / r;
            num += (r - v) * radial;
            den += radial * radial;
        }
        const double mu = den > 0.0 ? config.ncc_step * num / den : 0.0;
        double change = 0.0;
        for (std::size_t l = 0; l < delta.size(); ++l) {
            delta[l] *= -mu;
            d[l] += delta[l];
            change = std::max(change, std::abs(delta[l]));
        }
        for (std::size_t k = 0; k < y.size(); ++k) {
            y[k] -= mu * direction[k];
        }
        diag.objective_trace.push_back(clipped_power(y));
        if (change < config.stop_delta) {
            diag.converged = true;
            break;
        }
    }

    out.d_tr = d;
    diag.final_objective = diag.objective_trace.back();
    return {out, diag};
}

} // namespace tropt
