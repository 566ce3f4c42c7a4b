#include "tropt/validate.hpp"

#include "tropt/baselines.hpp"
#include "tropt/derivatives.hpp"
#include "tropt/dft.hpp"
#include "tropt/experiments.hpp"
#include "tropt/op_count.hpp"

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace tropt {

namespace {

double rel_inf(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    const double scale = b.cwiseAbs().maxCoeff();
    const double diff = (a - b).cwiseAbs().maxCoeff();
    return scale > 0.0 ? diff / scale : diff;
}

NewtonWorkspace workspace_at(const SystemConfig& cfg, const RandomState& st, double k_param)
{
    AcTrConfig config;
    config.k_param = k_param;
    AcTrSolver solver(cfg, st.pa, config);
    solver.reset(st.sym);
    solver.assemble();
    return solver.workspace();
}

double objective_at(const SystemConfig& cfg, const RappPa& pa, const FreqSymbol& base, const Eigen::VectorXd& x,
                    double k_param)
{
    FreqSymbol sym = base;
    sym.d_tr = unstack_complex(x);
    const TimeFrame frame = modulate(cfg, sym);
    return objective_core(cfg, pa, frame.core(), k_param);
}

Eigen::VectorXd jacobian_at(const SystemConfig& cfg, const RandomState& st, const Eigen::VectorXd& x,
                            double k_param)
{
    RandomState moved = st;
    moved.sym.d_tr = unstack_complex(x);
    return workspace_at(cfg, moved, k_param).jacobian;
}

CheckResult check(std::string name, bool passed, std::string detail)
{
    return {std::move(name), passed, std::move(detail)};
}

CheckResult check_dft_round_trip()
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    CVec x(256);
    for (auto& v : x) v = {g(rng), g(rng)};
    const CVec back = idft(dft(x));
    double err = 0.0;
    double e_time = 0.0;
    double e_freq = 0.0;
    const CVec spectrum = dft(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
        err = std::max(err, std::abs(back[i] - x[i]));
        e_time += std::norm(x[i]);
        e_freq += std::norm(spectrum[i]);
    }
    const double parseval = std::abs(e_time - e_freq) / e_time;
    return check("dft round trip and Parseval", err < 1e-12 && parseval < 1e-12,
                 fmt::format("round-trip {:.2e}, energy {:.2e}", err, parseval));
}

CheckResult check_cyclic_prefix()
{
    const SystemConfig cfg = default_paper_config();
    SymbolStream stream(3, 0);
    const TimeFrame frame = modulate(cfg, random_frame(cfg, stream));
    double err = 0.0;
    for (int n = -cfg.n_cp; n < 0; ++n) {
        err = std::max(err, std::abs(frame.at(n) - frame.at(n + cfg.n_fft)));
    }
    return check("cyclic prefix copies the symbol tail", err == 0.0, fmt::format("max diff {:.2e}", err));
}

CheckResult check_tr_linearity()
{
    const SystemConfig cfg = toy_config();
    const RandomState st = random_state(cfg, 4.0, 5, 0);
    const TimeFrame full = modulate(cfg, st.sym);
    const TimeFrame data = data_waveform(cfg, st.sym);
    const CVec tr = tr_waveform(cfg, st.sym.d_tr);
    double err = 0.0;
    for (int n = 0; n < cfg.n_fft; ++n) {
        err = std::max(err, std::abs(full.at(n) - data.at(n) - tr[static_cast<std::size_t>(n)]));
    }
    return check("time signal splits into data and TR parts", err < 1e-12, fmt::format("max diff {:.2e}", err));
}

CheckResult check_fast_direct()
{
    const SystemConfig cfg = toy_config();
    double worst_j = 0.0;
    double worst_h = 0.0;
    for (double p : {2.0, 4.0, 10.0}) {
        const auto agree = compare_fast_direct(cfg, p, 1.0, 20, 17);
        worst_j = std::max(worst_j, agree.jacobian_rel);
        worst_h = std::max(worst_h, agree.hessian_rel);
    }
    return check("FFT derivatives match direct sums", worst_j < 1e-9 && worst_h < 1e-9,
                 fmt::format("jacobian {:.2e}, hessian {:.2e}", worst_j, worst_h));
}

CheckResult check_convexity()
{
    const SystemConfig cfg = toy_config();
    double worst = 1.0;
    for (double k : {1.0, 1.5}) {
        for (double p : {2.0, 4.0, 10.0}) {
            worst = std::min(worst, min_hessian_eigen_ratio(cfg, p, k, 20, 23));
        }
    }
    return check("Hessian positive semidefinite for K in {1, 1.5}", worst >= -1e-8,
                 fmt::format("min eigen ratio {:.3e}", worst));
}

CheckResult check_finite_differences()
{
    const SystemConfig cfg = toy_config();
    double worst_j = 0.0;
    double worst_h = 0.0;
    for (double p : {2.0, 4.0, 10.0}) {
        const auto agree = compare_finite_differences(cfg, p, 1.0, 5, 29);
        worst_j = std::max(worst_j, agree.jacobian_rel);
        worst_h = std::max(worst_h, agree.hessian_rel);
    }
    return check("derivatives match finite differences", worst_j < 1e-5 && worst_h < 1e-4,
                 fmt::format("jacobian {:.2e}, hessian {:.2e}", worst_j, worst_h));
}

CheckResult check_lambda()
{
    std::mt19937_64 rng(31);
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    std::vector<cplx> samples(200000);
    for (auto& s : samples) s = {g(rng), g(rng)};
    double worst = 0.0;
    for (double p : {4.0, 10.0, std::numeric_limits<double>::infinity()}) {
        for (double ibo_db : {4.0, 8.0}) {
            const RappPa pa{p, std::sqrt(db_to_linear(ibo_db)), 1.0};
            cplx num = 0.0;
            double den = 0.0;
            for (const auto& s : samples) {
                const cplx out = pa.is_soft_limiter() ? (std::abs(s) > pa.v_sat ? s * (pa.v_sat / std::abs(s)) : s)
                                                      : rapp_sample(pa, s);
                num += out * std::conj(s);
                den += std::norm(s);
            }
            worst = std::max(worst, std::abs((num / den).real() - lambda_analytic(p, ibo_db)));
        }
    }
    return check("lambda quadrature matches Rayleigh Monte Carlo", worst < 3e-3, fmt::format("max diff {:.2e}", worst));
}

CheckResult check_op_formulas()
{
    const bool ok = count_ops_ac_tr(1024, 11) == 161716 && count_ops_papr_tr(1024, 11) == 160327 &&
                    count_ops_ncc_tr(1024, 0) == 81933 && split_radix_complex_ops(1024) == 34824;
    return check("operation count closed forms", ok,
                 fmt::format("ac_tr {}, papr_tr {}, ncc_tr {}", count_ops_ac_tr(1024, 11), count_ops_papr_tr(1024, 11),
                             count_ops_ncc_tr(1024, 0)));
}

CheckResult check_solver_run()
{
    const SystemConfig cfg = default_paper_config();
    const double sigma2 = static_cast<double>(cfg.alpha()) / cfg.n_fft;
    const RappPa pa{4.0, std::sqrt(db_to_linear(6.0) * sigma2), 1.0};
    bool ok = true;
    std::string detail;
    for (std::uint64_t i = 0; i < 3; ++i) {
        SymbolStream stream(41, i);
        const FreqSymbol sym = random_frame(cfg, stream);
        const auto [out, diag] = solve_ac_tr(cfg, pa, sym, AcTrConfig{});
        const bool same_data = out.d_dc == sym.d_dc;
        const bool monotone = std::is_sorted(diag.objective_trace.rbegin(), diag.objective_trace.rend());
        ok = ok && same_data && monotone && diag.converged;
        detail += fmt::format("{}{} iters", i ? ", " : "", diag.iterations);
    }
    return check("AC-TR keeps data, descends and converges", ok, detail);
}

} // namespace

SystemConfig toy_config()
{
    SystemConfig cfg;
    cfg.n_fft = 64;
    cfg.n_cp = 8;
    cfg.tr_indices = {-7, 3, 9};
    for (int k = -10; k <= 10; ++k) {
        if (k != 0 && std::find(cfg.tr_indices.begin(), cfg.tr_indices.end(), k) == cfg.tr_indices.end()) {
            cfg.data_indices.push_back(k);
        }
    }
    return cfg;
}

RandomState random_state(const SystemConfig& cfg, double p, std::uint64_t seed, std::uint64_t index)
{
    SymbolStream stream(seed, index);
    RandomState st;
    st.sym = random_frame(cfg, stream);
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    for (auto& d : st.sym.d_tr) d = {g(stream.engine()), g(stream.engine())};
    std::uniform_real_distribution<double> ibo(0.0, 8.0);
    const double sigma2 = static_cast<double>(cfg.alpha()) / cfg.n_fft;
    st.pa = RappPa{p, std::sqrt(db_to_linear(ibo(stream.engine())) * sigma2), 1.0};
    return st;
}

DerivativeAgreement compare_fast_direct(const SystemConfig& cfg, double p, double k_param, int n_states,
                                        std::uint64_t seed)
{
    DerivativeAgreement worst;
    for (int i = 0; i < n_states; ++i) {
        const NewtonWorkspace ws = workspace_at(cfg, random_state(cfg, p, seed, static_cast<std::uint64_t>(i)), k_param);
        worst.jacobian_rel = std::max(worst.jacobian_rel, rel_inf(jacobian_fast(cfg, ws), jacobian_direct(cfg, ws)));
        worst.hessian_rel = std::max(worst.hessian_rel, rel_inf(hessian_fast(cfg, ws), hessian_direct(cfg, ws)));
    }
    return worst;
}

DerivativeAgreement compare_finite_differences(const SystemConfig& cfg, double p, double k_param, int n_states,
                                               std::uint64_t seed)
{
    DerivativeAgreement worst;
    for (int i = 0; i < n_states; ++i) {
        const RandomState st = random_state(cfg, p, seed, static_cast<std::uint64_t>(i));
        const NewtonWorkspace ws = workspace_at(cfg, st, k_param);
        const Eigen::VectorXd x0 = stack_complex(st.sym.d_tr);
        const Eigen::Index dim = x0.size();
        Eigen::VectorXd fd_grad(dim);
        Eigen::MatrixXd fd_hess(dim, dim);
        const double h = 1e-5;
        for (Eigen::Index j = 0; j < dim; ++j) {
            Eigen::VectorXd xp = x0;
            Eigen::VectorXd xm = x0;
            xp(j) += h;
            xm(j) -= h;
            fd_grad(j) = (objective_at(cfg, st.pa, st.sym, xp, k_param) - objective_at(cfg, st.pa, st.sym, xm, k_param)) /
                         (2.0 * h);
            fd_hess.col(j) = (jacobian_at(cfg, st, xp, k_param) - jacobian_at(cfg, st, xm, k_param)) / (2.0 * h);
        }
        worst.jacobian_rel = std::max(worst.jacobian_rel, rel_inf(ws.jacobian, fd_grad));
        worst.hessian_rel = std::max(worst.hessian_rel, rel_inf(ws.hessian, fd_hess));
    }
    return worst;
}

double min_hessian_eigen_ratio(const SystemConfig& cfg, double p, double k_param, int n_states, std::uint64_t seed)
{
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_states; ++i) {
        const NewtonWorkspace ws = workspace_at(cfg, random_state(cfg, p, seed, static_cast<std::uint64_t>(i)), k_param);
        const Eigen::MatrixXd sym = 0.5 * (ws.hessian + ws.hessian.transpose());
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
        const auto& ev = eig.eigenvalues();
        const double norm2 = std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
        if (norm2 > 0.0) {
            worst = std::min(worst, ev.minCoeff() / norm2);
        }
    }
    return worst;
}

std::vector<CheckResult> run_invariant_checks()
{
    return {check_dft_round_trip(), check_cyclic_prefix(), check_tr_linearity(), check_fast_direct(),
            check_convexity(),      check_finite_differences(), check_lambda(), check_op_formulas(),
            check_solver_run()};
}

bool run_validation(std::ostream& out)
{
    bool all = true;
    for (const auto& r : run_invariant_checks()) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
        all = all && r.passed;
    }
    return all;
}

} // namespace tropt
