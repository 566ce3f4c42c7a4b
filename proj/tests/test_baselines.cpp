#include "tropt/baselines.hpp"
#include "tropt/errors.hpp"
#include "tropt/experiments.hpp"
#include "tropt/validate.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace tropt;

namespace {

double peak_power(const SystemConfig& cfg, const FreqSymbol& sym)
{
    const TimeFrame frame = modulate(cfg, sym);
    double peak = 0.0;
    for (const auto& y : frame.core()) peak = std::max(peak, std::norm(y));
    return peak;
}

double clipped_power(const SystemConfig& cfg, const FreqSymbol& sym, double v)
{
    const TimeFrame frame = modulate(cfg, sym);
    double acc = 0.0;
    for (const auto& y : frame.core()) acc += std::pow(std::max(0.0, std::abs(y) - v), 2.0);
    return acc;
}

// Exhaustive search for the single-tone case: coarse grid, then two finer passes.
double brute_force_min_peak(const SystemConfig& cfg, FreqSymbol sym)
{
    double best = std::numeric_limits<double>::infinity();
    cplx centre{};
    double half = 3.0;
    for (double step : {0.05, 0.002, 0.0001}) {
        const cplx c = centre;
        for (double re = c.real() - half; re <= c.real() + half; re += step) {
            for (double im = c.imag() - half; im <= c.imag() + half; im += step) {
                sym.d_tr[0] = cplx(re, im);
                const double peak = peak_power(cfg, sym);
                if (peak < best) {
                    best = peak;
                    centre = sym.d_tr[0];
                }
            }
        }
        half = 10.0 * step;
    }
    return best;
}

SystemConfig single_tone_config()
{
    SystemConfig cfg = toy_config();
    cfg.tr_indices = {3};
    cfg.data_indices.push_back(-7);
    cfg.data_indices.push_back(9);
    std::ranges::sort(cfg.data_indices);
    return cfg;
}

} // namespace

TEST_CASE("PAPR-TR reaches the brute-force minimum for one reserved tone")
{
    const SystemConfig cfg = single_tone_config();
    BaselineConfig config;
    config.algorithm = BaselineAlgorithm::PaprTr;
    for (std::uint64_t i = 0; i < 6; ++i) {
        SymbolStream stream(201, i);
        const FreqSymbol sym = random_frame(cfg, stream);
        const double oracle = brute_force_min_peak(cfg, sym);
        const auto [out, diag] = solve_papr_tr(cfg, sym, config);
        const double achieved = peak_power(cfg, out);
        CHECK(achieved == doctest::Approx(diag.final_objective).epsilon(1e-12));
        CHECK(achieved <= oracle * (1.0 + 2e-3));
        CHECK(achieved >= oracle * (1.0 - 1e-4)); // finest grid step 1e-4
        CHECK(out.d_dc == sym.d_dc);
    }
}

TEST_CASE("PAPR-TR on the default configuration")
{
    const SystemConfig cfg = default_paper_config();
    BaselineConfig config;
    config.algorithm = BaselineAlgorithm::PaprTr;
    for (std::uint64_t i = 0; i < 4; ++i) {
        SymbolStream stream(203, i);
        const FreqSymbol sym = random_frame(cfg, stream);
        const auto [out, diag] = solve_papr_tr(cfg, sym, config);
        CHECK(out.d_dc == sym.d_dc);
        CHECK(peak_power(cfg, out) < peak_power(cfg, sym));
        CHECK(diag.iterations >= 1);
        CHECK(diag.ops_formula == diag.iterations * count_ops_papr_tr(1024, 11));
    }
}

TEST_CASE("NCC-TR lowers the clipped power and counts operations per iteration")
{
    const SystemConfig cfg = default_paper_config();
    BaselineConfig config;
    config.algorithm = BaselineAlgorithm::NccTr;
    config.v_sat = std::sqrt(std::pow(10.0, 0.5) * 189.0 / 1024.0);
    for (std::uint64_t i = 0; i < 6; ++i) {
        SymbolStream stream(205, i);
        const FreqSymbol sym = random_frame(cfg, stream);
        const auto [out, diag] = solve_ncc_tr(cfg, sym, config);
        CHECK(out.d_dc == sym.d_dc);
        CHECK(clipped_power(cfg, out, config.v_sat) <= clipped_power(cfg, sym, config.v_sat));
        CHECK(diag.final_objective == doctest::Approx(clipped_power(cfg, out, config.v_sat)).epsilon(1e-9));
        REQUIRE(diag.theta_trace.size() == static_cast<std::size_t>(diag.iterations));
        OpCount expected = 0;
        for (int theta : diag.theta_trace) expected += count_ops_ncc_tr(1024, theta);
        CHECK(diag.ops_counted == expected);
        CHECK(diag.ops_formula == expected);
    }
}

TEST_CASE("NCC-TR stops at once when nothing is clipped")
{
    const SystemConfig cfg = default_paper_config();
    BaselineConfig config;
    config.algorithm = BaselineAlgorithm::NccTr;
    config.v_sat = 100.0;
    SymbolStream stream(207, 0);
    const FreqSymbol sym = random_frame(cfg, stream);
    const auto [out, diag] = solve_ncc_tr(cfg, sym, config);
    CHECK(diag.iterations == 1);
    CHECK(diag.theta_trace == std::vector<int>{0});
    CHECK(diag.converged);
    CHECK(out.d_tr == sym.d_tr);
}

TEST_CASE("baseline configuration validation")
{
    BaselineConfig config;
    config.algorithm = BaselineAlgorithm::NccTr;
    config.v_sat = 0.0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config.v_sat = 1.0;
    config.ncc_step = -1.0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config.ncc_step = 1.0;
    config.max_iters = 0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
}
