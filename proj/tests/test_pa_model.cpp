#include "tropt/errors.hpp"
#include "tropt/experiments.hpp"
#include "tropt/pa_model.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

using namespace tropt;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Soft limiter driven by unit-power complex Gaussian input, gamma = V^2 / sigma^2.
double soft_limiter_lambda(double gamma)
{
    return 1.0 - std::exp(-gamma) + std::sqrt(std::numbers::pi) / 2.0 * std::sqrt(gamma) * std::erfc(std::sqrt(gamma));
}

double monte_carlo_lambda(double p, double ibo_db, int samples, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    const double v = std::sqrt(std::pow(10.0, ibo_db / 10.0));
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < samples; ++i) {
        const cplx y(g(rng), g(rng));
        const double r = std::abs(y);
        const double gain = std::isinf(p) ? std::min(1.0, v / r) : 1.0 / std::pow(1.0 + std::pow(r / v, 2.0 * p), 0.5 / p);
        num += gain * r * r;
        den += r * r;
    }
    return num / den;
}

} // namespace

TEST_CASE("rapp sample follows the AM-AM law")
{
    const RappPa pa{4.0, 0.8, 1.0};
    for (double r : {1e-3, 0.2, 0.8, 1.5, 10.0}) {
        const cplx y = std::polar(r, 0.7);
        const cplx out = rapp_sample(pa, y);
        const double expected = r / std::pow(1.0 + std::pow(r / 0.8, 8.0), 1.0 / 8.0);
        CHECK(std::abs(out) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(std::arg(out) == doctest::Approx(0.7).epsilon(1e-12));
    }
    CHECK(std::abs(rapp_sample(pa, cplx(1e6, 0.0))) == doctest::Approx(0.8).epsilon(1e-9));
    CHECK(std::abs(rapp_sample(pa, cplx(1e200, 0.0))) == doctest::Approx(0.8).epsilon(1e-9));
    CHECK(rapp_sample(pa, cplx{}) == cplx{});
}

TEST_CASE("soft limiter and large p")
{
    TimeFrame frame = with_cyclic_prefix(CVec{cplx(0.5, 0), cplx(0, 2.0), cplx(-3.0, 0), cplx(0.1, 0.1)}, 1);
    const TimeFrame lim = soft_limit(1.0, frame);
    CHECK(lim.at(0) == frame.at(0));
    CHECK(std::abs(lim.at(1) - cplx(0, 1.0)) < 1e-15);
    CHECK(std::abs(lim.at(2) - cplx(-1.0, 0)) < 1e-15);
    const TimeFrame near = amplify(RappPa{200.0, 1.0, 1.0}, frame);
    for (std::size_t i = 0; i < frame.samples.size(); ++i) {
        CHECK(std::abs(near.samples[i] - lim.samples[i]) < 5e-3);
    }
    CHECK(amplify(RappPa{kInf, 1.0, 1.0}, frame).samples == lim.samples);
}

TEST_CASE("invalid amplifier parameters")
{
    CHECK_THROWS_AS(RappPa({0.0, 1.0, 1.0}).validate(), ConfigError);
    CHECK_NOTHROW(RappPa({0.5, 1.0, 1.0}).validate());
    CHECK_THROWS_AS(RappPa({4.0, 0.0, 1.0}).validate(), ConfigError);
    CHECK_NOTHROW(RappPa({kInf, 1.0, 1.0}).validate());
}

TEST_CASE("lambda quadrature for the soft limiter matches the closed form")
{
    for (double ibo_db : {0.0, 4.0, 7.0, 8.0, 12.0}) {
        const double gamma = std::pow(10.0, ibo_db / 10.0);
        CHECK(lambda_analytic(kInf, ibo_db) == doctest::Approx(soft_limiter_lambda(gamma)).epsilon(1e-9));
    }
}

TEST_CASE("lambda quadrature matches Rayleigh Monte Carlo")
{
    for (double p : {2.0, 4.0, 10.0, kInf}) {
        for (double ibo_db : {4.0, 8.0, 12.0}) {
            const double mc = monte_carlo_lambda(p, ibo_db, 400000, 21);
            CHECK(std::abs(lambda_analytic(p, ibo_db) - mc) < 1e-3);
        }
    }
}

TEST_CASE("lambda grows with IBO and with p")
{
    double prev = 0.0;
    for (double ibo_db = 0.0; ibo_db <= 14.0; ibo_db += 1.0) {
        const double l = lambda_analytic(4.0, ibo_db);
        CHECK(l > prev);
        CHECK(l < 1.0);
        CHECK(lambda_analytic(10.0, ibo_db) > l);
        prev = l;
    }
}

TEST_CASE("lambda monotone on the p grid")
{
    for (double ibo_db = 2.0; ibo_db <= 12.0; ibo_db += 1.0) {
        double prev = 0.0;
        for (double p : {1.0, 2.0, 4.0, 10.0}) {
            const double l = lambda_analytic(p, ibo_db);
            CHECK(l >= prev);
            prev = l;
        }
    }
}

TEST_CASE("bussgang split leaves a distortion term uncorrelated with the input")
{
    const SystemConfig cfg = default_paper_config();
    const RappPa pa{4.0, std::sqrt(std::pow(10.0, 0.4) * 189.0 / 1024.0), 1.0};
    std::vector<TimeFrame> in;
    std::vector<TimeFrame> out;
    for (std::uint64_t i = 0; i < 20; ++i) {
        SymbolStream s(3, i);
        in.push_back(modulate(cfg, random_frame(cfg, s)));
        out.push_back(amplify(pa, in.back()));
    }
    const BussgangSplit split = bussgang_split(in, out);
    cplx corr{};
    double power = 0.0;
    for (std::size_t f = 0; f < in.size(); ++f) {
        for (std::size_t k = 0; k < in[f].samples.size(); ++k) {
            corr += split.distortion[f].samples[k] * std::conj(in[f].samples[k]);
            power += std::norm(in[f].samples[k]);
            CHECK(std::abs(split.correlated[f].samples[k] + split.distortion[f].samples[k] - out[f].samples[k]) < 1e-14);
        }
    }
    CHECK(std::abs(corr) / power < 1e-12);
    CHECK(split.lambda.real() == doctest::Approx(lambda_analytic(4.0, 4.0)).epsilon(0.02));
    CHECK(per_symbol_lambdas(in, out).size() == 20);
}

TEST_CASE("near-identity amplifier and SDR sentinel")
{
    const SystemConfig cfg = default_paper_config();
    const double sigma = std::sqrt(189.0 / 1024.0);
    SymbolStream s(1, 0);
    const TimeFrame in = modulate(cfg, random_frame(cfg, s));
    const std::vector<TimeFrame> ins{in};
    const std::vector<TimeFrame> outs{amplify(RappPa{4.0, 1e6 * sigma, 1.0}, in)};
    const BussgangSplit split = bussgang_split(ins, outs);
    CHECK(split.lambda.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::isinf(sdr_db(cplx(1.0, 0.0), 189.0, 0.0, 1024)));
    CHECK(sdr_db(cplx(1.0, 0.0), 189.0, 189.0 / 1024.0 / 100.0, 1024) == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("zero input is undefined for the split")
{
    const std::vector<TimeFrame> zeros{with_cyclic_prefix(CVec(8), 2)};
    CHECK_THROWS_AS(bussgang_split(zeros, zeros), UndefinedError);
}
