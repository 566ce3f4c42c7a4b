#include "tropt/pa_model.hpp"

#include "tropt/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <string>

namespace tropt {

namespace {

constexpr double kXiMax = 6.45; // exp(-xi^2) < 1e-18 beyond this point
constexpr double kQuadRelTol = 1e-12; // subdivision target
constexpr double kQuadAbsTol = 1e-10; // acceptance threshold on the error estimate

template <typename F>
void map_frames(const TimeFrame& in, TimeFrame& out, F&& f)
{
    out.n_cp = in.n_cp;
    out.samples.resize(in.samples.size());
    for (std::size_t i = 0; i < in.samples.size(); ++i) {
        out.samples[i] = f(in.samples[i]);
    }
}

void check_shapes(std::span<const TimeFrame> input, std::span<const TimeFrame> output)
{
    if (input.size() != output.size()) {
        throw ConfigError("ensemble sizes differ");
    }
    for (std::size_t i = 0; i < input.size(); ++i) {
        if (input[i].samples.size() != output[i].samples.size()) {
            throw ConfigError("frame lengths differ at index " + std::to_string(i));
        }
    }
}

} // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

double RappPa::ibo_db(double mean_power) const { return linear_to_db(ibo(mean_power)); }

void RappPa::validate() const
{
    if (!(p > 0.0) || !(v_sat > 0.0) || !(gain > 0.0)) {
        throw ConfigError("Rapp parameters p, v_sat and gain must be positive");
    }
}

cplx rapp_sample(const RappPa& pa, cplx y) noexcept
{
    const double r = std::abs(y);
    if (r == 0.0) {
        return {0.0, 0.0};
    }
    if (pa.is_soft_limiter()) {
        return r <= pa.v_sat ? pa.gain * y : pa.gain * y * (pa.v_sat / r);
    }
    // (r/V)^(2p) overflows for large ratios; use the log form there.
    const double log_ratio = 2.0 * pa.p * std::log(r / pa.v_sat);
    double scale;
    if (log_ratio > 700.0) {
        scale = pa.v_sat / r;
    } else {
        scale = std::pow(1.0 + std::exp(log_ratio), -1.0 / (2.0 * pa.p));
    }
    return pa.gain * y * scale;
}

TimeFrame rapp_amplify(const RappPa& pa, const TimeFrame& y)
{
    TimeFrame out;
    map_frames(y, out, [&](cplx v) { return rapp_sample(pa, v); });
    return out;
}

TimeFrame soft_limit(double v_sat, const TimeFrame& y)
{
    TimeFrame out;
    map_frames(y, out, [&](cplx v) {
        const double r = std::abs(v);
        return r <= v_sat ? v : v * (v_sat / r);
    });
    return out;
}

TimeFrame amplify(const RappPa& pa, const TimeFrame& y)
{
    if (pa.is_soft_limiter()) {
        TimeFrame out = soft_limit(pa.v_sat, y);
        if (pa.gain != 1.0) {
            for (auto& v : out.samples) v *= pa.gain;
        }
        return out;
    }
    return rapp_amplify(pa, y);
}

BussgangSplit bussgang_split(std::span<const TimeFrame> input, std::span<const TimeFrame> output)
{
    check_shapes(input, output);
    cplx cross{0.0, 0.0};
    double power = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < input.size(); ++i) {
        for (std::size_t n = 0; n < input[i].samples.size(); ++n) {
            cross += output[i].samples[n] * std::conj(input[i].samples[n]);
            power += std::norm(input[i].samples[n]);
        }
        count += input[i].samples.size();
    }
    if (power == 0.0) {
        throw UndefinedError("correlation coefficient undefined for an all-zero input");
    }

    BussgangSplit split;
    split.lambda = cross / power;
    split.mean_power = power / static_cast<double>(count);
    split.correlated.resize(input.size());
    split.distortion.resize(input.size());
    double dist_power = 0.0;
    for (std::size_t i = 0; i < input.size(); ++i) {
        auto& corr = split.correlated[i];
        auto& dist = split.distortion[i];
        corr.n_cp = dist.n_cp = input[i].n_cp;
        corr.samples.resize(input[i].samples.size());
        dist.samples.resize(input[i].samples.size());
        for (std::size_t n = 0; n < input[i].samples.size(); ++n) {
            corr.samples[n] = split.lambda * input[i].samples[n];
            dist.samples[n] = output[i].samples[n] - corr.samples[n];
            dist_power += std::norm(dist.samples[n]);
        }
    }
    split.distortion_mean_power = dist_power / static_cast<double>(count);
    return split;
}

std::vector<cplx> per_symbol_lambdas(std::span<const TimeFrame> input, std::span<const TimeFrame> output)
{
    check_shapes(input, output);
    std::vector<cplx> out;
    out.reserve(input.size());
    for (std::size_t i = 0; i < input.size(); ++i) {
        out.push_back(bussgang_split(input.subspan(i, 1), output.subspan(i, 1)).lambda);
    }
    return out;
}

double lambda_analytic(double p, double ibo_db)
{
    if (!(p > 0.0)) {
        throw ConfigError("smoothness factor p must be positive");
    }
    const double ibo = db_to_linear(ibo_db);
    using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
    constexpr unsigned kMaxDepth = 30;

    double error = 0.0;
    double value = 0.0;
    if (std::isinf(p)) {
        // Soft limiter: gain min(1, sqrt(IBO)/xi); split at the kink.
        const double knee = std::sqrt(ibo);
        auto below = [](double xi) { return 2.0 * xi * xi * xi * std::exp(-xi * xi); };
        auto above = [knee](double xi) { return 2.0 * knee * xi * xi * std::exp(-xi * xi); };
        double e1 = 0.0, e2 = 0.0;
        const double split = std::min(knee, kXiMax);
        value = Quad::integrate(below, 0.0, split, kMaxDepth, kQuadRelTol, &e1);
        if (split < kXiMax) {
            value += Quad::integrate(above, split, kXiMax, kMaxDepth, kQuadRelTol, &e2);
        }
        error = e1 + e2;
    } else {
        auto integrand = [p, ibo](double xi) {
            const double x2 = xi * xi;
            const double log_term = p * std::log(x2 / ibo);
            const double gain = log_term > 700.0 ? std::sqrt(ibo) / xi
                                                 : std::pow(1.0 + std::exp(log_term), -1.0 / (2.0 * p));
            return 2.0 * x2 * xi * gain * std::exp(-x2);
        };
        auto safe = [&](double xi) { return xi == 0.0 ? 0.0 : integrand(xi); };
        value = Quad::integrate(safe, 0.0, kXiMax, kMaxDepth, kQuadRelTol, &error);
    }
    if (!(error <= kQuadAbsTol)) {
        throw NumericError("lambda quadrature did not converge", error);
    }
    return value;
}

double sdr_db(cplx lambda, double data_power_sum, double distortion_mean_power, int n_fft)
{
    if (distortion_mean_power < 0.0) {
        throw ConfigError("distortion power must be nonnegative");
    }
    if (distortion_mean_power == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return linear_to_db(std::norm(lambda) * data_power_sum / (n_fft * distortion_mean_power));
}

} // namespace tropt
