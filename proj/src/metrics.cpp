#include "tropt/metrics.hpp"

#include "tropt/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

namespace tropt {

std::string to_string(Algorithm a)
{
    switch (a) {
    case Algorithm::Reference:
        return "reference";
    case Algorithm::PaprTr:
        return "papr_tr";
    case Algorithm::NccTr:
        return "ncc_tr";
    case Algorithm::AcTr:
        return "ac_tr";
    }
    return "unknown";
}

Algorithm algorithm_from_string(const std::string& name)
{
    if (name == "reference" || name == "none") return Algorithm::Reference;
    if (name == "papr_tr") return Algorithm::PaprTr;
    if (name == "ncc_tr") return Algorithm::NccTr;
    if (name == "ac_tr") return Algorithm::AcTr;
    throw ConfigError("unknown algorithm '" + name + "'");
}

double papr_db(std::span<const cplx> core)
{
    double peak = 0.0;
    double sum = 0.0;
    for (const auto& v : core) {
        const double p = std::norm(v);
        peak = std::max(peak, p);
        sum += p;
    }
    if (sum == 0.0) {
        throw UndefinedError("PAPR undefined for a zero frame");
    }
    return linear_to_db(peak / (sum / static_cast<double>(core.size())));
}

double papr_db(const TimeFrame& frame) { return papr_db(frame.core()); }

std::vector<CcdfPoint> ccdf(std::span<const double> samples, std::span<const double> thresholds)
{
    if (samples.empty()) {
        throw ConfigError("CCDF needs at least one sample");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<CcdfPoint> out;
    out.reserve(thresholds.size());
    for (double gamma : thresholds) {
        const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), gamma);
        out.push_back({gamma, static_cast<double>(above) / static_cast<double>(sorted.size())});
    }
    return out;
}

PsdEstimate welch_psd(std::span<const TimeFrame> frames, int segment_len, int overlap)
{
    if (frames.empty()) {
        throw ConfigError("PSD needs at least one frame");
    }
    if (!is_power_of_two(segment_len) || segment_len > frames.front().n_fft()) {
        throw ConfigError("PSD segment length must be a power of two no longer than a symbol");
    }
    if (overlap < 0 || overlap >= segment_len) {
        throw ConfigError("PSD overlap must be in [0, segment_len)");
    }
    CVec stream;
    for (const auto& f : frames) {
        stream.insert(stream.end(), f.samples.begin(), f.samples.end());
    }
    const auto len = static_cast<std::size_t>(segment_len);
    const auto hop = static_cast<std::size_t>(segment_len - overlap);

    std::vector<double> window(len);
    double window_energy = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
        window[k] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len));
        window_energy += window[k] * window[k];
    }

    std::vector<double> acc(len, 0.0);
    std::size_t segments = 0;
    CVec seg(len);
    for (std::size_t start = 0; start + len <= stream.size(); start += hop) {
        for (std::size_t k = 0; k < len; ++k) {
            seg[k] = stream[start + k] * window[k];
        }
        const CVec spec = dft(seg); // unitary: |X|^2 sums to the windowed energy
        for (std::size_t k = 0; k < len; ++k) {
            acc[k] += std::norm(spec[k]);
        }
        ++segments;
    }
    if (segments == 0) {
        throw ConfigError("not enough samples for one PSD segment");
    }

    PsdEstimate psd;
    psd.freq.resize(len);
    psd.power.resize(len);
    // Shift so that the grid runs from -0.5 upwards.
    for (std::size_t i = 0; i < len; ++i) {
        const std::size_t k = (i + len / 2) % len;
        const auto signed_k = static_cast<double>(i) - static_cast<double>(len / 2);
        psd.freq[i] = signed_k / static_cast<double>(len);
        psd.power[i] = acc[k] * static_cast<double>(len) / (window_energy * static_cast<double>(segments));
    }
    return psd;
}

double inband_mean(const PsdEstimate& psd, double band_edge)
{
    double sum = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < psd.freq.size(); ++i) {
        if (std::abs(psd.freq[i]) <= band_edge) {
            sum += psd.power[i];
            ++count;
        }
    }
    if (count == 0) {
        throw ConfigError("no PSD bins inside the requested band");
    }
    return sum / count;
}

double reference_v_sat(const SystemConfig& cfg, double ref_ibo_db)
{
    const double sigma2 = static_cast<double>(cfg.alpha()) / cfg.n_fft;
    return std::sqrt(db_to_linear(ref_ibo_db) * sigma2);
}

namespace {

struct SymbolOutcome {
    TimeFrame input;
    TimeFrame output;
    double papr = 0.0;
    SolverDiagnostics diag;
    bool data_preserved = true;
    int descent_violations = 0;
};

SymbolOutcome run_symbol(const EnsembleSpec& spec, const RappPa& pa, const RappPa& model,
                         const BaselineConfig& baseline, std::uint64_t index)
{
    SymbolStream stream(spec.seed, index);
    const FreqSymbol sym = random_frame(spec.cfg, stream);
    SymbolOutcome out;
    FreqSymbol tx = sym;
    switch (spec.algorithm) {
    case Algorithm::Reference:
        out.diag.converged = true;
        break;
    case Algorithm::AcTr: {
        auto [opt, diag] = solve_ac_tr(spec.cfg, model, sym, spec.actr);
        tx = std::move(opt);
        out.diag = std::move(diag);
        for (std::size_t k = 1; k < out.diag.objective_trace.size(); ++k) {
            if (out.diag.objective_trace[k] > out.diag.objective_trace[k - 1]) {
                ++out.descent_violations;
            }
        }
        break;
    }
    case Algorithm::PaprTr: {
        auto [opt, diag] = solve_papr_tr(spec.cfg, sym, baseline);
        tx = std::move(opt);
        out.diag = std::move(diag);
        break;
    }
    case Algorithm::NccTr: {
        auto [opt, diag] = solve_ncc_tr(spec.cfg, sym, baseline);
        tx = std::move(opt);
        out.diag = std::move(diag);
        break;
    }
    }
    out.data_preserved = tx.d_dc == sym.d_dc;
    out.input = modulate(spec.cfg, tx);
    out.output = amplify(pa, out.input);
    out.papr = papr_db(out.input);
    out.diag.objective_trace.clear();
    out.diag.objective_trace.shrink_to_fit();
    return out;
}

} // namespace

RunMetrics ensemble_sdr(const EnsembleSpec& spec)
{
    spec.cfg.validate();
    if (spec.n_symbols < 1) {
        throw ConfigError("n_symbols must be >= 1");
    }
    RunMetrics metrics;
    metrics.algorithm = spec.algorithm;
    metrics.v_sat = reference_v_sat(spec.cfg, spec.ref_ibo_db);

    const RappPa pa{spec.pa_p, metrics.v_sat, 1.0};
    pa.validate();
    const RappPa model{spec.model_p, metrics.v_sat, 1.0};
    BaselineConfig baseline = spec.baseline;
    baseline.v_sat = metrics.v_sat;
    baseline.algorithm = spec.algorithm == Algorithm::NccTr ? BaselineAlgorithm::NccTr : BaselineAlgorithm::PaprTr;

    const auto n = static_cast<std::size_t>(spec.n_symbols);
    std::vector<SymbolOutcome> outcomes(n);
    unsigned threads = spec.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : spec.threads;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                outcomes[i] = run_symbol(spec, pa, model, baseline, i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = n;
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    std::vector<TimeFrame> inputs;
    std::vector<TimeFrame> outputs;
    inputs.reserve(n);
    outputs.reserve(n);
    double iters = 0.0, ops = 0.0, ops_formula = 0.0;
    std::size_t converged = 0;
    for (auto& o : outcomes) {
        iters += o.diag.iterations;
        ops += static_cast<double>(o.diag.ops_counted);
        ops_formula += static_cast<double>(o.diag.ops_formula);
        converged += o.diag.converged ? 1 : 0;
        metrics.max_iterations = std::max(metrics.max_iterations, o.diag.iterations);
        metrics.descent_violations += o.descent_violations;
        metrics.data_preserved = metrics.data_preserved && o.data_preserved;
        metrics.papr_samples.push_back(o.papr);
        inputs.push_back(std::move(o.input));
        outputs.push_back(std::move(o.output));
    }
    outcomes.clear();
    metrics.mean_iters = iters / static_cast<double>(n);
    metrics.mean_ops = ops / static_cast<double>(n);
    metrics.mean_ops_formula = ops_formula / static_cast<double>(n);
    metrics.converged_fraction = static_cast<double>(converged) / static_cast<double>(n);

    const BussgangSplit split = bussgang_split(inputs, outputs);
    metrics.lambda_emp = split.lambda.real();
    metrics.distortion_power = split.distortion_mean_power;
    // Unit-power constellations: sum_j E|d_j|^2 = alpha.
    metrics.sdr_db = sdr_db(split.lambda, static_cast<double>(spec.cfg.alpha()), split.distortion_mean_power,
                            spec.cfg.n_fft);
    if (!spec.ccdf_thresholds_db.empty()) {
        metrics.ccdf = ccdf(metrics.papr_samples, spec.ccdf_thresholds_db);
    }
    if (spec.with_psd) {
        metrics.psd_total = welch_psd(outputs, spec.psd_segment, spec.psd_segment / 2);
        metrics.psd_distortion = welch_psd(split.distortion, spec.psd_segment, spec.psd_segment / 2);
    }
    return metrics;
}

} // namespace tropt
