// tr-opt: tone-reservation experiments and invariant checks.

#include "tropt/errors.hpp"
#include "tropt/experiments.hpp"
#include "tropt/validate.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string join(const std::vector<std::string>& items)
{
    std::string out;
    for (const auto& item : items) out += (out.empty() ? "" : ",") + item;
    return out;
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> items;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        if (first != std::string::npos) {
            items.push_back(item.substr(first, last - first + 1));
        }
    }
    return items;
}

// "4,5,6", "inf" and "lo:hi:step" ranges, freely mixed.
std::vector<double> parse_numbers(const std::string& text)
{
    std::vector<double> values;
    for (const auto& item : split_list(text)) {
        try {
            if (const auto colon = item.find(':'); colon != std::string::npos) {
                const auto second = item.find(':', colon + 1);
                const double lo = std::stod(item.substr(0, colon));
                const double hi = std::stod(item.substr(colon + 1, second - colon - 1));
                const double step = second == std::string::npos ? 1.0 : std::stod(item.substr(second + 1));
                if (!(step > 0.0)) throw tropt::ConfigError("range step must be positive in '" + item + "'");
                for (int i = 0; lo + step * i <= hi + 1e-9 * step; ++i) values.push_back(lo + step * i);
            } else {
                std::size_t used = 0;
                values.push_back(std::stod(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            }
        } catch (const std::logic_error&) {
            throw tropt::ConfigError("cannot parse number list entry '" + item + "'");
        }
    }
    return values;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Tone reservation for Rapp-amplifier OFDM: experiments and checks"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Flat key=value file; keys are the long option names");

    std::vector<std::string> ibo;
    std::vector<std::string> p_values;
    std::vector<std::string> algorithms;
    int symbols = 0;
    std::uint64_t seed = 1;
    std::string out_dir = "results";
    double k_param = 1.0;
    double stop_delta = 0.01;
    int actr_max_iters = 50;
    int baseline_max_iters = 100;
    double ncc_step = 1.0;
    double papr_gap = 1e-3;
    double model_p_cap = 10.0;
    unsigned threads = 0;
    std::string hessian = "fft";

    app.add_option("--ibo", ibo, "Reference IBO grid in dB, e.g. 4:12:1 or 4,8")->delimiter(',');
    app.add_option("--p", p_values, "Rapp smoothness values; inf selects the soft limiter")->delimiter(',');
    app.add_option("--symbols", symbols, "OFDM symbols per grid point")->check(CLI::PositiveNumber);
    app.add_option("--algorithms", algorithms, "Subset of reference,papr_tr,ncc_tr,ac_tr")->delimiter(',');
    app.add_option("--seed", seed, "Base seed");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--k", k_param, "AC-TR linear gain target K (>= 1)");
    app.add_option("--stop-delta", stop_delta, "Stop when max |change in d_TR| falls below this");
    app.add_option("--actr-max-iters", actr_max_iters, "AC-TR iteration cap");
    app.add_option("--baseline-max-iters", baseline_max_iters, "PAPR-TR and NCC-TR iteration cap");
    app.add_option("--ncc-step", ncc_step, "NCC-TR projection step");
    app.add_option("--papr-gap", papr_gap, "PAPR-TR relative barrier gap");
    app.add_option("--model-p-cap", model_p_cap, "Largest p used by the AC-TR amplifier model");
    app.add_option("--threads", threads, "Worker threads, 0 = all cores");
    app.add_option("--hessian", hessian, "AC-TR Hessian assembly")->check(CLI::IsMember({"fft", "direct"}));

    std::string experiment;
    auto* run = app.add_subcommand("run", "Run one experiment and write CSV plus a plot script");
    run->fallthrough();
    run->add_option("experiment", experiment, "lambda_vs_ibo, psd, sdr_vs_ibo, papr_ccdf, iters_ops or sdr_vs_p")
        ->required();
    auto* validate = app.add_subcommand("validate", "Run the invariant suite");
    validate->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) {
            return tropt::run_validation(std::cout) ? 0 : 1;
        }

        tropt::ExperimentSpec spec = tropt::default_experiment(tropt::experiment_from_string(experiment));
        if (!ibo.empty()) spec.ibo_grid_db = parse_numbers(join(ibo));
        if (!p_values.empty()) spec.p_values = parse_numbers(join(p_values));
        if (!algorithms.empty()) {
            spec.algorithms.clear();
            for (const auto& name : split_list(join(algorithms))) spec.algorithms.push_back(tropt::algorithm_from_string(name));
        }
        if (symbols > 0) spec.n_symbols = symbols;
        spec.seed = seed;
        spec.output_dir = out_dir;
        spec.actr.k_param = k_param;
        spec.actr.stop_delta = stop_delta;
        spec.actr.max_iters = actr_max_iters;
        spec.actr.hessian_mode = hessian == "direct" ? tropt::HessianMode::Direct : tropt::HessianMode::FastFft;
        spec.baseline.stop_delta = stop_delta;
        spec.baseline.max_iters = baseline_max_iters;
        spec.baseline.ncc_step = ncc_step;
        spec.baseline.papr_gap = papr_gap;
        spec.model_p_cap = model_p_cap;
        spec.threads = threads;

        for (const auto& path : tropt::run_experiment(spec)) {
            std::cout << path.string() << '\n';
        }
        return 0;
    } catch (const tropt::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
