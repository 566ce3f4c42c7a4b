#pragma once

#include "tropt/actr.hpp"
#include "tropt/baselines.hpp"
#include "tropt/metrics.hpp"
#include "tropt/ofdm.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace tropt {

enum class ExperimentName { LambdaVsIbo, Psd, SdrVsIbo, PaprCcdf, ItersOps, SdrVsP };

std::string to_string(ExperimentName e);
ExperimentName experiment_from_string(const std::string& name);

/// N = 1024, N_CP = 128, occupied {-100..-1} U {1..100}, the 11 reserved tones
/// {-100, -80, -60, -40, -20, -1, 20, 40, 60, 80, 100}, QPSK.
SystemConfig default_paper_config();

struct ExperimentSpec {
    ExperimentName name = ExperimentName::SdrVsIbo;
    std::vector<double> ibo_grid_db;
    std::vector<double> p_values;          ///< +infinity selects the soft limiter
    int n_symbols = 1000;
    std::vector<Algorithm> algorithms;
    std::filesystem::path output_dir = "results";
    std::uint64_t seed = 1;
    double model_p_cap = 10.0;             ///< AC-TR uses min(p, cap) as its PA model
    SystemConfig system = default_paper_config();
    AcTrConfig actr;
    BaselineConfig baseline;
    unsigned threads = 0;

    void validate() const;
};

/// Grid and algorithm defaults for each experiment.
ExperimentSpec default_experiment(ExperimentName name);

/// Runs the grid and writes <name>.csv and plot_<name>.py into output_dir.
/// Returns the written paths. Output is byte-identical for a fixed spec.
std::vector<std::filesystem::path> run_experiment(const ExperimentSpec& spec);

/// One CSV row per (algorithm, p, IBO) for the summary-type experiments.
struct SummaryRow {
    Algorithm algorithm;
    double p_true;
    double p_model; ///< NaN when the algorithm has no PA model
    double ref_ibo_db;
    RunMetrics metrics;
    double lambda_analytic;
};

std::vector<SummaryRow> run_summary_grid(const ExperimentSpec& spec);

std::string format_number(double v);

} // namespace tropt
