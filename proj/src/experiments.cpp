#include "tropt/experiments.hpp"

#include "tropt/errors.hpp"
#include "tropt/pa_model.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>

namespace tropt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> range(double lo, double hi, double step)
{
    std::vector<double> out;
    const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) {
        out.push_back(lo + step * i);
    }
    return out;
}

const std::vector<Algorithm> kAllAlgorithms{Algorithm::Reference, Algorithm::PaprTr, Algorithm::NccTr,
                                            Algorithm::AcTr};

double model_p_for(const ExperimentSpec& spec, Algorithm a, double p_true)
{
    if (a != Algorithm::AcTr) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return std::min(p_true, spec.model_p_cap);
}

EnsembleSpec ensemble_for(const ExperimentSpec& spec, Algorithm a, double p_true, double ibo)
{
    EnsembleSpec e;
    e.cfg = spec.system;
    e.cfg.seed = spec.seed;
    e.pa_p = p_true;
    e.model_p = std::min(p_true, spec.model_p_cap);
    e.ref_ibo_db = ibo;
    e.algorithm = a;
    e.n_symbols = spec.n_symbols;
    e.seed = spec.seed;
    e.actr = spec.actr;
    e.baseline = spec.baseline;
    e.threads = spec.threads;
    return e;
}

std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

std::string id_columns(const ExperimentSpec& spec, Algorithm a, double p_true, double p_model, double ibo)
{
    return fmt::format("{},{},{},{},{},{},{}", to_string(spec.name), to_string(a), format_number(p_true),
                       std::isnan(p_model) ? std::string{} : format_number(p_model), format_number(ibo),
                       spec.n_symbols, spec.seed);
}

std::string cost_columns(const RunMetrics& m)
{
    return fmt::format("{},{},{}", format_number(m.mean_iters), format_number(m.mean_ops),
                       format_number(m.mean_ops_formula));
}

constexpr const char* kIdHeader = "experiment,algorithm,p_true,p_model,ref_ibo_db,n_symbols,seed";
constexpr const char* kCostHeader = "mean_iters,mean_ops_counted,mean_ops_formula";

void write_summary_csv(const ExperimentSpec& spec, const std::vector<SummaryRow>& rows,
                       const std::filesystem::path& path)
{
    auto out = open_output(path);
    out << kIdHeader << ",v_sat,lambda,lambda_analytic,sdr_db,mean_papr_db,converged_fraction," << kCostHeader
        << '\n';
    for (const auto& r : rows) {
        const auto& m = r.metrics;
        const double mean_papr =
            std::accumulate(m.papr_samples.begin(), m.papr_samples.end(), 0.0) / static_cast<double>(m.papr_samples.size());
        out << id_columns(spec, r.algorithm, r.p_true, r.p_model, r.ref_ibo_db) << ','
            << fmt::format("{},{},{},{},{},{}", format_number(m.v_sat), format_number(m.lambda_emp),
                           format_number(r.lambda_analytic), format_number(m.sdr_db), format_number(mean_papr),
                           format_number(m.converged_fraction))
            << ',' << cost_columns(m) << '\n';
    }
}

void write_psd_csv(const ExperimentSpec& spec, const std::filesystem::path& path)
{
    auto out = open_output(path);
    out << kIdHeader << ",freq,psd_total_db,psd_distortion_db," << kCostHeader << '\n';
    for (double p : spec.p_values) {
        for (double ibo : spec.ibo_grid_db) {
            // Normalization anchor: in-band mean of the reference output PSD.
            EnsembleSpec ref = ensemble_for(spec, Algorithm::Reference, p, ibo);
            ref.with_psd = true;
            const RunMetrics ref_metrics = ensemble_sdr(ref);
            int max_bin = 0;
            for (int k : spec.system.data_indices) max_bin = std::max(max_bin, std::abs(k));
            for (int k : spec.system.tr_indices) max_bin = std::max(max_bin, std::abs(k));
            const double edge = static_cast<double>(max_bin) / spec.system.n_fft;
            const double anchor = inband_mean(ref_metrics.psd_total, edge);

            for (Algorithm a : spec.algorithms) {
                RunMetrics m;
                if (a == Algorithm::Reference) {
                    m = ref_metrics;
                } else {
                    EnsembleSpec e = ensemble_for(spec, a, p, ibo);
                    e.with_psd = true;
                    m = ensemble_sdr(e);
                }
                const std::string ids = id_columns(spec, a, p, model_p_for(spec, a, p), ibo);
                for (std::size_t i = 0; i < m.psd_total.freq.size(); ++i) {
                    out << ids << ','
                        << fmt::format("{},{},{}", format_number(m.psd_total.freq[i]),
                                       format_number(linear_to_db(m.psd_total.power[i] / anchor)),
                                       format_number(linear_to_db(m.psd_distortion.power[i] / anchor)))
                        << ',' << cost_columns(m) << '\n';
                }
            }
        }
    }
}

void write_ccdf_csv(const ExperimentSpec& spec, const std::filesystem::path& path)
{
    auto out = open_output(path);
    out << kIdHeader << ",threshold_db,probability," << kCostHeader << '\n';
    const std::vector<double> thresholds = range(3.0, 13.0, 0.1);
    for (double p : spec.p_values) {
        for (double ibo : spec.ibo_grid_db) {
            for (Algorithm a : spec.algorithms) {
                EnsembleSpec e = ensemble_for(spec, a, p, ibo);
                e.ccdf_thresholds_db = thresholds;
                const RunMetrics m = ensemble_sdr(e);
                const std::string ids = id_columns(spec, a, p, model_p_for(spec, a, p), ibo);
                for (const auto& pt : m.ccdf) {
                    out << ids << ',' << format_number(pt.threshold_db) << ',' << format_number(pt.probability)
                        << ',' << cost_columns(m) << '\n';
                }
            }
        }
    }
}

std::string plot_script(const ExperimentSpec& spec)
{
    const std::string name = to_string(spec.name);
    std::string x = "ref_ibo_db";
    std::string y = "sdr_db";
    std::string group = "p_true";
    std::string logy = "False";
    switch (spec.name) {
    case ExperimentName::LambdaVsIbo:
        y = "lambda";
        break;
    case ExperimentName::SdrVsIbo:
        break;
    case ExperimentName::ItersOps:
        y = "mean_iters";
        break;
    case ExperimentName::SdrVsP:
        x = "p_true";
        group = "ref_ibo_db";
        break;
    case ExperimentName::Psd:
        x = "freq";
        y = "psd_distortion_db";
        group = "p_true";
        break;
    case ExperimentName::PaprCcdf:
        x = "threshold_db";
        y = "probability";
        group = "ref_ibo_db";
        logy = "True";
        break;
    }
    return fmt::format(R"(#!/usr/bin/env python3
# Generated by tr-opt. Plots {name}.csv next to this script.
import csv
import math
import os
import sys
from collections import defaultdict

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
x_col, y_col, group_col = "{x}", "{y}", "{group}"
series = defaultdict(list)
with open(os.path.join(here, "{name}.csv"), newline="", encoding="utf-8") as f:
    for row in csv.DictReader(f):
        key = (row["algorithm"], row[group_col])
        series[key].append((float(row[x_col]), float(row[y_col])))

fig, ax = plt.subplots(figsize=(7, 5))
for (algorithm, group), pts in sorted(series.items()):
    pts.sort()
    xs = [p[0] if math.isfinite(p[0]) else max(q[0] for q in pts if math.isfinite(q[0])) * 1.5 for p in pts]
    ax.plot(xs, [p[1] for p in pts], marker="o", markersize=3, label=f"{{algorithm}} {{group_col}}={{group}}")
if {logy}:
    ax.set_yscale("log")
ax.set_xlabel(x_col)
ax.set_ylabel(y_col)
ax.grid(True, alpha=0.3)
ax.legend(fontsize=7)
out = os.path.join(here, "{name}.png")
fig.savefig(out, dpi=150, bbox_inches="tight")
print(out, file=sys.stderr)
)",
                       fmt::arg("name", name), fmt::arg("x", x), fmt::arg("y", y), fmt::arg("group", group),
                       fmt::arg("logy", logy));
}

} // namespace

std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.10g}", v);
}

std::string to_string(ExperimentName e)
{
    switch (e) {
    case ExperimentName::LambdaVsIbo:
        return "lambda_vs_ibo";
    case ExperimentName::Psd:
        return "psd";
    case ExperimentName::SdrVsIbo:
        return "sdr_vs_ibo";
    case ExperimentName::PaprCcdf:
        return "papr_ccdf";
    case ExperimentName::ItersOps:
        return "iters_ops";
    case ExperimentName::SdrVsP:
        return "sdr_vs_p";
    }
    return "unknown";
}

ExperimentName experiment_from_string(const std::string& name)
{
    static const std::map<std::string, ExperimentName> names{
        {"lambda_vs_ibo", ExperimentName::LambdaVsIbo}, {"psd", ExperimentName::Psd},
        {"sdr_vs_ibo", ExperimentName::SdrVsIbo},       {"papr_ccdf", ExperimentName::PaprCcdf},
        {"iters_ops", ExperimentName::ItersOps},        {"sdr_vs_p", ExperimentName::SdrVsP}};
    if (auto it = names.find(name); it != names.end()) {
        return it->second;
    }
    throw ConfigError("unknown experiment '" + name + "'");
}

SystemConfig default_paper_config()
{
    SystemConfig cfg;
    cfg.n_fft = 1024;
    cfg.n_cp = cfg.n_fft / 8;
    cfg.tr_indices = {-100, -80, -60, -40, -20, -1, 20, 40, 60, 80, 100};
    for (int k = -100; k <= 100; ++k) {
        if (k == 0) continue;
        if (std::find(cfg.tr_indices.begin(), cfg.tr_indices.end(), k) == cfg.tr_indices.end()) {
            cfg.data_indices.push_back(k);
        }
    }
    cfg.constellation = Constellation::Qpsk;
    cfg.seed = 1;
    return cfg;
}

void ExperimentSpec::validate() const
{
    if (n_symbols < 1) throw ConfigError("n_symbols must be >= 1");
    if (ibo_grid_db.empty()) throw ConfigError("IBO grid is empty");
    if (p_values.empty()) throw ConfigError("p grid is empty");
    if (algorithms.empty()) throw ConfigError("no algorithms selected");
    for (double p : p_values) {
        if (!(p >= 1.0)) throw ConfigError("p values must be >= 1 (or inf)");
    }
    if (!(model_p_cap >= 1.0) || std::isinf(model_p_cap)) throw ConfigError("model_p_cap must be finite and >= 1");
    system.validate();
    actr.validate();
}

ExperimentSpec default_experiment(ExperimentName name)
{
    ExperimentSpec spec;
    spec.name = name;
    spec.algorithms = kAllAlgorithms;
    spec.p_values = {4.0, 10.0};
    spec.ibo_grid_db = range(4.0, 12.0, 1.0);
    switch (name) {
    case ExperimentName::Psd:
        spec.ibo_grid_db = {8.0};
        break;
    case ExperimentName::PaprCcdf:
        spec.ibo_grid_db = {4.0, 8.0};
        break;
    case ExperimentName::SdrVsP:
        spec.ibo_grid_db = {8.0};
        spec.p_values = {2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0, 15.0, 20.0, kInf};
        break;
    default:
        break;
    }
    return spec;
}

std::vector<SummaryRow> run_summary_grid(const ExperimentSpec& spec)
{
    spec.validate();
    std::vector<SummaryRow> rows;
    for (double p : spec.p_values) {
        for (double ibo : spec.ibo_grid_db) {
            const double analytic = lambda_analytic(p, ibo);
            for (Algorithm a : spec.algorithms) {
                SummaryRow row{a, p, model_p_for(spec, a, p), ibo, ensemble_sdr(ensemble_for(spec, a, p, ibo)),
                               analytic};
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

std::vector<std::filesystem::path> run_experiment(const ExperimentSpec& spec)
{
    spec.validate();
    std::error_code ec;
    std::filesystem::create_directories(spec.output_dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + spec.output_dir.string() + ": " + ec.message());
    }
    const std::string name = to_string(spec.name);
    const auto csv_path = spec.output_dir / (name + ".csv");
    switch (spec.name) {
    case ExperimentName::Psd:
        write_psd_csv(spec, csv_path);
        break;
    case ExperimentName::PaprCcdf:
        write_ccdf_csv(spec, csv_path);
        break;
    default:
        write_summary_csv(spec, run_summary_grid(spec), csv_path);
        break;
    }
    const auto script_path = spec.output_dir / ("plot_" + name + ".py");
    auto script = open_output(script_path);
    script << plot_script(spec);
    return {csv_path, script_path};
}

} // namespace tropt
