#pragma once

#include "tropt/actr.hpp"
#include "tropt/ofdm.hpp"
#include "tropt/pa_model.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace tropt {

/// N = 64, N_CP = 8, occupied {-10..-1} U {1..10}, reserved {-7, 3, 9}.
SystemConfig toy_config();

/// Random solver state: data from the constellation, reserved tones ~ CN(0, 1),
/// and a Rapp PA with p and an IBO drawn uniformly from [0, 8] dB.
struct RandomState {
    FreqSymbol sym;
    RappPa pa;
};

RandomState random_state(const SystemConfig& cfg, double p, std::uint64_t seed, std::uint64_t index);

/// Max over states of ||a - b||_inf / ||b||_inf.
struct DerivativeAgreement {
    double jacobian_rel = 0.0;
    double hessian_rel = 0.0;
};

/// FFT-structured derivatives against the per-element sums.
DerivativeAgreement compare_fast_direct(const SystemConfig& cfg, double p, double k_param, int n_states,
                                        std::uint64_t seed);

/// Analytic Jacobian against central differences of the objective, analytic
/// Hessian against central differences of the analytic Jacobian.
DerivativeAgreement compare_finite_differences(const SystemConfig& cfg, double p, double k_param, int n_states,
                                               std::uint64_t seed);

/// min over states of lambda_min(H) / ||H||_2.
double min_hessian_eigen_ratio(const SystemConfig& cfg, double p, double k_param, int n_states, std::uint64_t seed);

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

std::vector<CheckResult> run_invariant_checks();

/// Prints one line per check; true when all pass.
bool run_validation(std::ostream& out);

} // namespace tropt
