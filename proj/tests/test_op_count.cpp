#include "tropt/baselines.hpp"
#include "tropt/errors.hpp"
#include "tropt/op_count.hpp"

#include <doctest.h>

#include <cmath>

using namespace tropt;

namespace {

// Closed forms typed in directly, evaluated in floating point.
double ac_tr(double n, double b) { return 14 * n * std::log2(n) + 13 * n + 8.0 / 3 * b * b * b + 12 * b * b + 4.0 / 3 * b + 28; }
double papr_tr(double n, double b) { return 14 * n * std::log2(n) + 10 * n + 8.0 / 3 * b * b * b + 26 * b * b + 1.0 / 3 * b + 28; }
double ncc_tr(double n, double theta) { return 8 * n * std::log2(n) + 14 * theta + 13; }

} // namespace

TEST_CASE("per-iteration closed forms")
{
    for (int n : {64, 256, 1024, 4096}) {
        for (int b : {1, 3, 11, 20}) {
            CHECK(static_cast<double>(count_ops_ac_tr(n, b)) == doctest::Approx(ac_tr(n, b)).epsilon(1e-14));
            CHECK(static_cast<double>(count_ops_papr_tr(n, b)) == doctest::Approx(papr_tr(n, b)).epsilon(1e-14));
            CHECK(count_ops_baseline(BaselineAlgorithm::PaprTr, n, b, 0) == count_ops_papr_tr(n, b));
        }
        for (int theta : {0, 5, 100}) {
            CHECK(static_cast<double>(count_ops_ncc_tr(n, theta)) == doctest::Approx(ncc_tr(n, theta)).epsilon(1e-14));
            CHECK(count_ops_baseline(BaselineAlgorithm::NccTr, n, 11, theta) == count_ops_ncc_tr(n, theta));
        }
    }
}

TEST_CASE("default configuration values")
{
    CHECK(count_ops_ac_tr(1024, 11) == 161716);
    CHECK(count_ops_papr_tr(1024, 11) == 160327);
    CHECK(count_ops_ncc_tr(1024, 0) == 81933);
}

TEST_CASE("building blocks")
{
    CHECK(split_radix_complex_ops(1024) == 4 * 1024 * 10 - 6 * 1024 + 8);
    CHECK(cholesky_ops(11) == (8 * 1331 + 11) / 3 + 2 * 121);
    CHECK(substitution_ops(11) == 8 * 121);
    CHECK(log2_exact(1024) == 10);
    CHECK_THROWS_AS(log2_exact(1000), ConfigError);
}

TEST_CASE("counter accumulates")
{
    OpCounter c;
    c.add(5);
    c.add(7);
    CHECK(c.total() == 12);
    c.reset();
    CHECK(c.total() == 0);
}
