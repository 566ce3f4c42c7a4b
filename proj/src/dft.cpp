#include "tropt/dft.hpp"

#include "tropt/errors.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

namespace tropt {

namespace {

enum class PlanKind { Forward, Backward, RealForward };

// FFTW planning is not thread-safe; execution of an existing plan on new arrays is.
// Plans are created once per (size, kind) and kept for the process lifetime.
class PlanCache {
public:
    static PlanCache& instance()
    {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(int n, PlanKind kind)
    {
        std::lock_guard lock(mutex_);
        auto key = std::make_tuple(n, kind);
        if (auto it = plans_.find(key); it != plans_.end()) {
            return it->second;
        }
        fftw_plan plan = nullptr;
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        if (kind == PlanKind::RealForward) {
            std::vector<double> in(n);
            std::vector<cplx> out(n / 2 + 1);
            plan = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()), flags);
        } else {
            std::vector<cplx> in(n), out(n);
            plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                    reinterpret_cast<fftw_complex*>(out.data()),
                                    kind == PlanKind::Forward ? FFTW_FORWARD : FFTW_BACKWARD, flags);
        }
        plans_.emplace(key, plan);
        return plan;
    }

    PlanCache(const PlanCache&) = delete;
    PlanCache& operator=(const PlanCache&) = delete;

private:
    PlanCache() = default;
    ~PlanCache()
    {
        for (auto& [key, plan] : plans_) {
            fftw_destroy_plan(plan);
        }
    }

    std::mutex mutex_;
    std::map<std::tuple<int, PlanKind>, fftw_plan> plans_;
};

void check_length(std::size_t n)
{
    if (n == 0 || n > (1u << 30) || !is_power_of_two(static_cast<int>(n))) {
        throw ConfigError("transform length must be a power of two, got " + std::to_string(n));
    }
}

CVec complex_transform(std::span<const cplx> x, PlanKind kind)
{
    check_length(x.size());
    const int n = static_cast<int>(x.size());
    CVec in(x.begin(), x.end());
    CVec out(x.size());
    fftw_execute_dft(PlanCache::instance().get(n, kind), reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& v : out) {
        v *= scale;
    }
    return out;
}

} // namespace

bool is_power_of_two(int n) noexcept { return n > 0 && (n & (n - 1)) == 0; }

CVec dft(std::span<const cplx> x) { return complex_transform(x, PlanKind::Forward); }

CVec idft(std::span<const cplx> spectrum) { return complex_transform(spectrum, PlanKind::Backward); }

CVec dft_real(std::span<const double> x)
{
    check_length(x.size());
    const int n = static_cast<int>(x.size());
    std::vector<double> in(x.begin(), x.end());
    CVec half(n / 2 + 1);
    fftw_execute_dft_r2c(PlanCache::instance().get(n, PlanKind::RealForward), in.data(),
                         reinterpret_cast<fftw_complex*>(half.data()));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    CVec out(n);
    for (int k = 0; k <= n / 2; ++k) {
        out[k] = half[k] * scale;
    }
    // Hermitian symmetry fills the upper half.
    for (int k = n / 2 + 1; k < n; ++k) {
        out[k] = std::conj(out[n - k]);
    }
    return out;
}

cplx dft_bin(std::span<const cplx> x, int m)
{
    check_length(x.size());
    const int n = static_cast<int>(x.size());
    const int slot = bin_slot(m, n);
    cplx acc{0.0, 0.0};
    for (int k = 0; k < n; ++k) {
        // Reduce the phase index exactly before converting to an angle.
        const long long idx = (static_cast<long long>(k) * slot) % n;
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(idx) / n;
        acc += x[k] * cplx(std::cos(angle), std::sin(angle));
    }
    return acc / std::sqrt(static_cast<double>(n));
}

} // namespace tropt
