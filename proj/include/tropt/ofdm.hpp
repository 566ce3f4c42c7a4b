#pragma once

#include "tropt/dft.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace tropt {

enum class Constellation { Qpsk, Qam16, Qam64 };

std::string to_string(Constellation c);
Constellation constellation_from_string(const std::string& name);

/// OFDM numerology. Subcarrier indices live in {-N/2, ..., N/2-1}.
struct SystemConfig {
    int n_fft = 1024;
    int n_cp = 128;
    std::vector<int> data_indices;
    std::vector<int> tr_indices;
    Constellation constellation = Constellation::Qpsk;
    std::uint64_t seed = 1;

    std::size_t alpha() const noexcept { return data_indices.size(); }
    std::size_t beta() const noexcept { return tr_indices.size(); }
    int frame_len() const noexcept { return n_fft + n_cp; }

    /// Throws ConfigError when any invariant is violated: N a power of two,
    /// 0 <= N_CP < N, indices in range, no DC, data and TR sets disjoint
    /// and free of duplicates.
    void validate() const;
};

/// Frequency-domain content of one OFDM symbol.
struct FreqSymbol {
    CVec d_dc;
    CVec d_tr;
};

/// Time-domain symbol, samples n = -N_CP, ..., N-1 stored contiguously.
struct TimeFrame {
    int n_cp = 0;
    CVec samples;

    int n_fft() const noexcept { return static_cast<int>(samples.size()) - n_cp; }
    const cplx& at(int n) const { return samples[static_cast<std::size_t>(n + n_cp)]; }
    cplx& at(int n) { return samples[static_cast<std::size_t>(n + n_cp)]; }

    /// Samples n = 0, ..., N-1.
    std::span<const cplx> core() const { return std::span(samples).subspan(static_cast<std::size_t>(n_cp)); }
};

/// Prepends the last n_cp samples of the core.
TimeFrame with_cyclic_prefix(std::span<const cplx> core, int n_cp);

// Waveform synthesis. All transforms are unitary.
TimeFrame modulate(const SystemConfig& cfg, const FreqSymbol& sym);
TimeFrame data_waveform(const SystemConfig& cfg, const FreqSymbol& sym);

/// Core (N samples) of sum_l d_l F*_{n,l}; the reserved-tone contribution.
CVec tr_waveform(const SystemConfig& cfg, std::span<const cplx> d_tr);

/// Reads d at the given centered bins from a natural-order spectrum.
CVec gather_bins(std::span<const cplx> spectrum, std::span<const int> indices);

/// Deterministic per-symbol random stream derived from (seed, symbol index).
class SymbolStream {
public:
    SymbolStream(std::uint64_t seed, std::uint64_t symbol_index);

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// Unit-average-power points of the constellation.
std::span<const cplx> constellation_points(Constellation c);

/// Data symbols drawn uniformly from the constellation; TR symbols zero.
FreqSymbol random_frame(const SystemConfig& cfg, SymbolStream& stream);

} // namespace tropt
