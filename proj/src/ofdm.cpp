#include "tropt/ofdm.hpp"

#include "tropt/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

namespace tropt {

namespace {

template <std::size_t M>
constexpr std::array<cplx, M * M> square_qam(double norm)
{
    std::array<cplx, M * M> pts{};
    std::size_t k = 0;
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t q = 0; q < M; ++q) {
            const double re = 2.0 * static_cast<double>(i) - static_cast<double>(M - 1);
            const double im = 2.0 * static_cast<double>(q) - static_cast<double>(M - 1);
            pts[k++] = cplx(re / norm, im / norm);
        }
    }
    return pts;
}

const std::array<cplx, 4> kQpsk = square_qam<2>(std::sqrt(2.0));
const std::array<cplx, 16> kQam16 = square_qam<4>(std::sqrt(10.0));
const std::array<cplx, 64> kQam64 = square_qam<8>(std::sqrt(42.0));

void check_symbol(const SystemConfig& cfg, const FreqSymbol& sym)
{
    if (sym.d_dc.size() != cfg.alpha() || sym.d_tr.size() != cfg.beta()) {
        throw ConfigError("symbol lengths do not match the data/TR index sets");
    }
}

void check_index_range(const SystemConfig& cfg, std::span<const int> indices)
{
    for (int k : indices) {
        if (k < -cfg.n_fft / 2 || k >= cfg.n_fft / 2) {
            throw ConfigError("subcarrier index " + std::to_string(k) + " outside {-N/2, ..., N/2-1}");
        }
    }
}

void scatter(std::span<cplx> spectrum, std::span<const int> indices, std::span<const cplx> values)
{
    const int n = static_cast<int>(spectrum.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        spectrum[static_cast<std::size_t>(bin_slot(indices[i], n))] += values[i];
    }
}

TimeFrame synthesize(const SystemConfig& cfg, std::span<const cplx> d_dc, std::span<const cplx> d_tr)
{
    if (!is_power_of_two(cfg.n_fft) || cfg.n_cp < 0 || cfg.n_cp >= cfg.n_fft) {
        throw ConfigError("invalid FFT size or cyclic prefix length");
    }
    check_index_range(cfg, cfg.data_indices);
    check_index_range(cfg, cfg.tr_indices);
    CVec spectrum(static_cast<std::size_t>(cfg.n_fft));
    scatter(spectrum, cfg.data_indices, d_dc);
    scatter(spectrum, cfg.tr_indices, d_tr);
    return with_cyclic_prefix(idft(spectrum), cfg.n_cp);
}

} // namespace

std::string to_string(Constellation c)
{
    switch (c) {
    case Constellation::Qpsk:
        return "qpsk";
    case Constellation::Qam16:
        return "qam16";
    case Constellation::Qam64:
        return "qam64";
    }
    return "unknown";
}

Constellation constellation_from_string(const std::string& name)
{
    if (name == "qpsk") return Constellation::Qpsk;
    if (name == "qam16") return Constellation::Qam16;
    if (name == "qam64") return Constellation::Qam64;
    throw ConfigError("unknown constellation '" + name + "'");
}

void SystemConfig::validate() const
{
    if (!is_power_of_two(n_fft)) {
        throw ConfigError("n_fft must be a power of two, got " + std::to_string(n_fft));
    }
    if (n_cp < 0 || n_cp >= n_fft) {
        throw ConfigError("n_cp must satisfy 0 <= n_cp < n_fft");
    }
    check_index_range(*this, data_indices);
    check_index_range(*this, tr_indices);
    std::set<int> seen;
    for (int k : data_indices) {
        if (!seen.insert(k).second) throw ConfigError("duplicate data index " + std::to_string(k));
    }
    for (int k : tr_indices) {
        if (!seen.insert(k).second) throw ConfigError("TR index overlaps or repeats: " + std::to_string(k));
    }
    if (seen.contains(0)) {
        throw ConfigError("subcarrier 0 must not be modulated");
    }
}

TimeFrame with_cyclic_prefix(std::span<const cplx> core, int n_cp)
{
    const auto n = core.size();
    if (n_cp < 0 || static_cast<std::size_t>(n_cp) >= n) {
        throw ConfigError("cyclic prefix longer than the symbol");
    }
    TimeFrame frame;
    frame.n_cp = n_cp;
    frame.samples.reserve(n + static_cast<std::size_t>(n_cp));
    frame.samples.insert(frame.samples.end(), core.end() - n_cp, core.end());
    frame.samples.insert(frame.samples.end(), core.begin(), core.end());
    return frame;
}

TimeFrame modulate(const SystemConfig& cfg, const FreqSymbol& sym)
{
    check_symbol(cfg, sym);
    return synthesize(cfg, sym.d_dc, sym.d_tr);
}

TimeFrame data_waveform(const SystemConfig& cfg, const FreqSymbol& sym)
{
    check_symbol(cfg, sym);
    const CVec zeros(cfg.beta());
    return synthesize(cfg, sym.d_dc, zeros);
}

CVec tr_waveform(const SystemConfig& cfg, std::span<const cplx> d_tr)
{
    if (d_tr.size() != cfg.beta()) {
        throw ConfigError("TR vector length does not match the TR index set");
    }
    CVec spectrum(static_cast<std::size_t>(cfg.n_fft));
    scatter(spectrum, cfg.tr_indices, d_tr);
    return idft(spectrum);
}

CVec gather_bins(std::span<const cplx> spectrum, std::span<const int> indices)
{
    const int n = static_cast<int>(spectrum.size());
    CVec out;
    out.reserve(indices.size());
    for (int k : indices) {
        out.push_back(spectrum[static_cast<std::size_t>(bin_slot(k, n))]);
    }
    return out;
}

SymbolStream::SymbolStream(std::uint64_t seed, std::uint64_t symbol_index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(symbol_index),
                      static_cast<std::uint32_t>(symbol_index >> 32)};
    engine_.seed(seq);
}

std::span<const cplx> constellation_points(Constellation c)
{
    switch (c) {
    case Constellation::Qpsk:
        return kQpsk;
    case Constellation::Qam16:
        return kQam16;
    case Constellation::Qam64:
        return kQam64;
    }
    return kQpsk;
}

FreqSymbol random_frame(const SystemConfig& cfg, SymbolStream& stream)
{
    const auto points = constellation_points(cfg.constellation);
    std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
    FreqSymbol sym;
    sym.d_dc.resize(cfg.alpha());
    for (auto& d : sym.d_dc) {
        d = points[pick(stream.engine())];
    }
    sym.d_tr.assign(cfg.beta(), cplx{});
    return sym;
}

} // namespace tropt
