#include "swingsim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace swingsim {

namespace {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

void fft_radix2(std::vector<std::complex<double>>& data) {
    const std::size_t n = data.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft_radix2: size must be a power of two");

    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                // Direct trig per twiddle keeps rounding error flat across stages.
                const std::complex<double> w(std::cos(ang * static_cast<double>(k)),
                                             std::sin(ang * static_cast<double>(k)));
                const std::complex<double> u = data[i + k];
                const std::complex<double> v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
            }
        }
    }
}

Spectrum analyze(const PowerTrace& trace) {
    validate(trace);
    const std::size_t n = trace.size();
    if (n < 16) throw std::invalid_argument("analyze: need at least 16 samples");

    const double mean = mean_power_w(trace);
    const std::size_t n_pad = next_pow2(n);

    std::vector<std::complex<double>> buf(n_pad, {0.0, 0.0});
    double window_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w =
            0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                  static_cast<double>(n)));
        window_sum += w;
        buf[i] = {(trace.samples[i] - mean) * w, 0.0};
    }
    fft_radix2(buf);

    Spectrum spec;
    spec.window = "hann";
    spec.n_samples = n;
    spec.n_padded = n_pad;
    spec.dt = trace.dt;
    spec.source_mean_w = mean;
    const std::size_t bins = n_pad / 2 + 1;
    spec.freqs_hz.resize(bins);
    spec.magnitudes.resize(bins);
    const double df = 1.0 / (static_cast<double>(n_pad) * trace.dt);
    for (std::size_t k = 0; k < bins; ++k) {
        const double c = (k == 0 || k == n_pad / 2) ? 1.0 : 2.0;
        spec.freqs_hz[k] = df * static_cast<double>(k);
        spec.magnitudes[k] = c * std::abs(buf[k]) / window_sum;
    }
    return spec;
}

bool Spectrum::no_ac_content() const {
    double peak = 0.0;
    for (std::size_t k = 1; k < magnitudes.size(); ++k) peak = std::max(peak, magnitudes[k]);
    return peak <= 1e-9 * source_mean_w;
}

BandEnergy band_energy_fraction(const Spectrum& spectrum, double f_lo_hz, double f_hi_hz) {
    if (!(f_lo_hz > 0.0) || !(f_hi_hz > f_lo_hz))
        throw std::invalid_argument("band_energy_fraction: require 0 < f_lo < f_hi");
    if (f_hi_hz > spectrum.nyquist_hz() * (1.0 + 1e-9))
        throw std::invalid_argument("band_energy_fraction: f_hi above Nyquist");

    double in_band = 0.0, total = 0.0;
    for (std::size_t k = 1; k < spectrum.magnitudes.size(); ++k) {
        const double e = spectrum.magnitudes[k] * spectrum.magnitudes[k];
        total += e;
        const double f = spectrum.freqs_hz[k];
        if (f >= f_lo_hz && f <= f_hi_hz) in_band += e;
    }
    if (spectrum.no_ac_content() || total == 0.0) return {0.0, true};
    return {in_band / total, false};
}

double dominant_frequency_hz(const Spectrum& spectrum, double f_min_hz) {
    if (f_min_hz >= spectrum.nyquist_hz())
        throw std::invalid_argument("dominant_frequency_hz: f_min at or above Nyquist");
    if (spectrum.no_ac_content())
        throw NoAcContentError("dominant_frequency_hz: trace has no AC content");

    double best_mag = -1.0;
    double best_f = -1.0;
    for (std::size_t k = 1; k < spectrum.magnitudes.size(); ++k) {
        if (spectrum.freqs_hz[k] < f_min_hz) continue;
        if (spectrum.magnitudes[k] > best_mag * (1.0 + 1e-9)) {
            best_mag = spectrum.magnitudes[k];
            best_f = spectrum.freqs_hz[k];
        }
    }
    if (best_f < 0.0)
        throw std::invalid_argument("dominant_frequency_hz: no bins at or above f_min");
    return best_f;
}

void save_spectrum_csv(const Spectrum& spectrum, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("save_spectrum_csv: cannot open " + path + " for writing");
    std::fputs("freq_hz,magnitude\n", f);
    for (std::size_t k = 0; k < spectrum.freqs_hz.size(); ++k) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g\n", spectrum.freqs_hz[k],
                      spectrum.magnitudes[k]);
        std::fputs(buf, f);
    }
    if (std::fclose(f) != 0)
        throw std::runtime_error("save_spectrum_csv: write to " + path + " failed");
}

}  // namespace swingsim
