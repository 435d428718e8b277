#pragma once

// Magnitude spectra and band-energy fractions of power traces.

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "swingsim/trace.hpp"

namespace swingsim {

/// One-sided amplitude spectrum of a detrended, Hann-windowed, zero-padded
/// trace. Normalization: magnitudes[k] = c_k * |X_k| / sum(window) with
/// c_k = 2 except for the DC and Nyquist bins (c = 1), so a full-scale sine
/// at a bin center reads its amplitude in watts. freqs_hz[k] = k/(n_padded*dt).
struct Spectrum {
    std::vector<double> freqs_hz;
    std::vector<double> magnitudes;
    std::string window;        // window-function identifier, "hann"
    std::size_t n_samples = 0; // source length before padding
    std::size_t n_padded = 0;
    double dt = 0.0;
    double source_mean_w = 0.0;

    double nyquist_hz() const { return 0.5 / dt; }
    double bin_width_hz() const { return 1.0 / (static_cast<double>(n_padded) * dt); }

    /// True when every non-DC magnitude is below 1e-9 of the source mean,
    /// i.e. the trace has no usable AC content.
    bool no_ac_content() const;
};

class NoAcContentError : public std::runtime_error {
public:
    explicit NoAcContentError(const std::string& msg) : std::runtime_error(msg) {}
};

/// In-place iterative radix-2 FFT; size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& data);

/// Mean-removed, Hann-windowed, zero-padded magnitude spectrum.
/// Requires at least 16 samples.
Spectrum analyze(const PowerTrace& trace);

struct BandEnergy {
    double fraction = 0.0;  // in [0, 1]
    bool no_ac = false;     // fraction reported as 0 because there is no AC energy
};

/// Share of non-DC spectral energy (sum of squared magnitudes) within
/// [f_lo_hz, f_hi_hz], band edges inclusive.
BandEnergy band_energy_fraction(const Spectrum& spectrum, double f_lo_hz, double f_hi_hz);

/// Frequency of the strongest bin at or above f_min_hz. Ties within 1e-9
/// relative magnitude resolve toward the lower frequency. Throws
/// NoAcContentError when the spectrum has no AC content.
double dominant_frequency_hz(const Spectrum& spectrum, double f_min_hz);

/// Writes `freq_hz,magnitude` CSV, %.9g, LF line endings.
void save_spectrum_csv(const Spectrum& spectrum, const std::string& path);

}  // namespace swingsim
