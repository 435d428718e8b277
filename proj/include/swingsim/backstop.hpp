#pragma once

// Streaming fast-telemetry backstop: sliding-window spectral monitoring of
// critical bands with tiered, hysteretic escalation.

#include <string>
#include <vector>

#include "swingsim/trace.hpp"

namespace swingsim {

struct BackstopBand {
    double f_lo_hz = 0.0;
    double f_hi_hz = 0.0;
};

struct BackstopConfig {
    double window_s = 4.0;  // STFT window
    double hop_s = 1.0;
    std::vector<BackstopBand> bands;
    // Ascending band-energy fractions for Alert / SoftThrottle / Shed.
    double tier_thresholds[3] = {0.2, 0.35, 0.5};
    int deescalate_after = 3;  // consecutive clean windows before Deescalate
};

BackstopConfig load_backstop_config_json(const std::string& path);
void save_backstop_config_json(const BackstopConfig& cfg, const std::string& path);

enum class BackstopAction { Alert, SoftThrottle, Shed, Deescalate };

const char* to_string(BackstopAction action);

struct BackstopEvent {
    double time_s = 0.0;  // time of the window's last sample
    BackstopBand band;
    double measured_fraction = 0.0;
    BackstopAction action = BackstopAction::Alert;
};

/// Single-owner stateful detector. Feed samples in time order; every hop_s
/// of accumulated samples (once the first window has filled) the detrended,
/// Hann-windowed buffer is analyzed and the per-band energy fractions are
/// compared against the tier thresholds. Escalations are emitted on upward
/// tier crossings; Deescalate after deescalate_after consecutive windows
/// below the first threshold.
class BackstopDetector {
public:
    BackstopDetector(const BackstopConfig& cfg, double dt_s, double origin_time_s = 0.0);

    std::vector<BackstopEvent> feed(double sample_w);

    const BackstopConfig& config() const { return cfg_; }

private:
    BackstopConfig cfg_;
    double dt_;
    double origin_;
    std::size_t window_n_;
    std::size_t hop_n_;
    std::vector<double> buffer_;  // ring of the last window_n_ samples
    std::size_t fed_ = 0;
    struct BandState {
        int tier = 0;
        int clean_windows = 0;
    };
    std::vector<BandState> states_;
};

/// Feeds the whole trace through a fresh detector; identical event list.
std::vector<BackstopEvent> run_offline(const PowerTrace& trace, const BackstopConfig& cfg);

/// Writes `time_s,band_lo_hz,band_hi_hz,fraction,action` CSV.
void save_events_csv(const std::vector<BackstopEvent>& events, const std::string& path);

}  // namespace swingsim
