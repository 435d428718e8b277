#pragma once

// GPU power-smoothing simulation: programmable ramp rates, minimum power
// floor (MPF), and stop delay, with energy-overhead accounting.

#include <string>
#include <vector>

#include "swingsim/trace.hpp"

namespace swingsim {

struct SmoothingProfile {
    double ramp_up_w_per_s = 1e12;
    double ramp_down_w_per_s = 1e12;
    double mpf_frac = 0.0;             // floor as a fraction of TDP, <= mpf_max
    double mpf_max = 0.9;
    double stop_delay_s = 0.0;
    double activity_threshold_w = -1.0;  // < 0 selects idle_w + 0.05*tdp_w
    double ceiling_w = -1.0;             // < 0 selects tdp_w; edp_factor*tdp_w
                                         // passes EDP spikes through

    double floor_w(const DeviceModel& device) const { return mpf_frac * device.tdp_w; }
    double resolved_threshold_w(const DeviceModel& device) const {
        return activity_threshold_w >= 0.0 ? activity_threshold_w
                                           : device.idle_w + 0.05 * device.tdp_w;
    }
    double resolved_ceiling_w(const DeviceModel& device) const {
        return ceiling_w >= 0.0 ? ceiling_w : device.tdp_w;
    }
};

void validate(const SmoothingProfile& profile, const DeviceModel& device);

SmoothingProfile load_smoothing_profile_json(const std::string& path);
void save_smoothing_profile_json(const SmoothingProfile& profile, const std::string& path);

enum class SmoothingState { Idle, RampUp, Active, StopDelay, RampDown };

const char* to_string(SmoothingState state);

struct SmoothingResult {
    PowerTrace output;
    double raw_energy_j = 0.0;     // trapezoidal
    double output_energy_j = 0.0;  // trapezoidal
    double overhead_frac = 0.0;    // (output - raw) / raw
    std::vector<std::pair<double, SmoothingState>> state_timeline;  // (entry time, state)
    // Lifetime accounting: wall time with the floor engaged and the excess
    // energy burned relative to the raw trace.
    double floor_engaged_s = 0.0;
    double excess_energy_j = 0.0;
};

/// Runs the per-sample smoothing state machine over a raw device trace.
///
/// Idle while raw power is below the activity threshold and nothing is held;
/// on activity the output ramps toward max(raw, floor) at the programmed
/// ramp-up rate; while active it tracks clamp(max(raw, floor), ceiling) with
/// both rates bounding every sample-to-sample change, including downward
/// moves inside the active band; when activity ceases the floor is held for
/// stop_delay_s (timer resets on re-activity), then the output ramps down.
SmoothingResult apply_profile(const PowerTrace& raw, const DeviceModel& device,
                              const SmoothingProfile& profile);

/// Energy-overhead fraction as a function of MPF, computed via apply_profile
/// with the template's other settings held fixed. mpf_values must ascend.
std::vector<std::pair<double, double>> overhead_curve(const PowerTrace& raw,
                                                      const DeviceModel& device,
                                                      const SmoothingProfile& profile_template,
                                                      const std::vector<double>& mpf_values);

/// Writes the state timeline as `time_s,state` CSV.
void save_state_timeline_csv(const SmoothingResult& result, const std::string& path);

}  // namespace swingsim
