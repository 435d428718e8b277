#pragma once

// Rack-level energy-storage simulation: a charge/discharge controller that
// flattens the grid-side trace subject to capacity, rate, and efficiency
// limits, with state-of-charge tracking.

#include <string>
#include <vector>

#include "swingsim/trace.hpp"

namespace swingsim {

enum class TargetPolicyKind { Fixed, MovingAverage };

struct TargetPolicy {
    TargetPolicyKind kind = TargetPolicyKind::Fixed;
    double setpoint_w = 0.0;  // Fixed
    double tau_s = 10.0;      // MovingAverage: exponential filter time constant
};

struct StorageConfig {
    double capacity_j = 0.0;
    double soc_init_frac = 0.5;
    double max_charge_w = 0.0;
    double max_discharge_w = 0.0;
    double round_trip_efficiency = 1.0;  // in (0, 1], split sqrt/sqrt between legs
    TargetPolicy target_policy;
};

void validate(const StorageConfig& cfg);

StorageConfig load_storage_config_json(const std::string& path);
void save_storage_config_json(const StorageConfig& cfg, const std::string& path);

enum class SaturationKind { Full, Empty, RateLimited };

const char* to_string(SaturationKind kind);

struct SaturationEvent {
    double time_s = 0.0;  // entry time of a contiguous saturated stretch
    SaturationKind kind = SaturationKind::Full;
};

struct StorageResult {
    PowerTrace grid;          // power drawn from the utility
    std::vector<double> soc_j;  // state of charge after each step
    double soc_init_j = 0.0;
    std::vector<SaturationEvent> saturation_events;
    double peak_grid_w = 0.0;
    double trough_grid_w = 0.0;

    double soc_final_j() const { return soc_j.empty() ? soc_init_j : soc_j.back(); }
};

/// Step integration: per sample the policy target T is computed, the battery
/// power b = load - T (positive = discharge) is clipped to the rate limits
/// and to what the state of charge allows over dt with sqrt(eta) efficiency
/// per leg, and grid = load - b. Mode switches are instantaneous. Saturation
/// is reported, never an error; the grid then follows the load.
StorageResult simulate_storage(const PowerTrace& load, const StorageConfig& cfg);

struct CapacityRequirement {
    double capacity_j = 0.0;
    double soc_init_frac = 0.0;  // initial charge that keeps the trajectory in bounds
};

/// Minimal capacity (and implied initial state of charge) such that
/// flattening the load to setpoint_w with unbounded rates never saturates:
/// the peak-to-trough excursion of the running integral of (load - setpoint)
/// with the efficiency factors applied.
CapacityRequirement required_capacity(const PowerTrace& load, double setpoint_w,
                                      double round_trip_efficiency);

/// Writes `time_s,soc_j` CSV.
void save_soc_csv(const StorageResult& result, const std::string& path);

}  // namespace swingsim
