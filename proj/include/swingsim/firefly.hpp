#pragma once

// Software-only mitigation: telemetry-sampled power monitoring with a
// threshold-triggered filler workload and periodic back-off probing.

#include <string>
#include <vector>

#include "swingsim/smoothing.hpp"
#include "swingsim/trace.hpp"

namespace swingsim {

enum class RampStagger { SynchronousStep, Staggered };

struct FireflyConfig {
    double telemetry_period_s = 0.001;  // valid 0.001 - 0.1
    double engage_threshold_w = 0.0;
    double fill_target_w = 0.0;         // <= TDP
    double backoff_period_s = 1.0;
    double probe_duration_s = 0.01;     // < backoff_period_s
    RampStagger ramp_stagger = RampStagger::SynchronousStep;
    double stagger_span_s = 0.0;        // filler ramp span in Staggered mode
    double perf_overhead_frac = 0.05;   // accounting-only primary slowdown bound
};

void validate(const FireflyConfig& cfg, const DeviceModel& device);

FireflyConfig load_firefly_config_json(const std::string& path);
void save_firefly_config_json(const FireflyConfig& cfg, const std::string& path);

struct FireflyResult {
    PowerTrace output;        // raw + filler, clamped at TDP
    PowerTrace filler_trace;  // actual filler contribution (output - raw)
    std::vector<double> detection_latencies_s;  // one per engage event
    double energy_overhead_frac = 0.0;          // trapezoidal
    int probe_notch_count = 0;
    double reported_perf_overhead_frac = 0.0;   // copied from config, accounting only
};

/// Telemetry is observed at multiples of telemetry_period_s on the trace
/// grid; a filler level set at a tick takes effect one trace sample later.
/// While engaged the level is recomputed every tick as fill_target - raw;
/// every backoff_period_s the filler drops to zero for probe_duration_s
/// (the probe notch) and the engage decision is re-evaluated at notch end.
FireflyResult simulate_firefly(const PowerTrace& raw, const DeviceModel& device,
                               const FireflyConfig& cfg);

struct MitigationMetrics {
    double energy_overhead_frac = 0.0;
    double max_ramp_up_w_per_s = 0.0;
    double max_ramp_down_w_per_s = 0.0;
    double dynamic_range_w = 0.0;     // over 1 s windows
    double band_fraction = 0.0;       // non-DC energy share in the critical band
    bool band_no_ac = false;
};

struct MitigationComparison {
    MitigationMetrics raw;
    MitigationMetrics firefly;
    MitigationMetrics smoothing;
    double firefly_max_detection_latency_s = 0.0;
    double firefly_perf_overhead_frac = 0.0;
    // The MPS-style context sharing couples the failure domains of the
    // primary and filler workloads; carried as a risk flag, not simulated.
    bool firefly_shared_failure_domain = true;
    double band_lo_hz = 0.1;
    double band_hi_hz = 20.0;
};

/// Runs both mitigations on the same raw trace and reports the
/// compliance-relevant metrics side by side.
MitigationComparison compare_mitigations(const PowerTrace& raw, const DeviceModel& device,
                                         const FireflyConfig& firefly_cfg,
                                         const SmoothingProfile& smoothing_profile,
                                         double band_lo_hz = 0.1, double band_hi_hz = 20.0);

}  // namespace swingsim
