#include "swingsim/firefly.hpp"

#include <algorithm>
#include <cmath>

#include "swingsim/json_util.hpp"
#include "swingsim/spectral.hpp"
#include "swingsim/utility_spec.hpp"

namespace swingsim {

void validate(const FireflyConfig& cfg, const DeviceModel& device) {
    validate(device);
    if (!(cfg.telemetry_period_s >= 0.001 && cfg.telemetry_period_s <= 0.1))
        throw std::invalid_argument("FireflyConfig: telemetry_period_s must be in [0.001, 0.1]");
    if (!(cfg.engage_threshold_w >= 0.0))
        throw std::invalid_argument("FireflyConfig: engage_threshold_w must be >= 0");
    if (!(cfg.fill_target_w >= 0.0 && cfg.fill_target_w <= device.tdp_w))
        throw std::invalid_argument("FireflyConfig: fill_target_w must be in [0, tdp_w]");
    if (!(cfg.backoff_period_s > 0.0) || !(cfg.probe_duration_s > 0.0))
        throw std::invalid_argument("FireflyConfig: backoff and probe durations must be > 0");
    if (!(cfg.probe_duration_s < cfg.backoff_period_s))
        throw std::invalid_argument("FireflyConfig: probe_duration_s must be < backoff_period_s");
    if (cfg.ramp_stagger == RampStagger::Staggered && !(cfg.stagger_span_s > 0.0))
        throw std::invalid_argument("FireflyConfig: staggered mode needs stagger_span_s > 0");
    if (!(cfg.perf_overhead_frac >= 0.0 && cfg.perf_overhead_frac <= 1.0))
        throw std::invalid_argument("FireflyConfig: perf_overhead_frac must be in [0, 1]");
}

FireflyConfig load_firefly_config_json(const std::string& path) {
    const auto j = jsonu::load_file(path);
    FireflyConfig cfg;
    try {
        cfg.telemetry_period_s = jsonu::get_num(j, "telemetry_period_s");
        cfg.engage_threshold_w = jsonu::get_num(j, "engage_threshold_w");
        cfg.fill_target_w = jsonu::get_num(j, "fill_target_w");
        cfg.backoff_period_s = jsonu::get_num_or(j, "backoff_period_s", 1.0);
        cfg.probe_duration_s = jsonu::get_num_or(j, "probe_duration_s", 0.01);
        const std::string mode = jsonu::get_str_or(j, "ramp_stagger", "synchronous-step");
        if (mode == "synchronous-step")
            cfg.ramp_stagger = RampStagger::SynchronousStep;
        else if (mode == "staggered")
            cfg.ramp_stagger = RampStagger::Staggered;
        else
            throw std::invalid_argument("ramp_stagger must be 'synchronous-step' or 'staggered'");
        cfg.stagger_span_s = jsonu::get_num_or(j, "stagger_span_s", 0.0);
        cfg.perf_overhead_frac = jsonu::get_num_or(j, "perf_overhead_frac", 0.05);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    return cfg;
}

void save_firefly_config_json(const FireflyConfig& cfg, const std::string& path) {
    jsonu::json j;
    j["telemetry_period_s"] = cfg.telemetry_period_s;
    j["engage_threshold_w"] = cfg.engage_threshold_w;
    j["fill_target_w"] = cfg.fill_target_w;
    j["backoff_period_s"] = cfg.backoff_period_s;
    j["probe_duration_s"] = cfg.probe_duration_s;
    j["ramp_stagger"] =
        cfg.ramp_stagger == RampStagger::Staggered ? "staggered" : "synchronous-step";
    j["stagger_span_s"] = cfg.stagger_span_s;
    j["perf_overhead_frac"] = cfg.perf_overhead_frac;
    jsonu::save_file(j, path);
}

FireflyResult simulate_firefly(const PowerTrace& raw, const DeviceModel& device,
                               const FireflyConfig& cfg) {
    validate(raw);
    validate(cfg, device);
    if (raw.dt > cfg.telemetry_period_s * (1.0 + 1e-9))
        throw std::invalid_argument("simulate_firefly: raw.dt must be <= telemetry_period_s");

    const std::size_t n = raw.size();
    const double dt = raw.dt;

    // Telemetry tick flags on the sample grid.
    std::vector<bool> is_tick(n, false);
    for (std::size_t k = 0;; ++k) {
        const auto idx = static_cast<std::size_t>(
            std::llround(static_cast<double>(k) * cfg.telemetry_period_s / dt));
        if (idx >= n) break;
        is_tick[idx] = true;
    }

    FireflyResult result;
    result.output.dt = dt;
    result.output.origin_time = raw.origin_time;
    result.output.samples.resize(n);
    result.filler_trace = result.output;
    result.reported_perf_overhead_frac = cfg.perf_overhead_frac;

    const double stagger_rate = cfg.ramp_stagger == RampStagger::Staggered
                                    ? cfg.fill_target_w / cfg.stagger_span_s
                                    : HUGE_VAL;

    bool engaged = false;
    bool in_probe = false;
    double cmd_level = 0.0;      // commanded filler level, effective now
    double applied_level = 0.0;  // after the stagger ramp
    double pending_level = 0.0;
    std::size_t pending_at = SIZE_MAX;
    double next_probe_t = HUGE_VAL;
    double probe_end_t = HUGE_VAL;
    std::size_t onset = 0;  // start of the current below-threshold span

    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        const double r = raw.samples[i];
        if (r >= cfg.engage_threshold_w) onset = i + 1;

        if (pending_at == i) {
            cmd_level = pending_level;
            pending_at = SIZE_MAX;
        }

        if (engaged && !in_probe && t >= next_probe_t - 0.5 * dt) {
            // Back off to read the activity counters: hard notch to zero.
            in_probe = true;
            probe_end_t = next_probe_t + cfg.probe_duration_s;
            next_probe_t += cfg.backoff_period_s;
            cmd_level = 0.0;
            applied_level = 0.0;
            pending_at = SIZE_MAX;
            ++result.probe_notch_count;
        } else if (in_probe && t >= probe_end_t - 0.5 * dt) {
            in_probe = false;
            if (r < cfg.engage_threshold_w) {
                pending_level = std::max(cfg.fill_target_w - r, 0.0);
                pending_at = i + 1;
            } else {
                engaged = false;  // primary is busy again
                next_probe_t = HUGE_VAL;
            }
        } else if (is_tick[i] && !in_probe) {
            if (!engaged && r < cfg.engage_threshold_w) {
                engaged = true;
                pending_level = std::max(cfg.fill_target_w - r, 0.0);
                pending_at = i + 1;
                next_probe_t = t + cfg.backoff_period_s;
                result.detection_latencies_s.push_back(static_cast<double>(i + 1 - onset) * dt);
            } else if (engaged) {
                pending_level = std::max(cfg.fill_target_w - r, 0.0);
                pending_at = i + 1;
            }
        }

        // Stagger ramp toward the commanded level; steps are instantaneous
        // in synchronous-step mode. Notches above already forced zero.
        if (applied_level < cmd_level)
            applied_level = std::min(cmd_level, applied_level + stagger_rate * dt);
        else
            applied_level = cmd_level;

        const double out = std::min(r + applied_level, device.tdp_w);
        result.output.samples[i] = out;
        result.filler_trace.samples[i] = out - r;
    }

    const double raw_e = energy_trapz_j(raw);
    result.energy_overhead_frac =
        raw_e > 0.0 ? (energy_trapz_j(result.output) - raw_e) / raw_e : 0.0;
    return result;
}

namespace {

MitigationMetrics measure(const PowerTrace& trace, double band_lo_hz, double band_hi_hz,
                          double overhead_frac) {
    MitigationMetrics m;
    m.energy_overhead_frac = overhead_frac;
    const TimeDomainMetrics td = measure_time_domain(trace, 1.0, 1.0);
    m.max_ramp_up_w_per_s = td.ramp_up_w_per_s;
    m.max_ramp_down_w_per_s = td.ramp_down_w_per_s;
    m.dynamic_range_w = td.dynamic_range_w;
    const BandEnergy be = band_energy_fraction(analyze(trace), band_lo_hz, band_hi_hz);
    m.band_fraction = be.fraction;
    m.band_no_ac = be.no_ac;
    return m;
}

}  // namespace

MitigationComparison compare_mitigations(const PowerTrace& raw, const DeviceModel& device,
                                         const FireflyConfig& firefly_cfg,
                                         const SmoothingProfile& smoothing_profile,
                                         double band_lo_hz, double band_hi_hz) {
    const FireflyResult ff = simulate_firefly(raw, device, firefly_cfg);
    const SmoothingResult sm = apply_profile(raw, device, smoothing_profile);

    MitigationComparison cmp;
    cmp.band_lo_hz = band_lo_hz;
    cmp.band_hi_hz = band_hi_hz;
    cmp.raw = measure(raw, band_lo_hz, band_hi_hz, 0.0);
    cmp.firefly = measure(ff.output, band_lo_hz, band_hi_hz, ff.energy_overhead_frac);
    cmp.smoothing = measure(sm.output, band_lo_hz, band_hi_hz, sm.overhead_frac);
    cmp.firefly_perf_overhead_frac = ff.reported_perf_overhead_frac;
    for (double lat : ff.detection_latencies_s)
        cmp.firefly_max_detection_latency_s = std::max(cmp.firefly_max_detection_latency_s, lat);
    return cmp;
}

}  // namespace swingsim
