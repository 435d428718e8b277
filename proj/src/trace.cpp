#include "swingsim/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace swingsim {

namespace {

struct Segment {
    double t_end;  // segment covers [previous t_end, t_end)
    double level_w;
};

// Samples a piecewise-constant timeline at interval midpoints. Segment
// boundaries that fall on the sample grid never coincide with a midpoint,
// so classification is stable against last-ulp boundary wobble.
std::vector<double> sample_segments(const std::vector<Segment>& segments, std::size_t n,
                                    double dt) {
    std::vector<double> out(n);
    std::size_t seg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t_mid = (static_cast<double>(i) + 0.5) * dt;
        while (seg + 1 < segments.size() && t_mid >= segments[seg].t_end) ++seg;
        out[i] = segments[seg].level_w;
    }
    return out;
}

std::size_t sample_count(double duration_s, double dt_s) {
    return static_cast<std::size_t>(std::llround(duration_s / dt_s));
}

double print_quantum(double magnitude) {
    if (magnitude <= 0.0) return 0.0;
    // %.9g keeps 9 significant digits; one unit in the last printed place.
    return std::pow(10.0, std::floor(std::log10(magnitude)) - 8.0);
}

}  // namespace

double mean_power_w(const PowerTrace& trace) {
    double sum = 0.0;
    for (double s : trace.samples) sum += s;
    return sum / static_cast<double>(trace.samples.size());
}

double energy_step_j(const PowerTrace& trace) {
    double sum = 0.0;
    for (double s : trace.samples) sum += s;
    return trace.dt * sum;
}

double energy_trapz_j(const PowerTrace& trace) {
    const auto& s = trace.samples;
    if (s.size() < 2) return 0.0;
    double sum = 0.0;
    for (double v : s) sum += v;
    sum -= 0.5 * (s.front() + s.back());
    return trace.dt * sum;
}

double peak_to_trough_w(const PowerTrace& trace) {
    auto [lo, hi] = std::minmax_element(trace.samples.begin(), trace.samples.end());
    return *hi - *lo;
}

void validate(const PowerTrace& trace) {
    if (!(trace.dt > 0.0)) throw std::invalid_argument("PowerTrace: dt must be > 0");
    if (trace.samples.empty()) throw std::invalid_argument("PowerTrace: no samples");
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        const double s = trace.samples[i];
        if (!(s >= 0.0) || !std::isfinite(s))
            throw std::invalid_argument("PowerTrace: sample " + std::to_string(i) +
                                        " is negative or non-finite");
    }
}

void validate(const DeviceModel& device) {
    if (!(device.idle_w >= 0.0 && device.idle_w < device.tdp_w))
        throw std::invalid_argument("DeviceModel: require 0 <= idle_w < tdp_w");
    if (!(device.edp_factor >= 1.0))
        throw std::invalid_argument("DeviceModel: edp_factor must be >= 1");
    if (!(device.edp_window_s > 0.0) || !(device.tdp_avg_window_s > 0.0))
        throw std::invalid_argument("DeviceModel: windows must be > 0");
    if (device.edp_window_s >= device.tdp_avg_window_s)
        throw std::invalid_argument("DeviceModel: edp_window_s must be < tdp_avg_window_s");
}

void validate(const WorkloadModel& workload) {
    if (!(workload.compute_phase_s > 0.0) || !(workload.comm_phase_s > 0.0))
        throw std::invalid_argument("WorkloadModel: phase durations must be > 0");
    for (double level : {workload.compute_level, workload.comm_level, workload.checkpoint_level})
        if (!(level >= 0.0 && level <= 1.0))
            throw std::invalid_argument("WorkloadModel: level fractions must be in [0, 1]");
    if (!(workload.jitter_frac >= 0.0 && workload.jitter_frac < 1.0))
        throw std::invalid_argument("WorkloadModel: jitter_frac must be in [0, 1)");
    if (workload.checkpoint_period_s < 0.0 || workload.checkpoint_duration_s < 0.0)
        throw std::invalid_argument("WorkloadModel: checkpoint settings must be >= 0");
    if (workload.checkpoint_period_s > 0.0 &&
        workload.checkpoint_duration_s >= workload.checkpoint_period_s)
        throw std::invalid_argument(
            "WorkloadModel: checkpoint_duration_s must be < checkpoint_period_s");
}

std::vector<std::string> device_trace_violations(const PowerTrace& trace,
                                                 const DeviceModel& device) {
    validate(trace);
    validate(device);
    std::vector<std::string> violations;
    const double rel_slack = 1.0 + 1e-9;
    const double tdp = device.tdp_w;
    const double ceiling = device.edp_ceiling_w();
    const auto& s = trace.samples;
    const std::size_t n = s.size();

    for (std::size_t i = 0; i < n; ++i) {
        if (s[i] > ceiling * rel_slack) {
            violations.push_back("sample " + std::to_string(i) + " exceeds EDP ceiling (" +
                                 std::to_string(s[i]) + " W > " + std::to_string(ceiling) + " W)");
            break;
        }
    }

    // Excursions above TDP must be shorter than the EDP window (one sample
    // of quantization slack).
    std::size_t run_start = 0;
    bool in_run = false;
    for (std::size_t i = 0; i <= n; ++i) {
        const bool above = i < n && s[i] > tdp * rel_slack;
        if (above && !in_run) {
            in_run = true;
            run_start = i;
        } else if (!above && in_run) {
            in_run = false;
            const double run_s = static_cast<double>(i - run_start) * trace.dt;
            if (run_s > device.edp_window_s + trace.dt) {
                violations.push_back("excursion above TDP at sample " +
                                     std::to_string(run_start) + " lasts " +
                                     std::to_string(run_s) + " s > edp_window " +
                                     std::to_string(device.edp_window_s) + " s");
                break;
            }
        }
    }

    // Rolling mean over tdp_avg_window_s.
    const std::size_t win =
        std::min<std::size_t>(n, std::max<std::size_t>(
                                     1, static_cast<std::size_t>(
                                            std::llround(device.tdp_avg_window_s / trace.dt))));
    double acc = 0.0;
    for (std::size_t i = 0; i < win; ++i) acc += s[i];
    double worst = acc;
    std::size_t worst_at = 0;
    for (std::size_t i = win; i < n; ++i) {
        acc += s[i] - s[i - win];
        if (acc > worst) {
            worst = acc;
            worst_at = i - win + 1;
        }
    }
    const double worst_mean = worst / static_cast<double>(win);
    if (worst_mean > tdp * rel_slack) {
        violations.push_back("rolling " + std::to_string(device.tdp_avg_window_s) +
                             " s mean at sample " + std::to_string(worst_at) + " is " +
                             std::to_string(worst_mean) + " W > TDP " + std::to_string(tdp) +
                             " W");
    }
    return violations;
}

PowerTrace gen_square_wave(double period_s, double duty, double high_w, double low_w,
                           double duration_s, double dt_s) {
    if (!(period_s > 0.0)) throw std::invalid_argument("gen_square_wave: period_s must be > 0");
    if (!(duration_s > 0.0) || !(dt_s > 0.0))
        throw std::invalid_argument("gen_square_wave: duration_s and dt_s must be > 0");
    if (!(duty >= 0.0 && duty <= 1.0))
        throw std::invalid_argument("gen_square_wave: duty must be in [0, 1]");
    if (!(high_w >= low_w) || !(low_w >= 0.0))
        throw std::invalid_argument("gen_square_wave: require high_w >= low_w >= 0");

    const std::size_t n = sample_count(duration_s, dt_s);
    if (n == 0) throw std::invalid_argument("gen_square_wave: duration shorter than one sample");

    std::vector<Segment> segments;
    const double high_len = duty * period_s;
    const double low_len = period_s - high_len;
    double t = 0.0;
    while (t < duration_s) {
        if (high_len > 0.0) segments.push_back({t + high_len, high_w});
        if (low_len > 0.0) segments.push_back({t + period_s, low_w});
        t += period_s;
    }

    PowerTrace trace;
    trace.dt = dt_s;
    trace.samples = sample_segments(segments, n, dt_s);
    return trace;
}

PowerTrace gen_training_trace(const DeviceModel& device, const WorkloadModel& workload,
                              double duration_s, double dt_s) {
    validate(device);
    validate(workload);
    if (!(duration_s > 0.0) || !(dt_s > 0.0))
        throw std::invalid_argument("gen_training_trace: duration_s and dt_s must be > 0");

    // dt must resolve the shortest configured feature.
    const double shrink = 1.0 - workload.jitter_frac;
    double finest = std::min(workload.compute_phase_s, workload.comm_phase_s) * shrink;
    if (workload.edp_spikes && device.edp_factor > 1.0)
        finest = std::min(finest, device.edp_window_s);
    if (workload.checkpoint_period_s > 0.0)
        finest = std::min(finest, workload.checkpoint_duration_s);
    if (dt_s > finest / 2.0)
        throw std::invalid_argument("gen_training_trace: dt_s too coarse, must be <= " +
                                    std::to_string(finest / 2.0) + " s for this configuration");

    const std::size_t n = sample_count(duration_s, dt_s);
    if (n == 0)
        throw std::invalid_argument("gen_training_trace: duration shorter than one sample");

    const double tdp = device.tdp_w;
    const double compute_w = workload.compute_level * tdp;
    const double comm_w = workload.comm_level * tdp;
    const bool spikes = workload.edp_spikes && device.edp_factor > 1.0;

    // Compute level allowed right after a spike so that the window starting
    // at the spike still averages to at most TDP.
    const double w_edp = device.edp_window_s;
    const double w_avg = device.tdp_avg_window_s;
    const double cap_level = (w_avg - device.edp_factor * w_edp) / (w_avg - w_edp);
    const double capped_w = std::min(workload.compute_level, cap_level) * tdp;

    std::mt19937_64 rng(workload.rng_seed);
    auto jitter = [&](double d) {
        if (workload.jitter_frac == 0.0) return d;
        // 53-bit mantissa mapping, identical across platforms.
        const double u01 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const double u = (2.0 * u01 - 1.0) * workload.jitter_frac;
        return d * (1.0 + u);
    };

    std::vector<Segment> segments;
    double t = 0.0;
    bool first_compute = true;
    while (t < duration_s) {
        const double compute_len = jitter(workload.compute_phase_s);
        if (spikes && !first_compute) {
            const double spike_end = t + std::min(w_edp, compute_len);
            segments.push_back({spike_end, device.edp_factor * tdp});
            const double cap_end = t + std::min(compute_len, w_avg);
            if (cap_end > spike_end) segments.push_back({cap_end, capped_w});
            if (compute_len > w_avg) segments.push_back({t + compute_len, compute_w});
        } else {
            segments.push_back({t + compute_len, compute_w});
        }
        first_compute = false;
        t += compute_len;
        const double comm_len = jitter(workload.comm_phase_s);
        segments.push_back({t + comm_len, comm_w});
        t += comm_len;
    }

    PowerTrace trace;
    trace.dt = dt_s;
    trace.samples = sample_segments(segments, n, dt_s);

    // Checkpoint dips overlay the phase waveform. Midpoint (i+0.5)*dt lies
    // in [cp, cp+dur) for i in [cp/dt - 0.5, (cp+dur)/dt - 0.5).
    if (workload.checkpoint_period_s > 0.0 && workload.checkpoint_duration_s > 0.0) {
        const double cp_w = workload.checkpoint_level * tdp;
        for (double cp = workload.checkpoint_period_s; cp < duration_s;
             cp += workload.checkpoint_period_s) {
            const auto lo = static_cast<std::size_t>(std::max(0.0, std::ceil(cp / dt_s - 0.5)));
            const auto hi = std::min(
                n, static_cast<std::size_t>(std::max(
                       0.0, std::ceil((cp + workload.checkpoint_duration_s) / dt_s - 0.5))));
            for (std::size_t i = lo; i < hi; ++i) trace.samples[i] = cp_w;
        }
    }
    return trace;
}

void save_csv(const PowerTrace& trace, const std::string& path) {
    validate(trace);
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("save_csv: cannot open " + path + " for writing");
    std::fputs("time_s,power_w\n", f);
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g\n", trace.time_at(i), trace.samples[i]);
        std::fputs(buf, f);
    }
    if (std::fclose(f) != 0) throw std::runtime_error("save_csv: write to " + path + " failed");
}

PowerTrace load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open " + path);

    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw TraceParseError("empty file", 1);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "time_s,power_w")
        throw TraceParseError("expected header 'time_s,power_w', got '" + line + "'", lineno);

    std::vector<double> times;
    std::vector<double> powers;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw TraceParseError("missing comma", lineno);
        double t = 0.0, p = 0.0;
        try {
            std::size_t used = 0;
            t = std::stod(line.substr(0, comma), &used);
            if (used != comma) throw std::invalid_argument("trailing junk");
            const std::string ptxt = line.substr(comma + 1);
            p = std::stod(ptxt, &used);
            if (used != ptxt.size()) throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw TraceParseError("malformed number in '" + line + "'", lineno);
        }
        if (!std::isfinite(t) || !std::isfinite(p))
            throw TraceParseError("non-finite value", lineno);
        if (p < 0.0) throw TraceParseError("negative power " + std::to_string(p), lineno);
        if (!times.empty() && t <= times.back())
            throw TraceParseError("non-monotonic time", lineno);
        times.push_back(t);
        powers.push_back(p);
    }

    if (times.empty()) throw TraceParseError("empty trace", lineno);
    if (times.size() == 1)
        throw TraceParseError("need at least two rows to infer the sampling interval", lineno);

    const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    if (!(dt > 0.0)) throw TraceParseError("non-positive inferred dt", lineno);
    const double tol =
        1e-6 * dt + print_quantum(std::max(std::abs(times.front()), std::abs(times.back())));
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double expected = times.front() + dt * static_cast<double>(i);
        if (std::abs(times[i] - expected) > tol)
            throw TraceParseError("non-uniform sampling", i + 2);
    }

    PowerTrace trace;
    trace.dt = dt;
    trace.origin_time = times.front();
    trace.samples = std::move(powers);
    return trace;
}

}  // namespace swingsim
