#pragma once

// Power-trace data model, synthetic workload generators, and CSV I/O.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace swingsim {

/// Uniformly sampled power time series. Sample i is the instantaneous
/// power over the interval [origin_time + i*dt, origin_time + (i+1)*dt);
/// generators evaluate the underlying waveform at the interval midpoint.
struct PowerTrace {
    double dt = 0.0;              // seconds per sample, > 0
    std::vector<double> samples;  // watts, all >= 0, non-empty
    double origin_time = 0.0;     // seconds

    std::size_t size() const { return samples.size(); }
    double duration_s() const { return dt * static_cast<double>(samples.size()); }
    double time_at(std::size_t i) const { return origin_time + dt * static_cast<double>(i); }
};

/// Per-GPU power envelope. Instantaneous power may exceed tdp_w up to
/// edp_factor*tdp_w for at most edp_window_s at a time, as long as every
/// rolling mean over tdp_avg_window_s stays at or below tdp_w.
struct DeviceModel {
    double tdp_w = 1000.0;
    double idle_w = 100.0;
    double edp_factor = 1.1;       // >= 1, instantaneous ceiling multiplier
    double edp_window_s = 0.05;
    double tdp_avg_window_s = 1.0;

    double edp_ceiling_w() const { return edp_factor * tdp_w; }
};

/// Iteration phase structure of a bulk-synchronous training job.
/// Levels are fractions of the device TDP.
struct WorkloadModel {
    double compute_phase_s = 1.4;
    double comm_phase_s = 0.6;
    double compute_level = 1.0;
    double comm_level = 0.3;
    double checkpoint_period_s = 0.0;  // 0 = never
    double checkpoint_duration_s = 0.0;
    double checkpoint_level = 0.1;
    double jitter_frac = 0.0;          // in [0, 1)
    bool edp_spikes = false;
    std::uint64_t rng_seed = 1;

    double iteration_period_s() const { return compute_phase_s + comm_phase_s; }
};

// -- basic trace math ------------------------------------------------------

double mean_power_w(const PowerTrace& trace);

/// Rectangular (step) integral, dt * sum(samples). Matches the discrete
/// update rule of the storage simulator.
double energy_step_j(const PowerTrace& trace);

/// Trapezoidal integral. Used for all energy-overhead fractions.
double energy_trapz_j(const PowerTrace& trace);

double peak_to_trough_w(const PowerTrace& trace);

/// Throws std::invalid_argument if the PowerTrace invariants do not hold.
void validate(const PowerTrace& trace);

void validate(const DeviceModel& device);
void validate(const WorkloadModel& workload);

/// Checks a device-level trace against the DeviceModel envelope:
/// rolling tdp_avg_window_s means <= tdp_w, samples <= edp_factor*tdp_w,
/// and every excursion above tdp_w no longer than edp_window_s (plus one
/// sample of quantization slack). Returns human-readable violations,
/// empty when compliant.
std::vector<std::string> device_trace_violations(const PowerTrace& trace,
                                                 const DeviceModel& device);

// -- generators ------------------------------------------------------------

/// Square wave: within each period the first duty*period_s is at high_w,
/// the remainder at low_w. Deterministic.
PowerTrace gen_square_wave(double period_s, double duty, double high_w, double low_w,
                           double duration_s, double dt_s);

/// Training-shaped waveform: alternating compute/communication phases with
/// optional seeded jitter, periodic checkpoint dips, and EDP spikes at each
/// comm->compute transition. Spikes are followed by a short capped-compute
/// stretch so the rolling-TDP invariant holds. Reproducible for a fixed seed
/// (jitter uses std::mt19937_64 with u = (x >> 11) * 2^-53 mapped to
/// [-jitter_frac, +jitter_frac), identical on every platform).
PowerTrace gen_training_trace(const DeviceModel& device, const WorkloadModel& workload,
                              double duration_s, double dt_s);

// -- CSV I/O ---------------------------------------------------------------

/// Error raised by load_csv, carries the 1-based line number.
class TraceParseError : public std::runtime_error {
public:
    TraceParseError(const std::string& msg, std::size_t line)
        : std::runtime_error("parse error at line " + std::to_string(line) + ": " + msg),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Writes `time_s,power_w` CSV, one row per sample, %.9g, LF line endings.
void save_csv(const PowerTrace& trace, const std::string& path);

/// Reads a trace CSV. Rejects malformed headers, non-monotonic time,
/// negative power, and non-uniform sampling (tolerance 1e-6*dt plus the
/// 9-significant-digit print quantum of the largest timestamp).
PowerTrace load_csv(const std::string& path);

}  // namespace swingsim
