#pragma once

// Utility time-domain / frequency-domain specifications and the trace
// compliance checker.

#include <string>
#include <vector>

#include "swingsim/spectral.hpp"
#include "swingsim/trace.hpp"

namespace swingsim {

struct FrequencyBand {
    double f_lo_hz = 0.0;
    double f_hi_hz = 0.0;
    double max_energy_fraction = 1.0;  // in (0, 1]
};

struct UtilitySpec {
    double ramp_up_limit_w_per_s = 0.0;
    double ramp_down_limit_w_per_s = 0.0;
    double dynamic_range_w = 0.0;      // allowed max-min over the dynamic window
    double dynamic_window_s = 1.0;
    std::vector<FrequencyBand> bands;  // non-overlapping, f_lo < f_hi
    double ramp_measure_window_s = 1.0;
    double scheduling_interval_s = 300.0;  // mean-power reporting interval
};

void validate(const UtilitySpec& spec);

UtilitySpec load_utility_spec_json(const std::string& path);
void save_utility_spec_json(const UtilitySpec& spec, const std::string& path);

struct ComplianceRecord {
    std::string id;
    double measured = 0.0;
    double limit = 0.0;
    std::string unit;
    bool pass = false;
    std::string detail;  // worst-case time or band, notes
};

struct ComplianceReport {
    std::vector<ComplianceRecord> records;
    bool overall_pass = true;
    // 5-15 minute scheduling-interval accounting, report-only.
    double scheduling_interval_s = 0.0;
    std::vector<double> scheduling_means_w;

    void merge(const ComplianceReport& other);
    std::string to_json() const;
    void save_json(const std::string& path) const;
};

struct TimeDomainMetrics {
    double ramp_up_w_per_s = 0.0;
    double ramp_down_w_per_s = 0.0;
    double dynamic_range_w = 0.0;
    std::size_t ramp_up_at = 0;   // window start sample indices
    std::size_t ramp_down_at = 0;
    std::size_t range_at = 0;
};

/// Worst-case sliding-window measurements: ramp rates as finite differences
/// over ramp_window_s, dynamic range as max-min over dynamic_window_s.
TimeDomainMetrics measure_time_domain(const PowerTrace& trace, double ramp_window_s,
                                      double dynamic_window_s);

ComplianceReport check_time_domain(const PowerTrace& trace, const UtilitySpec& spec);

/// Whole-trace band-energy fractions against the per-band caps. Traces with
/// no AC content pass vacuously with a note.
ComplianceReport check_frequency_domain(const PowerTrace& trace, const UtilitySpec& spec);

/// Union of the time- and frequency-domain checks plus the scheduling-
/// interval mean-power accounting.
ComplianceReport check(const PowerTrace& trace, const UtilitySpec& spec);

}  // namespace swingsim
