#pragma once

// Aggregation of device traces to server / rack / datacenter level.

#include <optional>
#include <string>
#include <vector>

#include "swingsim/trace.hpp"

namespace swingsim {

struct ServerModel {
    int gpus_per_server = 8;
    double host_overhead_w = 0.0;  // constant non-GPU power
    std::optional<std::vector<double>> stagger_offsets_s;  // per-GPU, length == gpus_per_server
};

/// Pointwise sum of time-shifted traces plus a constant overhead.
/// Offsets must be non-negative multiples of the shared dt; the result
/// covers the overlap region of all shifted traces (overhang truncated)
/// and its origin_time is the overlap start. Per-trace origin_time is
/// ignored: the offsets argument is the alignment mechanism.
PowerTrace aggregate(const std::vector<PowerTrace>& traces,
                     const std::optional<std::vector<double>>& offsets_s,
                     double constant_overhead_w);

/// Server-level trace for gpus_per_server copies of one device trace.
/// Without stagger offsets this is an exact scalar multiply plus overhead.
PowerTrace aggregate_server(const PowerTrace& device_trace, const ServerModel& server);

/// Pointwise gpu/server power ratio.
struct PowerFractionSeries {
    double dt = 0.0;
    double origin_time = 0.0;
    std::vector<double> values;  // in [0, 1]
    std::vector<std::string> warnings;

    double mean() const;
};

/// gb200_like enables the plausibility warning: a GB200-class server is
/// expected to draw more than half of its power in the GPUs.
PowerFractionSeries gpu_power_fraction(const PowerTrace& server_trace,
                                       const PowerTrace& gpu_sum_trace,
                                       bool gb200_like = false);

}  // namespace swingsim
