#include "swingsim/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swingsim {

PowerTrace aggregate(const std::vector<PowerTrace>& traces,
                     const std::optional<std::vector<double>>& offsets_s,
                     double constant_overhead_w) {
    if (traces.empty()) throw std::invalid_argument("aggregate: no traces");
    if (constant_overhead_w < 0.0)
        throw std::invalid_argument("aggregate: overhead must be >= 0");
    if (offsets_s && offsets_s->size() != traces.size())
        throw std::invalid_argument("aggregate: offsets length must match trace count");

    const double dt = traces.front().dt;
    std::vector<std::size_t> shifts(traces.size(), 0);
    for (std::size_t i = 0; i < traces.size(); ++i) {
        validate(traces[i]);
        if (std::abs(traces[i].dt - dt) > 1e-12 * dt)
            throw std::invalid_argument("aggregate: mismatched dt between traces");
        if (offsets_s) {
            const double off = (*offsets_s)[i];
            if (off < 0.0) throw std::invalid_argument("aggregate: offsets must be >= 0");
            const double k = off / dt;
            const double k_round = std::round(k);
            if (std::abs(k - k_round) > 1e-6)
                throw std::invalid_argument("aggregate: offset " + std::to_string(off) +
                                            " s is not a multiple of dt");
            shifts[i] = static_cast<std::size_t>(k_round);
        }
    }

    // Shifted trace i occupies global samples [shift_i, shift_i + n_i).
    std::size_t lo = 0, hi = SIZE_MAX;
    for (std::size_t i = 0; i < traces.size(); ++i) {
        lo = std::max(lo, shifts[i]);
        hi = std::min(hi, shifts[i] + traces[i].size());
    }
    if (hi <= lo) throw std::runtime_error("aggregate: zero overlap after offsets");

    PowerTrace out;
    out.dt = dt;
    out.origin_time = static_cast<double>(lo) * dt;
    out.samples.assign(hi - lo, constant_overhead_w);
    for (std::size_t i = 0; i < traces.size(); ++i) {
        const auto& src = traces[i].samples;
        for (std::size_t g = lo; g < hi; ++g) out.samples[g - lo] += src[g - shifts[i]];
    }
    return out;
}

PowerTrace aggregate_server(const PowerTrace& device_trace, const ServerModel& server) {
    if (server.gpus_per_server < 1)
        throw std::invalid_argument("aggregate_server: gpus_per_server must be >= 1");
    if (server.stagger_offsets_s &&
        server.stagger_offsets_s->size() != static_cast<std::size_t>(server.gpus_per_server))
        throw std::invalid_argument("aggregate_server: offsets length must equal gpus_per_server");

    if (server.stagger_offsets_s) {
        std::vector<PowerTrace> copies(static_cast<std::size_t>(server.gpus_per_server),
                                       device_trace);
        return aggregate(copies, server.stagger_offsets_s, server.host_overhead_w);
    }
    validate(device_trace);
    if (server.host_overhead_w < 0.0)
        throw std::invalid_argument("aggregate_server: host overhead must be >= 0");
    PowerTrace out = device_trace;
    for (double& s : out.samples)
        s = s * static_cast<double>(server.gpus_per_server) + server.host_overhead_w;
    return out;
}

double PowerFractionSeries::mean() const {
    double sum = 0.0;
    for (double v : values) sum += v;
    return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

PowerFractionSeries gpu_power_fraction(const PowerTrace& server_trace,
                                       const PowerTrace& gpu_sum_trace, bool gb200_like) {
    validate(server_trace);
    validate(gpu_sum_trace);
    if (std::abs(server_trace.dt - gpu_sum_trace.dt) > 1e-12 * server_trace.dt ||
        server_trace.size() != gpu_sum_trace.size())
        throw std::invalid_argument("gpu_power_fraction: traces must share dt and length");

    PowerFractionSeries out;
    out.dt = server_trace.dt;
    out.origin_time = server_trace.origin_time;
    out.values.resize(server_trace.size());
    for (std::size_t i = 0; i < server_trace.size(); ++i) {
        const double server_w = server_trace.samples[i];
        const double gpu_w = gpu_sum_trace.samples[i];
        if (server_w == 0.0) {
            if (gpu_w != 0.0)
                throw std::runtime_error("gpu_power_fraction: zero server power with nonzero "
                                         "GPU power at sample " + std::to_string(i));
            out.values[i] = 0.0;
            continue;
        }
        const double frac = gpu_w / server_w;
        if (frac > 1.0 + 1e-9)
            throw std::runtime_error("gpu_power_fraction: GPU power exceeds server power at "
                                     "sample " + std::to_string(i));
        out.values[i] = std::min(frac, 1.0);
    }
    if (gb200_like && out.mean() <= 0.5)
        out.warnings.push_back("mean GPU power fraction " + std::to_string(out.mean()) +
                               " is <= 0.5 for a GB200-like server");
    return out;
}

}  // namespace swingsim
