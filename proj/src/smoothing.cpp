#include "swingsim/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "config_from_json.hpp"
#include "swingsim/json_util.hpp"

namespace swingsim {

void validate(const SmoothingProfile& profile, const DeviceModel& device) {
    validate(device);
    if (!(profile.ramp_up_w_per_s > 0.0) || !(profile.ramp_down_w_per_s > 0.0))
        throw std::invalid_argument("SmoothingProfile: ramp rates must be > 0");
    if (!(profile.mpf_max > 0.0 && profile.mpf_max <= 1.0))
        throw std::invalid_argument("SmoothingProfile: mpf_max must be in (0, 1]");
    if (!(profile.mpf_frac >= 0.0 && profile.mpf_frac <= profile.mpf_max))
        throw std::invalid_argument("SmoothingProfile: mpf_frac must be in [0, mpf_max]");
    if (profile.stop_delay_s < 0.0)
        throw std::invalid_argument("SmoothingProfile: stop_delay_s must be >= 0");
    if (profile.floor_w(device) > profile.resolved_ceiling_w(device))
        throw std::invalid_argument("SmoothingProfile: floor exceeds ceiling");
}

SmoothingProfile load_smoothing_profile_json(const std::string& path) {
    const auto j = jsonu::load_file(path);
    SmoothingProfile p;
    try {
        p.ramp_up_w_per_s = jsonu::get_num(j, "ramp_up_w_per_s");
        p.ramp_down_w_per_s = jsonu::get_num(j, "ramp_down_w_per_s");
        p.mpf_frac = jsonu::get_num(j, "mpf_frac");
        p.mpf_max = jsonu::get_num_or(j, "mpf_max", 0.9);
        p.stop_delay_s = jsonu::get_num_or(j, "stop_delay_s", 0.0);
        p.activity_threshold_w = jsonu::get_num_or(j, "activity_threshold_w", -1.0);
        p.ceiling_w = jsonu::get_num_or(j, "ceiling_w", -1.0);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    return p;
}

void save_smoothing_profile_json(const SmoothingProfile& profile, const std::string& path) {
    jsonu::json j;
    j["ramp_up_w_per_s"] = profile.ramp_up_w_per_s;
    j["ramp_down_w_per_s"] = profile.ramp_down_w_per_s;
    j["mpf_frac"] = profile.mpf_frac;
    j["mpf_max"] = profile.mpf_max;
    j["stop_delay_s"] = profile.stop_delay_s;
    j["activity_threshold_w"] = profile.activity_threshold_w;
    j["ceiling_w"] = profile.ceiling_w;
    jsonu::save_file(j, path);
}

const char* to_string(SmoothingState state) {
    switch (state) {
        case SmoothingState::Idle: return "Idle";
        case SmoothingState::RampUp: return "RampUp";
        case SmoothingState::Active: return "Active";
        case SmoothingState::StopDelay: return "StopDelay";
        case SmoothingState::RampDown: return "RampDown";
    }
    return "?";
}

SmoothingResult apply_profile(const PowerTrace& raw, const DeviceModel& device,
                              const SmoothingProfile& profile) {
    validate(raw);
    validate(profile, device);

    const double floor = profile.floor_w(device);
    const double ceiling = profile.resolved_ceiling_w(device);
    const double threshold = profile.resolved_threshold_w(device);
    const double dt = raw.dt;
    const double up_step = profile.ramp_up_w_per_s * dt;
    const double down_step = profile.ramp_down_w_per_s * dt;
    const double eps = 1e-9 * device.tdp_w;
    const std::size_t n = raw.size();

    SmoothingResult result;
    result.output.dt = dt;
    result.output.origin_time = raw.origin_time;
    result.output.samples.resize(n);

    double prev = std::min({raw.samples[0], device.idle_w, ceiling});
    double since_activity = HUGE_VAL;  // seconds since the last active sample
    SmoothingState state = SmoothingState::Idle;
    SmoothingState prev_state = SmoothingState::Idle;
    bool first = true;

    for (std::size_t i = 0; i < n; ++i) {
        const double r = raw.samples[i];
        const bool active = r >= threshold;
        if (active)
            since_activity = 0.0;
        else
            since_activity += dt;

        const bool holding = !active && since_activity <= profile.stop_delay_s + 0.5 * dt;
        double desired;
        if (active || holding)
            desired = std::min(std::max(r, floor), ceiling);
        else
            desired = std::min(r, ceiling);

        const double step = std::clamp(desired - prev, -down_step, up_step);
        const double out = prev + step;
        result.output.samples[i] = out;

        if (active)
            state = out < std::min(std::max(r, floor), ceiling) - eps ? SmoothingState::RampUp
                                                                      : SmoothingState::Active;
        else if (holding)
            state = out < floor - eps ? SmoothingState::RampUp : SmoothingState::StopDelay;
        else
            state = out > r + eps ? SmoothingState::RampDown : SmoothingState::Idle;

        if (first || state != prev_state) {
            result.state_timeline.emplace_back(raw.time_at(i), state);
            prev_state = state;
            first = false;
        }
        if (floor > r + eps && out >= floor - eps) result.floor_engaged_s += dt;
        prev = out;
    }

    result.raw_energy_j = energy_trapz_j(raw);
    result.output_energy_j = energy_trapz_j(result.output);
    result.excess_energy_j = result.output_energy_j - result.raw_energy_j;
    result.overhead_frac =
        result.raw_energy_j > 0.0 ? result.excess_energy_j / result.raw_energy_j : 0.0;
    return result;
}

std::vector<std::pair<double, double>> overhead_curve(const PowerTrace& raw,
                                                      const DeviceModel& device,
                                                      const SmoothingProfile& profile_template,
                                                      const std::vector<double>& mpf_values) {
    for (std::size_t i = 0; i + 1 < mpf_values.size(); ++i)
        if (!(mpf_values[i] <= mpf_values[i + 1]))
            throw std::invalid_argument("overhead_curve: mpf_values must ascend");

    std::vector<std::pair<double, double>> curve;
    curve.reserve(mpf_values.size());
    for (double mpf : mpf_values) {
        SmoothingProfile p = profile_template;
        p.mpf_frac = mpf;
        curve.emplace_back(mpf, apply_profile(raw, device, p).overhead_frac);
    }
    return curve;
}

void save_state_timeline_csv(const SmoothingResult& result, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    std::fputs("time_s,state\n", f);
    for (const auto& [t, s] : result.state_timeline) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.9g,%s\n", t, to_string(s));
        std::fputs(buf, f);
    }
    if (std::fclose(f) != 0) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace swingsim
