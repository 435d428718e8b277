#include "swingsim/storage.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "swingsim/json_util.hpp"

namespace swingsim {

void validate(const StorageConfig& cfg) {
    if (!(cfg.capacity_j > 0.0)) throw std::invalid_argument("StorageConfig: capacity_j must be > 0");
    if (!(cfg.soc_init_frac >= 0.0 && cfg.soc_init_frac <= 1.0))
        throw std::invalid_argument("StorageConfig: soc_init_frac must be in [0, 1]");
    if (!(cfg.max_charge_w > 0.0) || !(cfg.max_discharge_w > 0.0))
        throw std::invalid_argument("StorageConfig: rate limits must be > 0");
    if (!(cfg.round_trip_efficiency > 0.0 && cfg.round_trip_efficiency <= 1.0))
        throw std::invalid_argument("StorageConfig: round_trip_efficiency must be in (0, 1]");
    if (cfg.target_policy.kind == TargetPolicyKind::MovingAverage &&
        !(cfg.target_policy.tau_s > 0.0))
        throw std::invalid_argument("StorageConfig: moving-average tau_s must be > 0");
    if (cfg.target_policy.kind == TargetPolicyKind::Fixed &&
        !(cfg.target_policy.setpoint_w >= 0.0))
        throw std::invalid_argument("StorageConfig: fixed setpoint_w must be >= 0");
}

StorageConfig load_storage_config_json(const std::string& path) {
    const auto j = jsonu::load_file(path);
    StorageConfig cfg;
    try {
        cfg.capacity_j = jsonu::get_num(j, "capacity_j");
        cfg.soc_init_frac = jsonu::get_num_or(j, "soc_init_frac", 0.5);
        cfg.max_charge_w = jsonu::get_num(j, "max_charge_w");
        cfg.max_discharge_w = jsonu::get_num(j, "max_discharge_w");
        cfg.round_trip_efficiency = jsonu::get_num_or(j, "round_trip_efficiency", 1.0);
        if (!j.contains("target_policy"))
            throw std::invalid_argument("missing field 'target_policy'");
        const auto& jp = j["target_policy"];
        const std::string kind = jsonu::get_str(jp, "kind");
        if (kind == "fixed") {
            cfg.target_policy.kind = TargetPolicyKind::Fixed;
            cfg.target_policy.setpoint_w = jsonu::get_num(jp, "setpoint_w");
        } else if (kind == "moving-average") {
            cfg.target_policy.kind = TargetPolicyKind::MovingAverage;
            cfg.target_policy.tau_s = jsonu::get_num(jp, "tau_s");
        } else {
            throw std::invalid_argument("target_policy.kind must be 'fixed' or 'moving-average'");
        }
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    validate(cfg);
    return cfg;
}

void save_storage_config_json(const StorageConfig& cfg, const std::string& path) {
    jsonu::json j;
    j["capacity_j"] = cfg.capacity_j;
    j["soc_init_frac"] = cfg.soc_init_frac;
    j["max_charge_w"] = cfg.max_charge_w;
    j["max_discharge_w"] = cfg.max_discharge_w;
    j["round_trip_efficiency"] = cfg.round_trip_efficiency;
    if (cfg.target_policy.kind == TargetPolicyKind::Fixed)
        j["target_policy"] = {{"kind", "fixed"}, {"setpoint_w", cfg.target_policy.setpoint_w}};
    else
        j["target_policy"] = {{"kind", "moving-average"}, {"tau_s", cfg.target_policy.tau_s}};
    jsonu::save_file(j, path);
}

const char* to_string(SaturationKind kind) {
    switch (kind) {
        case SaturationKind::Full: return "full";
        case SaturationKind::Empty: return "empty";
        case SaturationKind::RateLimited: return "rate-limited";
    }
    return "?";
}

StorageResult simulate_storage(const PowerTrace& load, const StorageConfig& cfg) {
    validate(load);
    validate(cfg);

    const std::size_t n = load.size();
    const double dt = load.dt;
    const double leg_eff = std::sqrt(cfg.round_trip_efficiency);
    const double alpha = cfg.target_policy.kind == TargetPolicyKind::MovingAverage
                             ? 1.0 - std::exp(-dt / cfg.target_policy.tau_s)
                             : 0.0;

    StorageResult result;
    result.grid.dt = dt;
    result.grid.origin_time = load.origin_time;
    result.grid.samples.resize(n);
    result.soc_j.resize(n);
    result.soc_init_j = cfg.soc_init_frac * cfg.capacity_j;

    double soc = result.soc_init_j;
    double target = cfg.target_policy.kind == TargetPolicyKind::Fixed
                        ? cfg.target_policy.setpoint_w
                        : load.samples[0];
    bool in_saturation = false;
    SaturationKind last_kind = SaturationKind::Full;

    for (std::size_t i = 0; i < n; ++i) {
        const double l = load.samples[i];
        if (cfg.target_policy.kind == TargetPolicyKind::MovingAverage)
            target += alpha * (l - target);

        const double desired = l - target;  // positive = discharge
        double b = desired;
        SaturationKind kind = SaturationKind::Full;
        bool saturated = false;

        if (b > 0.0) {
            if (b > cfg.max_discharge_w) {
                b = cfg.max_discharge_w;
                saturated = true;
                kind = SaturationKind::RateLimited;
            }
            b = std::min(b, l);  // grid power cannot go negative
            const double soc_bound = soc * leg_eff / dt;
            if (b > soc_bound) {
                b = soc_bound;
                saturated = true;
                kind = SaturationKind::Empty;
            }
            soc -= b * dt / leg_eff;
        } else if (b < 0.0) {
            if (-b > cfg.max_charge_w) {
                b = -cfg.max_charge_w;
                saturated = true;
                kind = SaturationKind::RateLimited;
            }
            const double headroom_bound = (cfg.capacity_j - soc) / (leg_eff * dt);
            if (-b > headroom_bound) {
                b = -headroom_bound;
                saturated = true;
                kind = SaturationKind::Full;
            }
            soc += (-b) * dt * leg_eff;
        }
        soc = std::clamp(soc, 0.0, cfg.capacity_j);

        result.grid.samples[i] = l - b;
        result.soc_j[i] = soc;

        if (saturated && !in_saturation) {
            result.saturation_events.push_back({load.time_at(i), kind});
            in_saturation = true;
            last_kind = kind;
        } else if (saturated && in_saturation && kind != last_kind) {
            result.saturation_events.push_back({load.time_at(i), kind});
            last_kind = kind;
        } else if (!saturated) {
            in_saturation = false;
        }
    }

    const auto [lo, hi] =
        std::minmax_element(result.grid.samples.begin(), result.grid.samples.end());
    result.trough_grid_w = *lo;
    result.peak_grid_w = *hi;
    return result;
}

CapacityRequirement required_capacity(const PowerTrace& load, double setpoint_w,
                                      double round_trip_efficiency) {
    validate(load);
    if (!(round_trip_efficiency > 0.0 && round_trip_efficiency <= 1.0))
        throw std::invalid_argument("required_capacity: efficiency must be in (0, 1]");
    const auto [lo, hi] = std::minmax_element(load.samples.begin(), load.samples.end());
    if (setpoint_w < *lo || setpoint_w > *hi)
        throw std::invalid_argument(
            "required_capacity: setpoint outside the load range, flattening impossible");

    const double leg_eff = std::sqrt(round_trip_efficiency);
    double e = 0.0, e_min = 0.0, e_max = 0.0;
    for (double l : load.samples) {
        const double b = l - setpoint_w;  // positive = discharge
        if (b > 0.0)
            e -= b * load.dt / leg_eff;
        else
            e += (-b) * load.dt * leg_eff;
        e_min = std::min(e_min, e);
        e_max = std::max(e_max, e);
    }

    CapacityRequirement req;
    req.capacity_j = e_max - e_min;
    req.soc_init_frac = req.capacity_j > 0.0 ? -e_min / req.capacity_j : 0.0;
    return req;
}

void save_soc_csv(const StorageResult& result, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    std::fputs("time_s,soc_j\n", f);
    for (std::size_t i = 0; i < result.soc_j.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g\n", result.grid.time_at(i), result.soc_j[i]);
        std::fputs(buf, f);
    }
    if (std::fclose(f) != 0) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace swingsim
