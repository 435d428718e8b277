#include "swingsim/backstop.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "swingsim/json_util.hpp"
#include "swingsim/spectral.hpp"

namespace swingsim {

namespace {

void validate(const BackstopConfig& cfg, double dt_s) {
    if (!(dt_s > 0.0)) throw std::invalid_argument("BackstopDetector: dt must be > 0");
    if (!(cfg.window_s > 0.0) || !(cfg.hop_s > 0.0))
        throw std::invalid_argument("BackstopConfig: window_s and hop_s must be > 0");
    if (cfg.hop_s > cfg.window_s)
        throw std::invalid_argument("BackstopConfig: hop_s must be <= window_s");
    if (cfg.bands.empty()) throw std::invalid_argument("BackstopConfig: no bands configured");
    for (const auto& b : cfg.bands)
        if (!(b.f_lo_hz > 0.0) || !(b.f_hi_hz > b.f_lo_hz))
            throw std::invalid_argument("BackstopConfig: bands require 0 < f_lo < f_hi");
    const auto& t = cfg.tier_thresholds;
    if (!(t[0] > 0.0 && t[0] < t[1] && t[1] < t[2] && t[2] <= 1.0))
        throw std::invalid_argument(
            "BackstopConfig: tier thresholds must be strictly ascending in (0, 1]");
    if (cfg.deescalate_after < 1)
        throw std::invalid_argument("BackstopConfig: deescalate_after must be >= 1");
    if (std::llround(cfg.window_s / dt_s) < 16)
        throw std::invalid_argument("BackstopConfig: window too short for spectral analysis");
}

BackstopAction tier_action(int tier) {
    switch (tier) {
        case 1: return BackstopAction::Alert;
        case 2: return BackstopAction::SoftThrottle;
        default: return BackstopAction::Shed;
    }
}

}  // namespace

const char* to_string(BackstopAction action) {
    switch (action) {
        case BackstopAction::Alert: return "Alert";
        case BackstopAction::SoftThrottle: return "SoftThrottle";
        case BackstopAction::Shed: return "Shed";
        case BackstopAction::Deescalate: return "Deescalate";
    }
    return "?";
}

BackstopConfig load_backstop_config_json(const std::string& path) {
    const auto j = jsonu::load_file(path);
    BackstopConfig cfg;
    try {
        cfg.window_s = jsonu::get_num_or(j, "window_s", 4.0);
        cfg.hop_s = jsonu::get_num_or(j, "hop_s", 1.0);
        cfg.deescalate_after =
            static_cast<int>(jsonu::get_num_or(j, "deescalate_after", 3.0));
        if (j.contains("tier_thresholds")) {
            const auto& jt = j["tier_thresholds"];
            if (!jt.is_array() || jt.size() != 3)
                throw std::invalid_argument("tier_thresholds must be an array of 3 fractions");
            for (int i = 0; i < 3; ++i) cfg.tier_thresholds[i] = jt[i].get<double>();
        }
        if (!j.contains("bands") || !j["bands"].is_array())
            throw std::invalid_argument("missing field 'bands'");
        for (const auto& jb : j["bands"])
            cfg.bands.push_back({jsonu::get_num(jb, "f_lo_hz"), jsonu::get_num(jb, "f_hi_hz")});
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    return cfg;
}

void save_backstop_config_json(const BackstopConfig& cfg, const std::string& path) {
    jsonu::json j;
    j["window_s"] = cfg.window_s;
    j["hop_s"] = cfg.hop_s;
    j["tier_thresholds"] = {cfg.tier_thresholds[0], cfg.tier_thresholds[1],
                            cfg.tier_thresholds[2]};
    j["deescalate_after"] = cfg.deescalate_after;
    j["bands"] = jsonu::json::array();
    for (const auto& b : cfg.bands)
        j["bands"].push_back({{"f_lo_hz", b.f_lo_hz}, {"f_hi_hz", b.f_hi_hz}});
    jsonu::save_file(j, path);
}

BackstopDetector::BackstopDetector(const BackstopConfig& cfg, double dt_s, double origin_time_s)
    : cfg_(cfg), dt_(dt_s), origin_(origin_time_s) {
    validate(cfg, dt_s);
    window_n_ = static_cast<std::size_t>(std::llround(cfg.window_s / dt_s));
    hop_n_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.hop_s / dt_s)));
    buffer_.assign(window_n_, 0.0);
    states_.assign(cfg.bands.size(), {});
}

std::vector<BackstopEvent> BackstopDetector::feed(double sample_w) {
    if (!(sample_w >= 0.0))
        throw std::invalid_argument("BackstopDetector::feed: negative or non-finite sample");
    buffer_[fed_ % window_n_] = sample_w;
    ++fed_;

    std::vector<BackstopEvent> events;
    if (fed_ < window_n_ || (fed_ - window_n_) % hop_n_ != 0) return events;

    // Unroll the ring into time order and analyze the window.
    PowerTrace window;
    window.dt = dt_;
    window.samples.resize(window_n_);
    const std::size_t head = fed_ % window_n_;
    for (std::size_t i = 0; i < window_n_; ++i)
        window.samples[i] = buffer_[(head + i) % window_n_];
    const Spectrum spectrum = analyze(window);

    const double t_now = origin_ + static_cast<double>(fed_ - 1) * dt_;
    for (std::size_t bi = 0; bi < cfg_.bands.size(); ++bi) {
        const auto& band = cfg_.bands[bi];
        auto& st = states_[bi];
        const BandEnergy be = band_energy_fraction(spectrum, band.f_lo_hz, band.f_hi_hz);
        const double f = be.no_ac ? 0.0 : be.fraction;

        int level = 0;
        for (int k = 0; k < 3; ++k)
            if (f >= cfg_.tier_thresholds[k]) level = k + 1;

        if (level > st.tier) {
            st.tier = level;
            st.clean_windows = 0;
            events.push_back({t_now, band, f, tier_action(level)});
        } else if (st.tier > 0) {
            if (f < cfg_.tier_thresholds[0]) {
                if (++st.clean_windows >= cfg_.deescalate_after) {
                    st.tier = 0;
                    st.clean_windows = 0;
                    events.push_back({t_now, band, f, BackstopAction::Deescalate});
                }
            } else {
                st.clean_windows = 0;
            }
        }
    }
    return events;
}

std::vector<BackstopEvent> run_offline(const PowerTrace& trace, const BackstopConfig& cfg) {
    validate(trace);
    BackstopDetector detector(cfg, trace.dt, trace.origin_time);
    std::vector<BackstopEvent> events;
    for (double s : trace.samples) {
        auto batch = detector.feed(s);
        events.insert(events.end(), batch.begin(), batch.end());
    }
    return events;
}

void save_events_csv(const std::vector<BackstopEvent>& events, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    std::fputs("time_s,band_lo_hz,band_hi_hz,fraction,action\n", f);
    for (const auto& e : events) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%.9g,%s\n", e.time_s, e.band.f_lo_hz,
                      e.band.f_hi_hz, e.measured_fraction, to_string(e.action));
        std::fputs(buf, f);
    }
    if (std::fclose(f) != 0) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace swingsim
