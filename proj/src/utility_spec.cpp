#include "swingsim/utility_spec.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>

#include "config_from_json.hpp"
#include "swingsim/json_util.hpp"

namespace swingsim {

namespace {

// Numeric slack for pass/fail comparisons: a rate limiter that programs
// exactly the spec limit must not fail on accumulated rounding.
constexpr double kRelTol = 1e-9;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string band_id(const FrequencyBand& b) {
    return "band_" + fmt(b.f_lo_hz) + "-" + fmt(b.f_hi_hz) + "_hz";
}

}  // namespace

void validate(const UtilitySpec& spec) {
    if (!(spec.ramp_up_limit_w_per_s > 0.0) || !(spec.ramp_down_limit_w_per_s > 0.0))
        throw std::invalid_argument("UtilitySpec: ramp limits must be > 0");
    if (!(spec.dynamic_range_w > 0.0))
        throw std::invalid_argument("UtilitySpec: dynamic_range_w must be > 0");
    if (!(spec.dynamic_window_s > 0.0) || !(spec.ramp_measure_window_s > 0.0))
        throw std::invalid_argument("UtilitySpec: windows must be > 0");
    if (!(spec.scheduling_interval_s > 0.0))
        throw std::invalid_argument("UtilitySpec: scheduling_interval_s must be > 0");
    auto bands = spec.bands;
    std::sort(bands.begin(), bands.end(),
              [](const FrequencyBand& a, const FrequencyBand& b) { return a.f_lo_hz < b.f_lo_hz; });
    for (std::size_t i = 0; i < bands.size(); ++i) {
        const auto& b = bands[i];
        if (!(b.f_lo_hz > 0.0) || !(b.f_hi_hz > b.f_lo_hz))
            throw std::invalid_argument("UtilitySpec: bands require 0 < f_lo < f_hi");
        if (!(b.max_energy_fraction > 0.0 && b.max_energy_fraction <= 1.0))
            throw std::invalid_argument("UtilitySpec: band fractions must be in (0, 1]");
        if (i > 0 && b.f_lo_hz < bands[i - 1].f_hi_hz)
            throw std::invalid_argument("UtilitySpec: bands must not overlap");
    }
}

UtilitySpec detail::utility_spec_from_json(const jsonu::json& j) {
    UtilitySpec spec;
    spec.ramp_up_limit_w_per_s = jsonu::get_num(j, "ramp_up_limit_w_per_s");
    spec.ramp_down_limit_w_per_s = jsonu::get_num(j, "ramp_down_limit_w_per_s");
    spec.dynamic_range_w = jsonu::get_num(j, "dynamic_range_w");
    spec.dynamic_window_s = jsonu::get_num_or(j, "dynamic_window_s", 1.0);
    spec.ramp_measure_window_s = jsonu::get_num_or(j, "ramp_measure_window_s", 1.0);
    spec.scheduling_interval_s = jsonu::get_num_or(j, "scheduling_interval_s", 300.0);
    if (j.contains("bands")) {
        if (!j["bands"].is_array()) throw std::invalid_argument("field 'bands' must be an array");
        for (const auto& jb : j["bands"]) {
            FrequencyBand b;
            b.f_lo_hz = jsonu::get_num(jb, "f_lo_hz");
            b.f_hi_hz = jsonu::get_num(jb, "f_hi_hz");
            b.max_energy_fraction = jsonu::get_num(jb, "max_energy_fraction");
            spec.bands.push_back(b);
        }
    }
    validate(spec);
    return spec;
}

UtilitySpec load_utility_spec_json(const std::string& path) {
    const auto j = jsonu::load_file(path);
    try {
        return detail::utility_spec_from_json(j);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

void save_utility_spec_json(const UtilitySpec& spec, const std::string& path) {
    jsonu::json j;
    j["ramp_up_limit_w_per_s"] = spec.ramp_up_limit_w_per_s;
    j["ramp_down_limit_w_per_s"] = spec.ramp_down_limit_w_per_s;
    j["dynamic_range_w"] = spec.dynamic_range_w;
    j["dynamic_window_s"] = spec.dynamic_window_s;
    j["ramp_measure_window_s"] = spec.ramp_measure_window_s;
    j["scheduling_interval_s"] = spec.scheduling_interval_s;
    j["bands"] = jsonu::json::array();
    for (const auto& b : spec.bands)
        j["bands"].push_back({{"f_lo_hz", b.f_lo_hz},
                              {"f_hi_hz", b.f_hi_hz},
                              {"max_energy_fraction", b.max_energy_fraction}});
    jsonu::save_file(j, path);
}

void ComplianceReport::merge(const ComplianceReport& other) {
    records.insert(records.end(), other.records.begin(), other.records.end());
    overall_pass = overall_pass && other.overall_pass;
    if (!other.scheduling_means_w.empty()) {
        scheduling_interval_s = other.scheduling_interval_s;
        scheduling_means_w = other.scheduling_means_w;
    }
}

std::string ComplianceReport::to_json() const {
    jsonu::json j;
    j["overall_pass"] = overall_pass;
    j["records"] = jsonu::json::array();
    for (const auto& r : records)
        j["records"].push_back({{"id", r.id},
                                {"measured", r.measured},
                                {"limit", r.limit},
                                {"unit", r.unit},
                                {"pass", r.pass},
                                {"detail", r.detail}});
    if (!scheduling_means_w.empty()) {
        j["scheduling"] = {{"interval_s", scheduling_interval_s},
                           {"means_w", scheduling_means_w}};
    }
    return j.dump(2) + "\n";
}

void ComplianceReport::save_json(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    const std::string text = to_json();
    std::fwrite(text.data(), 1, text.size(), f);
    if (std::fclose(f) != 0) throw std::runtime_error("write to " + path + " failed");
}

TimeDomainMetrics measure_time_domain(const PowerTrace& trace, double ramp_window_s,
                                      double dynamic_window_s) {
    validate(trace);
    if (!(ramp_window_s > 0.0) || !(dynamic_window_s > 0.0))
        throw std::invalid_argument("measure_time_domain: windows must be > 0");
    const auto& s = trace.samples;
    const std::size_t n = s.size();
    const double dt = trace.dt;

    const auto win_samples = [&](double w_s) {
        return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(w_s / dt)));
    };
    const std::size_t k_ramp = win_samples(ramp_window_s);
    const std::size_t k_dyn = win_samples(dynamic_window_s);
    if (k_ramp >= n || k_dyn >= n)
        throw std::invalid_argument("measure_time_domain: trace shorter than the windows");

    TimeDomainMetrics m;

    // Ramp rates: finite differences over exactly k_ramp*dt seconds.
    const double w_ramp = static_cast<double>(k_ramp) * dt;
    double up = -HUGE_VAL, down = -HUGE_VAL;
    for (std::size_t i = 0; i + k_ramp < n; ++i) {
        const double d = (s[i + k_ramp] - s[i]) / w_ramp;
        if (d > up) {
            up = d;
            m.ramp_up_at = i;
        }
        if (-d > down) {
            down = -d;
            m.ramp_down_at = i;
        }
    }
    m.ramp_up_w_per_s = up;
    m.ramp_down_w_per_s = down;

    // Dynamic range: max-min over sliding windows of k_dyn*dt seconds
    // (k_dyn+1 samples), monotonic-deque sliding extrema.
    std::deque<std::size_t> maxq, minq;
    for (std::size_t i = 0; i < n; ++i) {
        while (!maxq.empty() && s[maxq.back()] <= s[i]) maxq.pop_back();
        maxq.push_back(i);
        while (!minq.empty() && s[minq.back()] >= s[i]) minq.pop_back();
        minq.push_back(i);
        if (i >= k_dyn) {
            const std::size_t lo = i - k_dyn;
            while (maxq.front() < lo) maxq.pop_front();
            while (minq.front() < lo) minq.pop_front();
            const double r = s[maxq.front()] - s[minq.front()];
            if (r > m.dynamic_range_w) {
                m.dynamic_range_w = r;
                m.range_at = lo;
            }
        }
    }
    return m;
}

ComplianceReport check_time_domain(const PowerTrace& trace, const UtilitySpec& spec) {
    validate(spec);
    TimeDomainMetrics m;
    try {
        m = measure_time_domain(trace, spec.ramp_measure_window_s, spec.dynamic_window_s);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("check_time_domain: ") + e.what());
    }

    const auto worst = [&](std::size_t i) { return "worst window starts at t=" +
                                                   fmt(trace.time_at(i)) + " s"; };
    ComplianceReport report;
    report.records.push_back({"ramp_up", m.ramp_up_w_per_s, spec.ramp_up_limit_w_per_s, "W/s",
                              m.ramp_up_w_per_s <= spec.ramp_up_limit_w_per_s * (1.0 + kRelTol),
                              worst(m.ramp_up_at)});
    report.records.push_back(
        {"ramp_down", m.ramp_down_w_per_s, spec.ramp_down_limit_w_per_s, "W/s",
         m.ramp_down_w_per_s <= spec.ramp_down_limit_w_per_s * (1.0 + kRelTol),
         worst(m.ramp_down_at)});
    report.records.push_back({"dynamic_range", m.dynamic_range_w, spec.dynamic_range_w, "W",
                              m.dynamic_range_w <= spec.dynamic_range_w * (1.0 + kRelTol),
                              worst(m.range_at)});
    for (const auto& r : report.records) report.overall_pass = report.overall_pass && r.pass;
    return report;
}

ComplianceReport check_frequency_domain(const PowerTrace& trace, const UtilitySpec& spec) {
    validate(trace);
    validate(spec);
    ComplianceReport report;
    if (spec.bands.empty()) return report;

    const double duration = trace.duration_s();
    for (const auto& b : spec.bands) {
        if (duration < 2.0 / b.f_lo_hz)
            throw std::invalid_argument("check_frequency_domain: trace too short for " +
                                        band_id(b) + " (need >= " + fmt(2.0 / b.f_lo_hz) + " s)");
    }

    const Spectrum spectrum = analyze(trace);
    for (const auto& b : spec.bands) {
        const BandEnergy e = band_energy_fraction(spectrum, b.f_lo_hz, b.f_hi_hz);
        ComplianceRecord rec;
        rec.id = band_id(b);
        rec.measured = e.fraction;
        rec.limit = b.max_energy_fraction;
        rec.unit = "fraction";
        rec.pass = e.no_ac || e.fraction <= b.max_energy_fraction * (1.0 + kRelTol);
        rec.detail = e.no_ac ? "no-AC-content: vacuous pass"
                             : "energy fraction of non-DC spectrum";
        report.records.push_back(rec);
        report.overall_pass = report.overall_pass && rec.pass;
    }
    return report;
}

ComplianceReport check(const PowerTrace& trace, const UtilitySpec& spec) {
    ComplianceReport report = check_time_domain(trace, spec);
    report.merge(check_frequency_domain(trace, spec));

    // Scheduling-interval accounting (report-only, no pass/fail).
    report.scheduling_interval_s = spec.scheduling_interval_s;
    const std::size_t per =
        static_cast<std::size_t>(std::llround(spec.scheduling_interval_s / trace.dt));
    const std::size_t n = trace.size();
    if (per >= 1 && per <= n) {
        for (std::size_t start = 0; start + per <= n; start += per) {
            double acc = 0.0;
            for (std::size_t i = start; i < start + per; ++i) acc += trace.samples[i];
            report.scheduling_means_w.push_back(acc / static_cast<double>(per));
        }
    } else {
        report.scheduling_means_w.push_back(mean_power_w(trace));
    }
    return report;
}

}  // namespace swingsim
