#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "airnet/engine.hpp"

namespace airnet {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace detail {

inline std::vector<WeatherRecord> constant_day(double t_ext, double wind_ms, double wind_deg) {
    std::vector<WeatherRecord> day;
    for (int h = 0; h < 24; ++h) {
        WeatherRecord rec;
        char stamp[32];
        std::snprintf(stamp, sizeof stamp, "2000-01-01T%02d:00", h);
        rec.timestamp = stamp;
        parse_timestamp(rec.timestamp, rec.epoch_seconds, rec.hour);
        rec.exterior_temperature = t_ext;
        rec.wind_speed = wind_ms;
        rec.wind_direction = wind_deg;
        day.push_back(std::move(rec));
    }
    return day;
}

} // namespace detail

// Single cold room (0 degC) in a warm windy exterior (25 degC, 2 m/s), two
// openings on the same facade at 0.5 m and 2.5 m, K = 0.5, n = 0.67. The
// solved through-flow must match the closed-form stack expression and the
// published 0.497 kg/s reference value.
inline CheckResult check_stack_case() {
    Scenario sc;
    sc.zones = {{1, "room", 0.0}};
    const CpTable south({{0.0, 0.6}});
    sc.small_openings = {{1, 0, 1, 0.5, 0.5, 0.67, south}, {2, 0, 1, 2.5, 0.5, 0.67, south}};
    sc.zone_temperatures = {Schedule{0.0}};
    sc.rho_ref = default_reference_density;
    sc.solver.residual_tolerance = 1e-9;
    sc.build();

    WeatherRecord wx;
    wx.timestamp = "2000-01-01T00:00";
    parse_timestamp(wx.timestamp, wx.epoch_seconds, wx.hour);
    wx.exterior_temperature = 25.0;
    wx.wind_speed = 2.0;
    wx.wind_direction = 180.0;

    const StepResult r = step(sc, wx, 0);
    const double through_flow = r.flows(0, 1); // exterior -> room

    const double rho_ae = air_density(25.0, sc.rho_ref);
    const double rho_ai = air_density(0.0, sc.rho_ref);
    const double stack_head = std::abs((rho_ae - rho_ai) / 2.0 * gravity * (0.5 - 2.5));
    const double closed_form = 0.5 * std::pow(stack_head, 0.67);

    const double vs_reference = std::abs(through_flow / 0.497 - 1.0);
    const double vs_closed_form = std::abs(through_flow / closed_form - 1.0);
    std::ostringstream detail;
    detail << "through-flow " << through_flow << " kg/s, closed form " << closed_form
           << " (rel err " << vs_closed_form << "), reference 0.497 (rel err " << vs_reference
           << ")";
    return {"stack case", r.report.converged && vs_reference <= 0.05 && vs_closed_form <= 1e-6,
            detail.str()};
}

// Windward and leeward openings at equal indoor/outdoor temperatures with a
// 3000 m3/h extraction scheduled 0 / 10% / 100% / 0 over the day. Flow
// directions must follow the three regimes and the 10% extraction must
// convert to 0.108 kg/s under the reference-density convention.
inline CheckResult check_three_regime_day() {
    Scenario sc;
    sc.zones = {{1, "room", 0.0}};
    const CpTable windward({{0.0, 0.6}});
    const CpTable leeward({{0.0, -0.3}});
    sc.small_openings = {{1, 0, 1, 1.5, 0.5, 0.67, windward}, {2, 0, 1, 1.5, 0.5, 0.67, leeward}};
    std::vector<double> vmc(24, 0.0);
    for (int h = 7; h <= 12; ++h) vmc[h] = 300.0;
    for (int h = 13; h <= 18; ++h) vmc[h] = 3000.0;
    sc.vents = {{1, Schedule{vmc}}};
    sc.zone_temperatures = {Schedule{25.0}};
    sc.rho_ref = dry_air_reference_density;
    sc.vmc_conversion = VmcConversion::reference_density;
    sc.build();

    const auto results = simulate(sc, detail::constant_day(25.0, 2.0, 180.0));

    bool signs_ok = true;
    for (int h = 0; h < 24; ++h) {
        const double in_windward = results[h].element_flows[0];
        const double in_leeward = results[h].element_flows[1];
        if (h <= 6 || h >= 19) {
            signs_ok = signs_ok && in_windward > 0.0 && in_leeward < 0.0;
        } else if (h <= 12) {
            signs_ok = signs_ok && in_windward > 0.0 && in_leeward < 0.0 &&
                       -in_leeward < -results[3].element_flows[1];
        } else {
            signs_ok = signs_ok && in_windward > 0.0 && in_leeward > 0.0;
        }
        signs_ok = signs_ok && results[h].report.converged;
    }

    const double extraction = results[8].boundary.extraction_rates[0];
    const double vs_reference = std::abs(extraction / 0.108 - 1.0);

    std::ostringstream detail;
    detail << "regime signs " << (signs_ok ? "ok" : "WRONG") << ", 10% extraction " << extraction
           << " kg/s vs 0.108 (rel err " << vs_reference << ")";
    return {"three-regime day", signs_ok && vs_reference <= 0.02, detail.str()};
}

// Warm and cold zones joined by a single 2 m x 1 m doorway (plus symmetric
// exterior leakage): the two Walton halves must carry opposite flows, with
// the upper one moving air from the warm to the cold side.
inline CheckResult check_counterflow_doorway() {
    Scenario sc;
    sc.zones = {{1, "warm", 0.0}, {2, "cold", 0.0}};
    const CpTable still({{0.0, 0.0}});
    sc.small_openings = {{1, 0, 1, 1.0, 0.01, 0.65, still}, {2, 0, 2, 1.0, 0.01, 0.65, still}};
    sc.large_openings = {{3, 1, 2, 0.0, 2.0, 1.0, walton_discharge_coefficient, {}}};
    sc.zone_temperatures = {Schedule{25.0}, Schedule{0.0}};
    sc.build();

    WeatherRecord wx;
    wx.timestamp = "2000-01-01T00:00";
    parse_timestamp(wx.timestamp, wx.epoch_seconds, wx.hour);
    wx.exterior_temperature = 12.5;

    const StepResult r = step(sc, wx, 0);
    const double lower = r.element_flows[2]; // warm -> cold positive
    const double upper = r.element_flows[3];

    std::ostringstream detail;
    detail << "lower half " << lower << " kg/s, upper half " << upper << " kg/s";
    const bool pass = r.report.converged && upper > 0.0 && lower < 0.0;
    return {"counterflow doorway", pass, detail.str()};
}

inline std::vector<CheckResult> run_builtin_checks() {
    return {check_stack_case(), check_three_regime_day(), check_counterflow_doorway()};
}

} // namespace airnet
