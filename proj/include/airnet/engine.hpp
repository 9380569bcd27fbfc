#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "airnet/model.hpp"
#include "airnet/network.hpp"
#include "airnet/solver.hpp"
#include "airnet/weather.hpp"

namespace airnet {

// Interzonal mass flows, kg/s. q(i, j) is the nonnegative flow from zone i to
// zone j; index 0 is the exterior; the diagonal stays zero. The two halves of
// a large opening may populate both q(i,j) and q(j,i) (counterflow).
class FlowMatrix {
public:
    FlowMatrix() = default;
    explicit FlowMatrix(int zone_count)
        : n_(zone_count + 1), q_(static_cast<std::size_t>(n_) * n_, 0.0) {}

    int node_count() const { return n_; } // zones + exterior

    double operator()(int from, int to) const { return q_[index(from, to)]; }
    double& operator()(int from, int to) { return q_[index(from, to)]; }

private:
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }

    int n_ = 0;
    std::vector<double> q_;
};

// Evaluate every elementary flow at the solved pressures and aggregate into
// the interzonal matrix: a positive signed flow on (a -> b) adds to q(a,b), a
// negative one to q(b,a); vent extraction is booked as zone -> exterior.
inline std::pair<FlowMatrix, std::vector<double>> compute_flow_matrix(
    const AirflowNetwork& net, const PressureVector& p, const BoundaryState& bs, double rho_ref,
    double epsilon = 1e-10) {
    const detail::Assembler assembler(net, bs, rho_ref, epsilon);
    FlowMatrix q(net.zone_count());
    std::vector<double> element_flows;
    element_flows.reserve(net.elements.size());
    for (std::size_t i = 0; i < net.elements.size(); ++i) {
        const FlowElement& e = net.elements[i];
        const double flow =
            crack_mass_flow(e.permeability, e.exponent, assembler.pressure_difference(i, p), epsilon);
        element_flows.push_back(flow);
        if (flow >= 0.0) {
            q(e.zone_a, e.zone_b) += flow;
        } else {
            q(e.zone_b, e.zone_a) -= flow;
        }
    }
    for (std::size_t k = 0; k < bs.extraction_rates.size(); ++k) {
        q(static_cast<int>(k) + 1, 0) += bs.extraction_rates[k];
    }
    return {std::move(q), std::move(element_flows)};
}

enum class VmcConversion {
    zone_density,      // volumetric rate times air_density(zone temperature)
    reference_density, // volumetric rate times rho_ref
};

// A complete simulation problem: raw network description, canonical network,
// schedules and solver settings.
struct Scenario {
    std::vector<Zone> zones;
    std::vector<SmallOpening> small_openings;
    std::vector<LargeOpening> large_openings;
    std::vector<MechanicalVent> vents;
    std::vector<Schedule> zone_temperatures; // degC, one per zone
    double rho_ref = default_reference_density;
    SolverOptions solver;
    VmcConversion vmc_conversion = VmcConversion::zone_density;

    AirflowNetwork network; // canonical form, produced by build()

    // (Re)build the canonical network and check schedule arities. Must be
    // called after mutating the raw description (parse_scenario does it).
    void build() {
        network = build_network(zones, small_openings, large_openings, vents, rho_ref);
        std::vector<std::string> issues;
        if (zone_temperatures.size() != network.zones.size()) {
            issues.push_back("expected " + std::to_string(network.zones.size()) +
                             " zone temperature schedules, got " +
                             std::to_string(zone_temperatures.size()));
        }
        for (std::size_t k = 0; k < zone_temperatures.size(); ++k) {
            if (!zone_temperatures[k].valid_arity()) {
                issues.push_back("zone " + std::to_string(k + 1) +
                                 ": temperature schedule must have 1 or 24 entries, has " +
                                 std::to_string(zone_temperatures[k].values.size()));
            }
        }
        if (!issues.empty()) throw ValidationError(std::move(issues));
    }
};

// Assemble the per-step boundary conditions: weather plus the schedules
// sampled at the given hour. Vent schedules (m^3/h) are converted to kg/s
// with the scenario's density convention.
inline BoundaryState boundary_state_at(const Scenario& scenario, const WeatherRecord& weather,
                                       int hour) {
    if (hour < 0 || hour > 23) {
        throw std::invalid_argument("boundary_state_at: hour out of range: " + std::to_string(hour));
    }
    BoundaryState bs;
    bs.exterior_temperature = weather.exterior_temperature;
    bs.wind_speed = weather.wind_speed;
    bs.wind_direction = weather.wind_direction;
    bs.zone_temperatures.reserve(scenario.zone_temperatures.size());
    for (const auto& schedule : scenario.zone_temperatures) {
        bs.zone_temperatures.push_back(schedule.at(hour));
    }
    bs.extraction_rates.assign(scenario.network.zones.size(), 0.0);
    for (const auto& vent : scenario.network.vents) {
        const double rho = scenario.vmc_conversion == VmcConversion::reference_density
                               ? scenario.rho_ref
                               : air_density(bs.zone_temperatures[vent.zone - 1], scenario.rho_ref);
        bs.extraction_rates[vent.zone - 1] += vent.schedule.at(hour) / 3600.0 * rho;
    }
    return bs;
}

// Everything computed for one time step. Returned even when the solver did
// not converge; the report carries the flag.
struct StepResult {
    std::string timestamp;
    BoundaryState boundary;
    PressureVector pressures;
    FlowMatrix flows;
    std::vector<double> element_flows; // signed kg/s, network element order
    SolverReport report;
};

inline StepResult step(const Scenario& scenario, const WeatherRecord& weather, int hour,
                       const std::optional<PressureVector>& warm_start = std::nullopt) {
    StepResult result;
    result.timestamp = weather.timestamp;
    result.boundary = boundary_state_at(scenario, weather, hour);
    try {
        auto [p, report] = newton_solve(scenario.network, result.boundary, scenario.rho_ref,
                                        scenario.solver, warm_start);
        result.pressures = std::move(p);
        result.report = report;
    } catch (const std::runtime_error& solver_error) {
        throw std::runtime_error(weather.timestamp + ": " + solver_error.what());
    }
    auto [q, element_flows] = compute_flow_matrix(scenario.network, result.pressures,
                                                  result.boundary, scenario.rho_ref,
                                                  scenario.solver.linearization_epsilon);
    result.flows = std::move(q);
    result.element_flows = std::move(element_flows);
    return result;
}

// Quasi-steady time stepping: each record is an independent steady state, and
// each converged pressure vector warm-starts the next step. A non-converged
// warm-started step is retried once from the linearized cold start before
// being recorded as failed.
inline std::vector<StepResult> simulate(const Scenario& scenario,
                                        const std::vector<WeatherRecord>& series) {
    if (series.empty()) throw std::invalid_argument("simulate: empty weather series");
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (series[i].epoch_seconds <= series[i - 1].epoch_seconds) {
            throw std::invalid_argument("simulate: weather records out of order at " +
                                        series[i].timestamp);
        }
    }

    std::vector<StepResult> results;
    results.reserve(series.size());
    std::optional<PressureVector> warm;
    for (const WeatherRecord& record : series) {
        StepResult result = step(scenario, record, record.hour, warm);
        if (!result.report.converged && warm) {
            result = step(scenario, record, record.hour, std::nullopt);
        }
        warm = result.report.converged ? std::optional<PressureVector>(result.pressures)
                                       : std::nullopt;
        results.push_back(std::move(result));
    }
    return results;
}

} // namespace airnet
