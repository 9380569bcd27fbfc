#pragma once

// Test-only reference computations: finite-difference Jacobians, bisection
// solvers and random network generation. These deliberately go through
// assemble_residuals only, independent of the analytic Jacobian and of
// newton_solve, so they can serve as oracles for both.

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "airnet/engine.hpp"
#include "airnet/network.hpp"
#include "airnet/solver.hpp"

namespace oracles {

using namespace airnet;

// Central finite differences of the zone balances with step h.
inline Matrix fd_jacobian(const AirflowNetwork& net, const PressureVector& p,
                          const BoundaryState& bs, double rho_ref, double h = 1e-4) {
    const int n = net.zone_count();
    Matrix j(n, n);
    for (int col = 0; col < n; ++col) {
        PressureVector hi = p;
        PressureVector lo = p;
        hi[col] += h;
        lo[col] -= h;
        const auto f_hi = assemble_residuals(net, hi, bs, rho_ref);
        const auto f_lo = assemble_residuals(net, lo, bs, rho_ref);
        for (int row = 0; row < n; ++row) j(row, col) = (f_hi[row] - f_lo[row]) / (2.0 * h);
    }
    return j;
}

// Bisection on a strictly decreasing function, bracket expanded from [-1, 1].
inline double bisect_decreasing(const std::function<double(double)>& f, double width) {
    double lo = -1.0;
    double hi = 1.0;
    for (int i = 0; f(lo) < 0.0; ++i) {
        lo *= 2.0;
        if (i > 60) throw std::runtime_error("bisect: no lower bracket");
    }
    for (int i = 0; f(hi) > 0.0; ++i) {
        hi *= 2.0;
        if (i > 60) throw std::runtime_error("bisect: no upper bracket");
    }
    for (int i = 0; i < 200 && hi - lo > width; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) >= 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Reference pressure of a 1-zone network by scalar bisection.
inline double bisect_single_zone(const AirflowNetwork& net, const BoundaryState& bs,
                                 double rho_ref) {
    return bisect_decreasing(
        [&](double p) { return assemble_residuals(net, {p}, bs, rho_ref)[0]; }, 1e-11);
}

// Reference pressures of a 2-zone network by nested bisection: the inner loop
// balances zone 2 for a given p1, the outer loop balances zone 1.
inline std::pair<double, double> bisect_two_zone(const AirflowNetwork& net,
                                                 const BoundaryState& bs, double rho_ref) {
    const auto inner = [&](double p1) {
        return bisect_decreasing(
            [&](double p2) { return assemble_residuals(net, {p1, p2}, bs, rho_ref)[1]; }, 1e-12);
    };
    const double p1 = bisect_decreasing(
        [&](double p1_try) {
            return assemble_residuals(net, {p1_try, inner(p1_try)}, bs, rho_ref)[0];
        },
        1e-10);
    return {p1, inner(p1)};
}

struct RandomNetwork {
    AirflowNetwork net;
    BoundaryState bs;
    double rho_ref = default_reference_density;
};

// A connected random network: every zone reaches the exterior through the
// element chain, so the pressure system is nonsingular. K in [0.01, 2],
// n in {0.5, 0.67, 1}, temperatures in [0, 35] degC.
inline RandomNetwork make_random_network(std::mt19937& rng, int min_zones, int max_zones,
                                         bool with_extraction) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto uniform = [&](double a, double b) { return a + (b - a) * unit(rng); };
    const auto uniform_int = [&](int a, int b) {
        return std::uniform_int_distribution<int>(a, b)(rng);
    };

    const int n = uniform_int(min_zones, max_zones);
    RandomNetwork rn;

    std::vector<Zone> zones;
    for (int k = 1; k <= n; ++k) {
        zones.push_back({k, "z" + std::to_string(k), uniform(0.0, 0.5)});
    }

    static const double exponents[] = {0.5, 0.67, 1.0};
    std::vector<FlowElement> elements;
    const auto add_element = [&](int a, int b) {
        FlowElement e;
        e.id = static_cast<int>(elements.size()) + 1;
        e.zone_a = a;
        e.zone_b = b;
        e.elevation = uniform(0.0, 3.0);
        e.permeability = uniform(0.01, 2.0);
        e.exponent = exponents[uniform_int(0, 2)];
        if (a == 0 || b == 0) e.cp = CpTable({{0.0, uniform(-0.5, 0.8)}});
        elements.push_back(std::move(e));
    };
    // Spanning chain: zone k hooks onto a lower-numbered node (0 = exterior).
    for (int k = 1; k <= n; ++k) add_element(uniform_int(0, k - 1), k);
    for (int extra = uniform_int(1, 3); extra > 0; --extra) {
        int a = uniform_int(0, n);
        const int b = uniform_int(1, n);
        if (a == b) a = 0;
        add_element(a, b);
    }

    rn.net = build_network(std::move(zones), std::move(elements), {});

    rn.bs.exterior_temperature = uniform(0.0, 35.0);
    rn.bs.wind_speed = uniform(0.0, 4.0);
    rn.bs.wind_direction = uniform(0.0, 360.0);
    for (int k = 0; k < n; ++k) rn.bs.zone_temperatures.push_back(uniform(0.0, 35.0));
    rn.bs.extraction_rates.assign(static_cast<std::size_t>(n), 0.0);
    if (with_extraction) {
        for (int k = 0; k < n; ++k) {
            if (unit(rng) < 0.5) rn.bs.extraction_rates[k] = uniform(0.0, 0.05);
        }
    }
    return rn;
}

// Random zone pressures in [-5, 5] Pa resampled until every element sees a
// driving pressure of at least min_dp, keeping finite differences with step
// 1e-4 Pa well inside their asymptotic regime.
inline PressureVector clear_dp_pressures(const RandomNetwork& rn, std::mt19937& rng,
                                         double min_dp = 0.05) {
    std::uniform_real_distribution<double> pressure(-5.0, 5.0);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        PressureVector p;
        for (int k = 0; k < rn.net.zone_count(); ++k) p.push_back(pressure(rng));
        bool clear = true;
        for (const FlowElement& e : rn.net.elements) {
            if (std::abs(pressure_difference(rn.net, e, p, rn.bs, rn.rho_ref)) < min_dp) {
                clear = false;
                break;
            }
        }
        if (clear) return p;
    }
    throw std::runtime_error("clear_dp_pressures: no sample found");
}

} // namespace oracles
