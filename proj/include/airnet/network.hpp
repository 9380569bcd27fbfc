#pragma once

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "airnet/model.hpp"

namespace airnet {

// Walton split of a large opening: two small openings at 5/18 and 13/18 of
// the opening height, Cd = 0.78, exponent 0.5.
inline constexpr double walton_lower_fraction = 5.0 / 18.0;
inline constexpr double walton_upper_fraction = 13.0 / 18.0;
inline constexpr double walton_discharge_coefficient = 0.78;
inline constexpr double walton_exponent = 0.5;

// Replace a large opening by its two equivalent small openings. Each half is
// treated as an orifice of half the opening area, so its mass permeability is
// K = Cd * (w*h/2) * sqrt(2 * rho_ref) with rho_ref the scenario reference
// density. Endpoints and cp table carry over unchanged.
inline std::array<SmallOpening, 2> decompose_large_opening(const LargeOpening& lo, double rho_ref) {
    if (!(lo.height > 0.0) || !(lo.width > 0.0)) {
        throw std::invalid_argument("large opening " + std::to_string(lo.id) +
                                    ": height and width must be positive");
    }
    if (!(lo.discharge_coefficient > 0.0 && lo.discharge_coefficient <= 1.0)) {
        throw std::invalid_argument("large opening " + std::to_string(lo.id) +
                                    ": discharge coefficient must be in (0,1]");
    }
    const double half_area = lo.width * lo.height / 2.0;
    const double k = lo.discharge_coefficient * half_area * std::sqrt(2.0 * rho_ref);

    SmallOpening lower{lo.id,
                       lo.zone_a,
                       lo.zone_b,
                       lo.sill_elevation + walton_lower_fraction * lo.height,
                       k,
                       walton_exponent,
                       lo.cp};
    SmallOpening upper = lower;
    upper.elevation = lo.sill_elevation + walton_upper_fraction * lo.height;
    return {lower, upper};
}

// Validate and canonicalize an already-decomposed element list. Elements are
// re-indexed sequentially from 1 and oriented so an exterior endpoint is
// always zone_a. All failures are collected and thrown together.
inline AirflowNetwork build_network(std::vector<Zone> zones,
                                    std::vector<FlowElement> elements,
                                    std::vector<MechanicalVent> vents) {
    std::vector<std::string> issues;

    std::sort(zones.begin(), zones.end(), [](const Zone& a, const Zone& b) { return a.id < b.id; });
    const int n = static_cast<int>(zones.size());
    for (int i = 0; i < n; ++i) {
        if (i > 0 && zones[i].id == zones[i - 1].id) {
            issues.push_back("zone " + std::to_string(zones[i].id) + ": duplicate id");
        } else if (zones[i].id != i + 1) {
            issues.push_back("zone ids must be contiguous from 1; found " +
                             std::to_string(zones[i].id) + " at position " + std::to_string(i + 1));
        }
        if (!std::isfinite(zones[i].reference_height)) {
            issues.push_back("zone " + std::to_string(zones[i].id) + ": non-finite reference height");
        }
    }

    const auto known_zone = [n](int z) { return z >= 0 && z <= n; };

    int next_id = 0;
    for (auto& e : elements) {
        if (e.zone_b == 0 && e.zone_a != 0) std::swap(e.zone_a, e.zone_b);
        const std::string tag = std::string(to_string(e.kind)) + " element " + std::to_string(e.id);
        if (e.zone_a == e.zone_b) {
            issues.push_back(tag + ": endpoints must differ");
            continue;
        }
        if (!known_zone(e.zone_a)) issues.push_back(tag + ": unknown zone " + std::to_string(e.zone_a));
        if (!known_zone(e.zone_b)) issues.push_back(tag + ": unknown zone " + std::to_string(e.zone_b));
        if (!(e.permeability > 0.0) || !std::isfinite(e.permeability)) {
            issues.push_back(tag + ": permeability must be positive");
        }
        if (!(e.exponent >= 0.5 && e.exponent <= 1.0)) {
            issues.push_back(tag + ": flow exponent must be in [0.5, 1]");
        }
        if (!std::isfinite(e.elevation)) issues.push_back(tag + ": non-finite elevation");
        if (e.exterior() && !e.cp) {
            issues.push_back(tag + ": exterior element requires a cp table");
        } else if (!e.exterior() && e.cp) {
            issues.push_back(tag + ": interior element must not carry a cp table");
        }
        e.id = ++next_id;
    }

    for (const auto& v : vents) {
        const std::string tag = "vent on zone " + std::to_string(v.zone);
        if (!(v.zone >= 1 && v.zone <= n)) {
            issues.push_back(tag + ": unknown zone");
            continue;
        }
        if (!v.schedule.valid_arity()) {
            issues.push_back(tag + ": schedule must have 1 or 24 entries, has " +
                             std::to_string(v.schedule.values.size()));
            continue;
        }
        bool nonzero = false;
        for (double rate : v.schedule.values) {
            if (!(rate >= 0.0) || !std::isfinite(rate)) {
                issues.push_back(tag + ": extraction rates must be >= 0");
                break;
            }
            if (rate > 0.0) nonzero = true;
        }
        if (nonzero) {
            const bool reachable =
                std::any_of(elements.begin(), elements.end(), [&](const FlowElement& e) {
                    return e.zone_a == v.zone || e.zone_b == v.zone;
                });
            if (!reachable) {
                issues.push_back(tag + ": zone has no flow elements, mass balance is unsatisfiable");
            }
        }
    }

    if (!issues.empty()) throw ValidationError(std::move(issues));
    return AirflowNetwork{std::move(zones), std::move(elements), std::move(vents)};
}

// Build the canonical network from raw component lists: small openings pass
// through as PO elements, each large opening is decomposed into two GO
// elements, then everything is validated and re-indexed.
inline AirflowNetwork build_network(std::vector<Zone> zones,
                                    const std::vector<SmallOpening>& small_openings,
                                    const std::vector<LargeOpening>& large_openings,
                                    std::vector<MechanicalVent> vents,
                                    double rho_ref) {
    std::vector<std::string> issues;
    std::vector<FlowElement> elements;
    elements.reserve(small_openings.size() + 2 * large_openings.size());

    for (const auto& po : small_openings) {
        elements.push_back({po.id, po.zone_a, po.zone_b, po.elevation, po.permeability,
                            po.exponent, po.cp, ElementKind::PO});
    }
    for (const auto& go : large_openings) {
        try {
            for (const auto& half : decompose_large_opening(go, rho_ref)) {
                elements.push_back({go.id, half.zone_a, half.zone_b, half.elevation,
                                    half.permeability, half.exponent, half.cp, ElementKind::GO});
            }
        } catch (const std::invalid_argument& bad_geometry) {
            issues.push_back(bad_geometry.what());
        }
    }

    try {
        AirflowNetwork net = build_network(std::move(zones), std::move(elements), std::move(vents));
        if (issues.empty()) return net;
    } catch (const ValidationError& nested) {
        for (const auto& issue : nested.issues()) issues.push_back(issue);
    }
    throw ValidationError(std::move(issues));
}

} // namespace airnet
