#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace airnet {

// Physical constants shared by the pressure network equations.
inline constexpr double gravity = 9.81;        // m/s^2
inline constexpr double zero_celsius = 273.15; // K

// Reference air densities at 0 degC. The default matches common leakage data;
// the dry-air value (1.293) is the usual handbook figure at 101325 Pa.
inline constexpr double default_reference_density = 1.2;   // kg/m^3
inline constexpr double dry_air_reference_density = 1.293; // kg/m^3

// Ideal-gas density law: rho(T) = rho_ref * T0 / (T0 + T), T in degC and
// rho_ref the density at 0 degC. Strictly decreasing in T.
inline double air_density(double temperature_c, double rho_ref) {
    if (!(temperature_c > -zero_celsius)) {
        throw std::invalid_argument("air_density: non-physical temperature " +
                                    std::to_string(temperature_c) + " degC");
    }
    return rho_ref * zero_celsius / (zero_celsius + temperature_c);
}

} // namespace airnet
