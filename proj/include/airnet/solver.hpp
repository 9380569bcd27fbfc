#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "airnet/air.hpp"
#include "airnet/linalg.hpp"
#include "airnet/model.hpp"

namespace airnet {

// Averaged drivers for one quasi-steady step. zone_temperatures must hold one
// entry per zone; extraction_rates may be empty (no extraction) or hold one
// entry per zone, in kg/s.
struct BoundaryState {
    double exterior_temperature = 20.0; // degC
    double wind_speed = 0.0;            // m/s
    double wind_direction = 0.0;        // deg, [0,360)
    std::vector<double> zone_temperatures;
    std::vector<double> extraction_rates;
};

// Gauge zone reference pressures, Pa, one per zone at its reference height.
using PressureVector = std::vector<double>;

struct SolverOptions {
    double residual_tolerance = 1e-6;     // kg/s, max-norm of the zone balances
    int max_iterations = 100;
    double linearization_epsilon = 1e-10; // Pa, |dP| below which the flow law is linear
    double damping = 1.0;                 // starting step factor each iteration, (0,1]
    int max_step_halvings = 6;            // per iteration; 0 disables the line search
};

struct SolverReport {
    int iterations = 0;
    bool converged = false;
    double final_residual_norm = 0.0; // kg/s
    int damping_events = 0;
    bool used_linear_init = false;
};

// Driving pressure on the exterior side of an exposed element, at its
// elevation: dynamic wind pressure minus the outside air column. The ambient
// pressure is 0 Pa gauge at the building datum.
inline double exterior_side_pressure(const FlowElement& element, const BoundaryState& bs,
                                     double rho_ref) {
    if (!element.exterior() || !element.cp) {
        throw std::logic_error("exterior_side_pressure: element " + std::to_string(element.id) +
                               " is not an exposed exterior element");
    }
    const double rho_ae = air_density(bs.exterior_temperature, rho_ref);
    const double cp = cp_lookup(*element.cp, bs.wind_direction);
    return 0.5 * rho_ae * cp * bs.wind_speed * bs.wind_speed - rho_ae * gravity * element.elevation;
}

// Crack-flow law: sign(dP) * K * |dP|^n, linearized to K * dP below epsilon
// to keep the derivative finite. Odd in dP.
inline double crack_mass_flow(double permeability, double exponent, double dp,
                              double epsilon = 1e-10) {
    const double a = std::abs(dp);
    if (a < epsilon) return permeability * dp;
    return std::copysign(permeability * std::pow(a, exponent), dp);
}

// Magnitude of d(flow)/d(dP): n * K * |dP|^(n-1), recovered from the flow by a
// division instead of a second pow; K in the linearized zone.
inline double flow_derivative(double permeability, double exponent, double dp,
                              double epsilon = 1e-10) {
    const double a = std::abs(dp);
    if (a < epsilon) return permeability;
    return exponent * std::abs(crack_mass_flow(permeability, exponent, dp, epsilon)) / a;
}

namespace detail {

// Per-step assembly state: zone densities and exterior element pressures are
// computed once per boundary state and reused across Newton iterations.
class Assembler {
public:
    Assembler(const AirflowNetwork& net, const BoundaryState& bs, double rho_ref, double epsilon)
        : net_(net), epsilon_(epsilon) {
        const int n = net.zone_count();
        if (static_cast<int>(bs.zone_temperatures.size()) != n) {
            throw std::invalid_argument("BoundaryState: expected " + std::to_string(n) +
                                        " zone temperatures, got " +
                                        std::to_string(bs.zone_temperatures.size()));
        }
        if (!bs.extraction_rates.empty() && static_cast<int>(bs.extraction_rates.size()) != n) {
            throw std::invalid_argument("BoundaryState: extraction_rates must be empty or one per zone");
        }
        if (!(bs.wind_speed >= 0.0)) {
            throw std::invalid_argument("BoundaryState: wind speed must be >= 0");
        }

        zone_density_.reserve(net.zones.size());
        for (double t : bs.zone_temperatures) zone_density_.push_back(air_density(t, rho_ref));

        extraction_.assign(static_cast<std::size_t>(n), 0.0);
        for (std::size_t k = 0; k < bs.extraction_rates.size(); ++k) {
            extraction_[k] = bs.extraction_rates[k];
        }

        exterior_pressure_.assign(net.elements.size(), 0.0);
        for (std::size_t i = 0; i < net.elements.size(); ++i) {
            if (net.elements[i].exterior()) {
                exterior_pressure_[i] = exterior_side_pressure(net.elements[i], bs, rho_ref);
            }
        }
    }

    // Signed driving pressure across element i; positive pushes zone_a -> zone_b.
    double pressure_difference(std::size_t i, const PressureVector& p) const {
        const FlowElement& e = net_.elements[i];
        const double side_a =
            e.exterior() ? exterior_pressure_[i] : side(e.zone_a, e.elevation, p);
        return side_a - side(e.zone_b, e.elevation, p);
    }

    // f_k = sum of incoming element flows minus extraction, kg/s.
    std::vector<double> residuals(const PressureVector& p) const {
        std::vector<double> f(zone_density_.size(), 0.0);
        for (std::size_t i = 0; i < net_.elements.size(); ++i) {
            const FlowElement& e = net_.elements[i];
            const double flow =
                crack_mass_flow(e.permeability, e.exponent, pressure_difference(i, p), epsilon_);
            f[e.zone_b - 1] += flow;
            if (e.zone_a != 0) f[e.zone_a - 1] -= flow;
        }
        for (std::size_t k = 0; k < f.size(); ++k) f[k] -= extraction_[k];
        return f;
    }

    // J = df/dp. Each element contributes -d to both endpoint diagonals and +d
    // to the two off-diagonal couplings; exterior elements touch the diagonal
    // only; vents are pressure-independent and contribute nothing.
    Matrix jacobian(const PressureVector& p) const {
        const int n = static_cast<int>(zone_density_.size());
        Matrix j(n, n);
        for (std::size_t i = 0; i < net_.elements.size(); ++i) {
            const FlowElement& e = net_.elements[i];
            const double dp = pressure_difference(i, p);
            const double a = std::abs(dp);
            double d;
            if (a < epsilon_) {
                d = e.permeability;
            } else {
                d = e.exponent * std::abs(crack_mass_flow(e.permeability, e.exponent, dp, epsilon_)) / a;
            }
            j(e.zone_b - 1, e.zone_b - 1) -= d;
            if (e.zone_a != 0) {
                j(e.zone_a - 1, e.zone_a - 1) -= d;
                j(e.zone_a - 1, e.zone_b - 1) += d;
                j(e.zone_b - 1, e.zone_a - 1) += d;
            }
        }
        return j;
    }

    // Linear (n = 1) system A p = rhs keeping wind, buoyancy and extraction.
    void linear_system(Matrix& a, std::vector<double>& rhs) const {
        const int n = static_cast<int>(zone_density_.size());
        a = Matrix(n, n);
        rhs.assign(static_cast<std::size_t>(n), 0.0);
        const PressureVector zero(static_cast<std::size_t>(n), 0.0);
        for (std::size_t i = 0; i < net_.elements.size(); ++i) {
            const FlowElement& e = net_.elements[i];
            const double base = pressure_difference(i, zero);
            const double k = e.permeability;
            rhs[e.zone_b - 1] -= k * base;
            a(e.zone_b - 1, e.zone_b - 1) -= k;
            if (e.zone_a != 0) {
                rhs[e.zone_a - 1] += k * base;
                a(e.zone_a - 1, e.zone_a - 1) -= k;
                a(e.zone_a - 1, e.zone_b - 1) += k;
                a(e.zone_b - 1, e.zone_a - 1) += k;
            }
        }
        for (int k = 0; k < n; ++k) rhs[k] += extraction_[k];
    }

private:
    double side(int zone_id, double elevation, const PressureVector& p) const {
        const Zone& z = net_.zones[static_cast<std::size_t>(zone_id) - 1];
        return p[zone_id - 1] -
               zone_density_[zone_id - 1] * gravity * (elevation - z.reference_height);
    }

    const AirflowNetwork& net_;
    double epsilon_;
    std::vector<double> zone_density_;
    std::vector<double> extraction_;
    std::vector<double> exterior_pressure_;
};

inline double max_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace detail

// Signed driving pressure across an element for pressures p; positive pushes
// flow zone_a -> zone_b (exterior elements are oriented exterior -> zone).
inline double pressure_difference(const AirflowNetwork& net, const FlowElement& element,
                                  const PressureVector& p, const BoundaryState& bs,
                                  double rho_ref) {
    const auto zone_side = [&](int zone_id) {
        const Zone& z = net.zones[static_cast<std::size_t>(zone_id) - 1];
        const double rho = air_density(bs.zone_temperatures[zone_id - 1], rho_ref);
        return p[zone_id - 1] - rho * gravity * (element.elevation - z.reference_height);
    };
    const double side_a = element.exterior() ? exterior_side_pressure(element, bs, rho_ref)
                                             : zone_side(element.zone_a);
    return side_a - zone_side(element.zone_b);
}

// Zone mass balances f(p), kg/s: incoming element flows counted positive,
// extraction subtracted.
inline std::vector<double> assemble_residuals(const AirflowNetwork& net, const PressureVector& p,
                                              const BoundaryState& bs, double rho_ref,
                                              double epsilon = 1e-10) {
    return detail::Assembler(net, bs, rho_ref, epsilon).residuals(p);
}

// Analytic Jacobian df/dp of the zone balances, kg/(s*Pa).
inline Matrix assemble_jacobian(const AirflowNetwork& net, const PressureVector& p,
                                const BoundaryState& bs, double rho_ref,
                                double epsilon = 1e-10) {
    return detail::Assembler(net, bs, rho_ref, epsilon).jacobian(p);
}

// Cold-start pressures: one solve of the linear system obtained by forcing
// every flow exponent to 1 while keeping wind, buoyancy and extraction.
inline PressureVector linear_initialization(const AirflowNetwork& net, const BoundaryState& bs,
                                            double rho_ref) {
    detail::Assembler assembler(net, bs, rho_ref, 1e-10);
    Matrix a;
    std::vector<double> rhs;
    assembler.linear_system(a, rhs);
    try {
        return lu_solve(std::move(a), std::move(rhs));
    } catch (const SingularMatrixError& singular) {
        throw std::runtime_error("linear_initialization: singular system, zone " +
                                 std::to_string(singular.pivot_index + 1) +
                                 " is isolated or the network has no exterior connection");
    }
}

inline void validate(const SolverOptions& options) {
    if (!(options.residual_tolerance > 0.0)) {
        throw std::invalid_argument("SolverOptions: residual_tolerance must be > 0");
    }
    if (options.max_iterations < 1) {
        throw std::invalid_argument("SolverOptions: max_iterations must be >= 1");
    }
    if (!(options.linearization_epsilon > 0.0)) {
        throw std::invalid_argument("SolverOptions: linearization_epsilon must be > 0");
    }
    if (!(options.damping > 0.0 && options.damping <= 1.0)) {
        throw std::invalid_argument("SolverOptions: damping must be in (0,1]");
    }
    if (options.max_step_halvings < 0) {
        throw std::invalid_argument("SolverOptions: max_step_halvings must be >= 0");
    }
}

// Damped Newton-Raphson on f(p) = 0. Starts from warm_start when given, else
// from the linearized cold start. Each iteration solves J D = -f by LU and
// applies p += lambda * D, halving lambda (at most max_step_halvings times,
// restoring it next iteration) while the max-norm of the residual fails to
// decrease. Stops once max_k |f_k| <= residual_tolerance; returns the
// non-converged state with its report when the iteration budget runs out.
inline std::pair<PressureVector, SolverReport> newton_solve(
    const AirflowNetwork& net, const BoundaryState& bs, double rho_ref,
    const SolverOptions& options = {},
    const std::optional<PressureVector>& warm_start = std::nullopt) {
    validate(options);
    const int n = net.zone_count();

    SolverReport report;
    PressureVector p;
    if (warm_start) {
        if (static_cast<int>(warm_start->size()) != n) {
            throw std::invalid_argument("newton_solve: warm start size mismatch");
        }
        p = *warm_start;
    } else {
        p = linear_initialization(net, bs, rho_ref);
        report.used_linear_init = true;
    }
    if (n == 0) {
        report.converged = true;
        return {p, report};
    }

    const detail::Assembler assembler(net, bs, rho_ref, options.linearization_epsilon);
    std::vector<double> f = assembler.residuals(p);
    double norm = detail::max_norm(f);

    while (norm > options.residual_tolerance && report.iterations < options.max_iterations) {
        Matrix jacobian = assembler.jacobian(p);
        std::vector<double> rhs(f.size());
        for (std::size_t k = 0; k < f.size(); ++k) rhs[k] = -f[k];
        std::vector<double> correction;
        try {
            correction = lu_solve(std::move(jacobian), std::move(rhs));
        } catch (const SingularMatrixError& singular) {
            throw std::runtime_error("newton_solve: singular Jacobian at iteration " +
                                     std::to_string(report.iterations) + " (pivot index " +
                                     std::to_string(singular.pivot_index) + ")");
        }

        double lambda = options.damping;
        PressureVector trial(p.size());
        std::vector<double> f_trial;
        double trial_norm;
        for (int halvings = 0;; ++halvings) {
            for (std::size_t k = 0; k < p.size(); ++k) trial[k] = p[k] + lambda * correction[k];
            f_trial = assembler.residuals(trial);
            trial_norm = detail::max_norm(f_trial);
            const bool improved = std::isfinite(trial_norm) && trial_norm < norm;
            if (improved || halvings >= options.max_step_halvings) break;
            lambda *= 0.5;
            ++report.damping_events;
        }

        p = std::move(trial);
        f = std::move(f_trial);
        norm = trial_norm;
        ++report.iterations;
        if (!std::isfinite(norm)) break;
    }

    report.converged = norm <= options.residual_tolerance;
    report.final_residual_norm = norm;
    return {p, report};
}

} // namespace airnet
