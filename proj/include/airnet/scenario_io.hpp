#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "airnet/engine.hpp"
#include "airnet/model.hpp"
#include "airnet/weather.hpp"

namespace airnet {

namespace detail {

struct SourceLine {
    int number = 0;
    std::string text;
};

inline std::vector<std::string> tokens(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream stream(s);
    std::string tok;
    while (stream >> tok) out.push_back(tok);
    return out;
}

// Shortest decimal form that round-trips to the same double.
inline std::string format_full(double v) {
    char buf[40];
    const auto result = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, result.ptr);
}

inline std::string section_token(const std::string& name, int fallback_id) {
    std::string out;
    for (char c : name) out += (c == ' ' || c == '\t' || c == ',') ? '_' : c;
    if (out.empty()) out = "z" + std::to_string(fallback_id);
    return out;
}

} // namespace detail

// Parse a scenario file (sections [zones] [openings] [large_openings] [vents]
// [cp] [constants] [schedules]) and build the canonical network. Syntax and
// reference errors are collected and thrown together as a ValidationError
// with file:line locations.
inline Scenario parse_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path.string());

    static const std::vector<std::string> known_sections = {
        "zones", "openings", "large_openings", "vents", "cp", "constants", "schedules"};

    std::map<std::string, std::vector<detail::SourceLine>> sections;
    std::vector<std::string> issues;
    const auto where = [&path](int line_no) {
        return path.string() + ":" + std::to_string(line_no) + ": ";
    };

    {
        std::string line;
        std::string current;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = detail::trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') {
                    issues.push_back(where(line_no) + "malformed section header '" + line + "'");
                    current.clear();
                    continue;
                }
                current = line.substr(1, line.size() - 2);
                if (std::find(known_sections.begin(), known_sections.end(), current) ==
                    known_sections.end()) {
                    issues.push_back(where(line_no) + "unknown section [" + current + "]");
                    current.clear();
                }
                continue;
            }
            if (current.empty()) {
                issues.push_back(where(line_no) + "content outside any known section");
                continue;
            }
            sections[current].push_back({line_no, line});
        }
    }

    const auto number = [&](const std::string& text, const std::string& what, int line_no,
                            double fallback = 0.0) {
        try {
            return detail::parse_number(text, what);
        } catch (const std::invalid_argument& bad) {
            issues.push_back(where(line_no) + bad.what());
            return fallback;
        }
    };

    // Named hourly profiles and cp tables come first; later sections refer to
    // them by name.
    std::map<std::string, Schedule> schedules;
    for (const auto& src : sections["schedules"]) {
        const auto toks = detail::tokens(src.text);
        if (toks.size() < 2) {
            issues.push_back(where(src.number) + "schedule needs a name and at least one value");
            continue;
        }
        std::vector<double> values;
        for (std::size_t i = 1; i < toks.size(); ++i) {
            values.push_back(number(toks[i], "schedule value", src.number));
        }
        if (values.size() != 1 && values.size() != 24) {
            issues.push_back(where(src.number) + "schedule '" + toks[0] +
                             "': must have 1 or 24 values, has " + std::to_string(values.size()));
        }
        schedules[toks[0]] = Schedule{std::move(values)};
    }

    std::map<std::string, CpTable> cp_tables;
    for (const auto& src : sections["cp"]) {
        const auto toks = detail::tokens(src.text);
        if (toks.size() < 2) {
            issues.push_back(where(src.number) + "cp table needs a name and azimuth:cp pairs");
            continue;
        }
        std::vector<CpTable::Entry> entries;
        for (std::size_t i = 1; i < toks.size(); ++i) {
            const std::size_t colon = toks[i].find(':');
            if (colon == std::string::npos) {
                issues.push_back(where(src.number) + "cp entry '" + toks[i] +
                                 "' is not azimuth:cp");
                continue;
            }
            entries.push_back({number(toks[i].substr(0, colon), "azimuth", src.number),
                               number(toks[i].substr(colon + 1), "cp", src.number)});
        }
        try {
            cp_tables.insert_or_assign(toks[0], CpTable(std::move(entries)));
        } catch (const std::invalid_argument& bad) {
            issues.push_back(where(src.number) + "cp table '" + toks[0] + "': " + bad.what());
        }
    }

    const auto lookup_cp = [&](const std::string& name, int line_no) -> std::optional<CpTable> {
        const auto it = cp_tables.find(name);
        if (it == cp_tables.end()) {
            issues.push_back(where(line_no) + "unknown cp table '" + name + "'");
            return std::nullopt;
        }
        return it->second;
    };
    const auto lookup_schedule = [&](const std::string& name, int line_no) -> Schedule {
        const auto it = schedules.find(name);
        if (it == schedules.end()) {
            issues.push_back(where(line_no) + "unknown schedule '" + name + "'");
            return Schedule{0.0};
        }
        return it->second;
    };
    // A trailing `key=name` token (cp=..., schedule=...).
    const auto named_ref = [](const std::string& tok,
                              const std::string& key) -> std::optional<std::string> {
        if (tok.rfind(key + "=", 0) == 0) return tok.substr(key.size() + 1);
        return std::nullopt;
    };

    Scenario scenario;

    for (const auto& src : sections["zones"]) {
        const auto toks = detail::tokens(src.text);
        if (toks.size() != 4) {
            issues.push_back(where(src.number) +
                             "zone line needs: id name reference_height temperature");
            continue;
        }
        Zone zone;
        zone.id = static_cast<int>(number(toks[0], "zone id", src.number));
        zone.name = toks[1];
        zone.reference_height = number(toks[2], "reference height", src.number);
        scenario.zones.push_back(zone);
        if (const auto ref = named_ref(toks[3], "schedule")) {
            scenario.zone_temperatures.push_back(lookup_schedule(*ref, src.number));
        } else {
            scenario.zone_temperatures.push_back(Schedule{number(toks[3], "temperature", src.number)});
        }
    }

    for (const auto& src : sections["openings"]) {
        const auto toks = detail::tokens(src.text);
        if (toks.size() != 6 && toks.size() != 7) {
            issues.push_back(where(src.number) +
                             "opening line needs: id zone_a zone_b elevation K n [cp=name]");
            continue;
        }
        SmallOpening po;
        po.id = static_cast<int>(number(toks[0], "opening id", src.number));
        po.zone_a = static_cast<int>(number(toks[1], "zone_a", src.number));
        po.zone_b = static_cast<int>(number(toks[2], "zone_b", src.number));
        po.elevation = number(toks[3], "elevation", src.number);
        po.permeability = number(toks[4], "permeability", src.number);
        po.exponent = number(toks[5], "exponent", src.number);
        if (toks.size() == 7) {
            if (const auto ref = named_ref(toks[6], "cp")) {
                po.cp = lookup_cp(*ref, src.number);
            } else {
                issues.push_back(where(src.number) + "unexpected token '" + toks[6] + "'");
            }
        }
        scenario.small_openings.push_back(std::move(po));
    }

    for (const auto& src : sections["large_openings"]) {
        const auto toks = detail::tokens(src.text);
        if (toks.size() != 7 && toks.size() != 8) {
            issues.push_back(where(src.number) +
                             "large opening line needs: id zone_a zone_b sill height width cd [cp=name]");
            continue;
        }
        LargeOpening go;
        go.id = static_cast<int>(number(toks[0], "opening id", src.number));
        go.zone_a = static_cast<int>(number(toks[1], "zone_a", src.number));
        go.zone_b = static_cast<int>(number(toks[2], "zone_b", src.number));
        go.sill_elevation = number(toks[3], "sill elevation", src.number);
        go.height = number(toks[4], "height", src.number);
        go.width = number(toks[5], "width", src.number);
        go.discharge_coefficient = number(toks[6], "discharge coefficient", src.number);
        if (toks.size() == 8) {
            if (const auto ref = named_ref(toks[7], "cp")) {
                go.cp = lookup_cp(*ref, src.number);
            } else {
                issues.push_back(where(src.number) + "unexpected token '" + toks[7] + "'");
            }
        }
        scenario.large_openings.push_back(std::move(go));
    }

    for (const auto& src : sections["vents"]) {
        const auto toks = detail::tokens(src.text);
        if (toks.size() != 2) {
            issues.push_back(where(src.number) + "vent line needs: zone rate_m3h|schedule=name");
            continue;
        }
        MechanicalVent vent;
        vent.zone = static_cast<int>(number(toks[0], "vent zone", src.number));
        if (const auto ref = named_ref(toks[1], "schedule")) {
            vent.schedule = lookup_schedule(*ref, src.number);
        } else {
            vent.schedule = Schedule{number(toks[1], "extraction rate", src.number)};
        }
        scenario.vents.push_back(std::move(vent));
    }

    for (const auto& src : sections["constants"]) {
        const std::size_t eq = src.text.find('=');
        if (eq == std::string::npos) {
            issues.push_back(where(src.number) + "constant line needs: key = value");
            continue;
        }
        const std::string key = detail::trim(src.text.substr(0, eq));
        const std::string value = detail::trim(src.text.substr(eq + 1));
        if (key == "rho_ref") {
            scenario.rho_ref = number(value, key, src.number, scenario.rho_ref);
        } else if (key == "residual_tolerance") {
            scenario.solver.residual_tolerance =
                number(value, key, src.number, scenario.solver.residual_tolerance);
        } else if (key == "max_iterations") {
            scenario.solver.max_iterations = static_cast<int>(
                number(value, key, src.number, scenario.solver.max_iterations));
        } else if (key == "linearization_epsilon") {
            scenario.solver.linearization_epsilon =
                number(value, key, src.number, scenario.solver.linearization_epsilon);
        } else if (key == "damping") {
            scenario.solver.damping = number(value, key, src.number, scenario.solver.damping);
        } else if (key == "max_step_halvings") {
            scenario.solver.max_step_halvings = static_cast<int>(
                number(value, key, src.number, scenario.solver.max_step_halvings));
        } else if (key == "vmc_conversion") {
            if (value == "zone_density") {
                scenario.vmc_conversion = VmcConversion::zone_density;
            } else if (value == "reference_density") {
                scenario.vmc_conversion = VmcConversion::reference_density;
            } else {
                issues.push_back(where(src.number) +
                                 "vmc_conversion must be zone_density or reference_density");
            }
        } else if (key == "g") {
            if (number(value, key, src.number, gravity) != gravity) {
                issues.push_back(where(src.number) + "g is fixed at 9.81 m/s^2");
            }
        } else {
            issues.push_back(where(src.number) + "unknown constant '" + key + "'");
        }
    }

    if (!issues.empty()) throw ValidationError(std::move(issues));
    scenario.build(); // throws ValidationError on semantic problems
    return scenario;
}

// Serialize the raw (pre-decomposition) description in the same format
// parse_scenario reads, at full round-trip precision. Identical cp tables are
// pooled under generated names.
inline void write_scenario(const Scenario& scenario, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scenario file: " + path.string());
    using detail::format_full;

    std::vector<std::pair<CpTable, std::string>> cp_pool;
    const auto cp_name = [&cp_pool](const CpTable& table) {
        for (const auto& [known, name] : cp_pool) {
            if (known == table) return name;
        }
        const std::string name = "cp" + std::to_string(cp_pool.size() + 1);
        cp_pool.emplace_back(table, name);
        return name;
    };
    std::vector<std::pair<std::string, Schedule>> schedule_pool;
    const auto schedule_ref = [&schedule_pool](const Schedule& s, const std::string& base) {
        if (s.values.size() == 1) return format_full(s.values.front());
        schedule_pool.emplace_back(base, s);
        return "schedule=" + base;
    };

    std::ostringstream body;
    body << "[zones]\n";
    for (std::size_t k = 0; k < scenario.zones.size(); ++k) {
        const Zone& z = scenario.zones[k];
        const Schedule& temp = scenario.zone_temperatures.at(k);
        body << z.id << " " << detail::section_token(z.name, z.id) << " "
             << format_full(z.reference_height) << " "
             << schedule_ref(temp, "temp_z" + std::to_string(z.id)) << "\n";
    }

    body << "\n[openings]\n";
    for (const auto& po : scenario.small_openings) {
        body << po.id << " " << po.zone_a << " " << po.zone_b << " " << format_full(po.elevation)
             << " " << format_full(po.permeability) << " " << format_full(po.exponent);
        if (po.cp) body << " cp=" << cp_name(*po.cp);
        body << "\n";
    }

    body << "\n[large_openings]\n";
    for (const auto& go : scenario.large_openings) {
        body << go.id << " " << go.zone_a << " " << go.zone_b << " "
             << format_full(go.sill_elevation) << " " << format_full(go.height) << " "
             << format_full(go.width) << " " << format_full(go.discharge_coefficient);
        if (go.cp) body << " cp=" << cp_name(*go.cp);
        body << "\n";
    }

    body << "\n[vents]\n";
    for (std::size_t i = 0; i < scenario.vents.size(); ++i) {
        const auto& vent = scenario.vents[i];
        body << vent.zone << " "
             << schedule_ref(vent.schedule, "vmc_" + std::to_string(i + 1)) << "\n";
    }

    out << "# airnet scenario\n\n" << body.str();

    out << "\n[cp]\n";
    for (const auto& [table, name] : cp_pool) {
        out << name;
        for (const auto& entry : table.entries()) {
            out << " " << format_full(entry.azimuth) << ":" << format_full(entry.cp);
        }
        out << "\n";
    }

    out << "\n[schedules]\n";
    for (const auto& [name, schedule] : schedule_pool) {
        out << name;
        for (double v : schedule.values) out << " " << format_full(v);
        out << "\n";
    }

    out << "\n[constants]\n";
    out << "rho_ref = " << format_full(scenario.rho_ref) << "\n";
    out << "residual_tolerance = " << format_full(scenario.solver.residual_tolerance) << "\n";
    out << "max_iterations = " << scenario.solver.max_iterations << "\n";
    out << "linearization_epsilon = " << format_full(scenario.solver.linearization_epsilon) << "\n";
    out << "damping = " << format_full(scenario.solver.damping) << "\n";
    out << "max_step_halvings = " << scenario.solver.max_step_halvings << "\n";
    out << "vmc_conversion = "
        << (scenario.vmc_conversion == VmcConversion::reference_density ? "reference_density"
                                                                        : "zone_density")
        << "\n";
    out << "g = " << format_full(gravity) << "\n";

    if (!out) throw std::runtime_error("write failed: " + path.string());
}

// Write pressures.csv, flows.csv and solver.csv plus a README describing the
// columns. Numbers are written in shortest round-trip decimal form, so a
// re-read reproduces the series exactly.
inline void write_results(const Scenario& scenario, const std::vector<StepResult>& results,
                          const std::filesystem::path& out_dir) {
    if (results.empty()) throw std::invalid_argument("write_results: no results to write");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " +
                                 ec.message());
    }
    using detail::format_full;
    const auto open = [&](const char* name) {
        std::ofstream out(out_dir / name);
        if (!out) throw std::runtime_error("cannot write " + (out_dir / name).string());
        return out;
    };

    {
        std::ofstream out = open("pressures.csv");
        out << "timestamp";
        for (const Zone& z : scenario.network.zones) out << ",p_" << z.id;
        out << "\n";
        for (const StepResult& r : results) {
            out << r.timestamp;
            for (double p : r.pressures) out << "," << format_full(p);
            out << "\n";
        }
        if (!out) throw std::runtime_error("write failed: pressures.csv");
    }

    {
        std::ofstream out = open("flows.csv");
        out << "timestamp,element_id,zone_a,zone_b,mass_flow_kg_s,volume_flow_m3_h\n";
        for (const StepResult& r : results) {
            for (std::size_t i = 0; i < scenario.network.elements.size(); ++i) {
                const FlowElement& e = scenario.network.elements[i];
                const double flow = r.element_flows[i];
                const int source = flow >= 0.0 ? e.zone_a : e.zone_b;
                const double source_temp = source == 0
                                               ? r.boundary.exterior_temperature
                                               : r.boundary.zone_temperatures[source - 1];
                const double rho = air_density(source_temp, scenario.rho_ref);
                out << r.timestamp << "," << e.id << "," << e.zone_a << "," << e.zone_b << ","
                    << format_full(flow) << "," << format_full(flow / rho * 3600.0) << "\n";
            }
        }
        if (!out) throw std::runtime_error("write failed: flows.csv");
    }

    {
        std::ofstream out = open("solver.csv");
        out << "timestamp,iterations,residual,converged,damping_events\n";
        for (const StepResult& r : results) {
            out << r.timestamp << "," << r.report.iterations << ","
                << format_full(r.report.final_residual_norm) << ","
                << (r.report.converged ? 1 : 0) << "," << r.report.damping_events << "\n";
        }
        if (!out) throw std::runtime_error("write failed: solver.csv");
    }

    {
        std::ofstream out = open("README.md");
        out << "# Simulation outputs\n"
               "\n"
               "All numbers are full-precision decimals that re-read bit-exactly.\n"
               "\n"
               "## pressures.csv\n"
               "- `timestamp`: weather record timestamp\n"
               "- `p_<zone id>`: gauge reference pressure of the zone, Pa, at its reference height\n"
               "\n"
               "## flows.csv\n"
               "One row per flow element per time step.\n"
               "- `element_id`: canonical element index (see the `describe` subcommand)\n"
               "- `zone_a`, `zone_b`: endpoints; 0 is the exterior\n"
               "- `mass_flow_kg_s`: signed mass flow, positive from zone_a to zone_b\n"
               "- `volume_flow_m3_h`: the same flow divided by the air density of its source\n"
               "  (upwind) zone at that hour, so the sign matches the mass flow\n"
               "\n"
               "## solver.csv\n"
               "- `iterations`: Newton iterations used for the step (0 = warm start already converged)\n"
               "- `residual`: final max-norm of the zone mass balances, kg/s\n"
               "- `converged`: 1 or 0\n"
               "- `damping_events`: step halvings performed by the line search\n";
        if (!out) throw std::runtime_error("write failed: README.md");
    }
}

} // namespace airnet
