#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace airnet {

// Aggregated validation failures, one message per offending component.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> issues)
        : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

    const std::vector<std::string>& issues() const { return issues_; }

private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string all;
        for (const auto& issue : issues) {
            if (!all.empty()) all += "\n";
            all += issue;
        }
        return all;
    }

    std::vector<std::string> issues_;
};

// One pressure node of the network. Zone ids run 1..N; 0 is the exterior.
struct Zone {
    int id = 0;
    std::string name;
    double reference_height = 0.0; // m above the building datum

    bool operator==(const Zone&) const = default;
};

inline double normalize_direction(double degrees) {
    double d = std::fmod(degrees, 360.0);
    if (d < 0.0) d += 360.0;
    return d;
}

// Direction-dependent wind pressure coefficients, circularly interpolated.
class CpTable {
public:
    struct Entry {
        double azimuth; // deg, in [0,360)
        double cp;      // dimensionless, positive = pressure, negative = suction

        bool operator==(const Entry&) const = default;
    };

    explicit CpTable(std::vector<Entry> entries) : entries_(std::move(entries)) {
        if (entries_.empty()) {
            throw std::invalid_argument("CpTable: at least one entry required");
        }
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (!(entries_[i].azimuth >= 0.0 && entries_[i].azimuth < 360.0)) {
                throw std::invalid_argument("CpTable: azimuth outside [0,360)");
            }
            if (i > 0 && !(entries_[i].azimuth > entries_[i - 1].azimuth)) {
                throw std::invalid_argument("CpTable: azimuths must be strictly increasing");
            }
        }
    }

    const std::vector<Entry>& entries() const { return entries_; }

    bool operator==(const CpTable&) const = default;

private:
    std::vector<Entry> entries_;
};

// Piecewise-linear lookup between the two bracketing entries, wrapping across
// the 0/360 seam. Exact at table azimuths, continuous and 360-periodic.
inline double cp_lookup(const CpTable& table, double wind_direction_deg) {
    const auto& entries = table.entries();
    if (entries.size() == 1) return entries.front().cp;

    const double dir = normalize_direction(wind_direction_deg);
    auto above = std::upper_bound(entries.begin(), entries.end(), dir,
                                  [](double d, const CpTable::Entry& e) { return d < e.azimuth; });

    const CpTable::Entry* lo;
    const CpTable::Entry* hi;
    double span;
    double offset;
    if (above == entries.begin() || above == entries.end()) {
        // Wrap segment from the last entry around to the first.
        lo = &entries.back();
        hi = &entries.front();
        span = 360.0 - lo->azimuth + hi->azimuth;
        offset = (above == entries.begin()) ? dir + 360.0 - lo->azimuth : dir - lo->azimuth;
    } else {
        lo = &*(above - 1);
        hi = &*above;
        span = hi->azimuth - lo->azimuth;
        offset = dir - lo->azimuth;
    }
    return lo->cp + (offset / span) * (hi->cp - lo->cp);
}

// Crack-flow opening: mass flow K * dP^n between two pressure nodes.
struct SmallOpening {
    int id = 0;
    int zone_a = 0;             // 0 = exterior
    int zone_b = 0;
    double elevation = 0.0;     // m above the building datum
    double permeability = 0.0;  // K, kg/s at dP = 1 Pa
    double exponent = 0.65;     // n, in [0.5, 1]
    std::optional<CpTable> cp;  // required iff exactly one endpoint is exterior

    bool operator==(const SmallOpening&) const = default;
};

// Door/window-scale aperture through which counterflow can occur.
struct LargeOpening {
    int id = 0;
    int zone_a = 0;
    int zone_b = 0;
    double sill_elevation = 0.0; // m above the building datum
    double height = 0.0;         // m
    double width = 0.0;          // m
    double discharge_coefficient = 0.78;
    std::optional<CpTable> cp;

    bool operator==(const LargeOpening&) const = default;
};

// Hourly profile: 24 values (one per hour of day) or a single constant.
struct Schedule {
    std::vector<double> values;

    Schedule() = default;
    Schedule(double constant) : values{constant} {}
    Schedule(std::vector<double> v) : values(std::move(v)) {}

    bool valid_arity() const { return values.size() == 1 || values.size() == 24; }

    double at(int hour) const {
        return values.size() == 1 ? values.front() : values.at(static_cast<std::size_t>(hour));
    }

    bool operator==(const Schedule&) const = default;
};

// Scheduled pressure-independent air extraction from one zone.
struct MechanicalVent {
    int zone = 0;
    Schedule schedule; // m^3/h, all values >= 0

    bool operator==(const MechanicalVent&) const = default;
};

enum class ElementKind { PO, GO }; // small opening / half of a large opening

inline const char* to_string(ElementKind kind) {
    return kind == ElementKind::PO ? "PO" : "GO";
}

// Canonical flow element of the solved network: a small opening or one of the
// two sub-openings a large opening decomposes into. Exterior endpoint, when
// present, is always zone_a.
struct FlowElement {
    int id = 0;
    int zone_a = 0;
    int zone_b = 0;
    double elevation = 0.0;    // m above the building datum
    double permeability = 0.0; // kg/s at dP = 1 Pa
    double exponent = 0.65;
    std::optional<CpTable> cp;
    ElementKind kind = ElementKind::PO;

    bool exterior() const { return zone_a == 0; }

    bool operator==(const FlowElement&) const = default;
};

// The static problem description: nodes, canonical elements, vents.
// Immutable after construction; safe to share across concurrent solves.
struct AirflowNetwork {
    std::vector<Zone> zones;           // sorted by id, 1..N
    std::vector<FlowElement> elements; // sequentially indexed 1..M
    std::vector<MechanicalVent> vents;

    int zone_count() const { return static_cast<int>(zones.size()); }
};

} // namespace airnet
