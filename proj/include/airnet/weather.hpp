#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "airnet/air.hpp"
#include "airnet/model.hpp"

namespace airnet {

// One weather observation. epoch_seconds and hour are derived from the
// timestamp text at parse time.
struct WeatherRecord {
    std::string timestamp; // ISO 8601, as read
    std::int64_t epoch_seconds = 0;
    int hour = 0;                       // hour of day, 0..23
    double exterior_temperature = 20.0; // degC
    double wind_speed = 0.0;            // m/s
    double wind_direction = 0.0;        // deg, [0,360)
};

namespace detail {

// Days since 1970-01-01 for a civil date (Gregorian, proleptic).
inline std::int64_t days_from_civil(std::int64_t y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 +
                         static_cast<unsigned>(d) - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

inline std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return fields;
}

inline double parse_number(const std::string& text, const std::string& what) {
    const std::string s = trim(text);
    double value = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || s.empty()) {
        throw std::invalid_argument(what + ": not a number: '" + text + "'");
    }
    return value;
}

} // namespace detail

// Parse "YYYY-MM-DD HH:MM[:SS]" (T or space separator); fills epoch seconds
// and hour of day.
inline void parse_timestamp(const std::string& text, std::int64_t& epoch_seconds, int& hour) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, se = 0;
    char sep = 0;
    const int got = std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep, &h, &mi, &se);
    const bool shape_ok = got >= 6 && (sep == 'T' || sep == 't' || sep == ' ');
    const bool range_ok = mo >= 1 && mo <= 12 && d >= 1 && d <= 31 && h >= 0 && h <= 23 &&
                          mi >= 0 && mi <= 59 && se >= 0 && se <= 59;
    if (!shape_ok || !range_ok) {
        throw std::invalid_argument("invalid timestamp '" + text + "' (expected YYYY-MM-DDTHH:MM[:SS])");
    }
    epoch_seconds = detail::days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + se;
    hour = h;
}

// Read a weather CSV with header columns timestamp, t_ext_c, wind_ms,
// wind_deg (extra columns such as radiation are ignored). Records must be in
// strictly increasing chronological order; wind directions are normalized
// into [0,360).
inline std::vector<WeatherRecord> parse_weather(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open weather file: " + path.string());

    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error(path.string() + ": empty file, header line required");
    }

    const std::vector<std::string> header = detail::split(line, ',');
    int col_timestamp = -1, col_temp = -1, col_speed = -1, col_dir = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "timestamp") col_timestamp = static_cast<int>(i);
        else if (header[i] == "t_ext_c") col_temp = static_cast<int>(i);
        else if (header[i] == "wind_ms") col_speed = static_cast<int>(i);
        else if (header[i] == "wind_deg") col_dir = static_cast<int>(i);
    }
    std::string missing;
    if (col_timestamp < 0) missing += " timestamp";
    if (col_temp < 0) missing += " t_ext_c";
    if (col_speed < 0) missing += " wind_ms";
    if (col_dir < 0) missing += " wind_deg";
    if (!missing.empty()) {
        throw std::runtime_error(path.string() + ": missing column(s):" + missing);
    }
    const std::size_t min_fields =
        static_cast<std::size_t>(std::max({col_timestamp, col_temp, col_speed, col_dir})) + 1;

    std::vector<WeatherRecord> records;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const std::string where = path.string() + ":" + std::to_string(line_no);
        const std::vector<std::string> fields = detail::split(line, ',');
        if (fields.size() < min_fields) {
            throw std::runtime_error(where + ": expected at least " + std::to_string(min_fields) +
                                     " fields, got " + std::to_string(fields.size()));
        }
        WeatherRecord rec;
        rec.timestamp = fields[static_cast<std::size_t>(col_timestamp)];
        try {
            parse_timestamp(rec.timestamp, rec.epoch_seconds, rec.hour);
            rec.exterior_temperature = detail::parse_number(fields[static_cast<std::size_t>(col_temp)], "t_ext_c");
            rec.wind_speed = detail::parse_number(fields[static_cast<std::size_t>(col_speed)], "wind_ms");
            rec.wind_direction =
                normalize_direction(detail::parse_number(fields[static_cast<std::size_t>(col_dir)], "wind_deg"));
        } catch (const std::invalid_argument& bad_field) {
            throw std::runtime_error(where + ": " + bad_field.what());
        }
        if (!(rec.exterior_temperature > -zero_celsius)) {
            throw std::runtime_error(where + ": non-physical exterior temperature");
        }
        if (rec.wind_speed < 0.0) {
            throw std::runtime_error(where + ": wind speed must be >= 0");
        }
        if (!records.empty() && rec.epoch_seconds <= records.back().epoch_seconds) {
            throw std::runtime_error(where + ": timestamps must be strictly increasing");
        }
        records.push_back(std::move(rec));
    }
    if (records.empty()) {
        throw std::runtime_error(path.string() + ": no data rows");
    }
    return records;
}

} // namespace airnet
