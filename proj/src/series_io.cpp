#include "quartosc/series_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "quartosc/errors.hpp"

namespace quartosc {

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : data) {
        h ^= static_cast<std::uint64_t>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

std::string digest_hex(std::uint64_t digest) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(digest));
    return buf;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw ConfigError(ErrorCode::BadSeriesFile,
                              "cannot open " + tmp + " for writing");
        }
        out.write(content.data(),
                  static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw ConfigError(ErrorCode::BadSeriesFile,
                              "short write to " + tmp);
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw ConfigError(ErrorCode::BadSeriesFile,
                          "rename to " + path + " failed: " +
                              std::strerror(errno));
    }
}

namespace {

void append_metadata(
    std::string& text,
    const std::vector<std::pair<std::string, std::string>>& metadata) {
    for (const auto& [key, value] : metadata) {
        text += "# ";
        text += key;
        text += "=";
        text += value;
        text += "\n";
    }
}

}  // namespace

std::string series_csv_text(
    const TimeSeries& series,
    const std::vector<std::pair<std::string, std::string>>& metadata) {
    std::string text;
    text += "# method=" + series.method + "\n";
    append_metadata(text, metadata);
    text += "t,x_mean\n";
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        text += format_double(series.times[i]);
        text += ",";
        text += format_double(series.values[i]);
        text += "\n";
    }
    return text;
}

void write_series_csv(
    const std::string& path, const TimeSeries& series,
    const std::vector<std::pair<std::string, std::string>>& metadata) {
    write_atomic(path, series_csv_text(series, metadata));
}

TimeSeries read_series_csv(const std::string& path,
                           std::map<std::string, std::string>* metadata) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(ErrorCode::BadSeriesFile, "cannot read " + path);
    }
    TimeSeries series;
    std::string line;
    bool header_seen = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (metadata != nullptr) {
                std::string body = line.substr(1);
                const std::size_t start = body.find_first_not_of(' ');
                if (start != std::string::npos) body = body.substr(start);
                const std::size_t eq = body.find('=');
                if (eq != std::string::npos) {
                    (*metadata)[body.substr(0, eq)] = body.substr(eq + 1);
                }
            }
            if (line.find("method=") != std::string::npos &&
                series.method.empty()) {
                series.method = line.substr(line.find("method=") + 7);
            }
            continue;
        }
        if (!header_seen) {
            // Column header row; anything else here is not our format.
            if (line.find(',') == std::string::npos) {
                throw ConfigError(ErrorCode::BadSeriesFile,
                                  path + ":" + std::to_string(lineno) +
                                      ": expected a CSV header");
            }
            header_seen = true;
            continue;
        }
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) {
            throw ConfigError(ErrorCode::BadSeriesFile,
                              path + ":" + std::to_string(lineno) +
                                  ": expected t,value");
        }
        char* end = nullptr;
        const std::string t_str = line.substr(0, comma);
        const std::string v_str = line.substr(comma + 1);
        errno = 0;
        const double t = std::strtod(t_str.c_str(), &end);
        if (end == t_str.c_str() || errno == ERANGE) {
            throw ConfigError(ErrorCode::BadSeriesFile,
                              path + ":" + std::to_string(lineno) +
                                  ": bad time value '" + t_str + "'");
        }
        errno = 0;
        const double v = std::strtod(v_str.c_str(), &end);
        if (end == v_str.c_str() || errno == ERANGE) {
            throw ConfigError(ErrorCode::BadSeriesFile,
                              path + ":" + std::to_string(lineno) +
                                  ": bad sample value '" + v_str + "'");
        }
        series.times.push_back(t);
        series.values.push_back(v);
    }
    if (!header_seen || series.times.empty()) {
        throw ConfigError(ErrorCode::BadSeriesFile,
                          path + ": no data rows found");
    }
    return series;
}

std::string compare_csv_text(
    const std::vector<double>& times,
    const std::vector<TimeSeries>& columns,
    const std::vector<std::pair<std::string, std::string>>& metadata) {
    std::string text;
    append_metadata(text, metadata);
    text += "t";
    for (const TimeSeries& s : columns) {
        text += ",";
        text += s.method;
    }
    text += "\n";
    for (std::size_t i = 0; i < times.size(); ++i) {
        text += format_double(times[i]);
        for (const TimeSeries& s : columns) {
            text += ",";
            text += format_double(s.values[i]);
        }
        text += "\n";
    }
    return text;
}

std::string grid_rows_csv_text(
    const PhaseSpaceGrid& grid,
    const std::vector<std::pair<std::string, std::string>>& metadata) {
    std::string text;
    append_metadata(text, metadata);
    text += "x,p,w\n";
    for (std::size_t i = 0; i < grid.x.size(); ++i) {
        for (std::size_t j = 0; j < grid.p.size(); ++j) {
            text += format_double(grid.x[i]);
            text += ",";
            text += format_double(grid.p[j]);
            text += ",";
            text += format_double(grid.value(static_cast<Eigen::Index>(i),
                                             static_cast<Eigen::Index>(j)));
            text += "\n";
        }
    }
    return text;
}

std::string grid_matrix_text(
    const PhaseSpaceGrid& grid,
    const std::vector<std::pair<std::string, std::string>>& metadata) {
    std::string text;
    append_metadata(text, metadata);
    // Header row: x\p label then the p axis; each row is one x value.
    text += "x\\p";
    for (double p : grid.p) {
        text += ",";
        text += format_double(p);
    }
    text += "\n";
    for (std::size_t i = 0; i < grid.x.size(); ++i) {
        text += format_double(grid.x[i]);
        for (std::size_t j = 0; j < grid.p.size(); ++j) {
            text += ",";
            text += format_double(grid.value(static_cast<Eigen::Index>(i),
                                             static_cast<Eigen::Index>(j)));
        }
        text += "\n";
    }
    return text;
}

}  // namespace quartosc
