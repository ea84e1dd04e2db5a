#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "zeic/version.hpp"

namespace zeic {

// Fixed numeric formatting so re-runs are byte-identical.
inline std::string fmt_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

// Every CSV embeds the tool version, the subcommand, and the full resolved
// configuration as '#' comment lines, making the run reproducible from the
// file alone.
inline void write_csv_header(std::ostream& os, const std::string& command,
                             const ConfigEcho& config) {
    os << "# " << kProjectName << " " << kVersion << "\n";
    os << "# command " << command << "\n";
    for (const auto& [k, v] : config) os << "# " << k << " " << v << "\n";
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ",";
        os << fields[i];
    }
    os << "\n";
}

} // namespace zeic
