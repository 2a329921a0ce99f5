#pragma once

#include <cstdio>
#include <ostream>
#include <string>

namespace fracpicard::cli {

/// Round-trippable text for a double: 17 significant digits.
inline std::string csv_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace fracpicard::cli
