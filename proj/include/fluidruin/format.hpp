#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace fluidruin {

/// CSV number: %.12g; empty for non-finite values.
inline std::string csv_number(double v) {
    if (!std::isfinite(v)) return {};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace fluidruin
