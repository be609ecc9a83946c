#pragma once

#include <cstdio>
#include <string>

namespace speclab {

// Round-trippable decimal rendering of a double (shortest %.17g form).
inline std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace speclab
