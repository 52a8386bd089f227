#pragma once

#include <cstdio>
#include <string>

namespace specbsa {

// Round-trip decimal form of a double (17 significant digits): parsing the
// string back yields the identical bit pattern, which keeps emitted CSV
// tables reproducible from serialized results.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace specbsa
