#pragma once

#include <complex>
#include <string>

#include "json.hpp"

#include "qwalk/algebra.hpp"
#include "qwalk/diagnostics.hpp"
#include "qwalk/scalar.hpp"
#include "qwalk/sojourn.hpp"
#include "qwalk/spectral.hpp"

namespace qwalk::io {

using nlohmann::json;

/// Decimal rendering with 17 significant digits (round-trips binary64).
std::string format_double(double v);

/// Exact scalars serialize as the four field coordinates --- the value is
/// (a + b sqrt(2)) + i (c + d sqrt(2)) --- as decimal rational strings, next
/// to a float re/im rendering for quick reading. Float scalars carry just
/// re/im. Parsing inverts the exact form bit-for-bit.
json scalar_json(const ExactScalar& v);
json scalar_json(const std::complex<double>& v);
ExactScalar exact_scalar_from_json(const json& j);
std::complex<double> float_scalar_from_json(const json& j);

template <class S>
json mat_json(const Mat2<S>& m) {
    json entries = json::array();
    for (int i = 0; i < 4; ++i) entries.push_back(scalar_json(m.e[i]));
    return entries;
}

json renewal_json(const RenewalReport& report);
json diagnostics_json(const DiagnosticsReport& report);
json scan_row_json(const ScanReport& row);
json scan_json(const std::vector<ScanReport>& rows);

/// Writes content to the path via a temp file and rename (so readers never
/// observe a half-written file), or to stdout when the path is "-".
void atomic_write(const std::string& path, const std::string& content);

} // namespace qwalk::io
