#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "ahm/iterate.hpp"
#include "ahm/verify.hpp"

namespace ahm {

// Column order of the trace CSV. Distances only; '.' decimal separator, 17
// significant digits, LF line endings. Cells outside a column's index range
// (the two difference columns stop at n_max-1) are left blank.
//   n,d_xx,d_yy,d_xy,d_Tx,d_Ux,d_Ty,d_Uy,d_xp,d_yp
void write_trace_csv(const Trace& t, const std::string& path);

// Constants sidecar: run name, variant, schedule label, M_p, K, n_max.
nlohmann::json trace_constants(const Trace& t, const std::string& name);
void write_constants_json(const Trace& t, const std::string& name, const std::string& path);

// Re-ingest a CSV produced by write_trace_csv. Round-trips bit-for-bit with
// the in-memory trace columns.
TraceView read_trace_csv(const std::string& path);

}  // namespace ahm
