#include "ahm/trace_io.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "ahm/errors.hpp"

namespace ahm {
namespace {

constexpr const char* kHeader = "n,d_xx,d_yy,d_xy,d_Tx,d_Ux,d_Ty,d_Uy,d_xp,d_yp";

// Shortest decimal that round-trips the double exactly; this is what makes
// read_trace_csv bit-for-bit faithful.
std::string fmt(double v) {
  std::array<char, 32> buf;
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (res.ec != std::errc{}) throw ArithmeticFailure("trace_io: to_chars failed");
  return std::string(buf.data(), res.ptr);
}

double parse_cell(const std::string& cell, std::uint64_t line) {
  double v = 0.0;
  auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
    throw StructuralError("trace csv: malformed number \"" + cell + "\" on line " +
                          std::to_string(line));
  return v;
}

}  // namespace

void write_trace_csv(const Trace& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: LF even on exotic runtimes
  if (!out) throw StructuralError("cannot open for writing: " + path);
  out << kHeader << '\n';
  const std::vector<double>* cols[9] = {&t.d_xx, &t.d_yy, &t.d_xy, &t.d_Tx, &t.d_Ux,
                                        &t.d_Ty, &t.d_Uy, &t.d_xp, &t.d_yp};
  for (std::uint64_t n = 0; n <= t.n_max; ++n) {
    out << n;
    for (const auto* col : cols) {
      out << ',';
      if (n < col->size()) out << fmt((*col)[n]);
    }
    out << '\n';
  }
  if (!out) throw StructuralError("write failed: " + path);
}

nlohmann::json trace_constants(const Trace& t, const std::string& name) {
  return nlohmann::json{{"name", name},
                        {"variant", variant_name(t.variant)},
                        {"schedule", t.schedule_label},
                        {"M_p", t.M_p},
                        {"K", t.K},
                        {"n_max", t.n_max}};
}

void write_constants_json(const Trace& t, const std::string& name, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StructuralError("cannot open for writing: " + path);
  out << trace_constants(t, name).dump(2) << '\n';
  if (!out) throw StructuralError("write failed: " + path);
}

TraceView read_trace_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StructuralError("cannot open trace csv: " + path);
  std::string line;
  if (!std::getline(in, line)) throw StructuralError("trace csv is empty: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader)
    throw StructuralError("trace csv has an unexpected header: \"" + line + "\"");

  TraceView v;
  std::uint64_t lineno = 1;
  std::uint64_t expected_n = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    if (!std::getline(row, cell, ','))
      throw StructuralError("trace csv: empty row on line " + std::to_string(lineno));
    const std::uint64_t n = static_cast<std::uint64_t>(parse_cell(cell, lineno));
    if (n != expected_n)
      throw StructuralError("trace csv: non-contiguous index " + std::to_string(n) + " on line " +
                            std::to_string(lineno));
    ++expected_n;
    for (int q = 0; q < 9; ++q) {
      if (!std::getline(row, cell, ',')) cell.clear();
      if (cell.empty()) continue;
      auto& col = v.cols[q];
      if (col.size() != n)
        throw StructuralError("trace csv: column " + std::string(quantity_name(Quantity(q))) +
                              " has a gap before line " + std::to_string(lineno));
      col.push_back(parse_cell(cell, lineno));
    }
  }
  if (expected_n == 0) throw StructuralError("trace csv has no data rows: " + path);
  v.n_max = expected_n - 1;
  return v;
}

}  // namespace ahm
