#include "pdp/io/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pdp {

const char* const kTraceCsvHeader =
    "k,a_k,obj_avg,obj_raw,viol,compl_slack,dual_disagree,y_disagree,"
    "z_disagree,pert_residual";

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_field(const std::string& s, const std::string& path) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("read_trace_csv: bad number '" + s + "' in " + path);
}

int parse_round(const std::string& s, const std::string& path) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos == s.size()) return static_cast<int>(v);
  } catch (const std::exception&) {
  }
  throw ConfigError("read_trace_csv: bad round index '" + s + "' in " + path);
}

}  // namespace

std::string trace_to_csv(const RunTrace& trace) {
  std::string out = kTraceCsvHeader;
  out += '\n';
  for (const TraceRow& r : trace.rows) {
    out += std::to_string(r.k);
    out += ',';
    out += fmt(r.a_k);
    out += ',';
    out += fmt(r.obj_avg);
    out += ',';
    out += fmt(r.obj_raw);
    out += ',';
    out += fmt(r.viol);
    out += ',';
    out += fmt(r.compl_slack);
    out += ',';
    out += fmt(r.dual_disagree);
    out += ',';
    out += fmt(r.y_disagree);
    out += ',';
    out += fmt(r.z_disagree);
    out += ',';
    out += fmt(r.pert_residual);
    out += '\n';
  }
  return out;
}

void write_trace_csv(const std::string& path, const RunTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_trace_csv: cannot open " + path);
  out << trace_to_csv(trace);
}

RunTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("read_trace_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != kTraceCsvHeader) {
    throw ConfigError("read_trace_csv: unexpected header in " + path);
  }
  RunTrace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 10) {
      throw ConfigError("read_trace_csv: expected 10 fields in " + path);
    }
    TraceRow r;
    r.k = parse_round(fields[0], path);
    r.a_k = parse_field(fields[1], path);
    r.obj_avg = parse_field(fields[2], path);
    r.obj_raw = parse_field(fields[3], path);
    r.viol = parse_field(fields[4], path);
    r.compl_slack = parse_field(fields[5], path);
    r.dual_disagree = parse_field(fields[6], path);
    r.y_disagree = parse_field(fields[7], path);
    r.z_disagree = parse_field(fields[8], path);
    r.pert_residual = parse_field(fields[9], path);
    trace.rows.push_back(r);
  }
  return trace;
}

}  // namespace pdp
