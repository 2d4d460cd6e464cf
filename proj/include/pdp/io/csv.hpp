#pragma once

#include <string>

#include "pdp/solver.hpp"

namespace pdp {

// Fixed-schema trace serialization. Doubles are written with %.17g so the
// values round-trip and the bytes are stable across runs and worker counts;
// missing diagnostics come out as "nan".
extern const char* const kTraceCsvHeader;

std::string trace_to_csv(const RunTrace& trace);
void write_trace_csv(const std::string& path, const RunTrace& trace);
RunTrace read_trace_csv(const std::string& path);

}  // namespace pdp
