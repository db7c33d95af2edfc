#pragma once

#include <string>

#include "mech/circuit.hpp"
#include "mech/highway.hpp"
#include "mech/metrics.hpp"
#include "mech/scheduler.hpp"

namespace mech {

/// Line-oriented circuit text: `qubits N` / `bits M` headers, then one gate
/// per line (`cx q3 q7`, `measure_x q2 -> c5`, `cpauli z q1 if c5`, ...).
/// Angles print with 17 significant digits so a round trip is bit-exact.
std::string circuit_to_text(const Circuit& c);
Circuit circuit_from_text(const std::string& text);

/// JSON dumps (nlohmann serializations, schema_version field included).
std::string layout_to_json(const HighwayLayout& layout);
std::string shuttles_to_json(const std::vector<ShuttleRecord>& shuttles);
std::string metrics_to_json(const Metrics& m, const std::string& program,
                            const std::string& mode);
std::string mapping_to_json(const CompiledProgram& prog);

}  // namespace mech
