#pragma once

#include <cstdint>
#include <ostream>

#include <nlohmann/json.hpp>

#include "ee/bt/engine.hpp"

namespace ee::bt {

/// One record per resolved event and per visited node:
/// {"tick": n, "phase": "deliver"|"tick", "node": id, "status": ...}
nlohmann::json trace_records(std::uint64_t tick_no, const TickResult& result);

/// Writes trace_records as line-delimited JSON.
void write_trace(std::ostream& os, std::uint64_t tick_no, const TickResult& result);

}  // namespace ee::bt
