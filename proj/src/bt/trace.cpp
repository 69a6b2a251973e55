#include "ee/bt/trace.hpp"

namespace ee::bt {

nlohmann::json trace_records(std::uint64_t tick_no, const TickResult& result) {
    auto records = nlohmann::json::array();
    auto record = [&](const char* phase, const std::string& node, Status status) {
        records.push_back({{"tick", tick_no}, {"phase", phase}, {"node", node}, {"status", to_string(status)}});
    };
    if (result.resolution) record("deliver", result.resolution->node, result.resolution->status);
    for (const auto& v : result.visited) record("tick", v.node, v.status);
    return records;
}

void write_trace(std::ostream& os, std::uint64_t tick_no, const TickResult& result) {
    for (const auto& r : trace_records(tick_no, result)) os << r.dump() << '\n';
}

}  // namespace ee::bt
