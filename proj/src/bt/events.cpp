#include "ee/bt/events.hpp"

namespace ee::bt {

const std::string& effect_node(const Effect& effect) {
    return std::visit([](const auto& e) -> const std::string& { return e.node_id; }, effect);
}

}  // namespace ee::bt
