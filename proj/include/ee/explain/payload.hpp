#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ee::explain {

enum class Modality { Text, ImageRef, Table };

/// Entity an explainer is asked about: `schema` names the record family in
/// the fixture corpora, `id` the record.
struct Target {
    std::string schema;
    std::string id;
    bool operator==(const Target&) const = default;
};

struct ExplanationPayload {
    std::string explainer_id;
    std::string rendering;
    Modality modality = Modality::Text;
    nlohmann::json body;
    std::vector<std::string> attachments;
    std::string provenance;

    bool operator==(const ExplanationPayload&) const = default;
};

}  // namespace ee::explain
