#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ee/bt/engine.hpp"
#include "ee/explain/corpus.hpp"
#include "ee/explain/payload.hpp"

namespace ee::explain {

using Params = std::map<std::string, bt::Value>;

struct Manifest {
    std::string explainer_id;
    std::vector<std::string> intents;
    /// Schemas the adapter accepts; empty accepts any.
    std::vector<std::string> target_schemas;
    Modality modality = Modality::Text;
};

/// Adapters must be pure functions of their arguments plus fixture data.
using Adapter = std::function<ExplanationPayload(const Target&, const Params&)>;

class Registry : public bt::ExplainerSource {
public:
    /// Throws DuplicateId.
    void add(Manifest manifest, Adapter adapter);

    bool contains(std::string_view explainer_id) const override;
    /// Throws UnknownExplainer / TargetSchemaMismatch.
    ExplanationPayload invoke(std::string_view explainer_id, const Target& target,
                              const Params& params) const override;

    const Manifest* manifest(std::string_view explainer_id) const;
    std::vector<Manifest> manifests() const;
    /// Explainer ids serving `intent`.
    std::vector<std::string> serving(std::string_view intent) const;

private:
    struct Entry {
        Manifest manifest;
        Adapter adapter;
    };
    std::map<std::string, Entry, std::less<>> entries_;
};

std::string_view to_string(Modality m) noexcept;

/// Registers the shipped mock adapters over the given corpora.
void register_mocks(Registry& registry, std::shared_ptr<const std::map<std::string, Corpus>> corpora);
Registry mock_registry(const std::string& fixtures_dir);

/// Deterministic 64-bit FNV-1a, used to derive per-target seeds.
std::uint64_t fnv1a(std::string_view s) noexcept;

/// Rank distance in the lexicographically sorted id list; ties by id. Page
/// `page` returns entries [page*k, page*k + k) of that ordering.
std::vector<std::string> nearest_ids(const std::vector<std::string>& ids, const std::string& target, std::size_t k,
                                     std::size_t page);

}  // namespace ee::explain
