#include "ee/explain/registry.hpp"

#include <algorithm>

#include "ee/error.hpp"

namespace ee::explain {

std::string_view to_string(Modality m) noexcept {
    switch (m) {
        case Modality::Text: return "text";
        case Modality::ImageRef: return "image-ref";
        case Modality::Table: return "table";
    }
    return "?";
}

void Registry::add(Manifest manifest, Adapter adapter) {
    if (entries_.contains(manifest.explainer_id)) throw Error(Errc::DuplicateId, manifest.explainer_id);
    auto id = manifest.explainer_id;
    entries_.emplace(std::move(id), Entry{std::move(manifest), std::move(adapter)});
}

bool Registry::contains(std::string_view explainer_id) const { return entries_.find(explainer_id) != entries_.end(); }

ExplanationPayload Registry::invoke(std::string_view explainer_id, const Target& target, const Params& params) const {
    auto it = entries_.find(explainer_id);
    if (it == entries_.end()) throw Error(Errc::UnknownExplainer, std::string(explainer_id));
    const auto& schemas = it->second.manifest.target_schemas;
    if (!schemas.empty() && std::find(schemas.begin(), schemas.end(), target.schema) == schemas.end()) {
        throw Error(Errc::TargetSchemaMismatch, std::string(explainer_id) + " does not accept '" + target.schema + "'");
    }
    return it->second.adapter(target, params);
}

const Manifest* Registry::manifest(std::string_view explainer_id) const {
    auto it = entries_.find(explainer_id);
    return it == entries_.end() ? nullptr : &it->second.manifest;
}

std::vector<Manifest> Registry::manifests() const {
    std::vector<Manifest> out;
    for (const auto& [id, e] : entries_) out.push_back(e.manifest);
    return out;
}

std::vector<std::string> Registry::serving(std::string_view intent) const {
    std::vector<std::string> out;
    for (const auto& [id, e] : entries_) {
        const auto& in = e.manifest.intents;
        if (std::find(in.begin(), in.end(), intent) != in.end()) out.push_back(id);
    }
    return out;
}

std::uint64_t fnv1a(std::string_view s) noexcept {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::vector<std::string> nearest_ids(const std::vector<std::string>& ids, const std::string& target, std::size_t k,
                                     std::size_t page) {
    std::vector<std::string> sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    auto pos = std::lower_bound(sorted.begin(), sorted.end(), target) - sorted.begin();
    // A target missing from the corpus sits between its neighbours.
    const bool present = pos < static_cast<std::ptrdiff_t>(sorted.size()) && sorted[pos] == target;
    std::vector<std::pair<std::ptrdiff_t, std::string>> ranked;
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(sorted.size()); ++i) {
        if (sorted[i] == target) continue;
        const std::ptrdiff_t d = i < pos ? pos - i : i - pos + (present ? 0 : 1);
        ranked.emplace_back(d, sorted[i]);
    }
    std::sort(ranked.begin(), ranked.end());
    std::vector<std::string> out;
    for (std::size_t i = page * k; i < ranked.size() && out.size() < k; ++i) out.push_back(ranked[i].second);
    return out;
}

}  // namespace ee::explain
