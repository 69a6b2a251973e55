#include <algorithm>
#include <cmath>
#include <random>

#include "ee/error.hpp"
#include "ee/explain/registry.hpp"

namespace ee::explain {

namespace {

using Corpora = std::shared_ptr<const std::map<std::string, Corpus>>;

const Corpus& corpus_for(const Corpora& corpora, const Target& target) {
    auto it = corpora->find(target.schema);
    if (it == corpora->end()) throw Error(Errc::TargetSchemaMismatch, "no corpus for schema '" + target.schema + "'");
    return it->second;
}

const Record& record_for(const Corpus& c, const Target& target) {
    const Record* r = c.find(target.id);
    if (r == nullptr) throw Error(Errc::TargetSchemaMismatch, "'" + target.id + "' is not a " + c.schema + " record");
    return *r;
}

double num_param(const Params& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    if (const auto* d = std::get_if<double>(&it->second)) return *d;
    return fallback;
}

std::string joined(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
    return out;
}

std::string overlay(const Record& r, const std::string& explainer_id) {
    if (r.attachment.empty()) return {};
    auto dot = r.attachment.rfind('.');
    return r.attachment.substr(0, dot) + "." + explainer_id + (dot == std::string::npos ? "" : r.attachment.substr(dot));
}

std::string pct(double w) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", w * 100.0);
    return buf;
}

/// Weights in [0,1) drawn from mt19937 and normalized to sum to 1.
std::vector<double> seeded_weights(std::uint64_t seed, std::size_t n) {
    std::mt19937 gen(static_cast<std::mt19937::result_type>(seed ^ (seed >> 32)));
    std::vector<double> w(n);
    double sum = 0.0;
    for (auto& x : w) {
        x = static_cast<double>(gen()) / 4294967296.0;
        sum += x;
    }
    if (sum <= 0.0) {
        std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(n));
    } else {
        for (auto& x : w) x /= sum;
    }
    return w;
}

Adapter nearest_neighbours(Corpora corpora) {
    return [corpora](const Target& target, const Params& params) {
        const Corpus& c = corpus_for(corpora, target);
        record_for(c, target);
        const auto k = static_cast<std::size_t>(num_param(params, "k", 2));
        const auto page = static_cast<std::size_t>(num_param(params, "page", 0));
        auto ids = nearest_ids(c.sorted_ids(), target.id, k, page);
        ExplanationPayload p;
        p.explainer_id = "nearest_neighbours";
        p.modality = Modality::ImageRef;
        auto rows = nlohmann::json::array();
        for (const auto& id : ids) {
            const Record* r = c.find(id);
            rows.push_back({{"id", id}, {"outcome", r->outcome}});
            if (!r->attachment.empty()) p.attachments.push_back(r->attachment);
        }
        if (p.attachments.empty()) p.modality = Modality::Table;
        p.body = {{"target", target.id}, {"k", k}, {"page", page}, {"neighbours", rows}};
        p.rendering = ids.empty() ? "There are no further " + c.kind + " records similar to " + target.id + "."
                                  : "Most similar " + c.kind + " records to " + target.id + ": " + joined(ids);
        p.provenance = "mock: rank distance over the sorted fixture ids";
        return p;
    };
}

Adapter feature_attribution(Corpora corpora, std::string explainer_id) {
    return [corpora, explainer_id](const Target& target, const Params& params) {
        const Corpus& c = corpus_for(corpora, target);
        const Record& rec = record_for(c, target);
        if (c.features.empty()) throw Error(Errc::TargetSchemaMismatch, c.schema + " declares no features");
        const auto seed = static_cast<std::uint64_t>(num_param(params, "seed", 0));
        auto w = seeded_weights(seed ^ fnv1a(explainer_id + "/" + target.id), c.features.size());
        ExplanationPayload p;
        p.explainer_id = explainer_id;
        p.modality = Modality::Table;
        auto rows = nlohmann::json::array();
        std::vector<std::size_t> order(w.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
        std::vector<std::string> top;
        for (std::size_t i = 0; i < w.size(); ++i) rows.push_back({{"feature", c.features[i]}, {"weight", w[i]}});
        for (std::size_t i = 0; i < std::min<std::size_t>(3, order.size()); ++i) {
            top.push_back(c.features[order[i]] + " (" + pct(w[order[i]]) + ")");
        }
        p.body = {{"target", target.id}, {"seed", seed}, {"weights", rows}};
        if (auto ov = overlay(rec, explainer_id); !ov.empty()) {
            p.attachments.push_back(ov);
            p.modality = Modality::ImageRef;
        }
        p.rendering = "Features that contributed most to the outcome of " + target.id + ": " + joined(top);
        p.provenance = "mock: fixed-seed mt19937 weights over the declared features";
        return p;
    };
}

Adapter counterfactual(Corpora corpora) {
    return [corpora](const Target& target, const Params&) {
        const Corpus& c = corpus_for(corpora, target);
        const Record& rec = record_for(c, target);
        if (c.rules.empty()) throw Error(Errc::TargetSchemaMismatch, c.schema + " declares no counterfactual rules");
        auto changes = nlohmann::json::array();
        std::vector<std::string> text;
        double moved = 0.0;
        for (const auto& r : c.rules) {
            if (moved >= 1.0) break;
            auto from = rec.values.count(r.feature) ? rec.values.at(r.feature) : nlohmann::json(nullptr);
            changes.push_back({{"feature", r.feature}, {"from", from}, {"to", r.to}});
            text.push_back(r.feature + " from " + from.dump() + " to " + r.to.dump());
            moved += r.weight;
        }
        ExplanationPayload p;
        p.explainer_id = "dice";
        p.modality = Modality::Table;
        const bool flips = moved >= 1.0;
        p.body = {{"target", target.id}, {"changes", changes}, {"outcome_before", rec.outcome}, {"flips", flips}};
        p.rendering = (flips ? "The outcome would change if you changed " : "Even changing ") + joined(text) +
                      (flips ? "." : " would not change the outcome.");
        p.provenance = "mock: minimal prefix of the fixture rule list";
        return p;
    };
}

Adapter accumulated_local_effects(Corpora corpora) {
    return [corpora](const Target& target, const Params& params) {
        const Corpus& c = corpus_for(corpora, target);
        if (c.features.empty()) throw Error(Errc::TargetSchemaMismatch, c.schema + " declares no features");
        const auto bins = static_cast<std::size_t>(num_param(params, "bins", 4));
        auto curves = nlohmann::json::array();
        for (const auto& f : c.features) {
            auto w = seeded_weights(fnv1a("ale/" + c.schema + "/" + f), bins);
            std::vector<double> curve;
            double acc = 0.0;
            for (double x : w) {
                acc += x - 1.0 / static_cast<double>(bins);
                curve.push_back(acc);
            }
            curves.push_back({{"feature", f}, {"effects", curve}});
        }
        ExplanationPayload p;
        p.explainer_id = "ale";
        p.modality = Modality::Table;
        p.body = {{"scope", "global"}, {"bins", bins}, {"curves", curves}};
        p.rendering = "Accumulated local effects of " + joined(c.features) + " on the prediction, for the whole model.";
        p.provenance = "mock: fixed-seed effect curves per feature";
        return p;
    };
}

Adapter twin_case(Corpora corpora) {
    return [corpora](const Target& target, const Params&) {
        const Corpus& c = corpus_for(corpora, target);
        const Record& rec = record_for(c, target);
        auto ids = nearest_ids(c.sorted_ids(), target.id, c.records.size(), 0);
        std::string twin = ids.empty() ? std::string{} : ids.front();
        for (const auto& id : ids) {
            if (c.find(id)->outcome != rec.outcome) {
                twin = id;
                break;
            }
        }
        ExplanationPayload p;
        p.explainer_id = "twin_cbr";
        p.modality = Modality::Table;
        const Record* t = twin.empty() ? nullptr : c.find(twin);
        p.body = {{"target", target.id}, {"twin", twin}, {"twin_outcome", t ? t->outcome : ""},
                  {"target_outcome", rec.outcome}};
        p.rendering = t ? "The closest case with a different outcome is " + twin + " (" + t->outcome + " vs " +
                              rec.outcome + ")."
                        : "No comparable case was found.";
        p.provenance = "mock: nearest fixture case with a different outcome";
        return p;
    };
}

std::vector<std::string> schemas_with(const Corpora& corpora, bool (*pred)(const Corpus&)) {
    std::vector<std::string> out;
    for (const auto& [schema, c] : *corpora) {
        if (pred(c)) out.push_back(schema);
    }
    return out;
}

}  // namespace

void register_mocks(Registry& registry, Corpora corpora) {
    auto any = [](const Corpus& c) { return !c.records.empty(); };
    auto featured = [](const Corpus& c) { return !c.features.empty() && !c.records.empty(); };
    auto ruled = [](const Corpus& c) { return !c.rules.empty(); };
    const auto all = schemas_with(corpora, +any);
    const auto with_features = schemas_with(corpora, +featured);

    registry.add({"nearest_neighbours", {"trust", "education"}, all, Modality::ImageRef}, nearest_neighbours(corpora));
    for (const char* id : {"integrated_gradients", "lime", "shap"}) {
        registry.add({id, {"transparency"}, with_features, Modality::Table}, feature_attribution(corpora, id));
    }
    registry.add({"dice", {"actionable recourse"}, schemas_with(corpora, +ruled), Modality::Table},
                 counterfactual(corpora));
    registry.add({"twin_cbr", {"scrutability"}, all, Modality::Table}, twin_case(corpora));
    registry.add({"ale", {"scrutability", "transparency"}, with_features, Modality::Table},
                 accumulated_local_effects(corpora));
}

Registry mock_registry(const std::string& fixtures_dir) {
    auto corpora = std::make_shared<const std::map<std::string, Corpus>>(load_corpora(fixtures_dir));
    Registry r;
    register_mocks(r, corpora);
    return r;
}

}  // namespace ee::explain
