#include "ee/explain/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "ee/error.hpp"

namespace ee::explain {

const Record* Corpus::find(const std::string& id) const {
    for (const auto& r : records) {
        if (r.id == id) return &r;
    }
    return nullptr;
}

std::vector<std::string> Corpus::sorted_ids() const {
    std::vector<std::string> ids;
    for (const auto& r : records) ids.push_back(r.id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

Corpus corpus_from_json(const nlohmann::json& j) {
    try {
        Corpus c;
        c.schema = j.at("schema").get<std::string>();
        c.kind = j.value("kind", c.schema);
        c.default_target = j.value("default_target", std::string{});
        c.features = j.value("features", std::vector<std::string>{});
        for (const auto& r : j.at("records")) {
            Record rec;
            rec.id = r.at("id").get<std::string>();
            rec.outcome = r.value("outcome", std::string{});
            rec.attachment = r.value("attachment", std::string{});
            if (r.contains("values")) {
                for (auto it = r["values"].begin(); it != r["values"].end(); ++it) rec.values[it.key()] = it.value();
            }
            c.records.push_back(std::move(rec));
        }
        if (j.contains("rules")) {
            for (const auto& r : j["rules"]) {
                c.rules.push_back(Rule{r.at("feature").get<std::string>(), r.at("to"), r.at("weight").get<double>()});
            }
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::SchemaError, std::string("corpus: ") + e.what());
    }
}

Corpus load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot read " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::SyntaxError, path + ": " + e.what());
    }
    return corpus_from_json(j);
}

std::map<std::string, Corpus> load_corpora(const std::string& dir) {
    namespace fs = std::filesystem;
    std::map<std::string, Corpus> out;
    if (!fs::is_directory(dir)) throw Error(Errc::Io, "not a directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        auto c = load_corpus(f.string());
        out[c.schema] = std::move(c);
    }
    return out;
}

}  // namespace ee::explain
