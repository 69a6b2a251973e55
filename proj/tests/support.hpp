#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>

#include "ee/explain/corpus.hpp"
#include "ee/service/manager.hpp"
#include "ee/spec/codec.hpp"

namespace ee::test {

inline std::string source_path(const std::string& rel) { return std::string(EE_SOURCE_DIR) + "/" + rel; }

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline spec::XaiSpec fixture_spec(const std::string& name) {
    return spec::load_spec_file(source_path("data/specs/" + name + ".xaispec.json"));
}

inline std::shared_ptr<const std::map<std::string, explain::Corpus>> fixture_corpora() {
    static auto corpora = std::make_shared<const std::map<std::string, explain::Corpus>>(
        explain::load_corpora(source_path("data/fixtures")));
    return corpora;
}

/// Manager with every shipped spec, deterministic ids and a fixed clock.
inline std::unique_ptr<service::SessionManager> make_manager(service::ManagerConfig config = {}) {
    if (!config.clock) config.clock = [] { return std::chrono::system_clock::time_point{}; };
    if (!config.next_id) {
        auto counter = std::make_shared<int>(0);
        config.next_id = [counter] { return "s" + std::to_string(++*counter); };
    }
    auto m = std::make_unique<service::SessionManager>(fixture_corpora(), config);
    m->load_specs_dir(source_path("data/specs"));
    return m;
}

}  // namespace ee::test
