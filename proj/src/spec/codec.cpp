#include "ee/spec/codec.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "ee/error.hpp"

namespace ee::spec {

namespace {

std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

[[noreturn]] void type_error(const std::string& path, const char* expected) {
    throw Error(Errc::SchemaError, path + ": expected " + expected);
}

/// Field reader that remembers which keys were consumed so leftovers can be
/// reported as unknown fields.
class Obj {
public:
    Obj(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j.is_object()) type_error(path_.empty() ? "document" : path_, "object");
    }

    const Json& req(std::string_view key) {
        const Json* v = opt(key);
        if (v == nullptr) throw Error(Errc::SchemaError, join(path_, key));
        return *v;
    }

    const Json* opt(std::string_view key) {
        used_.insert(std::string(key));
        auto it = j_.find(std::string(key));
        return it == j_.end() ? nullptr : &*it;
    }

    std::string str(std::string_view key) { return as_str(req(key), at(key)); }
    std::string str_or(std::string_view key, std::string fallback = {}) {
        const Json* v = opt(key);
        return v ? as_str(*v, at(key)) : fallback;
    }
    double num(std::string_view key) { return as_num(req(key), at(key)); }
    bool flag_or(std::string_view key, bool fallback) {
        const Json* v = opt(key);
        if (v == nullptr) return fallback;
        if (!v->is_boolean()) type_error(at(key), "boolean");
        return v->get<bool>();
    }
    std::vector<std::string> strs_or(std::string_view key) {
        const Json* v = opt(key);
        if (v == nullptr) return {};
        return as_strs(*v, at(key));
    }
    std::vector<std::string> strs(std::string_view key) { return as_strs(req(key), at(key)); }

    std::string at(std::string_view key) const { return join(path_, key); }

    void done() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!used_.contains(it.key())) throw Error(Errc::SchemaError, join(path_, it.key()) + ": unknown field");
        }
    }

    static std::string as_str(const Json& v, const std::string& path) {
        if (!v.is_string()) type_error(path, "string");
        return v.get<std::string>();
    }
    static double as_num(const Json& v, const std::string& path) {
        if (!v.is_number()) type_error(path, "number");
        return v.get<double>();
    }
    static std::vector<std::string> as_strs(const Json& v, const std::string& path) {
        if (!v.is_array()) type_error(path, "array");
        std::vector<std::string> out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_str(v[i], path + "[" + std::to_string(i) + "]"));
        return out;
    }

private:
    const Json& j_;
    std::string path_;
    std::set<std::string> used_;
};

const Json& arr(const Json& v, const std::string& path) {
    if (!v.is_array()) type_error(path, "array");
    return v;
}

std::string idx(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

[[noreturn]] void range_error(const std::string& path, const std::string& what) {
    throw Error(Errc::RangeError, path + ": " + what);
}

// ---- tree payloads ----

std::string_view outcome_name(bt::Outcome o) {
    switch (o) {
        case bt::Outcome::Success: return "success";
        case bt::Outcome::Failure: return "failure";
        case bt::Outcome::Reprompt: return "reprompt";
    }
    return "?";
}

bt::Outcome outcome_from(const std::string& s, const std::string& path) {
    if (s == "success") return bt::Outcome::Success;
    if (s == "failure") return bt::Outcome::Failure;
    if (s == "reprompt") return bt::Outcome::Reprompt;
    throw Error(Errc::SchemaError, path + ": unknown outcome '" + s + "'");
}

std::string_view mode_name(bt::FreeTextMode m) {
    switch (m) {
        case bt::FreeTextMode::None: return "none";
        case bt::FreeTextMode::MatchChoices: return "match_choices";
        case bt::FreeTextMode::Classify: return "classify";
        case bt::FreeTextMode::Accept: return "accept";
    }
    return "?";
}

bt::FreeTextMode mode_from(const std::string& s, const std::string& path) {
    if (s == "none") return bt::FreeTextMode::None;
    if (s == "match_choices") return bt::FreeTextMode::MatchChoices;
    if (s == "classify") return bt::FreeTextMode::Classify;
    if (s == "accept") return bt::FreeTextMode::Accept;
    throw Error(Errc::SchemaError, path + ": unknown free_text mode '" + s + "'");
}

bt::NodeKind kind_from(const std::string& s, const std::string& path) {
    for (auto k : {bt::NodeKind::Sequence, bt::NodeKind::Priority, bt::NodeKind::Condition,
                   bt::NodeKind::QuestionAnswer, bt::NodeKind::Information, bt::NodeKind::Explainer}) {
        if (bt::to_string(k) == s) return k;
    }
    throw Error(Errc::SchemaError, path + ": unknown node kind '" + s + "'");
}

Json writes_to_json(const std::vector<bt::Write>& writes) {
    Json out = Json::array();
    for (const auto& w : writes) out.push_back(Json{{"key", w.key}, {"value", value_to_json(w.value)}});
    return out;
}

std::vector<bt::Write> writes_from(const Json* j, const std::string& path) {
    std::vector<bt::Write> out;
    if (j == nullptr) return out;
    arr(*j, path);
    for (std::size_t i = 0; i < j->size(); ++i) {
        Obj o((*j)[i], idx(path, i));
        out.push_back(bt::Write{o.str("key"), value_from_json(o.req("value"), o.at("value"))});
        o.done();
    }
    return out;
}

Json question_to_json(const bt::QuestionPayload& q) {
    Json j;
    j["prompt"] = q.prompt;
    if (!q.repeat_prompt.empty()) j["repeat_prompt"] = q.repeat_prompt;
    Json choices = Json::array();
    for (const auto& c : q.choices) {
        Json cj{{"label", c.label}};
        if (c.outcome != bt::Outcome::Success) cj["outcome"] = outcome_name(c.outcome);
        if (!c.writes.empty()) cj["writes"] = writes_to_json(c.writes);
        if (!c.reactions.empty()) cj["reactions"] = c.reactions;
        choices.push_back(std::move(cj));
    }
    j["choices"] = std::move(choices);
    if (q.free_text != bt::FreeTextMode::None) j["free_text"] = mode_name(q.free_text);
    if (!q.answer_key.empty()) j["answer_key"] = q.answer_key;
    if (q.accept_outcome != bt::Outcome::Success) j["accept_outcome"] = outcome_name(q.accept_outcome);
    if (!q.accept_writes.empty()) j["accept_writes"] = writes_to_json(q.accept_writes);
    if (!q.feedback_category.empty()) j["feedback_category"] = q.feedback_category;
    if (!q.unmatched_reply.empty()) j["unmatched_reply"] = q.unmatched_reply;
    if (!q.question_id.empty()) j["question_id"] = q.question_id;
    if (!q.attachments.empty()) j["attachments"] = q.attachments;
    return j;
}

bt::QuestionPayload question_from(const Json& j, const std::string& path) {
    Obj o(j, path);
    bt::QuestionPayload q;
    q.prompt = o.str("prompt");
    q.repeat_prompt = o.str_or("repeat_prompt");
    if (const Json* cs = o.opt("choices")) {
        arr(*cs, o.at("choices"));
        for (std::size_t i = 0; i < cs->size(); ++i) {
            Obj c((*cs)[i], idx(o.at("choices"), i));
            bt::Choice choice;
            choice.label = c.str("label");
            choice.outcome = outcome_from(c.str_or("outcome", "success"), c.at("outcome"));
            choice.writes = writes_from(c.opt("writes"), c.at("writes"));
            choice.reactions = c.strs_or("reactions");
            c.done();
            q.choices.push_back(std::move(choice));
        }
    }
    q.free_text = mode_from(o.str_or("free_text", "none"), o.at("free_text"));
    q.answer_key = o.str_or("answer_key");
    q.accept_outcome = outcome_from(o.str_or("accept_outcome", "success"), o.at("accept_outcome"));
    q.accept_writes = writes_from(o.opt("accept_writes"), o.at("accept_writes"));
    q.feedback_category = o.str_or("feedback_category");
    q.unmatched_reply = o.str_or("unmatched_reply");
    q.question_id = o.str_or("question_id");
    q.attachments = o.strs_or("attachments");
    o.done();
    return q;
}

Json params_to_json(const std::map<std::string, bt::Value>& params) {
    Json j = Json::object();
    for (const auto& [k, v] : params) j[k] = value_to_json(v);
    return j;
}

std::map<std::string, bt::Value> params_from(const Json* j, const std::string& path) {
    std::map<std::string, bt::Value> out;
    if (j == nullptr) return out;
    if (!j->is_object()) type_error(path, "object");
    for (auto it = j->begin(); it != j->end(); ++it) out[it.key()] = value_from_json(it.value(), join(path, it.key()));
    return out;
}

Json payload_to_json(const bt::TreeNode& n) {
    return std::visit(
        [](const auto& p) -> Json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return nullptr;
            } else if constexpr (std::is_same_v<T, bt::ConditionPayload>) {
                Json j{{"key", p.key}};
                if (!(p.expected == bt::Value{true})) j["expected"] = value_to_json(p.expected);
                if (p.negate) j["negate"] = true;
                return j;
            } else if constexpr (std::is_same_v<T, bt::QuestionPayload>) {
                return question_to_json(p);
            } else if constexpr (std::is_same_v<T, bt::InformationPayload>) {
                Json j{{"text", p.text}};
                if (!p.attachments.empty()) j["attachments"] = p.attachments;
                if (p.placeholder) j["placeholder"] = true;
                return j;
            } else {
                Json j{{"explainer_id", p.explainer_id}};
                if (!p.intent.empty()) j["intent"] = p.intent;
                if (!p.params.empty()) j["params"] = params_to_json(p.params);
                if (p.target_key != "target") j["target_key"] = p.target_key;
                if (!p.utterance.empty()) j["utterance"] = p.utterance;
                if (!p.repeat_utterance.empty()) j["repeat_utterance"] = p.repeat_utterance;
                if (!(p.probe == bt::QuestionPayload{})) j["probe"] = question_to_json(p.probe);
                if (!p.executed_key.empty()) j["executed_key"] = p.executed_key;
                return j;
            }
        },
        n.payload);
}

bt::Payload payload_from(bt::NodeKind kind, const Json* j, const std::string& path) {
    if (bt::is_composite(kind)) {
        if (j != nullptr && !j->is_null()) throw Error(Errc::SchemaError, path + ": composites take no payload");
        return std::monostate{};
    }
    if (j == nullptr) throw Error(Errc::SchemaError, path);
    switch (kind) {
        case bt::NodeKind::Condition: {
            Obj o(*j, path);
            bt::ConditionPayload c;
            c.key = o.str("key");
            if (const Json* e = o.opt("expected")) c.expected = value_from_json(*e, o.at("expected"));
            c.negate = o.flag_or("negate", false);
            o.done();
            return c;
        }
        case bt::NodeKind::QuestionAnswer: return question_from(*j, path);
        case bt::NodeKind::Information: {
            Obj o(*j, path);
            bt::InformationPayload p;
            p.text = o.str("text");
            p.attachments = o.strs_or("attachments");
            p.placeholder = o.flag_or("placeholder", false);
            o.done();
            return p;
        }
        default: {
            Obj o(*j, path);
            bt::ExplainerPayload p;
            p.explainer_id = o.str("explainer_id");
            p.intent = o.str_or("intent");
            p.params = params_from(o.opt("params"), o.at("params"));
            p.target_key = o.str_or("target_key", "target");
            p.utterance = o.str_or("utterance");
            p.repeat_utterance = o.str_or("repeat_utterance");
            if (const Json* probe = o.opt("probe")) p.probe = question_from(*probe, o.at("probe"));
            p.executed_key = o.str_or("executed_key");
            o.done();
            return p;
        }
    }
}

// ---- spec sections ----

std::string_view policy_name(PolicyKind k) { return k == PolicyKind::AtLeastKofN ? "at_least_k_of_n" : "all_positive"; }

void flatten(const Json& j, const std::string& path, std::vector<std::string>& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), join(path, it.key()), out);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], idx(path, i), out);
    } else if (j.is_string()) {
        out.push_back(path + " = " + j.get<std::string>());
    } else {
        out.push_back(path + " = " + j.dump());
    }
}

}  // namespace

Json value_to_json(const bt::Value& v) {
    return std::visit([](const auto& x) -> Json { return x; }, v);
}

bt::Value value_from_json(const Json& j, const std::string& path) {
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return j.get<std::string>();
    type_error(path, "boolean, number or string");
}

Json tree_to_json(const bt::TreeNode& node) {
    Json j;
    j["id"] = node.id;
    j["kind"] = bt::to_string(node.kind);
    if (!node.label.empty()) j["label"] = node.label;
    if (!bt::is_composite(node.kind)) j["payload"] = payload_to_json(node);
    if (!node.on_success.empty()) j["on_success"] = writes_to_json(node.on_success);
    if (!node.children.empty() || bt::is_composite(node.kind)) {
        Json children = Json::array();
        for (const auto& c : node.children) children.push_back(tree_to_json(c));
        j["children"] = std::move(children);
    }
    return j;
}

bt::TreeNode tree_from_json(const Json& j, const std::string& path) {
    Obj o(j, path);
    bt::TreeNode n;
    n.id = o.str("id");
    n.kind = kind_from(o.str("kind"), o.at("kind"));
    n.label = o.str_or("label");
    n.payload = payload_from(n.kind, o.opt("payload"), o.at("payload"));
    n.on_success = writes_from(o.opt("on_success"), o.at("on_success"));
    if (const Json* cs = o.opt("children")) {
        arr(*cs, o.at("children"));
        for (std::size_t i = 0; i < cs->size(); ++i) n.children.push_back(tree_from_json((*cs)[i], idx(o.at("children"), i)));
    }
    o.done();
    return n;
}

Json spec_to_json(const XaiSpec& s) {
    Json j;
    j["spec_id"] = s.spec_id;
    if (!s.comment.empty()) j["comment"] = s.comment;

    const auto& sys = s.system;
    j["system"] = Json{{"name", sys.name},
                       {"domain", sys.domain},
                       {"task", sys.task},
                       {"method", sys.method},
                       {"data", Json{{"instance_count", sys.data.instance_count},
                                     {"feature_description", sys.data.feature_description}}},
                       {"assessment", Json{{"metric_name", sys.assessment.metric_name},
                                           {"value", sys.assessment.value}}}};
    j["persona"] = Json{{"name", s.persona.name},
                        {"ai_knowledge", s.persona.ai_knowledge},
                        {"domain_knowledge", s.persona.domain_knowledge},
                        {"resources", s.persona.resources}};
    Json needs = Json::array();
    for (const auto& n : s.needs) {
        needs.push_back(Json{{"question", n.question},
                             {"intent", n.intent},
                             {"target_schema", Json{{"schema", n.target_schema.schema},
                                                    {"kind", n.target_schema.kind},
                                                    {"description", n.target_schema.description}}}});
    }
    j["needs"] = std::move(needs);

    Json explainers = Json::array();
    for (const auto& e : s.strategy.explainers) {
        Json ej{{"explainer_id", e.explainer_id}, {"intent", e.intent}, {"display_name", e.display_name}};
        if (!e.utterance.empty()) ej["utterance"] = e.utterance;
        if (!e.repeat_utterance.empty()) ej["repeat_utterance"] = e.repeat_utterance;
        if (!e.probe.empty()) ej["probe"] = e.probe;
        if (!e.params.empty()) ej["params"] = params_to_json(e.params);
        explainers.push_back(std::move(ej));
    }
    Json strategy{{"explainers", std::move(explainers)}};
    if (!s.strategy.summary.empty()) strategy["summary"] = s.strategy.summary;
    if (!s.strategy.description.empty()) strategy["description"] = s.strategy.description;
    strategy["tree"] = tree_to_json(s.strategy.tree);
    j["strategy"] = std::move(strategy);

    Json questionnaire = Json::array();
    for (const auto& q : s.evaluation.questionnaire) {
        Json qj{{"question_id", q.question_id}, {"text", q.text}};
        if (!q.answers.empty()) qj["answers"] = q.answers;
        qj["scale"] = q.scale;
        qj["positive_set"] = q.positive_set;
        questionnaire.push_back(std::move(qj));
    }
    const auto& p = s.evaluation.policy;
    Json policy{{"kind", policy_name(p.kind)}};
    if (p.kind == PolicyKind::AtLeastKofN) policy["k"] = p.k;
    policy["questions"] = p.questions;
    policy["positive_threshold"] = p.positive_threshold;
    if (!p.description.empty()) policy["description"] = p.description;
    j["evaluation"] = Json{{"questionnaire", std::move(questionnaire)}, {"policy", std::move(policy)}};
    return j;
}

XaiSpec spec_from_json(const Json& j) {
    XaiSpec s;
    Obj top(j, "");
    s.spec_id = top.str("spec_id");
    s.comment = top.str_or("comment");

    {
        Obj o(top.req("system"), "system");
        s.system.name = o.str("name");
        s.system.domain = o.str("domain");
        s.system.task = o.str("task");
        s.system.method = o.str("method");
        Obj d(o.req("data"), "system.data");
        const Json& count = d.req("instance_count");
        if (!count.is_number_integer()) type_error(d.at("instance_count"), "integer");
        s.system.data.instance_count = count.get<std::int64_t>();
        if (s.system.data.instance_count <= 0) range_error(d.at("instance_count"), "must be positive");
        s.system.data.feature_description = d.str("feature_description");
        d.done();
        Obj a(o.req("assessment"), "system.assessment");
        s.system.assessment.metric_name = a.str("metric_name");
        s.system.assessment.value = a.num("value");
        if (s.system.assessment.value < 0.0 || s.system.assessment.value > 1.0) {
            range_error(a.at("value"), "must lie in [0,1]");
        }
        a.done();
        o.done();
    }
    {
        Obj o(top.req("persona"), "persona");
        s.persona.name = o.str("name");
        s.persona.ai_knowledge = o.str("ai_knowledge");
        s.persona.domain_knowledge = o.str("domain_knowledge");
        s.persona.resources = o.strs_or("resources");
        for (const char* key : {"ai_knowledge", "domain_knowledge"}) {
            const std::string& level = key[0] == 'a' ? s.persona.ai_knowledge : s.persona.domain_knowledge;
            if (knowledge_rank(level) < 0) range_error(o.at(key), "unknown knowledge level '" + level + "'");
        }
        o.done();
    }
    {
        const Json& needs = arr(top.req("needs"), "needs");
        for (std::size_t i = 0; i < needs.size(); ++i) {
            Obj o(needs[i], idx("needs", i));
            ExplanationNeed n;
            n.question = o.str("question");
            n.intent = o.str("intent");
            Obj t(o.req("target_schema"), o.at("target_schema"));
            n.target_schema.schema = t.str("schema");
            n.target_schema.kind = t.str("kind");
            n.target_schema.description = t.str_or("description");
            t.done();
            o.done();
            s.needs.push_back(std::move(n));
        }
    }
    {
        Obj o(top.req("strategy"), "strategy");
        const Json& explainers = arr(o.req("explainers"), "strategy.explainers");
        for (std::size_t i = 0; i < explainers.size(); ++i) {
            Obj e(explainers[i], idx("strategy.explainers", i));
            StrategyExplainer x;
            x.explainer_id = e.str("explainer_id");
            x.intent = e.str("intent");
            x.display_name = e.str("display_name");
            x.utterance = e.str_or("utterance");
            x.repeat_utterance = e.str_or("repeat_utterance");
            x.probe = e.str_or("probe");
            x.params = params_from(e.opt("params"), e.at("params"));
            e.done();
            s.strategy.explainers.push_back(std::move(x));
        }
        s.strategy.summary = o.strs_or("summary");
        s.strategy.description = o.str_or("description");
        s.strategy.tree = tree_from_json(o.req("tree"), "strategy.tree");
        o.done();
    }
    {
        Obj o(top.req("evaluation"), "evaluation");
        const Json& qs = arr(o.req("questionnaire"), "evaluation.questionnaire");
        for (std::size_t i = 0; i < qs.size(); ++i) {
            Obj q(qs[i], idx("evaluation.questionnaire", i));
            QuestionnaireItem item;
            item.question_id = q.str("question_id");
            item.text = q.str("text");
            item.answers = q.str_or("answers");
            item.scale = q.strs("scale");
            if (q.opt("positive_set") != nullptr) {
                item.positive_set = q.strs("positive_set");
            } else {
                item.positive_set = default_positive_set(item.scale);
            }
            q.done();
            s.evaluation.questionnaire.push_back(std::move(item));
        }
        Obj p(o.req("policy"), "evaluation.policy");
        auto& policy = s.evaluation.policy;
        const std::string kind = p.str("kind");
        if (kind == "at_least_k_of_n") {
            policy.kind = PolicyKind::AtLeastKofN;
            const Json& k = p.req("k");
            if (!k.is_number_integer() || k.get<long long>() < 0) type_error(p.at("k"), "non-negative integer");
            policy.k = k.get<std::size_t>();
        } else if (kind == "all_positive") {
            policy.kind = PolicyKind::AllPositive;
        } else {
            throw Error(Errc::SchemaError, p.at("kind") + ": unknown policy '" + kind + "'");
        }
        policy.questions = p.strs("questions");
        if (const Json* t = p.opt("positive_threshold")) {
            policy.positive_threshold = Obj::as_num(*t, p.at("positive_threshold"));
            if (policy.positive_threshold <= 0.0 || policy.positive_threshold > 1.0) {
                range_error(p.at("positive_threshold"), "must lie in (0,1]");
            }
        }
        policy.description = p.str_or("description");
        p.done();
        o.done();
    }
    top.done();
    return s;
}

XaiSpec parse_spec(std::string_view document) {
    Json j;
    try {
        j = Json::parse(document.begin(), document.end());
    } catch (const nlohmann::json::parse_error& e) {
        // Translate the byte offset into line:column.
        std::size_t line = 1, col = 1;
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, document.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (document[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw Error(Errc::SyntaxError, std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
    }
    return spec_from_json(j);
}

std::string serialize_spec(const XaiSpec& spec) { return spec_to_json(spec).dump(2) + "\n"; }

XaiSpec load_spec_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::Io, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

std::vector<std::string> field_dump(const XaiSpec& spec) {
    std::vector<std::string> out;
    flatten(spec_to_json(spec), "", out);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace ee::spec
