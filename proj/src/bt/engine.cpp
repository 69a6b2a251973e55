#include "ee/bt/engine.hpp"

#include <algorithm>
#include <set>

#include "ee/bt/text.hpp"
#include "ee/error.hpp"

namespace ee::bt {

std::string_view to_string(Status status) noexcept {
    switch (status) {
        case Status::Success: return "Success";
        case Status::Failure: return "Failure";
        case Status::Waiting: return "Waiting";
    }
    return "?";
}

namespace {

std::string latch_key(std::string_view id) { return std::string(kLatchPrefix) + std::string(id); }
std::string shown_key(std::string_view id) { return std::string(kShownPrefix) + std::string(id); }

std::size_t shown_count(const Blackboard& bb, std::string_view id) {
    auto v = bb.find(shown_key(id));
    if (!v) return 0;
    const auto* d = std::get_if<double>(&*v);
    return d ? static_cast<std::size_t>(*d) : 0;
}

void mark_shown(Blackboard& bb, std::string_view id) {
    bb.set(shown_key(id), static_cast<double>(shown_count(bb, id) + 1));
}

void latch(Blackboard& bb, std::string_view id, Status status) {
    bb.set(latch_key(id), std::string(status == Status::Success ? "success" : "failure"));
}

void apply_writes(Blackboard& bb, const std::vector<Write>& writes) {
    for (const auto& w : writes) bb.set(w.key, w.value);
}

/// Attachments whose template renders empty (no such artefact) are dropped.
std::vector<std::string> render_attachments(const std::vector<std::string>& items, const Blackboard& bb) {
    std::vector<std::string> out;
    for (const auto& s : items) {
        auto r = render_template(s, bb);
        if (!r.empty()) out.push_back(std::move(r));
    }
    return out;
}

std::vector<std::string> labels(const QuestionPayload& q, const Blackboard& bb) {
    std::vector<std::string> out;
    for (const auto& c : q.choices) out.push_back(render_template(c.label, bb));
    return out;
}

std::string prompt_text(const QuestionPayload& q, std::size_t shown, const Blackboard& bb) {
    const std::string& t = (shown > 0 && !q.repeat_prompt.empty()) ? q.repeat_prompt : q.prompt;
    return render_template(t, bb);
}

Status from_outcome(Outcome o) {
    switch (o) {
        case Outcome::Success: return Status::Success;
        case Outcome::Failure: return Status::Failure;
        case Outcome::Reprompt: return Status::Waiting;
    }
    return Status::Waiting;
}

class Walker {
public:
    Walker(const Tree& tree, Blackboard& bb, const TickContext& ctx, TickResult& out, std::string reprompt)
        : tree_(tree), bb_(bb), ctx_(ctx), out_(out), reprompt_(std::move(reprompt)) {}

    Status visit(const TreeNode& node) {
        const std::size_t slot = out_.visited.size();
        out_.visited.push_back(Visit{node.id, Status::Waiting});
        const Status s = evaluate(node);
        out_.visited[slot].status = s;
        if (s == Status::Waiting && node.children.empty() && !out_.waiting_node) out_.waiting_node = node.id;
        return s;
    }

private:
    Status evaluate(const TreeNode& node) {
        switch (node.kind) {
            case NodeKind::Sequence:
                for (const auto& child : node.children) {
                    const Status s = visit(child);
                    if (s != Status::Success) return s;
                }
                apply_writes(bb_, node.on_success);
                return Status::Success;
            case NodeKind::Priority:
                for (const auto& child : node.children) {
                    const Status s = visit(child);
                    if (s == Status::Success) apply_writes(bb_, node.on_success);
                    if (s != Status::Failure) return s;
                }
                return Status::Failure;
            case NodeKind::Condition: {
                const auto& c = std::get<ConditionPayload>(node.payload);
                bool holds = bb_.get(c.key) == c.expected;
                if (c.negate) holds = !holds;
                return holds ? Status::Success : Status::Failure;
            }
            case NodeKind::Information: return information(node);
            case NodeKind::QuestionAnswer: return question(node);
            case NodeKind::Explainer: return explainer(node);
        }
        return Status::Failure;
    }

    Status information(const TreeNode& node) {
        if (auto s = latched_status(tree_, bb_, node.id)) return *s;
        const auto& p = std::get<InformationPayload>(node.payload);
        out_.effects.push_back(Utterance{node.id, render_template(p.text, bb_), {}, render_attachments(p.attachments, bb_)});
        mark_shown(bb_, node.id);
        apply_writes(bb_, node.on_success);
        latch(bb_, node.id, Status::Success);
        return Status::Success;
    }

    Status question(const TreeNode& node) {
        if (auto s = latched_status(tree_, bb_, node.id)) return *s;
        const auto& q = std::get<QuestionPayload>(node.payload);
        out_.effects.push_back(Utterance{node.id, prompt_text(q, shown_count(bb_, node.id), bb_), labels(q, bb_),
                                         render_attachments(q.attachments, bb_)});
        mark_shown(bb_, node.id);
        return Status::Waiting;
    }

    Status explainer(const TreeNode& node) {
        if (auto s = latched_status(tree_, bb_, node.id)) return *s;
        const auto& e = std::get<ExplainerPayload>(node.payload);
        const std::size_t shown = shown_count(bb_, node.id);
        if (node.id == reprompt_) {
            out_.effects.push_back(Utterance{node.id, prompt_text(e.probe, shown, bb_), labels(e.probe, bb_), {}});
            mark_shown(bb_, node.id);
            return Status::Waiting;
        }
        if (ctx_.explainers == nullptr || !ctx_.explainers->contains(e.explainer_id)) {
            throw Error(Errc::UnboundExplainer, e.explainer_id);
        }
        explain::Target target{to_string(bb_.get(e.target_key + ".schema")), to_string(bb_.get(e.target_key + ".id"))};
        auto params = e.params;
        params["page"] = static_cast<double>(shown);
        auto result = ctx_.explainers->invoke(e.explainer_id, target, params);

        const std::string& intro = (shown > 0 && !e.repeat_utterance.empty()) ? e.repeat_utterance : e.utterance;
        std::string text = intro.empty() ? result.rendering : render_template(intro, bb_);
        const std::string probe = prompt_text(e.probe, 0, bb_);
        if (!probe.empty()) text += "\n" + probe;
        auto attachments = result.attachments;
        out_.effects.push_back(ExplainerInvocation{node.id, e.explainer_id, std::move(target), std::move(result)});
        out_.effects.push_back(Utterance{node.id, std::move(text), labels(e.probe, bb_), std::move(attachments)});
        if (!e.executed_key.empty()) bb_.set(e.executed_key, true);
        mark_shown(bb_, node.id);
        return Status::Waiting;
    }

    const Tree& tree_;
    Blackboard& bb_;
    const TickContext& ctx_;
    TickResult& out_;
    std::string reprompt_;
};

}  // namespace

std::optional<Status> latched_status(const Tree& tree, const Blackboard& blackboard, std::string_view node_id) {
    const std::string key = latch_key(node_id);
    auto v = blackboard.find(key);
    if (!v) return std::nullopt;
    const std::uint64_t written = blackboard.written_at(key);
    for (const auto& g : tree.guards(node_id)) {
        if (blackboard.changed_at(g) > written) return std::nullopt;
    }
    return std::get<std::string>(*v) == "success" ? Status::Success : Status::Failure;
}

const QuestionPayload* question_of(const TreeNode& node) {
    if (const auto* q = std::get_if<QuestionPayload>(&node.payload)) return q;
    if (const auto* e = std::get_if<ExplainerPayload>(&node.payload)) return &e->probe;
    return nullptr;
}

Response resolve_response(const QuestionPayload& q, const UserEvent& event, const ReactionClassifier* classifier) {
    Response r;
    auto select = [&](std::size_t i) {
        const Choice& c = q.choices[i];
        r.outcome = c.outcome;
        r.choice = i;
        r.writes = c.writes;
        r.reactions = c.reactions;
        r.answer = q.question_id.empty() ? Value{c.label} : Value{static_cast<double>(i)};
    };
    auto unmatched = [&](const std::string& text) {
        r.outcome = Outcome::Reprompt;
        r.reply = q.unmatched_reply;
        if (!q.feedback_category.empty()) r.feedback = text;
    };

    if (const auto* ci = std::get_if<ChoiceIndex>(&event)) {
        if (ci->index >= q.choices.size()) {
            throw Error(Errc::ChoiceOutOfRange,
                        std::to_string(ci->index) + " >= " + std::to_string(q.choices.size()));
        }
        select(ci->index);
        return r;
    }
    if (const auto* qa = std::get_if<QuestionnaireAnswer>(&event)) {
        if (q.question_id.empty() || qa->question_id != q.question_id) {
            throw Error(Errc::DanglingEvent, "answer for question '" + qa->question_id + "' is not awaited");
        }
        if (qa->option >= q.choices.size()) {
            throw Error(Errc::ChoiceOutOfRange,
                        std::to_string(qa->option) + " >= " + std::to_string(q.choices.size()));
        }
        select(qa->option);
        return r;
    }

    const std::string& text = std::get<FreeText>(event).text;
    switch (q.free_text) {
        case FreeTextMode::None:
            unmatched(text);
            return r;
        case FreeTextMode::Accept:
            r.outcome = q.accept_outcome;
            r.writes = q.accept_writes;
            r.answer = Value{text};
            if (!q.feedback_category.empty()) r.feedback = text;
            return r;
        case FreeTextMode::MatchChoices:
        case FreeTextMode::Classify:
            break;
    }
    const std::string norm = normalize_text(text);
    for (std::size_t i = 0; i < q.choices.size(); ++i) {
        if (normalize_text(q.choices[i].label) == norm) {
            select(i);
            return r;
        }
    }
    if (q.free_text == FreeTextMode::Classify && classifier != nullptr) {
        std::vector<std::string> accepted;
        for (const auto& c : q.choices) {
            for (const auto& tag : c.reactions) {
                if (std::find(accepted.begin(), accepted.end(), tag) == accepted.end()) accepted.push_back(tag);
            }
        }
        if (auto tag = classifier->classify(text, accepted)) {
            for (std::size_t i = 0; i < q.choices.size(); ++i) {
                const auto& rs = q.choices[i].reactions;
                if (std::find(rs.begin(), rs.end(), *tag) != rs.end()) {
                    select(i);
                    r.reactions = {*tag};
                    return r;
                }
            }
        }
    }
    unmatched(text);
    return r;
}

TickResult tick(const Tree& tree, Blackboard& bb, const TickContext& ctx, const std::optional<Pending>& pending) {
    TickResult out;
    std::string reprompt;
    if (pending) {
        const TreeNode* node = tree.find(pending->node);
        if (node == nullptr) throw Error(Errc::DanglingEvent, "no node '" + pending->node + "'");
        const QuestionPayload* q = question_of(*node);
        if (q == nullptr) throw Error(Errc::DanglingEvent, "node '" + node->id + "' does not take replies");
        if (latched_status(tree, bb, node->id) || shown_count(bb, node->id) == 0) {
            throw Error(Errc::DanglingEvent, "node '" + node->id + "' is not waiting");
        }
        Response r = resolve_response(*q, pending->event, ctx.classifier);

        Resolution res{node->id, from_outcome(r.outcome), r.choice, r.reactions};
        if (!r.reply.empty()) out.effects.push_back(Utterance{node->id, render_template(r.reply, bb), {}, {}});
        if (r.feedback) out.effects.push_back(FeedbackRecorded{node->id, q->feedback_category, *r.feedback});
        if (r.outcome == Outcome::Reprompt) {
            reprompt = node->id;
        } else {
            apply_writes(bb, r.writes);
            if (r.answer && !q->answer_key.empty()) bb.set(q->answer_key, *r.answer);
            latch(bb, node->id, res.status);
        }
        out.resolution = res;
        if (ctx.after_resolution) ctx.after_resolution(res, bb);
    }

    Walker walker(tree, bb, ctx, out, std::move(reprompt));
    out.status = walker.visit(tree.root());
    if (out.status != Status::Waiting) out.waiting_node.reset();
    return out;
}

std::string to_string(const Violation& v) {
    std::string s = v.kind + "(" + v.subject + ")";
    if (!v.detail.empty()) s += ": " + v.detail;
    return s;
}

namespace {

void collect(const TreeNode& node, std::vector<const TreeNode*>& out) {
    out.push_back(&node);
    for (const auto& c : node.children) collect(c, out);
}

void add_unique(std::vector<std::string>& keys, const std::string& k) {
    if (!k.empty() && std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
}

void add_question_writes(std::vector<std::string>& keys, const QuestionPayload& q) {
    for (const auto& c : q.choices) {
        for (const auto& w : c.writes) add_unique(keys, w.key);
    }
    for (const auto& w : q.accept_writes) add_unique(keys, w.key);
    add_unique(keys, q.answer_key);
}

void check_question(const TreeNode& node, const QuestionPayload& q, std::vector<Violation>& out) {
    if (q.choices.empty() && q.free_text == FreeTextMode::None) {
        out.push_back({"EmptyChoices", node.id, "no choices and free text disabled"});
    }
    if (q.choices.empty() && (q.free_text == FreeTextMode::MatchChoices || q.free_text == FreeTextMode::Classify)) {
        out.push_back({"PartialResponseRule", node.id, "free text is matched against an empty choice list"});
    }
    if (q.free_text == FreeTextMode::Classify &&
        std::none_of(q.choices.begin(), q.choices.end(), [](const Choice& c) { return !c.reactions.empty(); })) {
        out.push_back({"PartialResponseRule", node.id, "classified free text but no choice carries a reaction"});
    }
}

}  // namespace

std::vector<std::string> written_keys(const Tree& tree) {
    std::vector<const TreeNode*> nodes;
    collect(tree.root(), nodes);
    std::vector<std::string> keys;
    for (const auto* n : nodes) {
        for (const auto& w : n->on_success) add_unique(keys, w.key);
        if (const auto* q = std::get_if<QuestionPayload>(&n->payload)) add_question_writes(keys, *q);
        if (const auto* e = std::get_if<ExplainerPayload>(&n->payload)) {
            add_question_writes(keys, e->probe);
            add_unique(keys, e->executed_key);
        }
    }
    return keys;
}

std::vector<std::string> read_keys(const Tree& tree) {
    std::vector<const TreeNode*> nodes;
    collect(tree.root(), nodes);
    std::vector<std::string> keys;
    for (const auto* n : nodes) {
        if (const auto* c = std::get_if<ConditionPayload>(&n->payload)) add_unique(keys, c->key);
    }
    return keys;
}

std::vector<Violation> validate_tree(const Tree& tree, const ExplainerCatalog& catalog,
                                     std::span<const std::string> external_keys) {
    std::vector<Violation> out;
    for (const auto& id : tree.duplicate_ids()) out.push_back({"DuplicateId", id, ""});

    std::vector<const TreeNode*> nodes;
    collect(tree.root(), nodes);
    const auto writes = written_keys(tree);
    std::set<std::string> reported_flags;
    for (const auto* n : nodes) {
        if (is_composite(n->kind)) {
            if (n->children.empty()) out.push_back({"ChildlessComposite", n->id, ""});
            continue;
        }
        if (!n->children.empty()) out.push_back({"LeafWithChildren", n->id, std::string(to_string(n->kind))});
        switch (n->kind) {
            case NodeKind::Condition: {
                const auto& key = std::get<ConditionPayload>(n->payload).key;
                const bool written = std::find(writes.begin(), writes.end(), key) != writes.end() ||
                                     std::find(external_keys.begin(), external_keys.end(), key) != external_keys.end();
                if (!written && reported_flags.insert(key).second) {
                    out.push_back({"UnknownFlag", key, "read by " + n->id + " but never written"});
                }
                break;
            }
            case NodeKind::Information: {
                const auto& p = std::get<InformationPayload>(n->payload);
                if (p.placeholder) {
                    out.push_back({"UnfilledPlaceholder", n->id, ""});
                } else if (p.text.empty()) {
                    out.push_back({"EmptyUtterance", n->id, ""});
                }
                break;
            }
            case NodeKind::QuestionAnswer: {
                const auto& q = std::get<QuestionPayload>(n->payload);
                if (q.prompt.empty()) out.push_back({"EmptyUtterance", n->id, ""});
                check_question(*n, q, out);
                break;
            }
            case NodeKind::Explainer: {
                const auto& e = std::get<ExplainerPayload>(n->payload);
                if (!catalog.contains(e.explainer_id)) out.push_back({"UnresolvedExplainer", e.explainer_id, n->id});
                check_question(*n, e.probe, out);
                break;
            }
            default: break;
        }
    }
    return out;
}

Runner::Runner(Tree tree, TickContext ctx, Blackboard blackboard)
    : tree_(std::move(tree)), ctx_(std::move(ctx)), blackboard_(std::move(blackboard)) {}

TickResult Runner::start() { return run(std::nullopt); }

TickResult Runner::deliver(const UserEvent& event) {
    if (!waiting_) throw Error(Errc::DanglingEvent, "no node is waiting");
    return run(Pending{*waiting_, event});
}

TickResult Runner::run(const std::optional<Pending>& pending) {
    TickResult result = tick(tree_, blackboard_, ctx_, pending);
    ++ticks_;
    waiting_ = result.waiting_node;
    return result;
}

}  // namespace ee::bt
