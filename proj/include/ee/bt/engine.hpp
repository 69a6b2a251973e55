#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ee/bt/blackboard.hpp"
#include "ee/bt/events.hpp"
#include "ee/bt/tree.hpp"
#include "ee/explain/payload.hpp"

namespace ee::bt {

enum class Status { Success, Failure, Waiting };

std::string_view to_string(Status status) noexcept;

/// Lookup side of an explainer registry; enough for validation.
class ExplainerCatalog {
public:
    virtual ~ExplainerCatalog() = default;
    virtual bool contains(std::string_view explainer_id) const = 0;
};

/// Invocation side, used by Explainer leaves at tick time.
class ExplainerSource : public ExplainerCatalog {
public:
    virtual explain::ExplanationPayload invoke(std::string_view explainer_id, const explain::Target& target,
                                               const std::map<std::string, Value>& params) const = 0;
};

/// Maps free text onto one of the reaction tags a waiting node accepts.
class ReactionClassifier {
public:
    virtual ~ReactionClassifier() = default;
    virtual std::optional<std::string> classify(std::string_view text,
                                                std::span<const std::string> accepted) const = 0;
};

struct Resolution;

struct TickContext {
    const ExplainerSource* explainers = nullptr;
    const ReactionClassifier* classifier = nullptr;
    /// Runs between resolving a pending event and the root traversal;
    /// navigation rules hook in here.
    std::function<void(const Resolution&, Blackboard&)> after_resolution;
};

/// A user event addressed to the node that is currently waiting.
struct Pending {
    std::string node;
    UserEvent event;
};

struct Visit {
    std::string node;
    Status status = Status::Waiting;
    bool operator==(const Visit&) const = default;
};

/// Outcome of applying a pending event to its waiting node. `status` is
/// Waiting when the node re-prompts.
struct Resolution {
    std::string node;
    Status status = Status::Waiting;
    std::optional<std::size_t> choice;
    std::vector<std::string> reactions;
    bool operator==(const Resolution&) const = default;
};

struct TickResult {
    Status status = Status::Failure;
    std::vector<Effect> effects;
    std::optional<std::string> waiting_node;
    std::vector<Visit> visited;
    std::optional<Resolution> resolution;
};

/// Pure mapping of a reply onto a question's response rule.
struct Response {
    Outcome outcome = Outcome::Reprompt;
    std::optional<std::size_t> choice;
    std::vector<Write> writes;
    std::vector<std::string> reactions;
    std::optional<Value> answer;
    std::optional<std::string> feedback;
    std::string reply;
};

Response resolve_response(const QuestionPayload& question, const UserEvent& event,
                          const ReactionClassifier* classifier);

/// The question a waiting node asks: a QA payload or an Explainer's probe.
const QuestionPayload* question_of(const TreeNode& node);

/// One reactive traversal from the root. When `pending` is present its
/// waiting node resolves first (status latched, writes applied) and the
/// traversal then restarts at the root.
TickResult tick(const Tree& tree, Blackboard& blackboard, const TickContext& ctx,
                const std::optional<Pending>& pending = std::nullopt);

/// Latched status of an action leaf, if its latch is still valid.
std::optional<Status> latched_status(const Tree& tree, const Blackboard& blackboard, std::string_view node_id);

inline constexpr std::string_view kLatchPrefix = "@latch/";
inline constexpr std::string_view kShownPrefix = "@shown/";

struct Violation {
    std::string kind;
    std::string subject;
    std::string detail;
    bool operator==(const Violation&) const = default;
};

std::string to_string(const Violation& v);

/// Static checks; an empty result means the tree is executable. Condition
/// keys listed in `external_keys` are treated as written outside the tree.
std::vector<Violation> validate_tree(const Tree& tree, const ExplainerCatalog& catalog,
                                     std::span<const std::string> external_keys = {});

/// Keys written by some node of the tree (choice writes, answers, on-success
/// writes, executed flags).
std::vector<std::string> written_keys(const Tree& tree);
/// Keys read by Condition nodes.
std::vector<std::string> read_keys(const Tree& tree);

/// Drives one episode: remembers which node is waiting and numbers ticks.
class Runner {
public:
    Runner(Tree tree, TickContext ctx, Blackboard blackboard = {});

    TickResult start();
    TickResult deliver(const UserEvent& event);

    const std::optional<std::string>& waiting() const noexcept { return waiting_; }
    const Blackboard& blackboard() const noexcept { return blackboard_; }
    Blackboard& blackboard() noexcept { return blackboard_; }
    const Tree& tree() const noexcept { return tree_; }
    std::uint64_t ticks() const noexcept { return ticks_; }

private:
    TickResult run(const std::optional<Pending>& pending);

    Tree tree_;
    TickContext ctx_;
    Blackboard blackboard_;
    std::optional<std::string> waiting_;
    std::uint64_t ticks_ = 0;
};

}  // namespace ee::bt
