#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace aida {

enum class EdgeKind { communication, instruction };

/// Directed communication topology over the agent team. Agents are
/// vertices; an edge (from, to) means `from` may address `to`. No
/// self-loops. Immutable in spirit: built once, then only queried.
/// The facilitator is not a vertex and may address everyone.
class OrgGraph {
public:
    struct Issue {
        bool is_error = true;
        std::string message;
    };

    void add_vertex(const std::string& agent_id);
    void add_edge(const std::string& from, const std::string& to,
                  EdgeKind kind = EdgeKind::communication);

    /// Complete digraph over the given agents: every ordered pair except
    /// self-loops, so |edges| = n(n-1).
    static OrgGraph flat(const std::vector<std::string>& agent_ids);

    const std::vector<std::string>& vertices() const { return vertices_; }
    std::size_t edge_count() const { return edges_.size(); }
    bool has_vertex(const std::string& agent_id) const;

    /// True iff (from, to) is an edge. Throws Errc::unknown_agent when
    /// either endpoint is not a vertex.
    bool can_communicate(const std::string& from, const std::string& to) const;

    std::vector<std::string> out_neighbors(const std::string& from) const;

    /// Structural check: self-loops and dangling endpoints are errors,
    /// unreachable (isolated) vertices only warnings.
    std::vector<Issue> validate() const;

    const std::set<std::pair<std::string, std::string>>& edges() const { return edges_; }
    EdgeKind edge_kind(const std::string& from, const std::string& to) const;

private:
    std::vector<std::string> vertices_;  // insertion order, for deterministic iteration
    std::set<std::string> vertex_set_;
    std::set<std::pair<std::string, std::string>> edges_;
    std::map<std::pair<std::string, std::string>, EdgeKind> edge_kinds_;
};

}  // namespace aida
