#include "organization.hpp"

#include "errors.hpp"

namespace aida {

void OrgGraph::add_vertex(const std::string& agent_id) {
    if (vertex_set_.insert(agent_id).second) {
        vertices_.push_back(agent_id);
    }
}

void OrgGraph::add_edge(const std::string& from, const std::string& to, EdgeKind kind) {
    require(from != to, Errc::precondition, "self-loop rejected: " + from);
    edges_.insert({from, to});
    edge_kinds_[{from, to}] = kind;
}

OrgGraph OrgGraph::flat(const std::vector<std::string>& agent_ids) {
    require(!agent_ids.empty(), Errc::precondition, "flat graph needs at least one agent");
    OrgGraph graph;
    for (const auto& id : agent_ids) {
        graph.add_vertex(id);
    }
    for (const auto& from : agent_ids) {
        for (const auto& to : agent_ids) {
            if (from != to) {
                graph.add_edge(from, to);
            }
        }
    }
    return graph;
}

bool OrgGraph::has_vertex(const std::string& agent_id) const {
    return vertex_set_.count(agent_id) > 0;
}

bool OrgGraph::can_communicate(const std::string& from, const std::string& to) const {
    require(has_vertex(from), Errc::unknown_agent, from);
    require(has_vertex(to), Errc::unknown_agent, to);
    return edges_.count({from, to}) > 0;
}

std::vector<std::string> OrgGraph::out_neighbors(const std::string& from) const {
    std::vector<std::string> out;
    for (const auto& vertex : vertices_) {
        if (vertex != from && edges_.count({from, vertex}) > 0) {
            out.push_back(vertex);
        }
    }
    return out;
}

std::vector<OrgGraph::Issue> OrgGraph::validate() const {
    std::vector<Issue> issues;
    for (const auto& [from, to] : edges_) {
        if (from == to) {
            issues.push_back({true, "self-loop at " + from});
        }
        if (!has_vertex(from)) {
            issues.push_back({true, "edge from unknown vertex " + from});
        }
        if (!has_vertex(to)) {
            issues.push_back({true, "edge to unknown vertex " + to});
        }
    }
    for (const auto& vertex : vertices_) {
        bool touched = false;
        for (const auto& [from, to] : edges_) {
            if (from == vertex || to == vertex) {
                touched = true;
                break;
            }
        }
        if (!touched && vertices_.size() > 1) {
            issues.push_back({false, "vertex " + vertex + " is isolated"});
        }
    }
    return issues;
}

EdgeKind OrgGraph::edge_kind(const std::string& from, const std::string& to) const {
    auto it = edge_kinds_.find({from, to});
    require(it != edge_kinds_.end(), Errc::precondition, "no such edge");
    return it->second;
}

}  // namespace aida
