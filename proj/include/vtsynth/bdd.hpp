#pragma once

#include <cstdint>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace vtsynth {

/// Reduced ordered binary decision diagrams over a fixed number of variables.
///
/// Variable order is the index order (variable 0 at the root). Nodes are
/// hash-consed, so two functions are equal iff their node handles are equal.
/// Nodes are never collected; a manager lives as long as the domain owning it.
///
/// Read-only queries (`eval`, `low`, `high`, `var_of`, `unrank` with a
/// precomputed count table) are safe to call concurrently as long as no
/// thread creates nodes at the same time.
class Bdd {
public:
    using Node = std::uint32_t;
    static constexpr Node kFalse = 0;
    static constexpr Node kTrue = 1;

    explicit Bdd(std::uint32_t num_vars);

    std::uint32_t num_vars() const { return num_vars_; }
    std::size_t num_nodes() const { return nodes_.size(); }

    Node var(std::uint32_t index);
    Node nvar(std::uint32_t index);

    Node land(Node a, Node b);
    Node lor(Node a, Node b);
    Node lnot(Node a);
    Node ite(Node f, Node g, Node h);
    /// a & !b
    Node diff(Node a, Node b) { return land(a, lnot(b)); }
    bool implies(Node a, Node b) { return diff(a, b) == kFalse; }

    /// Variable tested at `n`; terminals report `num_vars()`.
    std::uint32_t var_of(Node n) const { return nodes_[n].var; }
    Node low(Node n) const { return nodes_[n].low; }
    Node high(Node n) const { return nodes_[n].high; }
    bool is_terminal(Node n) const { return n <= kTrue; }

    bool eval(Node n, const std::vector<bool>& assignment) const;

    /// Number of satisfying assignments over all `num_vars()` variables.
    /// Throws std::overflow_error when the count exceeds 2^64 - 1.
    std::uint64_t count(Node n);

    /// Satisfying assignment with the given rank. Assignments are ordered
    /// lexicographically with variable 0 most significant and false < true.
    std::vector<bool> unrank(Node n, std::uint64_t rank);

    /// Enumerates satisfying assignments in rank order, stopping after `limit`.
    std::vector<std::vector<bool>> enumerate(Node n, std::size_t limit);

    /// Disjunction of root-to-true paths, each a conjunction of literals.
    /// Canonical for a fixed variable order.
    struct Cube {
        std::vector<std::pair<std::uint32_t, bool>> literals;
    };
    std::vector<Cube> paths(Node n) const;

private:
    struct NodeData {
        std::uint32_t var;
        Node low;
        Node high;
    };
    struct TripleHash {
        std::size_t operator()(const std::tuple<std::uint32_t, Node, Node>& t) const noexcept;
    };

    Node make(std::uint32_t var, Node low, Node high);
    std::uint64_t count_below(Node n);

    std::uint32_t num_vars_;
    std::vector<NodeData> nodes_;
    std::unordered_map<std::tuple<std::uint32_t, Node, Node>, Node, TripleHash> unique_;
    std::unordered_map<std::tuple<std::uint32_t, Node, Node>, Node, TripleHash> ite_cache_;
    std::unordered_map<Node, std::uint64_t> count_cache_;
};

}  // namespace vtsynth
