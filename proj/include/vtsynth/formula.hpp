#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vtsynth/bdd.hpp"

namespace vtsynth {

class FormulaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Propositional formula over named variables.
///
/// Grammar (lowest to highest precedence):
///   iff     := implies ( "<->" implies )*
///   implies := or ( "->" implies )?
///   or      := and ( "|" and )*
///   and     := unary ( "&" unary )*
///   unary   := "!" unary | "(" iff ")" | "true" | "false" | identifier
/// Identifiers match [A-Za-z_][A-Za-z0-9_.]*.
class Formula {
public:
    enum class Op { kConst, kVar, kNot, kAnd, kOr, kImplies, kIff };

    static Formula parse(std::string_view text);
    static Formula constant(bool value);
    static Formula variable(std::string name);

    Op op() const { return node_->op; }

    /// Variable names in order of first occurrence.
    std::vector<std::string> variables() const;

    /// Evaluates with `value_of(name)` supplying variable values.
    template <typename Lookup>
    bool eval(Lookup&& value_of) const {
        return eval_node(*node_, value_of);
    }

    /// Compiles to a BDD; `index_of(name)` maps a variable to its BDD index and
    /// must throw for unknown names.
    template <typename Index>
    Bdd::Node to_bdd(Bdd& bdd, Index&& index_of) const {
        return bdd_node(*node_, bdd, index_of);
    }

    std::string to_string() const;

private:
    struct Node {
        Op op;
        bool value = false;
        std::string name;
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
    };
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    template <typename Lookup>
    static bool eval_node(const Node& n, Lookup& value_of) {
        switch (n.op) {
            case Op::kConst: return n.value;
            case Op::kVar: return value_of(n.name);
            case Op::kNot: return !eval_node(*n.lhs, value_of);
            case Op::kAnd: return eval_node(*n.lhs, value_of) && eval_node(*n.rhs, value_of);
            case Op::kOr: return eval_node(*n.lhs, value_of) || eval_node(*n.rhs, value_of);
            case Op::kImplies: return !eval_node(*n.lhs, value_of) || eval_node(*n.rhs, value_of);
            case Op::kIff: return eval_node(*n.lhs, value_of) == eval_node(*n.rhs, value_of);
        }
        return false;
    }

    template <typename Index>
    static Bdd::Node bdd_node(const Node& n, Bdd& bdd, Index& index_of) {
        switch (n.op) {
            case Op::kConst: return n.value ? Bdd::kTrue : Bdd::kFalse;
            case Op::kVar: return bdd.var(index_of(n.name));
            case Op::kNot: return bdd.lnot(bdd_node(*n.lhs, bdd, index_of));
            case Op::kAnd: return bdd.land(bdd_node(*n.lhs, bdd, index_of), bdd_node(*n.rhs, bdd, index_of));
            case Op::kOr: return bdd.lor(bdd_node(*n.lhs, bdd, index_of), bdd_node(*n.rhs, bdd, index_of));
            case Op::kImplies:
                return bdd.lor(bdd.lnot(bdd_node(*n.lhs, bdd, index_of)), bdd_node(*n.rhs, bdd, index_of));
            case Op::kIff: {
                Bdd::Node a = bdd_node(*n.lhs, bdd, index_of);
                Bdd::Node b = bdd_node(*n.rhs, bdd, index_of);
                return bdd.ite(a, b, bdd.lnot(b));
            }
        }
        return Bdd::kFalse;
    }

    class Parser;
    static void collect(const Node& n, std::vector<std::string>& out);
    static void print(const Node& n, std::string& out, int parent_prec);

    std::shared_ptr<const Node> node_;
};

/// Renders a BDD as a disjunction of path cubes ("a&!b | c"), or
/// "true"/"false" for the constants.
std::string bdd_to_dnf(const Bdd& bdd, Bdd::Node n, const std::vector<std::string>& names);

}  // namespace vtsynth
