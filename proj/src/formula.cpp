#include "vtsynth/formula.hpp"

#include <algorithm>
#include <cctype>

namespace vtsynth {

class Formula::Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    std::shared_ptr<const Node> parse_all() {
        auto n = parse_iff();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw FormulaError("formula \"" + std::string(text_) + "\" at offset " + std::to_string(pos_) + ": " +
                           what);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(std::string_view token) {
        skip_ws();
        if (text_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    static std::shared_ptr<const Node> binary(Op op, std::shared_ptr<const Node> l, std::shared_ptr<const Node> r) {
        return std::make_shared<const Node>(Node{op, false, {}, std::move(l), std::move(r)});
    }

    std::shared_ptr<const Node> parse_iff() {
        auto lhs = parse_implies();
        while (accept("<->")) lhs = binary(Op::kIff, lhs, parse_implies());
        return lhs;
    }

    std::shared_ptr<const Node> parse_implies() {
        auto lhs = parse_or();
        if (accept("->")) return binary(Op::kImplies, lhs, parse_implies());
        return lhs;
    }

    std::shared_ptr<const Node> parse_or() {
        auto lhs = parse_and();
        while (true) {
            skip_ws();
            if (accept("||") || accept("|")) {
                lhs = binary(Op::kOr, lhs, parse_and());
            } else {
                return lhs;
            }
        }
    }

    std::shared_ptr<const Node> parse_and() {
        auto lhs = parse_unary();
        while (accept("&&") || accept("&")) lhs = binary(Op::kAnd, lhs, parse_unary());
        return lhs;
    }

    std::shared_ptr<const Node> parse_unary() {
        skip_ws();
        if (accept("!")) return std::make_shared<const Node>(Node{Op::kNot, false, {}, parse_unary(), nullptr});
        if (accept("(")) {
            auto inner = parse_iff();
            if (!accept(")")) fail("expected ')'");
            return inner;
        }
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) fail(std::string("unexpected '") + c + "'");
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
            char d = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '.') {
                ++pos_;
            } else {
                break;
            }
        }
        std::string name(text_.substr(start, pos_ - start));
        if (name == "true" || name == "false")
            return std::make_shared<const Node>(Node{Op::kConst, name == "true", {}, nullptr, nullptr});
        return std::make_shared<const Node>(Node{Op::kVar, false, std::move(name), nullptr, nullptr});
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

Formula Formula::parse(std::string_view text) { return Formula(Parser(text).parse_all()); }

Formula Formula::constant(bool value) {
    return Formula(std::make_shared<const Node>(Node{Op::kConst, value, {}, nullptr, nullptr}));
}

Formula Formula::variable(std::string name) {
    return Formula(std::make_shared<const Node>(Node{Op::kVar, false, std::move(name), nullptr, nullptr}));
}

void Formula::collect(const Node& n, std::vector<std::string>& out) {
    if (n.op == Op::kVar) {
        if (std::find(out.begin(), out.end(), n.name) == out.end()) out.push_back(n.name);
        return;
    }
    if (n.lhs) collect(*n.lhs, out);
    if (n.rhs) collect(*n.rhs, out);
}

std::vector<std::string> Formula::variables() const {
    std::vector<std::string> out;
    collect(*node_, out);
    return out;
}

namespace {
int precedence(Formula::Op op) {
    switch (op) {
        case Formula::Op::kIff: return 1;
        case Formula::Op::kImplies: return 2;
        case Formula::Op::kOr: return 3;
        case Formula::Op::kAnd: return 4;
        default: return 5;
    }
}
}  // namespace

void Formula::print(const Node& n, std::string& out, int parent_prec) {
    int prec = precedence(n.op);
    bool paren = prec < parent_prec;
    if (paren) out += '(';
    switch (n.op) {
        case Op::kConst: out += n.value ? "true" : "false"; break;
        case Op::kVar: out += n.name; break;
        case Op::kNot:
            out += '!';
            print(*n.lhs, out, 5);
            break;
        case Op::kAnd:
            print(*n.lhs, out, prec);
            out += " & ";
            print(*n.rhs, out, prec + 1);
            break;
        case Op::kOr:
            print(*n.lhs, out, prec);
            out += " | ";
            print(*n.rhs, out, prec + 1);
            break;
        case Op::kImplies:
            print(*n.lhs, out, prec + 1);
            out += " -> ";
            print(*n.rhs, out, prec);
            break;
        case Op::kIff:
            print(*n.lhs, out, prec);
            out += " <-> ";
            print(*n.rhs, out, prec + 1);
            break;
    }
    if (paren) out += ')';
}

std::string Formula::to_string() const {
    std::string out;
    print(*node_, out, 0);
    return out;
}

std::string bdd_to_dnf(const Bdd& bdd, Bdd::Node n, const std::vector<std::string>& names) {
    if (n == Bdd::kTrue) return "true";
    if (n == Bdd::kFalse) return "false";
    std::string out;
    bool first_cube = true;
    for (const auto& cube : bdd.paths(n)) {
        if (!first_cube) out += " | ";
        first_cube = false;
        if (cube.literals.empty()) {
            out += "true";
            continue;
        }
        bool first_lit = true;
        for (auto [var, value] : cube.literals) {
            if (!first_lit) out += '&';
            first_lit = false;
            if (!value) out += '!';
            out += names[var];
        }
    }
    return out;
}

}  // namespace vtsynth
