#include "cl15/formula.hpp"

#include <cctype>
#include <unordered_set>

#include "cl15/error.hpp"

namespace cl15 {

Formula Formula::make(Kind kind, std::string atom, std::vector<Formula> children) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->atom = std::move(atom);
    node->children = std::move(children);
    for (const auto& c : node->children) node->size += c.size();
    return Formula(std::move(node));
}

Formula Formula::pos(std::string atom) { return make(Kind::PosLiteral, std::move(atom), {}); }
Formula Formula::neg(std::string atom) { return make(Kind::NegLiteral, std::move(atom), {}); }
Formula Formula::conj(Formula l, Formula r) { return make(Kind::And, {}, {std::move(l), std::move(r)}); }
Formula Formula::disj(Formula l, Formula r) { return make(Kind::Or, {}, {std::move(l), std::move(r)}); }
Formula Formula::brec(Formula b) { return make(Kind::Brec, {}, {std::move(b)}); }
Formula Formula::cobrec(Formula b) { return make(Kind::Cobrec, {}, {std::move(b)}); }

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind() || a.size() != b.size()) return false;
    if (a.is_literal()) return a.atom() == b.atom();
    for (std::size_t i = 0; i < a.node_->children.size(); ++i)
        if (a.node_->children[i] != b.node_->children[i]) return false;
    return true;
}

Formula negate(const Formula& f) {
    switch (f.kind()) {
    case Formula::Kind::PosLiteral: return Formula::neg(f.atom());
    case Formula::Kind::NegLiteral: return Formula::pos(f.atom());
    case Formula::Kind::And: return Formula::disj(negate(f.left()), negate(f.right()));
    case Formula::Kind::Or: return Formula::conj(negate(f.left()), negate(f.right()));
    case Formula::Kind::Brec: return Formula::cobrec(negate(f.body()));
    case Formula::Kind::Cobrec: return Formula::brec(negate(f.body()));
    }
    return f;
}

namespace {

class FormulaParser {
public:
    explicit FormulaParser(std::string_view text) : text_(text) {}

    Formula parse() {
        Formula f = implication();
        skip_ws();
        if (pos_ != text_.size())
            throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        return f;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(std::string_view tok) {
        skip_ws();
        if (text_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    Formula implication() {
        Formula f = disjunction();
        while (eat("->")) f = Formula::disj(negate(f), disjunction());
        return f;
    }

    Formula disjunction() {
        Formula f = conjunction();
        while (eat("|")) f = Formula::disj(f, conjunction());
        return f;
    }

    Formula conjunction() {
        Formula f = unary();
        while (eat("&")) f = Formula::conj(f, unary());
        return f;
    }

    Formula unary() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of formula", pos_);
        const char c = text_[pos_];
        if (c == '~') { ++pos_; return negate(unary()); }
        if (c == '!') { ++pos_; return Formula::brec(unary()); }
        if (c == '?') { ++pos_; return Formula::cobrec(unary()); }
        if (c == '(') {
            ++pos_;
            Formula f = implication();
            if (!eat(")")) throw ParseError("expected ')'", pos_);
            return f;
        }
        if (std::isupper(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                    text_[pos_] == '\''))
                ++pos_;
            return Formula::pos(std::string(text_.substr(start, pos_ - start)));
        }
        throw ParseError(std::string("unknown token '") + c + "'", pos_);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

// Binding strength for printing: literals and unary prefixes bind tightest.
void print_into(const Formula& f, std::string& out);

void print_child(const Formula& parent, const Formula& child, bool right, std::string& out) {
    bool parens = false;
    if (child.is_binary()) {
        if (parent.is_unary()) parens = true;
        else parens = child.kind() != parent.kind() || right;
    }
    if (parens) out += '(';
    print_into(child, out);
    if (parens) out += ')';
}

void print_into(const Formula& f, std::string& out) {
    switch (f.kind()) {
    case Formula::Kind::PosLiteral: out += f.atom(); return;
    case Formula::Kind::NegLiteral: out += '~'; out += f.atom(); return;
    case Formula::Kind::Brec: out += '!'; print_child(f, f.body(), false, out); return;
    case Formula::Kind::Cobrec: out += '?'; print_child(f, f.body(), false, out); return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
        print_child(f, f.left(), false, out);
        out += f.kind() == Formula::Kind::And ? " & " : " | ";
        print_child(f, f.right(), true, out);
        return;
    }
}

void collect_paths(const Formula& f, std::vector<PathStep>& path, std::vector<SubformulaPath>& out) {
    out.push_back({path, f});
    if (f.is_binary()) {
        path.push_back(PathStep::Left);
        collect_paths(f.left(), path, out);
        path.back() = PathStep::Right;
        collect_paths(f.right(), path, out);
        path.pop_back();
    } else if (f.is_unary()) {
        path.push_back(PathStep::Body);
        collect_paths(f.body(), path, out);
        path.pop_back();
    }
}

} // namespace

Formula parse_formula(std::string_view text) { return FormulaParser(text).parse(); }

std::string print_formula(const Formula& f) {
    std::string out;
    print_into(f, out);
    return out;
}

std::vector<SubformulaPath> subformula_paths(const Formula& f) {
    std::vector<SubformulaPath> out;
    std::vector<PathStep> path;
    collect_paths(f, path, out);
    return out;
}

std::string print_path(const std::vector<PathStep>& path) {
    if (path.empty()) return "ε";
    std::string out;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) out += '.';
        out += path[i] == PathStep::Left ? "0" : path[i] == PathStep::Right ? "1" : "body";
    }
    return out;
}

std::vector<std::string> atoms_of(const Formula& f) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& sp : subformula_paths(f))
        if (sp.formula.is_literal() && seen.insert(sp.formula.atom()).second)
            out.push_back(sp.formula.atom());
    return out;
}

} // namespace cl15
