#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace cl15 {

/// Formulas in negation normal form. Negation exists only on literals, so
/// shapes such as ~(A & B) or ~~A are unrepresentable.
class Formula {
public:
    enum class Kind { PosLiteral, NegLiteral, And, Or, Brec, Cobrec };

    static Formula pos(std::string atom);
    static Formula neg(std::string atom);
    static Formula conj(Formula left, Formula right);
    static Formula disj(Formula left, Formula right);
    static Formula brec(Formula body);
    static Formula cobrec(Formula body);

    Kind kind() const noexcept { return node_->kind; }
    bool is_literal() const noexcept {
        return kind() == Kind::PosLiteral || kind() == Kind::NegLiteral;
    }
    bool is_binary() const noexcept { return kind() == Kind::And || kind() == Kind::Or; }
    bool is_unary() const noexcept { return kind() == Kind::Brec || kind() == Kind::Cobrec; }

    /// Atom name; only meaningful for literals.
    const std::string& atom() const noexcept { return node_->atom; }
    const Formula& left() const noexcept { return node_->children[0]; }
    const Formula& right() const noexcept { return node_->children[1]; }
    const Formula& body() const noexcept { return node_->children[0]; }

    std::size_t size() const noexcept { return node_->size; }

    friend bool operator==(const Formula& a, const Formula& b);
    friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

private:
    struct Node {
        Kind kind;
        std::string atom;
        std::vector<Formula> children;
        std::size_t size = 1;
    };
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static Formula make(Kind kind, std::string atom, std::vector<Formula> children);

    std::shared_ptr<const Node> node_;
};

/// Parses the surface grammar:
///
///   formula := impl
///   impl    := disj ( "->" disj )*          left-assoc, F -> G is ~F | G
///   disj    := conj ( "|" conj )*
///   conj    := unary ( "&" unary )*
///   unary   := ("~" | "!" | "?") unary | atom | "(" formula ")"
///   atom    := [A-Z][A-Za-z0-9_']*
///
/// `!` is branching recurrence, `?` branching corecurrence. Negation is pushed
/// to the atoms while parsing. Throws ParseError.
Formula parse_formula(std::string_view text);

/// De Morgan dual: the NNF of the negation of `f`.
Formula negate(const Formula& f);

/// Canonical text; parse_formula(print_formula(f)) == f.
std::string print_formula(const Formula& f);

enum class PathStep { Left, Right, Body };

struct SubformulaPath {
    std::vector<PathStep> path;
    Formula formula;
};

/// All positions of `f` in preorder, with their root-to-node step sequences.
std::vector<SubformulaPath> subformula_paths(const Formula& f);

/// "ε" for the root, otherwise steps joined with '.' ("0", "1", "body").
std::string print_path(const std::vector<PathStep>& path);

/// Distinct atom names in order of first occurrence.
std::vector<std::string> atoms_of(const Formula& f);

} // namespace cl15
