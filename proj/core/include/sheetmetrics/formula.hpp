#pragma once

#include "sheetmetrics/address.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sheetmetrics {

// ---------------------------------------------------------------------------
// Tokens

enum class TokenKind {
    Number,
    Text,       // string literal, text() holds the unescaped value
    Boolean,
    Reference,  // one cell, optionally sheet-qualified
    Function,   // identifier immediately followed by "("
    Operator,   // + - * / ^ & % = <> < > <= >=
    LeftParen,
    RightParen,
    Comma,
    Colon,
    End,
};

// One endpoint of a reference as written in the formula.
struct RefEndpoint {
    GridPoint point;
    bool absolute_column = false;
    bool absolute_row = false;

    friend bool operator==(const RefEndpoint&, const RefEndpoint&) = default;
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;     // verbatim source slice (unescaped value for Text)
    std::size_t offset = 0;
    std::size_t length = 0;
    // Reference tokens only.
    std::optional<std::string> sheet;
    RefEndpoint cell;
};

// Throws ParseError on an unterminated string or an unrecognized token.
// The returned list always ends with an End token.
std::vector<Token> tokenize(std::string_view source);

// ---------------------------------------------------------------------------
// Syntax tree

// Unresolved reference target: a single cell or a rectangle, endpoints
// normalized so start <= end componentwise.
struct RefTarget {
    std::optional<std::string> sheet;
    RefEndpoint start;
    RefEndpoint end;
    bool is_range = false;

    friend bool operator==(const RefTarget&, const RefTarget&) = default;
};

enum class NodeKind {
    Number,
    Text,
    Boolean,
    CellRef,
    RangeRef,
    Call,
    Missing,  // empty function argument, e.g. the third argument of IF(a,b,)
    Unary,    // "-", "+" (prefix) or "%" (postfix)
    Binary,   // one operator over two or more operands
};

struct AstNode {
    NodeKind kind = NodeKind::Missing;
    // Operator symbol, upper-cased function name, literal source text.
    std::string text;
    double number = 0.0;
    bool boolean = false;
    RefTarget ref;
    std::vector<AstNode> children;
    // Source offset; excluded from equality.
    std::size_t offset = 0;

    bool is_leaf() const noexcept { return children.empty() && kind != NodeKind::Call; }

    friend bool operator==(const AstNode& a, const AstNode& b);
};

struct FormulaAst {
    AstNode root;

    friend bool operator==(const FormulaAst&, const FormulaAst&) = default;
};

// Precedence, highest first: ":", "%", unary "-"/"+", "^", "* /", "+ -", "&",
// comparisons. Binary levels associate left. Parentheses only group; they
// never produce a node. A run of "+" not broken by parentheses or another
// operator becomes one node with all summands as children, so A+B+C is as
// deep as SUM(A,B,C).
//
// Throws ParseError carrying the character offset of the problem.
FormulaAst parse_formula(std::string_view source);

// Leaves (and empty arguments) have height 0; every other node is one more
// than its tallest child. A call with no arguments has height 1.
std::size_t ast_height(const FormulaAst& ast);
std::size_t ast_node_count(const FormulaAst& ast);

// Upper-cased names of every call, nested ones included, in document order.
std::vector<std::string> function_calls(const FormulaAst& ast);

struct RefOccurrence {
    RefTarget target;
    std::size_t position = 0;  // 0-based order of appearance
    std::size_t offset = 0;    // source offset

    friend bool operator==(const RefOccurrence& a, const RefOccurrence& b) {
        return a.target == b.target && a.position == b.position;
    }
};

// One entry per syntactic cell or range reference, in document order.
// Repeated references are kept.
std::vector<RefOccurrence> reference_occurrences(const FormulaAst& ast);

// Renders a reference the way it would appear in a formula.
std::string render_ref(const RefTarget& target);

}  // namespace sheetmetrics
