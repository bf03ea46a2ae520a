#include "sheetmetrics/formula.hpp"

#include "sheetmetrics/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <utility>

namespace sheetmetrics {

bool operator==(const AstNode& a, const AstNode& b) {
    return a.kind == b.kind && a.text == b.text && a.number == b.number &&
           a.boolean == b.boolean && a.ref == b.ref && a.children == b.children;
}

namespace {

constexpr std::size_t kMaxNesting = 256;

std::string to_upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view source) : tokens_(tokenize(source)) {}

    FormulaAst parse() {
        if (peek().kind == TokenKind::End) {
            throw ParseError("empty formula", 0);
        }
        AstNode root = comparison();
        const Token& t = peek();
        if (t.kind == TokenKind::RightParen) {
            throw ParseError("unbalanced ')'", t.offset);
        }
        if (t.kind != TokenKind::End) {
            throw ParseError("unexpected '" + t.text + "'", t.offset);
        }
        return FormulaAst{std::move(root)};
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& advance() { return tokens_[pos_++]; }

    bool at_operator(std::initializer_list<std::string_view> ops) const {
        const Token& t = peek();
        return t.kind == TokenKind::Operator &&
               std::find(ops.begin(), ops.end(), t.text) != ops.end();
    }

    [[noreturn]] void unexpected(const Token& t) const {
        if (t.kind == TokenKind::End) {
            throw ParseError("unexpected end of formula", t.offset);
        }
        throw ParseError("unexpected '" + t.text + "'", t.offset);
    }

    static AstNode binary(const Token& op, AstNode lhs, AstNode rhs) {
        AstNode node;
        node.kind = NodeKind::Binary;
        node.text = op.text;
        node.offset = op.offset;
        node.children.push_back(std::move(lhs));
        node.children.push_back(std::move(rhs));
        return node;
    }

    template <typename Next>
    AstNode left_assoc(std::initializer_list<std::string_view> ops, Next next) {
        AstNode lhs = (this->*next)();
        while (at_operator(ops)) {
            const Token& op = advance();
            AstNode rhs = (this->*next)();
            lhs = binary(op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    AstNode comparison() {
        if (++depth_ > kMaxNesting) {
            throw ParseError("formula nested too deeply", peek().offset);
        }
        AstNode node = left_assoc({"=", "<>", "<", ">", "<=", ">="}, &Parser::concatenation);
        --depth_;
        return node;
    }

    AstNode concatenation() { return left_assoc({"&"}, &Parser::additive); }

    AstNode additive() {
        AstNode lhs = multiplicative();
        bool open_sum = false;  // lhs is a "+" node built in this loop
        while (at_operator({"+", "-"})) {
            const Token& op = advance();
            AstNode rhs = multiplicative();
            if (op.text == "+" && open_sum) {
                lhs.children.push_back(std::move(rhs));
                continue;
            }
            lhs = binary(op, std::move(lhs), std::move(rhs));
            open_sum = op.text == "+";
        }
        return lhs;
    }

    AstNode multiplicative() { return left_assoc({"*", "/"}, &Parser::power); }

    AstNode power() { return left_assoc({"^"}, &Parser::prefix); }

    AstNode prefix() {
        if (at_operator({"-", "+"})) {
            const Token& op = advance();
            if (++depth_ > kMaxNesting) {
                throw ParseError("formula nested too deeply", op.offset);
            }
            AstNode node;
            node.kind = NodeKind::Unary;
            node.text = op.text;
            node.offset = op.offset;
            node.children.push_back(prefix());
            --depth_;
            return node;
        }
        return postfix();
    }

    AstNode postfix() {
        AstNode node = primary();
        while (at_operator({"%"})) {
            const Token& op = advance();
            AstNode wrapped;
            wrapped.kind = NodeKind::Unary;
            wrapped.text = op.text;
            wrapped.offset = op.offset;
            wrapped.children.push_back(std::move(node));
            node = std::move(wrapped);
        }
        return node;
    }

    AstNode primary() {
        const Token& t = peek();
        switch (t.kind) {
        case TokenKind::Number: {
            advance();
            AstNode node;
            node.kind = NodeKind::Number;
            node.text = t.text;
            node.number = std::strtod(t.text.c_str(), nullptr);
            node.offset = t.offset;
            return node;
        }
        case TokenKind::Text: {
            advance();
            AstNode node;
            node.kind = NodeKind::Text;
            node.text = t.text;
            node.offset = t.offset;
            return node;
        }
        case TokenKind::Boolean: {
            advance();
            AstNode node;
            node.kind = NodeKind::Boolean;
            node.text = to_upper(t.text);
            node.boolean = node.text == "TRUE";
            node.offset = t.offset;
            return node;
        }
        case TokenKind::Reference:
            return reference();
        case TokenKind::Function:
            return call();
        case TokenKind::LeftParen: {
            advance();
            AstNode inner = comparison();
            if (peek().kind != TokenKind::RightParen) {
                if (peek().kind == TokenKind::End) {
                    throw ParseError("missing ')'", peek().offset);
                }
                unexpected(peek());
            }
            advance();
            return inner;
        }
        default:
            unexpected(t);
        }
    }

    AstNode reference() {
        const Token& first = advance();
        AstNode node;
        node.offset = first.offset;
        node.ref.sheet = first.sheet;
        node.ref.start = first.cell;
        node.ref.end = first.cell;
        if (peek().kind != TokenKind::Colon) {
            node.kind = NodeKind::CellRef;
            node.text = first.text;
            return node;
        }
        advance();
        const Token& second = peek();
        if (second.kind != TokenKind::Reference) {
            unexpected(second);
        }
        advance();
        if (first.sheet && second.sheet && !sheet_names_equal(*first.sheet, *second.sheet)) {
            throw ParseError("a range must stay on one sheet", second.offset);
        }
        if (!node.ref.sheet) {
            node.ref.sheet = second.sheet;
        }
        RefEndpoint a = first.cell;
        RefEndpoint b = second.cell;
        if (a.point.column > b.point.column) {
            std::swap(a.point.column, b.point.column);
            std::swap(a.absolute_column, b.absolute_column);
        }
        if (a.point.row > b.point.row) {
            std::swap(a.point.row, b.point.row);
            std::swap(a.absolute_row, b.absolute_row);
        }
        node.kind = NodeKind::RangeRef;
        node.ref.start = a;
        node.ref.end = b;
        node.ref.is_range = true;
        node.text = first.text + ":" + second.text;
        return node;
    }

    AstNode call() {
        const Token& name = advance();
        AstNode node;
        node.kind = NodeKind::Call;
        node.text = to_upper(name.text);
        node.offset = name.offset;
        if (peek().kind != TokenKind::LeftParen) {
            unexpected(peek());
        }
        advance();
        if (++depth_ > kMaxNesting) {
            throw ParseError("formula nested too deeply", name.offset);
        }
        if (peek().kind == TokenKind::RightParen) {
            advance();
            --depth_;
            return node;
        }
        while (true) {
            if (peek().kind == TokenKind::Comma || peek().kind == TokenKind::RightParen) {
                AstNode missing;
                missing.kind = NodeKind::Missing;
                missing.offset = peek().offset;
                node.children.push_back(std::move(missing));
            } else {
                node.children.push_back(comparison());
            }
            if (peek().kind == TokenKind::Comma) {
                advance();
                continue;
            }
            if (peek().kind == TokenKind::RightParen) {
                advance();
                break;
            }
            if (peek().kind == TokenKind::End) {
                throw ParseError("missing ')' after arguments of " + node.text, peek().offset);
            }
            unexpected(peek());
        }
        --depth_;
        return node;
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::size_t depth_ = 0;
};

std::size_t height_of(const AstNode& node) {
    if (node.kind == NodeKind::Missing || node.is_leaf()) {
        return 0;
    }
    std::size_t tallest = 0;
    for (const auto& child : node.children) {
        tallest = std::max(tallest, height_of(child));
    }
    return tallest + 1;
}

std::size_t count_nodes(const AstNode& node) {
    std::size_t n = 1;
    for (const auto& child : node.children) {
        n += count_nodes(child);
    }
    return n;
}

template <typename Fn>
void preorder(const AstNode& node, Fn& fn) {
    fn(node);
    for (const auto& child : node.children) {
        preorder(child, fn);
    }
}

}  // namespace

FormulaAst parse_formula(std::string_view source) {
    return Parser(source).parse();
}

std::size_t ast_height(const FormulaAst& ast) {
    return height_of(ast.root);
}

std::size_t ast_node_count(const FormulaAst& ast) {
    return count_nodes(ast.root);
}

std::vector<std::string> function_calls(const FormulaAst& ast) {
    std::vector<std::string> names;
    auto visit = [&](const AstNode& node) {
        if (node.kind == NodeKind::Call) {
            names.push_back(node.text);
        }
    };
    preorder(ast.root, visit);
    return names;
}

std::vector<RefOccurrence> reference_occurrences(const FormulaAst& ast) {
    std::vector<RefOccurrence> found;
    auto visit = [&](const AstNode& node) {
        if (node.kind == NodeKind::CellRef || node.kind == NodeKind::RangeRef) {
            found.push_back(RefOccurrence{node.ref, found.size(), node.offset});
        }
    };
    preorder(ast.root, visit);
    return found;
}

std::string render_ref(const RefTarget& target) {
    auto endpoint = [](const RefEndpoint& e) {
        std::string out;
        if (e.absolute_column) {
            out += '$';
        }
        out += column_index_to_name(e.point.column);
        if (e.absolute_row) {
            out += '$';
        }
        out += std::to_string(e.point.row);
        return out;
    };
    std::string out;
    if (target.sheet) {
        out = render_sheet_name(*target.sheet) + "!";
    }
    out += endpoint(target.start);
    if (target.is_range) {
        out += ":" + endpoint(target.end);
    }
    return out;
}

}  // namespace sheetmetrics
