#include "sheetmetrics/address.hpp"
#include "sheetmetrics/errors.hpp"
#include "sheetmetrics/formula.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace sheetmetrics;

namespace {

std::string reference_formula(int id) {
    const auto& row = testing_support::kPublishedMetrics[static_cast<std::size_t>(id - 1)];
    const auto wb = testing_support::load_formula_fixture(id);
    return *wb.find_cell(parse_address(row.location, row.sheet))->formula();
}

std::size_t height_of(std::string_view source) {
    return ast_height(parse_formula(source));
}

std::size_t error_offset(std::string_view source) {
    try {
        parse_formula(source);
    } catch (const ParseError& e) {
        return e.offset();
    }
    FAIL("no parse error for " << source);
    return 0;
}

std::vector<std::string> rendered_refs(std::string_view source) {
    std::vector<std::string> out;
    for (const auto& occ : reference_occurrences(parse_formula(source))) {
        out.push_back(render_ref(occ.target));
    }
    return out;
}

}  // namespace

TEST_CASE("tokenize classifies references, functions and literals") {
    const auto tokens = tokenize("SUM($A$1:B2, 'My Sheet'!C3, \"a\"\"b\", TRUE) >= 1.5e2%");
    std::vector<TokenKind> kinds;
    for (const auto& t : tokens) {
        kinds.push_back(t.kind);
    }
    CHECK(kinds == std::vector<TokenKind>{TokenKind::Function, TokenKind::LeftParen,
                                          TokenKind::Reference, TokenKind::Colon,
                                          TokenKind::Reference, TokenKind::Comma,
                                          TokenKind::Reference, TokenKind::Comma,
                                          TokenKind::Text, TokenKind::Comma,
                                          TokenKind::Boolean, TokenKind::RightParen,
                                          TokenKind::Operator, TokenKind::Number,
                                          TokenKind::Operator, TokenKind::End});
    CHECK(tokens[2].cell.absolute_column);
    CHECK(tokens[2].cell.absolute_row);
    CHECK(tokens[6].sheet == std::optional<std::string>("My Sheet"));
    CHECK(tokens[8].text == "a\"b");
    CHECK(tokens[12].text == ">=");
}

TEST_CASE("tokenize rejects unterminated strings and stray characters") {
    CHECK_THROWS_AS(tokenize("\"abc"), ParseError);
    CHECK_THROWS_AS(tokenize("A1 # 2"), ParseError);
    try {
        tokenize("A1+\"abc");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 3);
    }
}

TEST_CASE("parse_formula builds the expected shapes") {
    const auto sum = parse_formula("G11+G15");
    REQUIRE(sum.root.kind == NodeKind::Binary);
    CHECK(sum.root.text == "+");
    REQUIRE(sum.root.children.size() == 2);
    CHECK(sum.root.children[0].kind == NodeKind::CellRef);
    CHECK(sum.root.children[1].kind == NodeKind::CellRef);

    const auto iff = parse_formula("IF(B11>0, LN(D11),)");
    REQUIRE(iff.root.kind == NodeKind::Call);
    CHECK(iff.root.text == "IF");
    REQUIRE(iff.root.children.size() == 3);
    CHECK(iff.root.children[0].text == ">");
    CHECK(iff.root.children[1].text == "LN");
    CHECK(iff.root.children[2].kind == NodeKind::Missing);
}

TEST_CASE("operator precedence and associativity") {
    // 1-2-3 is (1-2)-3
    const auto sub = parse_formula("1-2-3");
    REQUIRE(sub.root.children.size() == 2);
    CHECK(sub.root.children[0].text == "-");
    // 2^3^2 is (2^3)^2
    CHECK(parse_formula("2^3^2").root.children[0].text == "^");
    // -2^2 is (-2)^2
    const auto neg = parse_formula("-2^2");
    CHECK(neg.root.text == "^");
    CHECK(neg.root.children[0].kind == NodeKind::Unary);
    // * binds tighter than +, & looser than +, comparison loosest
    const auto mixed = parse_formula("A1+B1*C1&\"x\"=D1");
    CHECK(mixed.root.text == "=");
    CHECK(mixed.root.children[0].text == "&");
    CHECK(mixed.root.children[0].children[0].text == "+");
    CHECK(mixed.root.children[0].children[0].children[1].text == "*");
    // % is postfix and binds tighter than unary minus
    const auto pct = parse_formula("-A1%");
    CHECK(pct.root.text == "-");
    CHECK(pct.root.children[0].text == "%");
}

TEST_CASE("plus runs collapse into one node, parentheses and other operators break them") {
    const auto flat = parse_formula("C23+C33+C44+C45");
    CHECK(flat.root.children.size() == 4);
    CHECK(height_of("C23+C33+C44+C45") == 1);
    CHECK(height_of("(C23+C33)+C44") == 2);
    CHECK(height_of("A1+B1-C1+D1") == 3);
    CHECK(height_of("A1*B1*C1") == 2);
}

TEST_CASE("ast_height examples") {
    CHECK(height_of("G11+G15") == 1);
    CHECK(height_of("((C4+C5)+C24)+(E15-E14)-(C15-C14)") == 4);
    CHECK(height_of("A1") == 0);
    CHECK(height_of("IF(B11>0, LN(D11),)") == 2);
    CHECK(height_of("SUM(N31:N37)") == 1);
    CHECK(height_of("PI()") == 1);
    CHECK(height_of("\"text\"") == 0);
}

TEST_CASE("ast_height of every reference formula") {
    const std::size_t expected[] = {4, 4, 3, 1, 1, 1, 1, 1, 1, 1, 1, 1, 2, 9, 5};
    for (int id = 1; id <= 15; ++id) {
        CAPTURE(id);
        CHECK(height_of(reference_formula(id)) == expected[id - 1]);
    }
}

TEST_CASE("function_calls examples") {
    using V = std::vector<std::string>;
    CHECK(function_calls(parse_formula("SUM(N31:N37)")) == V{"SUM"});
    CHECK(function_calls(parse_formula("IF(B11>0, LN(D11),)")) == V{"IF", "LN"});
    CHECK(function_calls(parse_formula("1+2")).empty());
    CHECK(function_calls(parse_formula("sum(a1, Sum(b1))")) == V{"SUM", "SUM"});
}

TEST_CASE("reference_occurrences examples") {
    using V = std::vector<std::string>;
    CHECK(rendered_refs(reference_formula(1)) == V{"C4", "C5", "C24", "E15", "E14", "C15", "C14"});
    CHECK(rendered_refs("SUM(C54:C94)") == V{"C54:C94"});
    CHECK(rendered_refs("SUM(C94:C54)") == V{"C54:C94"});

    const auto f14 = rendered_refs(reference_formula(14));
    CHECK(f14.size() == 18);
    for (const char* repeated : {"G36", "G34", "C34", "C36"}) {
        CHECK(std::count(f14.begin(), f14.end(), repeated) > 1);
    }

    const auto occ = reference_occurrences(parse_formula("A1+A1+'x y'!B2:$C$3"));
    REQUIRE(occ.size() == 3);
    CHECK(occ[0].position == 0);
    CHECK(occ[2].position == 2);
    CHECK(occ[2].target.is_range);
    CHECK(occ[2].target.sheet == std::optional<std::string>("x y"));
    CHECK(occ[2].offset == 6);
}

TEST_CASE("qualified ranges") {
    CHECK(rendered_refs("SUM(S!A1:S!B2)") == std::vector<std::string>{"S!A1:B2"});
    CHECK(rendered_refs("SUM(S!A1:B2)") == std::vector<std::string>{"S!A1:B2"});
    CHECK_THROWS_AS(parse_formula("SUM(S!A1:T!B2)"), ParseError);
}

TEST_CASE("parse errors report offsets") {
    CHECK(error_offset("SUM(A1:") == 7);
    CHECK(error_offset("A1+") == 3);
    CHECK(error_offset("(A1") == 3);
    CHECK(error_offset("A1)") == 2);
    CHECK(error_offset("") == 0);
    CHECK(error_offset("A1 B1") == 3);
    CHECK(error_offset("1:2") == 1);
    CHECK_THROWS_AS(parse_formula(std::string(300, '(') + "1" + std::string(300, ')')),
                    ParseError);
}

TEST_CASE("all fifteen reference formulas parse") {
    for (int id = 1; id <= 15; ++id) {
        CAPTURE(id);
        CHECK_NOTHROW(parse_formula(reference_formula(id)));
    }
}

TEST_CASE("generated formulas: grouping and whitespace are invisible") {
    std::mt19937 rng(20240611);
    for (int k = 0; k < 500; ++k) {
        const auto tokens = testing_support::random_formula_tokens(rng, 6);
        const auto plain = testing_support::join_tokens(tokens);
        CAPTURE(plain);
        const auto ast = parse_formula(plain);

        const auto wrapped = parse_formula("((" + plain + "))");
        CHECK(wrapped == ast);

        const auto spaced_text = testing_support::join_tokens(tokens, &rng);
        const auto spaced = parse_formula(spaced_text);
        CHECK(spaced == ast);

        CHECK(ast_height(ast) <= ast_node_count(ast));
        CHECK(function_calls(wrapped) == function_calls(ast));
        CHECK(reference_occurrences(spaced) == reference_occurrences(ast));
    }
}
