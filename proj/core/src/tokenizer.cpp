#include "sheetmetrics/errors.hpp"
#include "sheetmetrics/formula.hpp"

#include <cctype>

namespace sheetmetrics {

namespace {

bool is_alpha(char c) noexcept { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) noexcept { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_space(char c) noexcept { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
bool is_word_char(char c) noexcept {
    return is_alpha(c) || is_digit(c) || c == '_' || c == '.' || c == '$';
}

bool iequals(std::string_view a, std::string_view b) noexcept {
    return sheet_names_equal(a, b);
}

// "$A$1", "b12". nullopt when the text is not shaped like a cell; throws when
// it is shaped like one but lies outside the grid.
std::optional<RefEndpoint> match_cell(std::string_view text, std::size_t offset) {
    RefEndpoint endpoint;
    std::size_t i = 0;
    if (i < text.size() && text[i] == '$') {
        endpoint.absolute_column = true;
        ++i;
    }
    const std::size_t letters_begin = i;
    while (i < text.size() && is_alpha(text[i])) {
        ++i;
    }
    const std::size_t letter_count = i - letters_begin;
    if (letter_count == 0) {
        return std::nullopt;
    }
    if (i < text.size() && text[i] == '$') {
        endpoint.absolute_row = true;
        ++i;
    }
    const std::size_t digits_begin = i;
    while (i < text.size() && is_digit(text[i])) {
        ++i;
    }
    if (i == digits_begin || i != text.size()) {
        return std::nullopt;
    }
    if (letter_count > 3) {
        throw ParseError("column out of range in reference '" + std::string(text) + "'", offset);
    }

    std::int64_t column = 0;
    for (std::size_t k = letters_begin; k < letters_begin + letter_count; ++k) {
        column = column * 26 + (std::toupper(static_cast<unsigned char>(text[k])) - 'A' + 1);
    }
    std::int64_t row = 0;
    for (std::size_t k = digits_begin; k < text.size(); ++k) {
        row = row * 10 + (text[k] - '0');
        if (row > kMaxRow) {
            break;
        }
    }
    if (column > kMaxColumn || row < 1 || row > kMaxRow) {
        throw ParseError("reference '" + std::string(text) + "' is outside the grid", offset);
    }
    endpoint.point = {static_cast<std::int32_t>(column), static_cast<std::int32_t>(row)};
    return endpoint;
}

class Lexer {
public:
    explicit Lexer(std::string_view source) : src_(source) {}

    std::vector<Token> run() {
        std::vector<Token> tokens;
        while (true) {
            while (pos_ < src_.size() && is_space(src_[pos_])) {
                ++pos_;
            }
            if (pos_ >= src_.size()) {
                tokens.push_back(Token{TokenKind::End, "", src_.size(), 0, {}, {}});
                return tokens;
            }
            tokens.push_back(next());
        }
    }

private:
    Token make(TokenKind kind, std::size_t begin) const {
        Token t;
        t.kind = kind;
        t.offset = begin;
        t.length = pos_ - begin;
        t.text = std::string(src_.substr(begin, t.length));
        return t;
    }

    char peek(std::size_t ahead = 0) const noexcept {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    bool next_non_space_is(char c) const noexcept {
        std::size_t i = pos_;
        while (i < src_.size() && is_space(src_[i])) {
            ++i;
        }
        return i < src_.size() && src_[i] == c;
    }

    Token next() {
        const std::size_t begin = pos_;
        const char c = src_[pos_];

        if (c == '"') {
            return string_literal();
        }
        if (is_digit(c) || (c == '.' && is_digit(peek(1)))) {
            return number();
        }
        if (c == '\'') {
            return quoted_reference();
        }
        if (is_alpha(c) || c == '_' || c == '$') {
            return word();
        }

        ++pos_;
        switch (c) {
        case '(':
            return make(TokenKind::LeftParen, begin);
        case ')':
            return make(TokenKind::RightParen, begin);
        case ',':
            return make(TokenKind::Comma, begin);
        case ':':
            return make(TokenKind::Colon, begin);
        case '+':
        case '-':
        case '*':
        case '/':
        case '^':
        case '&':
        case '%':
        case '=':
            return make(TokenKind::Operator, begin);
        case '<':
            if (peek() == '=' || peek() == '>') {
                ++pos_;
            }
            return make(TokenKind::Operator, begin);
        case '>':
            if (peek() == '=') {
                ++pos_;
            }
            return make(TokenKind::Operator, begin);
        default:
            throw ParseError(std::string("unexpected character '") + c + "'", begin);
        }
    }

    Token string_literal() {
        const std::size_t begin = pos_++;
        std::string value;
        while (true) {
            if (pos_ >= src_.size()) {
                throw ParseError("unterminated string literal", begin);
            }
            if (src_[pos_] == '"') {
                if (peek(1) == '"') {
                    value.push_back('"');
                    pos_ += 2;
                    continue;
                }
                ++pos_;
                break;
            }
            value.push_back(src_[pos_++]);
        }
        Token t = make(TokenKind::Text, begin);
        t.text = std::move(value);
        return t;
    }

    Token number() {
        const std::size_t begin = pos_;
        while (is_digit(peek())) {
            ++pos_;
        }
        if (peek() == '.') {
            ++pos_;
            while (is_digit(peek())) {
                ++pos_;
            }
        }
        if ((peek() == 'e' || peek() == 'E') &&
            (is_digit(peek(1)) || ((peek(1) == '+' || peek(1) == '-') && is_digit(peek(2))))) {
            pos_ += 2;
            while (is_digit(peek())) {
                ++pos_;
            }
        }
        if (is_alpha(peek()) || peek() == '_') {
            throw ParseError("malformed number", begin);
        }
        return make(TokenKind::Number, begin);
    }

    // Cell part after "Sheet!".
    Token finish_reference(std::size_t begin, std::string sheet) {
        const std::size_t cell_begin = pos_;
        while (pos_ < src_.size() && is_word_char(src_[pos_])) {
            ++pos_;
        }
        const auto cell_text = src_.substr(cell_begin, pos_ - cell_begin);
        auto endpoint = match_cell(cell_text, cell_begin);
        if (!endpoint) {
            throw ParseError("expected a cell after sheet qualifier", cell_begin);
        }
        Token t = make(TokenKind::Reference, begin);
        t.sheet = std::move(sheet);
        t.cell = *endpoint;
        return t;
    }

    Token quoted_reference() {
        const std::size_t begin = pos_++;
        std::string sheet;
        while (true) {
            if (pos_ >= src_.size()) {
                throw ParseError("unterminated sheet name", begin);
            }
            if (src_[pos_] == '\'') {
                if (peek(1) == '\'') {
                    sheet.push_back('\'');
                    pos_ += 2;
                    continue;
                }
                ++pos_;
                break;
            }
            sheet.push_back(src_[pos_++]);
        }
        if (sheet.empty()) {
            throw ParseError("empty sheet name", begin);
        }
        if (peek() != '!') {
            throw ParseError("expected '!' after quoted sheet name", pos_);
        }
        ++pos_;
        return finish_reference(begin, std::move(sheet));
    }

    Token word() {
        const std::size_t begin = pos_;
        while (pos_ < src_.size() && is_word_char(src_[pos_])) {
            ++pos_;
        }
        const auto text = src_.substr(begin, pos_ - begin);

        if (peek() == '!') {
            if (text.find('$') != std::string_view::npos) {
                throw ParseError("invalid sheet name '" + std::string(text) + "'", begin);
            }
            ++pos_;
            return finish_reference(begin, std::string(text));
        }
        if (next_non_space_is('(')) {
            if (text.find('$') != std::string_view::npos || !is_alpha(text.front())) {
                throw ParseError("invalid function name '" + std::string(text) + "'", begin);
            }
            return make(TokenKind::Function, begin);
        }
        if (iequals(text, "TRUE") || iequals(text, "FALSE")) {
            return make(TokenKind::Boolean, begin);
        }
        if (auto endpoint = match_cell(text, begin)) {
            Token t = make(TokenKind::Reference, begin);
            t.cell = *endpoint;
            return t;
        }
        throw ParseError("unknown name '" + std::string(text) + "'", begin);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) {
    return Lexer(source).run();
}

}  // namespace sheetmetrics
