#include "plstatic/reader.hpp"

#include <cctype>
#include <string>

namespace plstatic {

namespace {

bool isSymbolChar(char c) {
    static const std::string symbols = "+-*/\\^<>=~:.?@#&$";
    return symbols.find(c) != std::string::npos;
}

bool isSolo(char c) {
    return c == '!' || c == ';';
}

class Tokenizer {
public:
    Tokenizer(const std::string& text, std::string file)
        : text_(text), file_(std::move(file)) {}

    std::vector<Token> run() {
        std::vector<Token> tokens;
        bool layout = true;
        while (true) {
            layout |= skipLayout();
            if (atEnd()) {
                Token eof;
                eof.kind = TokenKind::Eof;
                eof.layoutBefore = layout;
                eof.loc = loc();
                tokens.push_back(eof);
                return tokens;
            }
            Token token = next();
            token.layoutBefore = layout;
            layout = false;
            tokens.push_back(std::move(token));
        }
    }

private:
    bool atEnd() const { return pos_ >= text_.size(); }
    char peek(size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }
    char advance() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return c;
    }

    SourceLoc loc() const { return SourceLoc{file_, line_, column_}; }

    bool skipLayout() {
        bool skipped = false;
        while (!atEnd()) {
            char c = peek();
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
                skipped = true;
            } else if (c == '%') {
                while (!atEnd() && peek() != '\n') advance();
                skipped = true;
            } else if (c == '/' && peek(1) == '*') {
                SourceLoc start = loc();
                advance();
                advance();
                bool closed = false;
                while (!atEnd()) {
                    if (peek() == '*' && peek(1) == '/') {
                        advance();
                        advance();
                        closed = true;
                        break;
                    }
                    advance();
                }
                if (!closed) throw ReaderError(start, "unterminated block comment");
                skipped = true;
            } else {
                break;
            }
        }
        return skipped;
    }

    Token next() {
        SourceLoc start = loc();
        char c = peek();

        if (std::isdigit(static_cast<unsigned char>(c))) return number(start);
        if (c == '_' || std::isupper(static_cast<unsigned char>(c))) return variable(start);
        if (std::islower(static_cast<unsigned char>(c))) return plainAtom(start);
        if (c == '\'') return quotedAtom(start);
        if (c == '"') return stringLiteral(start);
        if (c == '(' || c == ')' || c == '[' || c == ']' || c == '{' || c == '}' || c == ',' ||
            c == '|') {
            advance();
            return punct(std::string(1, c), start);
        }
        if (isSolo(c)) {
            advance();
            return atomToken(std::string(1, c), start, false);
        }
        if (isSymbolChar(c)) return symbolicAtom(start);

        throw ReaderError(start, std::string("unexpected character '") + c + "'");
    }

    Token punct(std::string text, SourceLoc start) {
        Token t;
        t.kind = TokenKind::Punct;
        t.text = std::move(text);
        t.loc = std::move(start);
        return t;
    }

    Token atomToken(std::string text, SourceLoc start, bool quoted) {
        Token t;
        t.kind = TokenKind::Atom;
        t.text = std::move(text);
        t.quoted = quoted;
        t.loc = std::move(start);
        return t;
    }

    Token number(SourceLoc start) {
        // char code literal 0'c
        if (peek() == '0' && peek(1) == '\'') {
            advance();
            advance();
            long long code = charCode(start);
            Token t;
            t.kind = TokenKind::Int;
            t.intValue = code;
            t.loc = std::move(start);
            return t;
        }
        if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'o' || peek(1) == 'b')) {
            advance();
            char base = advance();
            int radix = base == 'x' ? 16 : base == 'o' ? 8 : 2;
            std::string digits;
            while (!atEnd() && std::isalnum(static_cast<unsigned char>(peek()))) digits += advance();
            if (digits.empty()) throw ReaderError(start, "missing digits after radix prefix");
            Token t;
            t.kind = TokenKind::Int;
            t.intValue = std::stoll(digits, nullptr, radix);
            t.loc = std::move(start);
            return t;
        }

        std::string digits;
        while (!atEnd() && std::isdigit(static_cast<unsigned char>(peek()))) digits += advance();
        bool isFloat = false;
        if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            isFloat = true;
            digits += advance();
            while (!atEnd() && std::isdigit(static_cast<unsigned char>(peek()))) digits += advance();
        }
        if ((peek() == 'e' || peek() == 'E') &&
            (std::isdigit(static_cast<unsigned char>(peek(1))) ||
             ((peek(1) == '+' || peek(1) == '-') &&
              std::isdigit(static_cast<unsigned char>(peek(2)))))) {
            isFloat = true;
            digits += advance();
            if (peek() == '+' || peek() == '-') digits += advance();
            while (!atEnd() && std::isdigit(static_cast<unsigned char>(peek()))) digits += advance();
        }
        Token t;
        t.loc = std::move(start);
        if (isFloat) {
            t.kind = TokenKind::Float;
            t.floatValue = std::stod(digits);
        } else {
            t.kind = TokenKind::Int;
            t.intValue = std::stoll(digits);
        }
        return t;
    }

    long long charCode(const SourceLoc& start) {
        if (atEnd()) throw ReaderError(start, "unterminated character code literal");
        char c = advance();
        if (c == '\\') return escapeChar(start);
        if (c == '\'') {
            // 0''' and 0'' both denote the quote character
            if (peek() == '\'') advance();
            return '\'';
        }
        return static_cast<unsigned char>(c);
    }

    long long escapeChar(const SourceLoc& start) {
        if (atEnd()) throw ReaderError(start, "unterminated escape sequence");
        char c = advance();
        switch (c) {
            case 'n': return '\n';
            case 't': return '\t';
            case 'r': return '\r';
            case 'a': return '\a';
            case 'b': return '\b';
            case 'f': return '\f';
            case 'v': return '\v';
            case '0': return '\0';
            case '\\': return '\\';
            case '\'': return '\'';
            case '"': return '"';
            case '`': return '`';
            case 'x': {
                std::string hex;
                while (!atEnd() && std::isxdigit(static_cast<unsigned char>(peek()))) hex += advance();
                if (peek() == '\\') advance();
                if (hex.empty()) throw ReaderError(start, "invalid hex escape");
                return std::stoll(hex, nullptr, 16);
            }
            default:
                if (std::isdigit(static_cast<unsigned char>(c))) {
                    std::string oct(1, c);
                    while (!atEnd() && peek() >= '0' && peek() <= '7') oct += advance();
                    if (peek() == '\\') advance();
                    return std::stoll(oct, nullptr, 8);
                }
                throw ReaderError(start, std::string("unknown escape '\\") + c + "'");
        }
    }

    Token quotedAtom(SourceLoc start) {
        std::string text = quotedText('\'', start);
        return atomToken(std::move(text), std::move(start), true);
    }

    Token stringLiteral(SourceLoc start) {
        std::string text = quotedText('"', start);
        Token t;
        t.kind = TokenKind::Str;
        t.text = std::move(text);
        t.loc = std::move(start);
        return t;
    }

    std::string quotedText(char quote, const SourceLoc& start) {
        advance();  // opening quote
        std::string text;
        while (true) {
            if (atEnd()) throw ReaderError(start, "unterminated quoted token");
            char c = advance();
            if (c == quote) {
                if (peek() == quote) {
                    text += quote;
                    advance();
                    continue;
                }
                return text;
            }
            if (c == '\\') {
                if (peek() == '\n') {  // line continuation
                    advance();
                    continue;
                }
                text += static_cast<char>(escapeChar(start));
                continue;
            }
            text += c;
        }
    }

    Token plainAtom(SourceLoc start) {
        std::string text;
        while (!atEnd() &&
               (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
            text += advance();
        }
        return atomToken(std::move(text), std::move(start), false);
    }

    Token variable(SourceLoc start) {
        std::string text;
        while (!atEnd() &&
               (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
            text += advance();
        }
        Token t;
        t.kind = TokenKind::Var;
        t.text = std::move(text);
        t.loc = std::move(start);
        return t;
    }

    Token symbolicAtom(SourceLoc start) {
        // A '.' followed by layout, '%' or end of input terminates a clause.
        if (peek() == '.') {
            char after = peek(1);
            if (after == '\0' || std::isspace(static_cast<unsigned char>(after)) || after == '%') {
                advance();
                Token t;
                t.kind = TokenKind::End;
                t.text = ".";
                t.loc = std::move(start);
                return t;
            }
        }
        std::string text;
        while (!atEnd() && isSymbolChar(peek())) text += advance();
        return atomToken(std::move(text), std::move(start), false);
    }

    const std::string& text_;
    std::string file_;
    size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

}  // namespace

std::vector<Token> tokenize(const std::string& text, const std::string& file) {
    return Tokenizer(text, file).run();
}

}  // namespace plstatic
