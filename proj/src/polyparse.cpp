#include <cctype>
#include <string>

#include <json.hpp>

#include "rodrigues/errors.hpp"
#include "rodrigues/exactpoly.hpp"

namespace rodrigues {

namespace {

// Recursive descent over
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary | implicit-product)*
//   unary  := '-' unary | '+' unary | power
//   power  := atom ('^' integer)?
//   atom   := number | 'z' | 'x' | '(' expr ')'
class ExprParser {
public:
    explicit ExprParser(std::string_view s) : src_(s) {}

    ExactPoly parse() {
        ExactPoly p = expr();
        skip_space();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("polynomial '" + std::string(src_) + "': " + what + " at offset " + std::to_string(pos_));
    }

    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    char peek() {
        skip_space();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    bool starts_atom(char c) const {
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'z' || c == 'x' || c == '(';
    }

    ExactPoly expr() {
        ExactPoly acc = term();
        for (;;) {
            char c = peek();
            if (c == '+') {
                ++pos_;
                acc += term();
            } else if (c == '-') {
                ++pos_;
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    ExactPoly term() {
        ExactPoly acc = unary();
        for (;;) {
            char c = peek();
            if (c == '*') {
                ++pos_;
                acc = acc * unary();
            } else if (c == '/') {
                ++pos_;
                std::size_t at = pos_;
                ExactPoly d = unary();
                if (d.degree() != 0) {
                    pos_ = at;
                    fail("division by a non-constant or zero");
                }
                acc *= BigRational(1 / d.leading());
            } else if (starts_atom(c)) {
                acc = acc * power();
            } else {
                return acc;
            }
        }
    }

    ExactPoly unary() {
        char c = peek();
        if (c == '-') {
            ++pos_;
            return -unary();
        }
        if (c == '+') {
            ++pos_;
            return unary();
        }
        return power();
    }

    ExactPoly power() {
        ExactPoly base = atom();
        if (peek() == '^') {
            ++pos_;
            skip_space();
            std::size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            if (start == pos_) fail("expected a nonnegative integer exponent");
            if (pos_ - start > 5) fail("exponent too large");
            base = poly_pow(base, static_cast<unsigned>(std::stoul(std::string(src_.substr(start, pos_ - start)))));
        }
        return base;
    }

    ExactPoly atom() {
        char c = peek();
        if (c == 'z' || c == 'x') {
            ++pos_;
            return ExactPoly::monomial(1, 1);
        }
        if (c == '(') {
            ++pos_;
            ExactPoly inner = expr();
            if (peek() != ')') fail("expected ')'");
            ++pos_;
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
                ++pos_;
            // Scientific exponent only when followed by a digit or sign+digit.
            if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                std::size_t q = pos_ + 1;
                if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
                if (q < src_.size() && std::isdigit(static_cast<unsigned char>(src_[q]))) {
                    pos_ = q;
                    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
                }
            }
            return ExactPoly::constant(parse_rational(src_.substr(start, pos_ - start)));
        }
        if (c == '\0') fail("unexpected end of input");
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

ExactPoly parse_list(std::string_view s) {
    std::vector<BigRational> coeffs;
    std::string_view body = s.substr(1);
    auto close = body.rfind(']');
    if (close == std::string_view::npos) throw ParseError("coefficient list missing ']'");
    for (char c : body.substr(close + 1))
        if (!std::isspace(static_cast<unsigned char>(c))) throw ParseError("trailing text after ']'");
    body = body.substr(0, close);
    std::size_t start = 0;
    bool any = body.find_first_not_of(" \t\n") != std::string_view::npos;
    if (!any) return {};
    while (true) {
        auto comma = body.find(',', start);
        std::string_view item = body.substr(start, comma == std::string_view::npos ? body.size() - start : comma - start);
        // Allow quoted entries as produced by the JSON writer.
        std::string cleaned;
        for (char c : item)
            if (c != '"') cleaned += c;
        coeffs.push_back(parse_rational(cleaned));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return ExactPoly(std::move(coeffs));
}

} // namespace

ExactPoly parse_poly(std::string_view text) {
    auto first = text.find_first_not_of(" \t\n\r");
    if (first == std::string_view::npos) throw ParseError("empty polynomial");
    std::string_view s = text.substr(first);
    if (s[0] == '[') return parse_list(s);
    if (s[0] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(s);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("polynomial JSON: ") + e.what());
        }
        if (!j.contains("coeffs") || !j["coeffs"].is_array()) throw ParseError("polynomial JSON needs a \"coeffs\" array");
        std::vector<BigRational> coeffs;
        for (const auto& c : j["coeffs"]) {
            if (c.is_string())
                coeffs.push_back(parse_rational(c.get<std::string>()));
            else if (c.is_number_integer())
                coeffs.emplace_back(c.get<long>());
            else
                throw ParseError("polynomial JSON coefficients must be strings or integers");
        }
        return ExactPoly(std::move(coeffs));
    }
    return ExprParser(s).parse();
}

} // namespace rodrigues
