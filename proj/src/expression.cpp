#include "engel/expression.hpp"

#include <cctype>
#include <vector>

namespace engel {

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
    Tok kind;
    std::string text;
    int line, column;
};

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t count) {
        for (std::size_t k = 0; k < count; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        unsigned char ch = static_cast<unsigned char>(src[i]);
        if (std::isspace(ch)) {
            advance(1);
            continue;
        }
        const int l = line, c = col;
        if (std::isdigit(ch)) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            if (j < src.size() && (src[j] == '.' || std::isalpha(static_cast<unsigned char>(src[j])))) {
                std::size_t k = j;
                while (k < src.size() && (std::isalnum(static_cast<unsigned char>(src[k])) || src[k] == '.' ||
                                          ((src[k] == '+' || src[k] == '-') && (src[k - 1] == 'e' || src[k - 1] == 'E'))))
                    ++k;
                throw ParseError("non-rational literal '" + std::string(src.substr(i, k - i)) +
                                     "' (write fractions as p/q)",
                                 l, c);
            }
            out.push_back({Tok::number, std::string(src.substr(i, j - i)), l, c});
            advance(j - i);
            continue;
        }
        if (ch == '.') throw ParseError("non-rational literal starting with '.'", l, c);
        if (std::isalpha(ch) || ch == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            out.push_back({Tok::ident, std::string(src.substr(i, j - i)), l, c});
            advance(j - i);
            continue;
        }
        Tok kind;
        switch (ch) {
            case '+': kind = Tok::plus; break;
            case '-': kind = Tok::minus; break;
            case '*': kind = Tok::star; break;
            case '/': kind = Tok::slash; break;
            case '^': kind = Tok::caret; break;
            case '(': kind = Tok::lparen; break;
            case ')': kind = Tok::rparen; break;
            default: throw ParseError(std::string("unexpected character '") + static_cast<char>(ch) + "'", l, c);
        }
        out.push_back({kind, std::string(1, static_cast<char>(ch)), l, c});
        advance(1);
    }
    out.push_back({Tok::end, "", line, col});
    return out;
}

const char* describe(const Value& v) {
    if (std::holds_alternative<PolyScalar>(v)) return "a scalar";
    if (std::holds_alternative<VectorField>(v)) return "a vector field";
    return "a form";
}

std::string describe_full(const Value& v) {
    if (const auto* f = std::get_if<ExtForm>(&v)) return "a " + std::to_string(f->degree()) + "-form";
    return describe(v);
}

class Parser {
public:
    Parser(std::string_view src, const ParseContext& ctx) : tokens_(tokenize(src)), ctx_(ctx) {}

    Value parse() {
        if (peek().kind == Tok::end) fail("empty expression", peek());
        Value v = expr();
        if (peek().kind != Tok::end) fail("unexpected '" + peek().text + "'", peek());
        return v;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& take() { return tokens_[pos_++]; }
    [[noreturn]] void fail(const std::string& msg, const Token& at) const { throw ParseError(msg, at.line, at.column); }

    Value expr() {
        Value acc = term();
        while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
            const Token op = take();
            Value rhs = term();
            acc = add(std::move(acc), rhs, op.kind == Tok::minus, op);
        }
        return acc;
    }

    Value term() {
        Value acc = unary();
        while (peek().kind == Tok::star || peek().kind == Tok::slash) {
            const Token op = take();
            Value rhs = unary();
            acc = op.kind == Tok::star ? mul(acc, rhs, op) : div(acc, rhs, op);
        }
        return acc;
    }

    Value unary() {
        if (peek().kind == Tok::minus) {
            take();
            return negate(unary());
        }
        if (peek().kind == Tok::plus) {
            take();
            return unary();
        }
        return power();
    }

    Value power() {
        Value acc = primary();
        while (peek().kind == Tok::caret) {
            const Token op = take();
            Value rhs = primary();
            acc = caret(acc, rhs, op);
        }
        return acc;
    }

    Value primary() {
        const Token tok = take();
        switch (tok.kind) {
            case Tok::number: return PolyScalar::constant(ctx_.chart, Rational(tok.text));
            case Tok::ident: return resolve(tok);
            case Tok::lparen: {
                Value v = expr();
                if (peek().kind != Tok::rparen) fail("expected ')'", peek());
                take();
                return v;
            }
            case Tok::end: fail("unexpected end of expression", tok);
            default: fail("unexpected '" + tok.text + "'", tok);
        }
    }

    Value resolve(const Token& tok) {
        const std::string& name = tok.text;
        if (auto it = ctx_.named.find(name); it != ctx_.named.end()) return it->second;
        if (auto i = ctx_.chart.index_of(name)) return PolyScalar::variable(ctx_.chart, *i);
        if (name.size() > 2 && name[0] == 'd' && name[1] == '_') {
            const std::string coord = name.substr(2);
            if (ctx_.parameter && coord == *ctx_.parameter)
                fail("the family parameter '" + coord + "' has no coordinate field", tok);
            if (auto i = ctx_.chart.index_of(coord)) return VectorField::coordinate(ctx_.chart, *i);
        }
        if (name.size() > 1 && name[0] == 'd') {
            const std::string coord = name.substr(1);
            if (ctx_.parameter && coord == *ctx_.parameter)
                fail("the family parameter '" + coord + "' has no differential", tok);
            if (auto i = ctx_.chart.index_of(coord)) return ExtForm::differential(ctx_.chart, *i);
        }
        fail("unknown identifier '" + name + "'", tok);
    }

    Value negate(const Value& v) {
        return std::visit([](const auto& x) -> Value { return -x; }, v);
    }

    Value add(Value a, const Value& b, bool subtract, const Token& at) {
        if (a.index() != b.index()) fail("cannot combine " + describe_full(a) + " and " + describe_full(b), at);
        if (auto* s = std::get_if<PolyScalar>(&a)) {
            const auto& t = std::get<PolyScalar>(b);
            subtract ? *s -= t : *s += t;
        } else if (auto* v = std::get_if<VectorField>(&a)) {
            const auto& w = std::get<VectorField>(b);
            subtract ? *v -= w : *v += w;
        } else {
            auto& f = std::get<ExtForm>(a);
            const auto& g = std::get<ExtForm>(b);
            if (f.degree() != g.degree()) fail("cannot combine " + describe_full(a) + " and " + describe_full(b), at);
            subtract ? f -= g : f += g;
        }
        return a;
    }

    Value mul(const Value& a, const Value& b, const Token& at) {
        const auto* sa = std::get_if<PolyScalar>(&a);
        const auto* sb = std::get_if<PolyScalar>(&b);
        if (sa && sb) return *sa * *sb;
        if (sa || sb) {
            const PolyScalar& s = sa ? *sa : *sb;
            const Value& other = sa ? b : a;
            if (const auto* v = std::get_if<VectorField>(&other)) return s * *v;
            return s * std::get<ExtForm>(other);
        }
        if (std::holds_alternative<ExtForm>(a) && std::holds_alternative<ExtForm>(b))
            fail("use '^' for the wedge product of forms", at);
        fail("cannot multiply " + describe_full(a) + " by " + describe_full(b), at);
    }

    Value div(const Value& a, const Value& b, const Token& at) {
        const auto* s = std::get_if<PolyScalar>(&b);
        auto c = s ? s->constant_value() : std::nullopt;
        if (!c) fail("division is only allowed by nonzero constants", at);
        if (*c == 0) fail("division by zero", at);
        return mul(a, PolyScalar::constant(ctx_.chart, 1 / *c), at);
    }

    Value caret(const Value& a, const Value& b, const Token& at) {
        if (std::holds_alternative<ExtForm>(a) && std::holds_alternative<ExtForm>(b))
            return wedge(std::get<ExtForm>(a), std::get<ExtForm>(b));
        const auto* base = std::get_if<PolyScalar>(&a);
        const auto* ex = std::get_if<PolyScalar>(&b);
        if (base && ex) {
            auto c = ex->constant_value();
            if (!c || *c < 0 || c->get_den() != 1 || *c > 1024)
                fail("exponents must be non-negative integer constants", at);
            return base->pow(static_cast<unsigned>(c->get_num().get_ui()));
        }
        fail("'^' needs two forms (wedge) or a scalar and an integer exponent", at);
    }

    std::vector<Token> tokens_;
    const ParseContext& ctx_;
    std::size_t pos_ = 0;
};

[[noreturn]] void kind_error(const char* wanted, const Value& got) {
    throw ParseError(std::string("expected ") + wanted + ", got " + describe_full(got), 1, 1);
}

bool is_zero_scalar(const Value& v) {
    const auto* s = std::get_if<PolyScalar>(&v);
    return s && s->is_zero();
}

}  // namespace

Value parse_value(std::string_view source, const ParseContext& context, ExpectedKind hint, int form_degree) {
    Value v = Parser(source, context).parse();
    switch (hint) {
        case ExpectedKind::any: return v;
        case ExpectedKind::scalar:
            if (!std::holds_alternative<PolyScalar>(v)) kind_error("a scalar", v);
            return v;
        case ExpectedKind::vector_field:
            if (is_zero_scalar(v)) return VectorField(context.chart);
            if (!std::holds_alternative<VectorField>(v)) kind_error("a vector field", v);
            return v;
        case ExpectedKind::form:
            if (form_degree == 0 && std::holds_alternative<PolyScalar>(v))
                return ExtForm::scalar(std::get<PolyScalar>(v));
            if (is_zero_scalar(v)) return ExtForm(context.chart, form_degree);
            if (const auto* f = std::get_if<ExtForm>(&v); !f || f->degree() != form_degree)
                kind_error(("a " + std::to_string(form_degree) + "-form").c_str(), v);
            return v;
    }
    return v;
}

VectorField parse_vector_field(std::string_view source, const ParseContext& context) {
    return std::get<VectorField>(parse_value(source, context, ExpectedKind::vector_field));
}

ExtForm parse_form(std::string_view source, const ParseContext& context, int degree) {
    return std::get<ExtForm>(parse_value(source, context, ExpectedKind::form, degree));
}

PolyScalar parse_scalar(std::string_view source, const ParseContext& context) {
    return std::get<PolyScalar>(parse_value(source, context, ExpectedKind::scalar));
}

std::string print(const PolyScalar& p) { return to_string(p); }

namespace {

// Joins coefficient*basis terms; single-term coefficients carry their sign out.
std::string print_terms(const std::vector<std::pair<const PolyScalar*, std::string>>& terms) {
    if (terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [c, basis] : terms) {
        bool negative = false;
        std::string coeff;
        if (c->terms().size() == 1) {
            const auto& [e, q] = *c->terms().begin();
            negative = q < 0;
            PolyScalar mag = negative ? -*c : *c;
            if (mag.constant_value() != std::optional<Rational>(Rational(1))) coeff = to_string(mag) + "*";
        } else {
            coeff = "(" + to_string(*c) + ")*";
        }
        if (first)
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        first = false;
        out += coeff + basis;
    }
    return out;
}

}  // namespace

std::string print(const VectorField& v) {
    std::vector<std::pair<const PolyScalar*, std::string>> terms;
    for (std::size_t i = 0; i < v.chart().dim(); ++i)
        if (!v[i].is_zero()) terms.emplace_back(&v[i], "d_" + v.chart().name(i));
    return print_terms(terms);
}

std::string print(const ExtForm& a) {
    if (a.degree() == 0) {
        auto it = a.terms().find(FormIndex{0});
        return it == a.terms().end() ? "0" : to_string(it->second);
    }
    std::vector<std::pair<const PolyScalar*, std::string>> terms;
    for (const auto& [index, c] : a.terms()) {
        std::string basis;
        for (auto i : index.indices()) {
            if (!basis.empty()) basis += "^";
            basis += "d" + a.chart().name(i);
        }
        terms.emplace_back(&c, basis);
    }
    return print_terms(terms);
}

std::string print(const Value& v) {
    return std::visit([](const auto& x) { return print(x); }, v);
}

const char* kind_name(const Value& v) {
    if (std::holds_alternative<PolyScalar>(v)) return "scalar";
    if (std::holds_alternative<VectorField>(v)) return "vector_field";
    return std::get<ExtForm>(v).degree() == 1 ? "one_form" : "form";
}

}  // namespace engel
