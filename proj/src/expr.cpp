#include <linident/expr.hpp>

#include <cctype>
#include <sstream>

namespace linident {

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;
    const CompModel& m;

    Parser(const std::string& text, const CompModel& model) : s(text), m(model) {}

    [[noreturn]] void fail(const std::string& why) {
        std::ostringstream os;
        os << "expression error at offset " << pos << ": " << why;
        throw ModelError(ModelErrorCode::ParseError, os.str());
    }

    void skip_ws() {
        while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }

    RationalExpr parse() {
        RationalExpr e = expr();
        skip_ws();
        if (pos != s.size()) fail("trailing input");
        return e;
    }

    RationalExpr expr() {
        RationalExpr acc = term();
        while (true) {
            if (eat('+'))
                acc = add(acc, term(), 1);
            else if (eat('-'))
                acc = add(acc, term(), -1);
            else
                return acc;
        }
    }

    RationalExpr term() {
        RationalExpr acc = factor();
        while (true) {
            if (eat('*')) {
                RationalExpr b = factor();
                acc = {acc.num * b.num, acc.den * b.den};
            } else if (eat('/')) {
                RationalExpr b = factor();
                if (b.num.is_zero()) fail("division by zero");
                acc = {acc.num * b.den, acc.den * b.num};
            } else {
                return acc;
            }
        }
    }

    RationalExpr factor() {
        if (eat('-')) {
            RationalExpr b = factor();
            return {-b.num, b.den};
        }
        return base();
    }

    RationalExpr base() {
        RationalExpr a = atom();
        if (eat('^')) {
            skip_ws();
            if (pos >= s.size() || !std::isdigit((unsigned char)s[pos]))
                fail("exponent must be a nonnegative integer");
            unsigned e = 0;
            while (pos < s.size() && std::isdigit((unsigned char)s[pos])) {
                e = e * 10 + (unsigned)(s[pos] - '0');
                if (e > 64) fail("exponent too large");
                ++pos;
            }
            return {a.num.pow(e), a.den.pow(e)};
        }
        return a;
    }

    RationalExpr atom() {
        skip_ws();
        int np = m.num_params();
        if (eat('(')) {
            RationalExpr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (pos < s.size() && std::isdigit((unsigned char)s[pos])) {
            Int v = 0;
            while (pos < s.size() && std::isdigit((unsigned char)s[pos])) {
                v = v * 10 + (int)(s[pos] - '0');
                ++pos;
            }
            return {MPoly::constant(np, v), MPoly::constant(np, 1)};
        }
        if (pos < s.size() &&
            (std::isalpha((unsigned char)s[pos]) || s[pos] == '_')) {
            size_t start = pos;
            while (pos < s.size() &&
                   (std::isalnum((unsigned char)s[pos]) || s[pos] == '_'))
                ++pos;
            std::string name = s.substr(start, pos - start);
            int ord = m.param_ordinal(name);
            if (ord < 0) fail("unknown parameter '" + name + "'");
            return {MPoly::variable(np, ord), MPoly::constant(np, 1)};
        }
        fail("expected parameter, integer or '('");
    }

    static RationalExpr add(const RationalExpr& a, const RationalExpr& b, int sign) {
        MPoly cross = b.num * a.den;
        if (sign < 0) cross = -cross;
        return {a.num * b.den + cross, a.den * b.den};
    }
};

} // namespace

RationalExpr parse_rational_expr(const std::string& text, const CompModel& m) {
    Parser p(text, m);
    return p.parse();
}

} // namespace linident
