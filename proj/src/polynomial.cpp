#include "bn/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace bn {

Polynomial Polynomial::constant(std::size_t nvars, Scalar c) {
    Polynomial p(nvars);
    if (!c.is_zero()) p.terms_[Exponents(nvars, 0)] = std::move(c);
    return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t i) {
    Polynomial p(nvars);
    Exponents e(nvars, 0);
    e.at(i) = 1;
    p.terms_[e] = Scalar(1);
    return p;
}

bool Polynomial::is_constant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && terms_.begin()->first == Exponents(nvars_, 0);
}

Scalar Polynomial::constant_term() const { return coeff(Exponents(nvars_, 0)); }

unsigned Polynomial::total_degree() const {
    unsigned deg = 0;
    for (const auto& [e, c] : terms_) {
        unsigned s = 0;
        for (unsigned k : e) s += k;
        deg = std::max(deg, s);
    }
    return deg;
}

void Polynomial::set_coeff(const Exponents& e, Scalar c) {
    if (e.size() != nvars_) throw BnError("exponent arity mismatch");
    if (c.is_zero()) terms_.erase(e);
    else terms_[e] = std::move(c);
}

Scalar Polynomial::coeff(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Scalar(0) : it->second;
}

Polynomial Polynomial::operator-() const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) r.terms_[e] = -c;
    return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (nvars_ != o.nvars_) throw BnError("polynomial arity mismatch");
    for (const auto& [e, c] : o.terms_) {
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_[e] = c;
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    if (nvars_ != o.nvars_) throw BnError("polynomial arity mismatch");
    for (const auto& [e, c] : o.terms_) {
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_[e] = -c;
        } else {
            it->second -= c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    return *this;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (nvars_ != o.nvars_) throw BnError("polynomial arity mismatch");
    Polynomial r(nvars_);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            Exponents e(nvars_);
            for (std::size_t k = 0; k < nvars_; ++k) e[k] = ea[k] + eb[k];
            auto it = r.terms_.find(e);
            if (it == r.terms_.end()) {
                Scalar c = ca * cb;
                if (!c.is_zero()) r.terms_[std::move(e)] = std::move(c);
            } else {
                it->second += ca * cb;
                if (it->second.is_zero()) r.terms_.erase(it);
            }
        }
    }
    return r;
}

Polynomial Polynomial::operator*(const Scalar& s) const {
    Polynomial r(nvars_);
    if (s.is_zero()) return r;
    for (const auto& [e, c] : terms_) r.terms_[e] = c * s;
    return r;
}

Polynomial Polynomial::derivative(std::size_t i) const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[i] == 0) continue;
        Exponents e2 = e;
        e2[i] -= 1;
        r.terms_[e2] = c * Scalar(static_cast<long>(e[i]));
    }
    return r;
}

Polynomial Polynomial::conj() const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) r.terms_[e] = c.conj();
    return r;
}

bool Polynomial::is_real() const {
    for (const auto& [e, c] : terms_)
        if (!c.is_real()) return false;
    return true;
}

Scalar Polynomial::eval(const std::vector<Scalar>& point) const {
    if (point.size() != nvars_) throw BnError("evaluation point arity mismatch");
    Scalar total(0);
    for (const auto& [e, c] : terms_) {
        Scalar m = c;
        for (std::size_t k = 0; k < nvars_; ++k)
            for (unsigned j = 0; j < e[k]; ++j) m *= point[k];
        total += m;
    }
    return total;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // iterate in reverse so low variable indices / high degrees print stably
    for (const auto& [e, c] : terms_) {
        Scalar coef = c;
        if (first) {
            if (coef.is_real() && coef.re < 0) {
                os << "-";
                coef = -coef;
            }
        } else {
            if (coef.is_real() && coef.re < 0) {
                os << " - ";
                coef = -coef;
            } else {
                os << " + ";
            }
        }
        first = false;
        bool has_vars = false;
        for (unsigned k : e)
            if (k > 0) has_vars = true;
        if (!has_vars) {
            os << bn::to_string(coef);
        } else {
            bool printed = false;
            if (!(coef == Scalar(1))) {
                os << bn::to_string(coef);
                printed = true;
            }
            for (std::size_t k = 0; k < nvars_; ++k) {
                if (e[k] == 0) continue;
                if (printed) os << "*";
                os << "x" << (k + 1);
                if (e[k] > 1) os << "^" << e[k];
                printed = true;
            }
        }
    }
    return os.str();
}

// ---------------------------------------------------------------- parser

namespace {

struct Parser {
    const std::string& s;
    std::size_t pos = 0;
    std::size_t d;

    [[noreturn]] void fail(const std::string& msg) const {
        throw BnError("syntax error at position " + std::to_string(pos) + ": " + msg);
    }

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
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

    Integer parse_uint() {
        skip_ws();
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) fail("expected digit");
        Integer v = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            v = v * 10 + (s[pos] - '0');
            ++pos;
        }
        return v;
    }

    Polynomial parse_expr() {
        bool neg = eat('-');
        Polynomial p = parse_term();
        if (neg) p = -p;
        while (true) {
            if (eat('+')) p += parse_term();
            else if (eat('-')) p -= parse_term();
            else break;
        }
        return p;
    }

    Polynomial parse_term() {
        Polynomial p = parse_factor();
        while (eat('*')) p = p * parse_factor();
        return p;
    }

    Polynomial parse_factor() {
        Polynomial p = parse_primary();
        while (eat('^')) {
            Integer e = parse_uint();
            Polynomial r = Polynomial::constant(d, Scalar(1));
            for (Integer k = 0; k < e; ++k) r = r * p;
            p = std::move(r);
        }
        return p;
    }

    Polynomial parse_primary() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of input");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            Polynomial p = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return p;
        }
        if (c == 'x') {
            ++pos;
            std::size_t at = pos;
            Integer idx = parse_uint();
            if (idx < 1 || idx > Integer(d)) {
                pos = at;
                fail("unknown variable x" + idx.str() + " (d=" + std::to_string(d) + ")");
            }
            return Polynomial::variable(d, static_cast<std::size_t>(idx) - 1);
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Integer num = parse_uint();
            if (eat('/')) {
                Integer den = parse_uint();
                if (den == 0) fail("zero denominator");
                return Polynomial::constant(d, Scalar(Rational(num, den)));
            }
            return Polynomial::constant(d, Scalar(Rational(num)));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) fail(std::string("unknown variable name '") + c + "'");
        fail(std::string("unexpected character '") + c + "'");
    }
};

}  // namespace

Polynomial parse_polynomial(const std::string& text, std::size_t d) {
    Parser p{text, 0, d};
    Polynomial r = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return r;
}

}  // namespace bn
