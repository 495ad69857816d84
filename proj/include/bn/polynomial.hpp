#pragma once

#include "bn/scalar.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace bn {

struct BnError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exponent multi-index; size equals the variable count of the polynomial.
using Exponents = std::vector<unsigned>;

// Multivariate polynomial over GaussianRational in variables x1..xd.
// Invariant: no stored zero coefficients.
class Polynomial {
  public:
    explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}

    static Polynomial constant(std::size_t nvars, Scalar c);
    static Polynomial variable(std::size_t nvars, std::size_t i);  // x_{i+1}, 0-based i

    std::size_t nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Scalar constant_term() const;
    unsigned total_degree() const;

    const std::map<Exponents, Scalar>& terms() const { return terms_; }

    void set_coeff(const Exponents& e, Scalar c);
    Scalar coeff(const Exponents& e) const;

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(const Scalar& s) const;

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    // Partial derivative with respect to x_{i+1}.
    Polynomial derivative(std::size_t i) const;

    Polynomial conj() const;
    bool is_real() const;

    Scalar eval(const std::vector<Scalar>& point) const;

    // Prints in the instance-file grammar (real polynomials only round-trip;
    // Gaussian coefficients render with an 'i' marker for reports).
    std::string to_string() const;

  private:
    std::size_t nvars_;
    std::map<Exponents, Scalar> terms_;
};

// Parses the grammar
//   expr := ['-'] term (('+'|'-') term)* ; term := factor ('*' factor)* ;
//   factor := rational | var | factor '^' uint | '(' expr ')' ;
//   var := 'x' uint ; rational := int ('/' uint)?
// Throws BnError with a character position on syntax errors and on variable
// indices outside 1..d.
Polynomial parse_polynomial(const std::string& text, std::size_t d);

}  // namespace bn
