#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "onestep/rational.hpp"

namespace onestep {

/// Product of symbols raised to positive integer powers. The empty monomial
/// is the constant 1.
class Monomial {
 public:
  Monomial() = default;

  /// `symbol^exponent`; exponent 0 gives the constant monomial.
  static Monomial variable(const std::string& symbol, unsigned exponent = 1);

  const std::map<std::string, unsigned>& exponents() const { return exponents_; }
  unsigned exponent(const std::string& symbol) const;
  unsigned degree() const;
  bool is_constant() const { return exponents_.empty(); }

  Monomial operator*(const Monomial& other) const;

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend bool operator<(const Monomial& a, const Monomial& b) {
    return a.exponents_ < b.exponents_;
  }

 private:
  std::map<std::string, unsigned> exponents_;
};

/// Exact multivariate polynomial with rational coefficients. Zero
/// coefficients are never stored, so equality of canonical forms is
/// equality of polynomials.
class Polynomial {
 public:
  Polynomial() = default;

  static Polynomial constant(const Rational& value);
  static Polynomial variable(const std::string& symbol);
  static Polynomial term(const Rational& coefficient, const Monomial& monomial);

  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::set<std::string> symbols() const;
  unsigned degree() const;
  Rational coefficient(const Monomial& monomial) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& p);
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void add_term(const Monomial& monomial, const Rational& coefficient);

  std::map<Monomial, Rational> terms_;
};

using PolynomialMatrix = std::vector<std::vector<Polynomial>>;

Polynomial poly_add(const Polynomial& p, const Polynomial& q);
Polynomial poly_mul(const Polynomial& p, const Polynomial& q);
Polynomial poly_scale(const Polynomial& p, const Rational& c);

/// x (x-1) ... (x-n+1); the constant 1 when n = 0.
Polynomial falling_factorial(const std::string& symbol, unsigned n);

/// Numeric values for symbols.
using Binding = std::map<std::string, double, std::less<>>;

/// Sums coefficient * prod(value^exponent) over terms in storage order.
/// Throws UnboundSymbolError naming the first free symbol missing from `b`.
double eval_poly(const Polynomial& p, const Binding& b);

/// Ordered list of symbols used to rank monomials when rendering. Symbols
/// absent from the list sort after it, alphabetically.
using SymbolOrder = std::vector<std::string>;

/// Canonical text: graded-lex descending terms, '*' between factors, '^' for
/// powers above one, rational coefficients as p/q, no whitespace.
std::string render_poly(const Polynomial& p, const SymbolOrder& order = {});

/// Reads the canonical syntax back. Also accepts whitespace, decimal
/// literals and parentheses. Throws ParseError with a 1-based column.
Polynomial parse_poly(std::string_view text);

/// Polynomial compiled against a fixed slot layout for fast repeated
/// evaluation. Arithmetic follows eval_poly exactly, so results are
/// bit-identical to it for the same values.
class CompiledPolynomial {
 public:
  CompiledPolynomial() = default;

  /// Throws UnboundSymbolError if a symbol of `p` has no slot.
  CompiledPolynomial(const Polynomial& p, const std::vector<std::string>& slots);

  double operator()(std::span<const double> values) const;

 private:
  struct Term {
    double coefficient;
    std::vector<std::pair<std::size_t, unsigned>> factors;
  };
  std::vector<Term> terms_;
};

}  // namespace onestep
