#include "onestep/polynomial.hpp"

#include <algorithm>
#include <cctype>

#include "onestep/errors.hpp"

namespace onestep {

// ---- Monomial ---------------------------------------------------------------

Monomial Monomial::variable(const std::string& symbol, unsigned exponent) {
  Monomial m;
  if (exponent > 0) m.exponents_.emplace(symbol, exponent);
  return m;
}

unsigned Monomial::exponent(const std::string& symbol) const {
  auto it = exponents_.find(symbol);
  return it == exponents_.end() ? 0 : it->second;
}

unsigned Monomial::degree() const {
  unsigned d = 0;
  for (const auto& [_, e] : exponents_) d += e;
  return d;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial out = *this;
  for (const auto& [sym, e] : other.exponents_) out.exponents_[sym] += e;
  return out;
}

// ---- Polynomial -------------------------------------------------------------

Polynomial Polynomial::constant(const Rational& value) {
  return term(value, Monomial{});
}

Polynomial Polynomial::variable(const std::string& symbol) {
  return term(1, Monomial::variable(symbol));
}

Polynomial Polynomial::term(const Rational& coefficient, const Monomial& monomial) {
  Polynomial p;
  p.add_term(monomial, coefficient);
  return p;
}

std::set<std::string> Polynomial::symbols() const {
  std::set<std::string> out;
  for (const auto& [m, _] : terms_)
    for (const auto& [sym, e] : m.exponents()) out.insert(sym);
  return out;
}

unsigned Polynomial::degree() const {
  unsigned d = 0;
  for (const auto& [m, _] : terms_) d = std::max(d, m.degree());
  return d;
}

Rational Polynomial::coefficient(const Monomial& monomial) const {
  auto it = terms_.find(monomial);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Monomial& monomial, const Rational& coefficient) {
  if (coefficient == 0) return;
  auto [it, inserted] = terms_.try_emplace(monomial, coefficient);
  if (inserted) return;
  it->second += coefficient;
  if (it->second == 0) terms_.erase(it);
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& other) {
  *this = *this * other;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
  return out;
}

Polynomial operator-(const Polynomial& p) {
  Polynomial out;
  for (const auto& [m, c] : p.terms_) out.terms_.emplace(m, -c);
  return out;
}

Polynomial poly_add(const Polynomial& p, const Polynomial& q) { return p + q; }
Polynomial poly_mul(const Polynomial& p, const Polynomial& q) { return p * q; }
Polynomial poly_scale(const Polynomial& p, const Rational& c) {
  return p * Polynomial::constant(c);
}

Polynomial falling_factorial(const std::string& symbol, unsigned n) {
  Polynomial out = Polynomial::constant(1);
  const Polynomial x = Polynomial::variable(symbol);
  for (unsigned j = 0; j < n; ++j) out *= x - Polynomial::constant(j);
  return out;
}

// ---- Evaluation -------------------------------------------------------------

namespace {

inline double ipow(double v, unsigned e) {
  double r = v;
  for (unsigned i = 1; i < e; ++i) r *= v;
  return r;
}

}  // namespace

double eval_poly(const Polynomial& p, const Binding& b) {
  double sum = 0.0;
  for (const auto& [m, c] : p.terms()) {
    double term = to_double(c);
    for (const auto& [sym, e] : m.exponents()) {
      auto it = b.find(sym);
      if (it == b.end()) throw UnboundSymbolError(sym);
      term *= ipow(it->second, e);
    }
    sum += term;
  }
  return sum;
}

CompiledPolynomial::CompiledPolynomial(const Polynomial& p,
                                       const std::vector<std::string>& slots) {
  for (const auto& [m, c] : p.terms()) {
    Term t{to_double(c), {}};
    for (const auto& [sym, e] : m.exponents()) {
      auto it = std::find(slots.begin(), slots.end(), sym);
      if (it == slots.end()) throw UnboundSymbolError(sym);
      t.factors.emplace_back(static_cast<std::size_t>(it - slots.begin()), e);
    }
    terms_.push_back(std::move(t));
  }
}

double CompiledPolynomial::operator()(std::span<const double> values) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double term = t.coefficient;
    for (const auto& [slot, e] : t.factors) term *= ipow(values[slot], e);
    sum += term;
  }
  return sum;
}

// ---- Rendering --------------------------------------------------------------

std::string render_poly(const Polynomial& p, const SymbolOrder& order) {
  if (p.is_zero()) return "0";

  // Rank every symbol: listed ones first, the rest alphabetically after.
  std::map<std::string, std::size_t> rank;
  for (std::size_t i = 0; i < order.size(); ++i) rank.try_emplace(order[i], i);
  std::size_t next = order.size();
  for (const auto& sym : p.symbols())  // std::set iterates alphabetically
    if (rank.try_emplace(sym, next).second) ++next;

  struct Entry {
    const Monomial* monomial;
    const Rational* coefficient;
    std::vector<unsigned> ranked_exponents;
    std::vector<std::pair<std::size_t, const std::string*>> factors;
  };
  std::vector<Entry> entries;
  for (const auto& [m, c] : p.terms()) {
    Entry e{&m, &c, std::vector<unsigned>(next, 0), {}};
    for (const auto& [sym, ex] : m.exponents()) {
      e.ranked_exponents[rank[sym]] = ex;
      e.factors.emplace_back(rank[sym], &sym);
    }
    std::sort(e.factors.begin(), e.factors.end());
    entries.push_back(std::move(e));
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    auto da = a.monomial->degree(), db = b.monomial->degree();
    if (da != db) return da > db;
    return a.ranked_exponents > b.ranked_exponents;
  });

  std::string out;
  bool first = true;
  for (const auto& e : entries) {
    const Rational& c = *e.coefficient;
    const bool negative = c < 0;
    if (negative)
      out += '-';
    else if (!first)
      out += '+';
    first = false;

    const Rational magnitude = negative ? Rational(-c) : c;
    if (e.monomial->is_constant()) {
      out += to_string(magnitude);
      continue;
    }
    if (magnitude != 1) out += to_string(magnitude) + "*";
    bool first_factor = true;
    for (const auto& [_, sym] : e.factors) {
      if (!first_factor) out += '*';
      first_factor = false;
      out += *sym;
      unsigned ex = e.monomial->exponent(*sym);
      if (ex > 1) out += "^" + std::to_string(ex);
    }
  }
  return out;
}

// ---- Parsing ----------------------------------------------------------------

namespace {

class PolyParser {
 public:
  explicit PolyParser(std::string_view text) : text_(text) {}

  Polynomial parse() {
    skip_ws();
    if (pos_ == text_.size()) fail("empty expression");
    Polynomial p = expression();
    skip_ws();
    if (pos_ != text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, 0, pos_ + 1);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expression() {
    Polynomial p = term();
    for (;;) {
      if (accept('+'))
        p += term();
      else if (accept('-'))
        p -= term();
      else
        return p;
    }
  }

  Polynomial term() {
    Polynomial p = factor();
    for (;;) {
      if (accept('*')) {
        p *= factor();
      } else if (accept('/')) {
        std::size_t at = pos_;
        Polynomial d = factor();
        if (d.is_zero() || d.degree() != 0) {
          pos_ = at;
          fail("division by a non-constant or zero expression");
        }
        p = poly_scale(p, 1 / d.coefficient(Monomial{}));
      } else {
        return p;
      }
    }
  }

  Polynomial factor() {
    if (accept('-')) return -factor();
    if (accept('+')) return factor();
    Polynomial base = primary();
    if (accept('^')) {
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      if (start == pos_) fail("expected integer exponent");
      unsigned long e = std::stoul(std::string(text_.substr(start, pos_ - start)));
      Polynomial out = Polynomial::constant(1);
      for (unsigned long i = 0; i < e; ++i) out *= base;
      return out;
    }
    return base;
  }

  Polynomial primary() {
    skip_ws();
    if (pos_ == text_.size()) fail("unexpected end of expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expression();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
        ++pos_;
      auto value = parse_rational(text_.substr(start, pos_ - start));
      if (!value) {
        pos_ = start;
        fail("malformed number");
      }
      return Polynomial::constant(*value);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      return Polynomial::variable(std::string(text_.substr(start, pos_ - start)));
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_poly(std::string_view text) { return PolyParser(text).parse(); }

}  // namespace onestep
