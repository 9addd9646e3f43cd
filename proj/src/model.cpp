#include "onestep/model.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "onestep/errors.hpp"

namespace onestep {

std::string render_rate(const Rate& rate) {
  if (const auto* sym = std::get_if<std::string>(&rate)) return *sym;
  return to_string(std::get<Rational>(rate));
}

std::optional<std::size_t> ReactionNetwork::species_index(std::string_view name) const {
  for (const auto& s : species)
    if (s.name == name) return s.index;
  return std::nullopt;
}

std::optional<std::size_t> ReactionNetwork::parameter_index(std::string_view name) const {
  for (std::size_t i = 0; i < parameters.size(); ++i)
    if (parameters[i].name == name) return i;
  return std::nullopt;
}

std::vector<std::string> ReactionNetwork::species_names() const {
  std::vector<std::string> out;
  for (const auto& s : species) out.push_back(s.name);
  return out;
}

std::vector<std::string> ReactionNetwork::parameter_names() const {
  std::vector<std::string> out;
  for (const auto& p : parameters) out.push_back(p.name);
  return out;
}

std::vector<std::string> ReactionNetwork::symbol_order() const {
  auto out = parameter_names();
  for (const auto& s : species) out.push_back(s.name);
  return out;
}

// ---- Lexing -----------------------------------------------------------------

namespace {

enum class Tok { Ident, Number, Plus, Minus, Arrow, BiArrow, At, Comma, Equals };

struct Token {
  Tok kind;
  std::string text;
  std::size_t column;  // 1-based
};

struct Line {
  std::size_t number;  // 1-based
  std::vector<Token> tokens;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

std::vector<Line> lex(std::string_view text) {
  std::vector<Line> lines;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);

    Line line{line_no, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      char c = raw[i];
      std::size_t col = i + 1;
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (ident_start(c)) {
        std::size_t j = i;
        while (j < raw.size() && ident_char(raw[j])) ++j;
        line.tokens.push_back({Tok::Ident, std::string(raw.substr(i, j - i)), col});
        i = j;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < raw.size() &&
               (std::isdigit(static_cast<unsigned char>(raw[j])) || raw[j] == '.' ||
                raw[j] == '/'))
          ++j;
        line.tokens.push_back({Tok::Number, std::string(raw.substr(i, j - i)), col});
        i = j;
      } else if (raw.substr(i, 3) == "<->") {
        line.tokens.push_back({Tok::BiArrow, "<->", col});
        i += 3;
      } else if (raw.substr(i, 2) == "->") {
        line.tokens.push_back({Tok::Arrow, "->", col});
        i += 2;
      } else if (c == '+' || c == '-' || c == '@' || c == ',' || c == '=') {
        Tok kind = c == '+' ? Tok::Plus
                   : c == '-' ? Tok::Minus
                   : c == '@' ? Tok::At
                   : c == ',' ? Tok::Comma
                              : Tok::Equals;
        line.tokens.push_back({kind, std::string(1, c), col});
        ++i;
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", line_no, col);
      }
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

// ---- Parsing ----------------------------------------------------------------

class ModelParser {
 public:
  ReactionNetwork parse(std::string_view text) {
    auto lines = lex(text);
    // Declarations first so reactions and init lines may precede them.
    for (const auto& line : lines) {
      const auto& kw = line.tokens.front();
      if (kw.kind != Tok::Ident) fail(line, kw, "expected a keyword");
      if (kw.text == "species")
        species_line(line);
      else if (kw.text == "params")
        params_line(line);
      else if (kw.text != "reaction" && kw.text != "init")
        fail(line, kw, "unknown keyword '" + kw.text + "'");
    }
    net_.initial_state.assign(net_.species.size(), std::nullopt);
    for (const auto& line : lines) {
      const auto& kw = line.tokens.front().text;
      if (kw == "reaction")
        reaction_line(line);
      else if (kw == "init")
        init_line(line);
    }
    validate_network(net_);
    return std::move(net_);
  }

 private:
  struct Cursor {
    const Line& line;
    std::size_t pos = 1;  // token 0 is the keyword

    bool done() const { return pos >= line.tokens.size(); }
    const Token* peek() const { return done() ? nullptr : &line.tokens[pos]; }
    bool peek_is(Tok k) const { return !done() && line.tokens[pos].kind == k; }
  };

  [[noreturn]] static void fail(const Line& line, const Token& tok, const std::string& msg) {
    throw ParseError(msg, line.number, tok.column);
  }

  [[noreturn]] static void fail_at_end(const Line& line, const std::string& msg) {
    const auto& last = line.tokens.back();
    throw ParseError(msg, line.number, last.column + last.text.size());
  }

  const Token& expect(Cursor& c, Tok kind, const char* what) {
    if (c.done()) fail_at_end(c.line, std::string("expected ") + what);
    const Token& t = c.line.tokens[c.pos];
    if (t.kind != kind) fail(c.line, t, std::string("expected ") + what + ", found '" + t.text + "'");
    ++c.pos;
    return t;
  }

  Rational signed_rational(Cursor& c) {
    bool negative = false;
    if (c.peek_is(Tok::Minus)) {
      negative = true;
      ++c.pos;
    }
    const Token& t = expect(c, Tok::Number, "a number");
    auto v = parse_rational(t.text);
    if (!v) fail(c.line, t, "malformed number '" + t.text + "'");
    return negative ? Rational(-*v) : *v;
  }

  void check_fresh_name(const Line& line, const Token& t) {
    if (net_.species_index(t.text)) fail(line, t, "duplicate species '" + t.text + "'");
    if (net_.parameter_index(t.text))
      fail(line, t, "duplicate parameter '" + t.text + "'");
  }

  void species_line(const Line& line) {
    Cursor c{line};
    if (c.done()) fail_at_end(line, "expected species name");
    while (!c.done()) {
      const Token& t = expect(c, Tok::Ident, "species name");
      if (net_.species_index(t.text)) fail(line, t, "duplicate species '" + t.text + "'");
      if (net_.parameter_index(t.text))
        fail(line, t, "species '" + t.text + "' clashes with a parameter");
      net_.species.push_back({t.text, net_.species.size()});
    }
  }

  void params_line(const Line& line) {
    Cursor c{line};
    if (c.done()) fail_at_end(line, "expected parameter name");
    while (!c.done()) {
      const Token& t = expect(c, Tok::Ident, "parameter name");
      check_fresh_name(line, t);
      Parameter p{t.text, std::nullopt};
      if (c.peek_is(Tok::Equals)) {
        ++c.pos;
        p.default_value = signed_rational(c);
      }
      net_.parameters.push_back(std::move(p));
    }
  }

  void init_line(const Line& line) {
    Cursor c{line};
    if (c.done()) fail_at_end(line, "expected NAME=VALUE");
    while (!c.done()) {
      const Token& t = expect(c, Tok::Ident, "species name");
      auto idx = net_.species_index(t.text);
      if (!idx) fail(line, t, "unknown symbol '" + t.text + "'");
      expect(c, Tok::Equals, "'='");
      net_.initial_state[*idx] = signed_rational(c);
    }
  }

  std::vector<int> side(Cursor& c) {
    std::vector<int> counts(net_.species.size(), 0);
    if (c.peek_is(Tok::Number) && c.peek()->text == "0" &&
        !(c.pos + 1 < c.line.tokens.size() && c.line.tokens[c.pos + 1].kind == Tok::Ident)) {
      ++c.pos;
      return counts;
    }
    for (;;) {
      int coefficient = 1;
      if (c.peek_is(Tok::Minus))
        fail(c.line, *c.peek(), "negative stoichiometric coefficient");
      if (c.peek_is(Tok::Number)) {
        const Token& t = *c.peek();
        auto v = parse_rational(t.text);
        if (!v) fail(c.line, t, "malformed number '" + t.text + "'");
        if (!is_integer(*v)) fail(c.line, t, "non-integer stoichiometric coefficient '" + t.text + "'");
        if (*v == 0) fail(c.line, t, "stoichiometric coefficient must be positive");
        if (*v > 1000000) fail(c.line, t, "stoichiometric coefficient too large");
        coefficient = v->convert_to<int>();
        ++c.pos;
      }
      const Token& name = expect(c, Tok::Ident, "species name");
      auto idx = net_.species_index(name.text);
      if (!idx) fail(c.line, name, "unknown symbol '" + name.text + "'");
      counts[*idx] += coefficient;
      if (!c.peek_is(Tok::Plus)) return counts;
      ++c.pos;
    }
  }

  Rate rate(Cursor& c) {
    if (c.peek_is(Tok::Minus)) fail(c.line, *c.peek(), "negative rate constant");
    if (c.peek_is(Tok::Number)) {
      const Token& t = *c.peek();
      auto v = parse_rational(t.text);
      if (!v) fail(c.line, t, "malformed number '" + t.text + "'");
      ++c.pos;
      return *v;
    }
    const Token& t = expect(c, Tok::Ident, "rate symbol or number");
    if (net_.species_index(t.text))
      fail(c.line, t, "rate symbol '" + t.text + "' is a species");
    if (!net_.parameter_index(t.text)) net_.parameters.push_back({t.text, std::nullopt});
    return t.text;
  }

  void reaction_line(const Line& line) {
    Cursor c{line};
    Reaction r;
    r.reactants = side(c);
    if (c.done()) fail_at_end(line, "expected '->' or '<->'");
    const Token& arrow = *c.peek();
    if (arrow.kind != Tok::Arrow && arrow.kind != Tok::BiArrow)
      fail(line, arrow, "expected '->' or '<->', found '" + arrow.text + "'");
    ++c.pos;
    r.products = side(c);
    expect(c, Tok::At, "'@'");
    r.k_forward = rate(c);
    if (arrow.kind == Tok::BiArrow) {
      expect(c, Tok::Comma, "',' and a backward rate for '<->'");
      r.k_backward = rate(c);
    } else if (c.peek_is(Tok::Comma)) {
      fail(line, *c.peek(), "'->' takes a single rate; use '<->' for two");
    }
    if (!c.done()) fail(line, *c.peek(), "unexpected '" + c.peek()->text + "'");
    net_.reactions.push_back(std::move(r));
  }

  ReactionNetwork net_;
};

bool valid_identifier(const std::string& s) {
  if (s.empty() || !ident_start(s.front())) return false;
  return std::all_of(s.begin(), s.end(), ident_char);
}

}  // namespace

ReactionNetwork parse_model(std::string_view text) { return ModelParser().parse(text); }

// ---- Validation -------------------------------------------------------------

const ReactionNetwork& validate_network(const ReactionNetwork& net) {
  const std::size_t n = net.species.size();
  std::set<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = net.species[i];
    if (!valid_identifier(s.name))
      throw ValidationError("invalid species name '" + s.name + "'");
    if (s.index != i)
      throw ValidationError("species '" + s.name + "' has index " + std::to_string(s.index) +
                            ", expected " + std::to_string(i));
    if (!names.insert(s.name).second)
      throw ValidationError("duplicate species '" + s.name + "'");
  }
  for (const auto& p : net.parameters) {
    if (!valid_identifier(p.name))
      throw ValidationError("invalid parameter name '" + p.name + "'");
    if (!names.insert(p.name).second)
      throw ValidationError("parameter '" + p.name + "' duplicates another symbol");
  }

  auto check_rate = [&](std::size_t alpha, const Rate& rate) {
    if (const auto* sym = std::get_if<std::string>(&rate)) {
      if (!net.parameter_index(*sym))
        throw ValidationError("reaction " + std::to_string(alpha) + ": rate symbol '" + *sym +
                              "' is not a declared parameter");
    } else if (std::get<Rational>(rate) < 0) {
      throw ValidationError("reaction " + std::to_string(alpha) + ": negative rate constant");
    }
  };

  for (std::size_t alpha = 0; alpha < net.reactions.size(); ++alpha) {
    const auto& r = net.reactions[alpha];
    const std::string where = "reaction " + std::to_string(alpha);
    if (r.reactants.size() != n || r.products.size() != n)
      throw ValidationError(where + ": stoichiometry length differs from species count " +
                            std::to_string(n));
    for (std::size_t i = 0; i < n; ++i) {
      if (r.reactants[i] < 0 || r.products[i] < 0)
        throw ValidationError(where + ": negative stoichiometric coefficient for species '" +
                              net.species[i].name + "'");
    }
    if (r.reactants == r.products) throw ValidationError(where + ": no-op scheme");
    check_rate(alpha, r.k_forward);
    if (r.k_backward) check_rate(alpha, *r.k_backward);
  }

  if (!net.initial_state.empty() && net.initial_state.size() != n)
    throw ValidationError("initial state length differs from species count");
  return net;
}

// ---- Rendering --------------------------------------------------------------

namespace {

std::string render_side(const std::vector<int>& counts, const std::vector<std::string>& species) {
  std::string out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    if (!out.empty()) out += " + ";
    if (counts[i] != 1) out += std::to_string(counts[i]) + " ";
    out += species.at(i);
  }
  return out.empty() ? "0" : out;
}

}  // namespace

std::string render_reaction(const Reaction& r, const std::vector<std::string>& species) {
  std::string out = render_side(r.reactants, species);
  out += r.reversible() ? " <-> " : " -> ";
  out += render_side(r.products, species);
  out += " @ " + render_rate(r.k_forward);
  if (r.k_backward) out += ", " + render_rate(*r.k_backward);
  return out;
}

std::string render_model(const ReactionNetwork& net) {
  std::string out;
  const auto names = net.species_names();
  if (!names.empty()) {
    out += "species";
    for (const auto& s : names) out += " " + s;
    out += "\n";
  }
  if (!net.parameters.empty()) {
    out += "params";
    for (const auto& p : net.parameters) {
      out += " " + p.name;
      if (p.default_value) out += "=" + to_string(*p.default_value);
    }
    out += "\n";
  }
  std::string init;
  for (std::size_t i = 0; i < net.initial_state.size(); ++i)
    if (net.initial_state[i]) init += " " + names[i] + "=" + to_string(*net.initial_state[i]);
  if (!init.empty()) out += "init" + init + "\n";
  for (const auto& r : net.reactions) out += "reaction " + render_reaction(r, names) + "\n";
  return out;
}

}  // namespace onestep
