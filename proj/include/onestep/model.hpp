#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "onestep/rational.hpp"

namespace onestep {

struct Species {
  std::string name;
  std::size_t index = 0;

  friend bool operator==(const Species&, const Species&) = default;
};

struct Parameter {
  std::string name;
  std::optional<Rational> default_value;

  friend bool operator==(const Parameter&, const Parameter&) = default;
};

/// Rate constant: a parameter symbol or a nonnegative literal.
using Rate = std::variant<std::string, Rational>;

std::string render_rate(const Rate& rate);

/// One interaction scheme  n.x  ->  m.x  (or  <->  when reversible).
struct Reaction {
  std::vector<int> reactants;  ///< row of n, one entry per species
  std::vector<int> products;   ///< row of m
  Rate k_forward;
  /// Present only for reversible schemes; absent means k- = 0.
  std::optional<Rate> k_backward;

  bool reversible() const { return k_backward.has_value(); }

  friend bool operator==(const Reaction&, const Reaction&) = default;
};

struct ReactionNetwork {
  std::vector<Species> species;
  std::vector<Parameter> parameters;
  std::vector<Reaction> reactions;
  /// Empty, or one optional value per species.
  std::vector<std::optional<Rational>> initial_state;

  std::optional<std::size_t> species_index(std::string_view name) const;
  std::optional<std::size_t> parameter_index(std::string_view name) const;
  std::vector<std::string> species_names() const;
  std::vector<std::string> parameter_names() const;
  /// Parameters in declaration order followed by species in declaration
  /// order; the tie-break order for rendering polynomials.
  std::vector<std::string> symbol_order() const;

  friend bool operator==(const ReactionNetwork&, const ReactionNetwork&) = default;
};

/// Parses the line-oriented model language:
///
///   species X Y
///   params k1 k2=3/2
///   init X=10 Y=5
///   reaction X + Y -> 2 Y @ k2
///   reaction X <-> 0 @ kp, km
///
/// Rate symbols that are not listed on a `params` line become parameters
/// without defaults, appended in order of first use. Throws ParseError on
/// syntax errors and unknown species, ValidationError on invariant
/// violations. Never returns a partially built network.
ReactionNetwork parse_model(std::string_view text);

/// Checks every network invariant. Returns the network unchanged on
/// success, throws ValidationError naming the reaction index and species or
/// symbol otherwise.
const ReactionNetwork& validate_network(const ReactionNetwork& net);

/// Canonical one-line form, e.g. "X + Y -> 2 Y @ k2" (without the leading
/// `reaction` keyword).
std::string render_reaction(const Reaction& r, const std::vector<std::string>& species);

/// Whole-model text that parse_model reads back to an equal network.
std::string render_model(const ReactionNetwork& net);

}  // namespace onestep
