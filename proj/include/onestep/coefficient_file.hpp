#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "onestep/polynomial.hpp"
#include "onestep/stochastizer.hpp"

namespace onestep {

/// Text form of drift and diffusion coefficients:
///
///   # A
///   <A^1>
///   ...
///   # B
///   <B^11>\t<B^12>...
///   ...
///
/// Each cell is a canonical polynomial expression; the file ends with a
/// single newline.
struct CoefficientFile {
  std::vector<std::string> drift_exprs;
  std::vector<std::vector<std::string>> diffusion_exprs;

  std::vector<Polynomial> drift() const;
  PolynomialMatrix diffusion() const;
};

std::string emit_coefficient_file(const SdeModel& model);
std::string emit_coefficient_file(const CoefficientFile& file);

/// Throws ParseError (with line number) on a malformed header, ragged grid
/// or unparseable expression.
CoefficientFile parse_coefficient_file(std::string_view text);

}  // namespace onestep
