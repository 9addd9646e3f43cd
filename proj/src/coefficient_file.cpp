#include "onestep/coefficient_file.hpp"

#include "onestep/errors.hpp"

namespace onestep {

std::vector<Polynomial> CoefficientFile::drift() const {
  std::vector<Polynomial> out;
  for (const auto& e : drift_exprs) out.push_back(parse_poly(e));
  return out;
}

PolynomialMatrix CoefficientFile::diffusion() const {
  PolynomialMatrix out;
  for (const auto& row : diffusion_exprs) {
    out.emplace_back();
    for (const auto& e : row) out.back().push_back(parse_poly(e));
  }
  return out;
}

std::string emit_coefficient_file(const SdeModel& model) {
  const auto order = model.symbol_order();
  CoefficientFile file;
  for (const auto& p : model.drift) file.drift_exprs.push_back(render_poly(p, order));
  for (const auto& row : model.diffusion) {
    file.diffusion_exprs.emplace_back();
    for (const auto& p : row) file.diffusion_exprs.back().push_back(render_poly(p, order));
  }
  return emit_coefficient_file(file);
}

std::string emit_coefficient_file(const CoefficientFile& file) {
  std::string out = "# A\n";
  for (const auto& e : file.drift_exprs) out += e + "\n";
  out += "# B\n";
  for (const auto& row : file.diffusion_exprs) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out += '\t';
      out += row[j];
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::string checked_expr(std::string_view cell, std::size_t line) {
  try {
    parse_poly(cell);
  } catch (const ParseError& e) {
    throw ParseError(std::string("unparseable expression: ") + e.what(), line, e.column());
  }
  return std::string(cell);
}

}  // namespace

CoefficientFile parse_coefficient_file(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != "# A") throw ParseError("malformed header, expected '# A'", 1, 1);

  CoefficientFile file;
  std::size_t i = 1;
  for (; i < lines.size() && lines[i] != "# B"; ++i) {
    if (lines[i].starts_with("#"))
      throw ParseError("malformed header, expected '# B'", i + 1, 1);
    file.drift_exprs.push_back(checked_expr(lines[i], i + 1));
  }
  if (i == lines.size()) throw ParseError("missing '# B' header", lines.size() + 1, 0);

  const std::size_t n = file.drift_exprs.size();
  for (++i; i < lines.size(); ++i) {
    std::vector<std::string> row;
    std::size_t start = 0;
    const auto line = lines[i];
    for (;;) {
      std::size_t tab = line.find('\t', start);
      row.push_back(checked_expr(line.substr(start, tab - start), i + 1));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (row.size() != n)
      throw ParseError("ragged grid: row has " + std::to_string(row.size()) +
                           " entries, expected " + std::to_string(n),
                       i + 1, 0);
    file.diffusion_exprs.push_back(std::move(row));
  }
  if (file.diffusion_exprs.size() != n)
    throw ParseError("ragged grid: " + std::to_string(file.diffusion_exprs.size()) +
                         " diffusion rows for " + std::to_string(n) + " drift entries",
                     lines.size(), 0);
  return file;
}

}  // namespace onestep
