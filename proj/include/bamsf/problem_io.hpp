#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bamsf/model.hpp"
#include "bamsf/solver.hpp"

namespace bamsf {

/// Parse failure with the path of the offending field, e.g.
/// "blocks[1].set.radius".
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& path, const std::string& message)
      : std::runtime_error(path + ": " + message), path(path) {}
  std::string path;
};

/// Reads a problem document: top-level "v" (array of numbers) and "blocks"
/// (array of {"A": rows, "set": {"type": ..., ...}}). Set types: box,
/// halfspace, hyperplane, affine, ball2, ballp, soc, soc_reflected, orthant.
/// Box bounds accept "inf"/"-inf" tokens. Unknown fields are rejected.
Instance parse_problem(const std::string& text);
Instance load_problem(const std::string& path);

/// Inverse of parse_problem; numbers in shortest round-trip form.
std::string problem_to_json(const Instance& inst);

struct ParsedHistory {
  std::vector<long> sweep;
  std::vector<double> d_value;  // +inf for the "inf" token
  std::vector<double> step_norm;
  std::vector<double> residual_norm;
  std::vector<double> gap;          // NaN when unknown
  std::vector<double> dist_argmin;  // NaN when unknown
};

/// Reads a history CSV produced by history_to_csv. Extra x_* columns are
/// ignored. Throws ParseError on schema mismatch or an empty file.
ParsedHistory parse_history_csv(const std::string& text);
ParsedHistory load_history_csv(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace bamsf
