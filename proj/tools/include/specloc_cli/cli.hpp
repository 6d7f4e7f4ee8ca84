#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "specloc/models.hpp"

namespace specloc::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,      // odd signature, failed factorization, other numerical errors
  kConfig = 2,        // bad flags, model file or grid
  kNotInvertible = 3,
  kUnverified = 4,    // conditions violated and --allow-unverified not given
};

/// Where the operator comes from: a built-in name with parameters, or a model
/// file. For model files the parameters w and seed override the disorder block.
struct ModelSource {
  std::string name;
  std::optional<std::string> file;
  std::map<std::string, double> params;
};

/// Model file (JSON):
///
///   {
///     "d": 1, "N": 2,
///     "hoppings": [{"r": [0], "re": [[1, 0], [0, 1]], "im": [[0, 0], [0, 0]]}, ...],
///     "disorder": {"type": "uniform", "w": 0.1, "seed": 7},
///     "symmetry": {"S": [[0, 1], [-1, 0]], "sA": -1, "sAprime": -1}
///   }
///
/// "im", "disorder" and "symmetry" are optional. Matrices are row-major N×N.
/// Uniform disorder multiplies each A_r(n) by a factor in [1 − w, 1 + w].
/// Throws std::invalid_argument on any schema violation.
Model parse_model_file(const std::string& text, const std::map<std::string, double>& overrides = {});
Model load_model_file(const std::string& path, const std::map<std::string, double>& overrides = {});

Model resolve_model(const ModelSource& src);

/// "name=v1,v2,..." or "name=start:stop:count" (count points, both ends
/// included). Throws std::invalid_argument on malformed input.
struct GridAxis {
  std::string name;
  std::vector<double> values;
};
GridAxis parse_grid_axis(const std::string& spec);

/// Cartesian product, last axis fastest.
std::vector<std::map<std::string, double>> grid_points(const std::vector<GridAxis>& axes);

/// "%.17g"; non-finite values print as inf, -inf, nan.
std::string format_double(double v);

/// Entry point shared by the executable and the tests. argv[0] is the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace specloc::cli
