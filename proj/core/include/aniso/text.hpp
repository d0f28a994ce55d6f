#pragma once

#include <optional>
#include <string>
#include <vector>

namespace aniso {

/// Round-trip decimal ("%.17g"); every CSV writer goes through this so outputs are reproducible.
std::string num(double x);
std::string num(const std::optional<double>& x);
std::string join(const std::vector<std::string>& parts, const std::string& sep);
std::string join_numbers(const std::vector<double>& xs, const std::string& sep);

}  // namespace aniso
