#include "aniso/text.hpp"

#include <fmt/format.h>

namespace aniso {

std::string num(double x) { return fmt::format("{:.17g}", x); }

std::string num(const std::optional<double>& x) { return x ? num(*x) : std::string{}; }

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string join_numbers(const std::vector<double>& xs, const std::string& sep) {
  std::vector<std::string> parts;
  parts.reserve(xs.size());
  for (double x : xs) parts.push_back(num(x));
  return join(parts, sep);
}

}  // namespace aniso
