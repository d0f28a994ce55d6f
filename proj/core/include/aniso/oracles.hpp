#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "aniso/exponents.hpp"
#include "aniso/grid.hpp"
#include "aniso/problem.hpp"

/// Reference evaluators kept independent of the production code paths they check.
namespace aniso::oracle {

enum class Family { Na, Nac, Pa, Pac, Unassigned, Ambiguous };
enum class SubFamily { None, Phat1, Pa2, Pa3, Pa2c, Ambiguous };

struct BruteForceClassification {
  std::vector<Family> family;
  std::vector<SubFamily> sub;
  bool condition_m = true;
};

/// Tests every set-defining predicate separately for every index, straight from the raw
/// arrays; a partition defect shows up as Unassigned/Ambiguous.
BruteForceClassification brute_force_classify(const ProblemSpec& spec);

/// True when classify_indices + check_condition_m agree with the brute force on `spec`.
bool classification_agrees(const ProblemSpec& spec, std::string* diagnostic = nullptr);

/// Random tuple satisfying the standing assumptions, N in {2,3,4}; b and s inside their ranges.
ProblemSpec random_admissible_spec(std::mt19937_64& rng);

/// Every side inequality of the a priori estimate that fails for `report`.
std::vector<std::string> side_inequality_violations(const ProblemSpec& spec, const ExponentReport& report);

/// Sum of a few low-frequency sine modes with random coefficients.
GridFunction random_smooth_function(const Grid& grid, std::mt19937_64& rng);

/// Node count of {|u| >= h} by recursive enumeration of multi-indices.
std::size_t brute_force_level_count(const GridFunction& u, double h);

}  // namespace aniso::oracle
