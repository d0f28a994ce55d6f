#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aniso/problem.hpp"

namespace aniso {

struct BaseExponents {
  double p_mean = 0.0;  // harmonic mean of p_j
  double p_star = 0.0;  // N p / (N - p)
  double p_conj = 0.0;  // p / (p - 1)
  std::vector<double> p_conj_vec;
  double abar = 0.0;  // max_j a_j
};

/// Throws Error{InvalidExponent} if some p_j <= 1 and Error{Supercritical} if p >= N.
BaseExponents compute_base_exponents(const ProblemSpec& spec);

/// Index partitions, 0-based. Na/Nac/Pa/Pac split {0..N-1}; Phat1/Pa2/Pa3/Pa2c split Pa and Pac.
struct IndexSets {
  std::vector<int> Na, Nac, Pa, Pac;
  std::vector<int> J1, J2;
  std::vector<int> Phat1, Pa2, Pa3, Pa2c;
};

/// m_j = ((p_j - q_j)/q_j) (theta_j p_j/(p_j - q_j) - p), defined only for q_j > 0.
std::optional<double> threshold_mj(const ProblemSpec& spec, double p_mean, int j);

/// theta_j p_j / (p_j - q_j), the Na threshold on m.
double threshold_na(const ProblemSpec& spec, int j);

IndexSets classify_indices(const ProblemSpec& spec, const BaseExponents& base);

struct Constraint {
  int j = 0;               // 0-based index
  double threshold = 0.0;  // m must exceed this
  std::string family;      // "Na" or "Pa"
};

struct ConditionReport {
  bool holds = true;
  std::vector<Constraint> binding;
  std::vector<std::string> warnings;  // ties within 1e-12 of a threshold
};

ConditionReport check_condition_m(const ProblemSpec& spec, const IndexSets& sets,
                                  const BaseExponents& base);

enum class RMode { Lm, Linfty };

struct ExponentReport {
  CaseId case_id = CaseId::Case1;
  double m = 0.0;
  BaseExponents base;
  IndexSets sets;
  std::vector<std::optional<double>> mj;  // present where q_j > 0
  std::vector<std::optional<double>> xi;  // j in Na
  std::vector<std::optional<double>> r;   // j in Nac
  std::vector<std::optional<double>> R;   // j in Pa2 and Pa2c
  double gamma0 = 0.0;
  double gamma_abar = 0.0;
  double theta_abar_low = 0.0;   // used when ||u||_{L^m} <= 1
  double theta_abar_high = 0.0;  // used when ||u||_{L^m} > 1
  ConditionReport condition;
  RMode r_mode = RMode::Lm;
  std::vector<std::string> warnings;
};

/// Throws Error{ConditionMViolated} when condition (m) fails.
ExponentReport derived_exponents(const ProblemSpec& spec, const IndexSets& sets);

/// Full pipeline. When condition (m) fails the derived exponents are left absent/NaN and the
/// verdict is recorded instead of throwing.
ExponentReport analyze(const ProblemSpec& spec);

/// m_0 = m, m_{k+1} = 2 m_k / (2 - gamma), k < cap. Returns cap + 1 terms.
std::vector<double> bootstrap_sequence(double m, double gamma, int cap);

/// Noted in every textual report: the level-set bootstrap uses a fixed gamma.
extern const char* const kBootstrapNote;

std::string to_key_value(const ExponentReport& report);
std::string exponent_csv_header();
std::string exponent_csv_row(const ExponentReport& report);

/// Indices printed 1-based, comma separated.
std::string format_indices(const std::vector<int>& idx);

}  // namespace aniso
