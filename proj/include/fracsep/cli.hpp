#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fracsep/rational.hpp"
#include "fracsep/separation.hpp"

namespace fracsep::cli {

inline constexpr const char* kVersion = "0.1.0";

enum class ExitCode : int { Ok = 0, Violation = 1, Usage = 2, Undetermined = 3, BudgetExceeded = 4 };

enum class IfsKind { None, Symmetric, Asymmetric, CommonBase, Maps };
enum class Mode { Exact, Float };

/// One map of an explicit list: x -> sign·ratio·x + translation.
struct MapSpec {
  Rational ratio;
  int sign = 1;
  Rational translation;
};

/// Everything a run depends on. Numeric inputs are kept as rationals and
/// converted once the arithmetic mode is known.
struct ExperimentSpec {
  std::string command;
  std::vector<std::string> argv;

  IfsKind ifsKind = IfsKind::None;
  std::string ifsText;
  Rational lambda;
  Rational c1;
  Rational c2;
  Rational base;
  int p1 = 0;
  int p2 = 0;
  std::vector<MapSpec> maps;

  std::optional<Rational> b;
  std::vector<Rational> bList;
  std::vector<Rational> points;
  std::optional<int> depth;
  std::optional<Rational> threshold;
  std::size_t wordBudget = kDefaultWordBudget;
  int mergeDepthBudget = 6;
  Mode mode = Mode::Exact;
  std::uint64_t seed = 1;
  std::string out;

  Checker checker = Checker::Wsd;
  bool difference = false;
  std::vector<Rational> epsList;
  std::vector<int> js{1, 2};
  std::vector<int> ms{4, 5, 6, 7, 8};
  std::size_t centers = 16;
  double slack = 0.05;
  double tol = 1e-12;
  std::string coeffs;
  std::string matrix;
  std::optional<Rational> coeffBase;
  bool relaxed = false;
  unsigned threads = 1;
};

/// Throws Error(Usage) naming the offending flag. `--help` is reported by
/// returning a spec whose command is "help".
ExperimentSpec parse_spec(int argc, const char* const* argv);

std::string usage_text();

/// Writes the CSV (to spec.out or `out`) and the run manifest (to
/// spec.out + ".manifest.json" or `err`). Errors become a single-line
/// diagnostic on `err` plus the matching exit code.
int run(const ExperimentSpec& spec, std::ostream& out, std::ostream& err);

/// Parses and runs; what the executable's main calls.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fracsep::cli
