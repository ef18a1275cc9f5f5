#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "shiftig/fixtures.hpp"
#include "shiftig/model.hpp"

namespace shiftig {

inline constexpr double kGradientRelTol = 1e-5;
inline constexpr double kGradientStep = 1e-5;
inline constexpr double kCompletenessRelTol = 1e-4;
inline constexpr double kEdgeCompletenessRelTol = 1e-9;
inline constexpr double kLinearResidualTol = 1e-12;

enum class CheckStatus { pass, fail, skip };

struct CheckRow {
  std::string check;
  std::string model;
  CheckStatus status = CheckStatus::pass;
  std::string detail;
};

// ‖g - fd‖∞ / max(‖g‖∞, ‖fd‖∞), skipping coordinates whose ±h probes change
// the relu activation pattern. Returns 0 when both fields vanish.
double gradient_relative_error(const DifferentiableModel& m, const Matrix& x, double h);

struct VerifyOptions {
  std::uint64_t seed = 7;
  std::size_t gradient_points = 20;
  std::vector<std::size_t> sweep_steps{16, 64, 256, 1024};
};

// Gradient oracle, completeness sweep and edge-score (symmetry and
// completeness) checks for each model.
std::vector<CheckRow> run_verification(const std::vector<NamedModel>& models,
                                       const VerifyOptions& options = {});

void print_check_table(std::ostream& out, const std::vector<CheckRow>& rows);

}  // namespace shiftig
