#pragma once

#include <array>
#include <stdexcept>
#include <string_view>

#include "asbuilt/metrics.hpp"

namespace asbuilt {

/// Guards the both-zero case: relative_difference(0, 0) == 0.
inline constexpr double kRelativeDifferenceFloor = 1e-9;
/// Default acceptance threshold (25 %).
inline constexpr double kDefaultThreshold = 0.25;

enum class Parameter { Surface, NormalX, NormalY, NormalZ, DimX, DimY, DimZ };

inline constexpr std::array<Parameter, 7> kAllParameters = {
    Parameter::Surface, Parameter::NormalX, Parameter::NormalY, Parameter::NormalZ,
    Parameter::DimX,    Parameter::DimY,    Parameter::DimZ,
};

/// Stable key used in JSON records and reports ("total_surface_mm2", "normal_x", ...).
std::string_view parameter_key(Parameter p);
double parameter_value(const MacroMetrics& m, Parameter p);

class InvalidThreshold : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ParameterComparison {
  Parameter parameter = Parameter::Surface;
  double bim_value = 0.0;
  double scanned_value = 0.0;
  double relative_difference = 0.0;
  bool pass = false;
};

struct ComparisonReport {
  std::array<ParameterComparison, 7> per_parameter{};
  double threshold = kDefaultThreshold;
  bool overall_pass = false;
  double max_difference = 0.0;
  Parameter worst_parameter = Parameter::Surface;  // first parameter attaining max_difference
};

/// |a - b| / max(|a|, |b|, 1e-9). Symmetric; in [0,1] for non-negative inputs.
double relative_difference(double a, double b);

bool valid_threshold(double threshold);
void require_threshold(double threshold);

/// Per-parameter pass iff relative difference <= threshold. Throws
/// InvalidThreshold unless threshold is in (0, 1].
ComparisonReport compare_metrics(const MacroMetrics& bim, const MacroMetrics& scanned, double threshold);

}  // namespace asbuilt
