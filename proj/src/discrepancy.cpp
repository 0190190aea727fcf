#include "asbuilt/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace asbuilt {

std::string_view parameter_key(Parameter p) {
  switch (p) {
    case Parameter::Surface: return "total_surface_mm2";
    case Parameter::NormalX: return "normal_x";
    case Parameter::NormalY: return "normal_y";
    case Parameter::NormalZ: return "normal_z";
    case Parameter::DimX: return "dim_x_mm";
    case Parameter::DimY: return "dim_y_mm";
    case Parameter::DimZ: return "dim_z_mm";
  }
  return "unknown";
}

double parameter_value(const MacroMetrics& m, Parameter p) {
  switch (p) {
    case Parameter::Surface: return m.total_surface;
    case Parameter::NormalX: return m.aggregated_normals[0];
    case Parameter::NormalY: return m.aggregated_normals[1];
    case Parameter::NormalZ: return m.aggregated_normals[2];
    case Parameter::DimX: return m.dimension[0];
    case Parameter::DimY: return m.dimension[1];
    case Parameter::DimZ: return m.dimension[2];
  }
  return 0.0;
}

double relative_difference(double a, double b) {
  const double denom = std::max({std::abs(a), std::abs(b), kRelativeDifferenceFloor});
  return std::abs(a - b) / denom;
}

bool valid_threshold(double threshold) { return threshold > 0.0 && threshold <= 1.0; }

void require_threshold(double threshold) {
  if (!valid_threshold(threshold)) {
    throw InvalidThreshold("threshold must be in (0, 1], got " + std::to_string(threshold));
  }
}

ComparisonReport compare_metrics(const MacroMetrics& bim, const MacroMetrics& scanned, double threshold) {
  require_threshold(threshold);
  ComparisonReport r;
  r.threshold = threshold;
  r.overall_pass = true;
  r.max_difference = -1.0;
  for (std::size_t i = 0; i < kAllParameters.size(); ++i) {
    ParameterComparison& c = r.per_parameter[i];
    c.parameter = kAllParameters[i];
    c.bim_value = parameter_value(bim, c.parameter);
    c.scanned_value = parameter_value(scanned, c.parameter);
    c.relative_difference = relative_difference(c.bim_value, c.scanned_value);
    c.pass = c.relative_difference <= threshold;
    r.overall_pass = r.overall_pass && c.pass;
    if (c.relative_difference > r.max_difference) {
      r.max_difference = c.relative_difference;
      r.worst_parameter = c.parameter;
    }
  }
  return r;
}

}  // namespace asbuilt
