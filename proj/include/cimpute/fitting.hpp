#pragma once

#include <optional>
#include <span>

#include "cimpute/constraints.hpp"

namespace cimpute {

struct PolynomialFit {
  Polynomial polynomial;
  /// RMSE of residuals divided by the population std of ys; 0 is an exact fit.
  double error = 0.0;
};

/// Least-squares polynomial from xs to ys.
///
/// Constant ys give the degree-0 polynomial with error 0. Otherwise every
/// degree 1..max_degree that the distinct xs can determine is fit, and the
/// smallest degree whose error is within 0.01 of the best one is returned.
/// Returns nullopt when fewer than two points are given, the sizes differ,
/// or xs are constant.
std::optional<PolynomialFit> fit_polynomial(std::span<const double> xs, std::span<const double> ys,
                                            int max_degree);

struct DistributionFit {
  NumericDistribution distribution;
  /// std(values) / column_std, or 0 when column_std is 0.
  double error = 0.0;
};

/// Precondition: values is non-empty.
DistributionFit fit_distribution(std::span<const double> values, double column_std);

/// Population mean and standard deviation.
double mean_of(std::span<const double> values);
double population_std(std::span<const double> values);

}  // namespace cimpute
