#include "cimpute/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

namespace cimpute {

namespace {

// Within this absolute distance of the best error, the lower degree wins.
constexpr double kParsimonyTolerance = 0.01;

std::size_t distinct_count(std::span<const double> xs) {
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Fits in the scaled variable t = (x - center) / scale for conditioning, then
// expands back into powers of x.
Polynomial least_squares(std::span<const double> xs, std::span<const double> ys, int degree, double center,
                         double scale) {
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd design(n, degree + 1);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = (xs[static_cast<std::size_t>(i)] - center) / scale;
    double power = 1.0;
    for (int k = 0; k <= degree; ++k) {
      design(i, k) = power;
      power *= t;
    }
    rhs(i) = ys[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd scaled = design.colPivHouseholderQr().solve(rhs);

  // sum_k b_k ((x - c)/s)^k = sum_k b_k s^-k sum_j C(k,j) x^j (-c)^(k-j)
  std::vector<double> coeffs(static_cast<std::size_t>(degree) + 1, 0.0);
  for (int k = 0; k <= degree; ++k) {
    const double bk = scaled(k) / std::pow(scale, k);
    for (int j = 0; j <= k; ++j) {
      coeffs[static_cast<std::size_t>(j)] += bk * binomial(k, j) * std::pow(-center, k - j);
    }
  }
  return Polynomial{std::move(coeffs)};
}

double residual_rmse(const Polynomial& p, std::span<const double> xs, std::span<const double> ys) {
  double sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - p(xs[i]);
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(xs.size()));
}

}  // namespace

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double mean_of(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double population_std(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double m = mean_of(values);
  double sum = 0.0;
  for (double v : values) sum += (v - m) * (v - m);
  return std::sqrt(sum / static_cast<double>(values.size()));
}

std::optional<PolynomialFit> fit_polynomial(std::span<const double> xs, std::span<const double> ys,
                                            int max_degree) {
  if (xs.size() != ys.size() || xs.size() < 2) return std::nullopt;
  const std::size_t distinct = distinct_count(xs);
  if (distinct < 2) return std::nullopt;

  const double y_std = population_std(ys);
  if (y_std == 0.0) return PolynomialFit{Polynomial{{ys.front()}}, 0.0};

  const double center = mean_of(xs);
  double scale = 0.0;
  for (double x : xs) scale = std::max(scale, std::abs(x - center));

  std::vector<PolynomialFit> fits;
  const int top = std::min<int>(max_degree, static_cast<int>(distinct) - 1);
  for (int degree = 1; degree <= top; ++degree) {
    Polynomial p = least_squares(xs, ys, degree, center, scale);
    const double err = residual_rmse(p, xs, ys) / y_std;
    if (!std::isfinite(err)) continue;
    fits.push_back({std::move(p), err});
  }
  if (fits.empty()) return std::nullopt;

  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : fits) best = std::min(best, f.error);
  for (auto& f : fits) {
    if (f.error <= best + kParsimonyTolerance) return std::move(f);
  }
  return std::nullopt;
}

DistributionFit fit_distribution(std::span<const double> values, double column_std) {
  DistributionFit fit;
  auto& d = fit.distribution;
  d.n = values.size();
  d.mean = mean_of(values);
  d.std = population_std(values);
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  d.min = *lo;
  d.max = *hi;
  fit.error = column_std > 0.0 ? d.std / column_std : 0.0;
  return fit;
}

}  // namespace cimpute
