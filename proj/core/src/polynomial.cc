#include "affpose/polynomial.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

namespace affpose {
namespace {

// Parlett-Reinsch balancing of the off-diagonal part; powers of two keep the
// scaling exact.
void BalanceCompanion(Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  constexpr double kGain = 0.9;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      double row = 0.0;
      double col = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k == i) continue;
        row += std::abs(m(i, k));
        col += std::abs(m(k, i));
      }
      if (row == 0.0 || col == 0.0) continue;
      int exponent = 0;
      std::frexp(row / col, &exponent);
      exponent /= 2;
      if (exponent == 0) continue;
      const double scaled_col = std::ldexp(col, exponent);
      const double scaled_row = std::ldexp(row, -exponent);
      if (scaled_col + scaled_row < kGain * (col + row)) {
        changed = true;
        m.row(i) *= std::ldexp(1.0, -exponent);
        m.col(i) *= std::ldexp(1.0, exponent);
      }
    }
  }
}

double PolishRealRoot(std::span<const double> coeffs, double x) {
  const int n = static_cast<int>(coeffs.size()) - 1;
  double best = x;
  double best_value = std::abs(EvaluatePolynomial(coeffs, x));
  for (int iter = 0; iter < 8 && best_value > 0.0; ++iter) {
    double p = coeffs[0];
    double dp = 0.0;
    for (int k = 1; k <= n; ++k) {
      dp = dp * x + p;
      p = p * x + coeffs[k];
    }
    if (dp == 0.0) break;
    x -= p / dp;
    const double value = std::abs(EvaluatePolynomial(coeffs, x));
    if (!(value < best_value)) break;
    best = x;
    best_value = value;
  }
  return best;
}

}  // namespace

double EvaluatePolynomial(std::span<const double> coeffs, double x) {
  double value = 0.0;
  for (double c : coeffs) value = value * x + c;
  return value;
}

std::vector<double> TrimLeadingCoefficients(std::span<const double> coeffs,
                                            double relative_tolerance) {
  double max_abs = 0.0;
  for (double c : coeffs) max_abs = std::max(max_abs, std::abs(c));
  std::size_t first = 0;
  while (first < coeffs.size() &&
         std::abs(coeffs[first]) <= relative_tolerance * max_abs) {
    ++first;
  }
  return {coeffs.begin() + first, coeffs.end()};
}

std::vector<std::complex<double>> PolynomialRoots(
    std::span<const double> coeffs) {
  const std::vector<double> poly = TrimLeadingCoefficients(coeffs);
  if (poly.size() < 2) return {};
  const int degree = static_cast<int>(poly.size()) - 1;
  if (degree == 1) return {std::complex<double>(-poly[1] / poly[0], 0.0)};

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  companion.diagonal(-1).setOnes();
  for (int k = 0; k < degree; ++k) {
    companion(k, degree - 1) = -poly[degree - k] / poly[0];
  }
  BalanceCompanion(companion);

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) return {};
  const Eigen::VectorXcd values = solver.eigenvalues();
  return {values.data(), values.data() + values.size()};
}

std::vector<double> RealPolynomialRoots(std::span<const double> coeffs,
                                        double imag_tolerance) {
  const std::vector<double> poly = TrimLeadingCoefficients(coeffs);
  std::vector<double> roots;
  for (const auto& z : PolynomialRoots(poly)) {
    if (std::abs(z.imag()) <= imag_tolerance * std::max(1.0, std::abs(z))) {
      roots.push_back(PolishRealRoot(poly, z.real()));
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace affpose
