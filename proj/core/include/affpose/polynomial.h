#ifndef AFFPOSE_POLYNOMIAL_H_
#define AFFPOSE_POLYNOMIAL_H_

#include <complex>
#include <span>
#include <vector>

namespace affpose {

// Univariate polynomials are stored highest degree first:
// coeffs[0] x^n + coeffs[1] x^(n-1) + ... + coeffs[n].

double EvaluatePolynomial(std::span<const double> coeffs, double x);

// Drops leading coefficients whose magnitude is below
// relative_tolerance * max |coeff|. Returns the remaining coefficients.
std::vector<double> TrimLeadingCoefficients(std::span<const double> coeffs,
                                            double relative_tolerance = 1e-12);

// Roots as eigenvalues of the balanced companion matrix, after trimming
// vanishing leading coefficients.
std::vector<std::complex<double>> PolynomialRoots(
    std::span<const double> coeffs);

// Real roots (imaginary part below imag_tolerance * max(1, |root|)), each
// polished by a few Newton steps, sorted ascending.
std::vector<double> RealPolynomialRoots(std::span<const double> coeffs,
                                        double imag_tolerance = 1e-8);

}  // namespace affpose

#endif  // AFFPOSE_POLYNOMIAL_H_
