#pragma once

#include <complex>
#include <functional>

namespace schw {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int evaluations = 0;
};

/// Adaptive Simpson on [a, b] with relative tolerance `rel_tol` (absolute
/// floor `abs_tol`). Throws NumericalError if the recursion depth limit is
/// reached without meeting the tolerance.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol = 1e-8, double abs_tol = 1e-14,
                                  int max_depth = 60);

struct ComplexQuadratureResult {
    std::complex<double> value;
    double error_estimate = 0.0;
    int evaluations = 0;
};

/// Adaptive Gauss-Kronrod (7/15) integral of f along the straight segment
/// from a to b in the complex plane.
ComplexQuadratureResult line_integral(
    const std::function<std::complex<double>(std::complex<double>)>& f,
    std::complex<double> a, std::complex<double> b, double rel_tol = 1e-13,
    double abs_tol = 1e-15, int max_intervals = 4000);

} // namespace schw
