#pragma once

#include "sqnm/linalg/dense_matrix.hpp"

#include <vector>

namespace sqnm {

/// Global minimizer of tau*|x|^p + (x - y)^2 / 2 for p in (0, 2].
///
/// Closed forms: p = 1 (soft threshold), p = 2 (ridge shrink), p = 1/2 (half
/// thresholding) and p = 2/3 (quartic root). Other p < 1 use the generalized
/// shrinkage-thresholding rule: zero below the threshold
///   (2 tau (1-p))^(1/(2-p)) + tau p (2 tau (1-p))^((p-1)/(2-p)),
/// otherwise the larger root of x + tau p x^(p-1) = |y| by safeguarded Newton.
/// p in (1, 2) solves the same stationarity equation on [0, |y|].
///
/// The result has the sign of y (or is 0) and |x| <= |y|; a tie between 0 and the
/// nonzero stationary point resolves to 0. Throws UnsupportedExponent for p
/// outside (0, 2] and InvalidInput for tau <= 0 or non-finite y.
double lp_prox_scalar(double y, double tau, double p);

/// Reference path for p < 1 that skips the closed forms; exposed so the closed
/// forms can be cross-checked against it.
double lp_prox_scalar_gst(double y, double tau, double p);

/// Spectral prox: argmin_X tau*||X||_{S_p}^p + ||X - Y||_F^2 / 2, computed by
/// applying lp_prox_scalar to the singular values of Y.
DenseMatrix schatten_prox(const DenseMatrix& y, double tau, double p);

struct SpectralProx {
    DenseMatrix value;
    std::vector<double> sigma; // singular values of `value`, nonincreasing
};

/// schatten_prox that also returns the shrunk spectrum, so callers can evaluate
/// Schatten penalties of the result without another decomposition.
SpectralProx schatten_prox_spectrum(const DenseMatrix& y, double tau, double p);

} // namespace sqnm
