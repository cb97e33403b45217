#include "sqnm/prox.hpp"

#include "sqnm/error.hpp"
#include "sqnm/linalg/svd.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace sqnm {

namespace {

bool is_exponent(double p, double target) { return std::abs(p - target) <= 1e-15; }

void check_args(double y, double tau, double p) {
    if (!(p > 0.0 && p <= 2.0) || !std::isfinite(p)) {
        fail(ErrorKind::UnsupportedExponent, "lp_prox: exponent must lie in (0, 2], got " + std::to_string(p));
    }
    if (!(tau > 0.0) || !std::isfinite(tau)) fail(ErrorKind::InvalidInput, "lp_prox: tau must be > 0");
    if (!std::isfinite(y)) fail(ErrorKind::InvalidInput, "lp_prox: y must be finite");
}

double scalar_objective(double x, double a, double tau, double p) {
    return tau * (x == 0.0 ? 0.0 : std::pow(x, p)) + 0.5 * (x - a) * (x - a);
}

// Root of g(x) = x + tau*p*x^(p-1) - a on [lo, hi] with g(lo) <= 0 <= g(hi),
// g increasing on the bracket. Newton steps, bisection whenever a step leaves it.
double stationary_root(double a, double tau, double p, double lo, double hi) {
    const double c = tau * p;
    auto g = [&](double x) { return x + c * std::pow(x, p - 1.0) - a; };
    auto dg = [&](double x) { return 1.0 + c * (p - 1.0) * std::pow(x, p - 2.0); };

    double x = hi;
    for (int it = 0; it < 200; ++it) {
        const double gx = g(x);
        if (gx == 0.0) return x;
        if (gx > 0.0) hi = x; else lo = x;
        const double slope = dg(x);
        double next = slope > 0.0 && std::isfinite(slope) ? x - gx / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-16 * std::max(1.0, a)) return next;
        x = next;
        if (hi - lo <= 4e-16 * std::max(1.0, hi)) break;
    }
    return x;
}

// |y| = a > 0 throughout; result is the magnitude.
double prox_gst_magnitude(double a, double tau, double p) {
    const double base = 2.0 * tau * (1.0 - p);
    const double threshold = std::pow(base, 1.0 / (2.0 - p)) +
                             tau * p * std::pow(base, (p - 1.0) / (2.0 - p));
    if (a <= threshold) return 0.0;
    const double inflection = std::pow(tau * p * (1.0 - p), 1.0 / (2.0 - p));
    const double x = stationary_root(a, tau, p, inflection, a);
    return scalar_objective(x, a, tau, p) < scalar_objective(0.0, a, tau, p) ? x : 0.0;
}

// Half thresholding: minimizer of (x - a)^2 + lambda*sqrt(x), lambda = 2 tau.
double prox_half_magnitude(double a, double tau) {
    const double lambda = 2.0 * tau;
    const double threshold = std::cbrt(54.0) / 4.0 * std::pow(lambda, 2.0 / 3.0);
    if (a <= threshold) return 0.0;
    const double phi = std::acos(lambda / 8.0 * std::pow(a / 3.0, -1.5));
    return 2.0 / 3.0 * a * (1.0 + std::cos(2.0 * std::numbers::pi / 3.0 - 2.0 / 3.0 * phi));
}

// Minimizer of (x - a)^2 + lambda*x^(2/3), lambda = 2 tau, via the resolvent of
// the quartic t^4 - a t + lambda/3 = 0 in t = x^(1/3).
double prox_two_thirds_magnitude(double a, double tau) {
    const double lambda = 2.0 * tau;
    const double threshold = 2.0 / 3.0 * std::pow(3.0 * lambda * lambda * lambda, 0.25);
    if (a <= threshold) return 0.0;
    const double phi = std::acosh(27.0 * a * a / 16.0 * std::pow(lambda, -1.5));
    const double big_a = 2.0 / std::sqrt(3.0) * std::pow(lambda, 0.25) * std::sqrt(std::cosh(phi / 3.0));
    const double inner = 2.0 * a / big_a - big_a * big_a;
    const double t = 0.5 * (big_a + std::sqrt(std::max(inner, 0.0)));
    return t * t * t;
}

} // namespace

double lp_prox_scalar_gst(double y, double tau, double p) {
    check_args(y, tau, p);
    if (p >= 1.0) return lp_prox_scalar(y, tau, p);
    const double a = std::abs(y);
    if (a == 0.0) return 0.0;
    return std::copysign(prox_gst_magnitude(a, tau, p), y);
}

double lp_prox_scalar(double y, double tau, double p) {
    check_args(y, tau, p);
    const double a = std::abs(y);
    if (a == 0.0) return 0.0;

    double x = 0.0;
    if (p == 1.0) {
        x = std::max(a - tau, 0.0);
    } else if (p == 2.0) {
        x = a / (1.0 + 2.0 * tau);
    } else if (p == 0.5) {
        x = prox_half_magnitude(a, tau);
    } else if (is_exponent(p, 2.0 / 3.0)) {
        x = prox_two_thirds_magnitude(a, tau);
    } else if (p < 1.0) {
        x = prox_gst_magnitude(a, tau, p);
    } else {
        x = stationary_root(a, tau, p, 0.0, a);
    }
    return x == 0.0 ? 0.0 : std::copysign(std::min(x, a), y);
}

DenseMatrix schatten_prox(const DenseMatrix& y, double tau, double p) {
    return schatten_prox_spectrum(y, tau, p).value;
}

SpectralProx schatten_prox_spectrum(const DenseMatrix& y, double tau, double p) {
    check_args(0.0, tau, p);
    SpectralDecomposition svd = thin_svd(y);
    // The scalar prox is monotone in its argument, so the order is preserved.
    for (double& s : svd.sigma) s = lp_prox_scalar(s, tau, p);
    return {svd.reconstruct(), std::move(svd.sigma)};
}

} // namespace sqnm
