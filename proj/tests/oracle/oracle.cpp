#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace sqnm::oracle {

Eigen::MatrixXd to_eigen(const DenseMatrix& x) {
    Eigen::MatrixXd out(x.rows(), x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j)
        for (std::size_t i = 0; i < x.rows(); ++i) out(i, j) = x(i, j);
    return out;
}

DenseMatrix from_eigen(const Eigen::MatrixXd& x) {
    DenseMatrix out(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j)
        for (Eigen::Index i = 0; i < x.rows(); ++i) out(i, j) = x(i, j);
    return out;
}

std::vector<double> gram_singular_values(const DenseMatrix& x) {
    const Eigen::MatrixXd a = to_eigen(x);
    const Eigen::MatrixXd gram = a.rows() >= a.cols() ? Eigen::MatrixXd(a.transpose() * a)
                                                      : Eigen::MatrixXd(a * a.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
    std::vector<double> lambda(solver.eigenvalues().data(), solver.eigenvalues().data() + gram.rows());
    std::sort(lambda.begin(), lambda.end(), std::greater<>());
    const double cutoff = lambda.empty() ? 0.0 : 1e-12 * lambda.front();
    std::vector<double> sigma;
    for (double l : lambda) sigma.push_back(l > cutoff ? std::sqrt(l) : 0.0);
    return sigma;
}

double gram_schatten_norm(const DenseMatrix& x, double p) {
    double sum = 0.0;
    for (double s : gram_singular_values(x))
        if (s > 0.0) sum += std::pow(s, p);
    return std::pow(sum, 1.0 / p);
}

std::vector<double> jacobi_singular_values(const DenseMatrix& x) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(x));
    const auto& s = svd.singularValues();
    return {s.data(), s.data() + s.size()};
}

double scalar_prox_objective(double x, double y, double tau, double p) {
    return tau * std::pow(std::abs(x), p) + 0.5 * (x - y) * (x - y);
}

namespace {

double golden_polish(double lo, double hi, const std::function<double(double)>& f) {
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - ratio * (b - a), d = a + ratio * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Best grid point in [lo, hi] with the given spacing, magnitudes only.
double grid_argmin(double lo, double hi, double step, const std::function<double(double)>& f) {
    double best = lo, best_val = f(lo);
    const auto count = static_cast<long long>(std::ceil((hi - lo) / step));
    for (long long k = 1; k <= count; ++k) {
        const double x = std::min(hi, lo + static_cast<double>(k) * step);
        const double v = f(x);
        if (v < best_val) {
            best_val = v;
            best = x;
        }
    }
    return best;
}

double finish(double a, double y, double center, double step, const std::function<double(double)>& f) {
    const double lo = std::max(0.0, center - step);
    const double hi = std::min(a, center + step);
    const double polished = golden_polish(lo, hi, f);
    double best = f(polished) < f(center) ? polished : center;
    if (f(0.0) <= f(best)) best = 0.0;
    return std::copysign(best, y) == 0.0 ? 0.0 : std::copysign(best, y);
}

} // namespace

double grid_prox(double y, double tau, double p, double step) {
    const double a = std::abs(y);
    auto f = [&](double x) { return scalar_prox_objective(x, a, tau, p); };
    if (a == 0.0) return 0.0;
    return finish(a, y, grid_argmin(0.0, a, step, f), step, f);
}

double grid_prox_refined(double y, double tau, double p, double coarse, double fine) {
    const double a = std::abs(y);
    auto f = [&](double x) { return scalar_prox_objective(x, a, tau, p); };
    if (a == 0.0) return 0.0;
    const double c = grid_argmin(0.0, a, coarse, f);
    const double refined = grid_argmin(std::max(0.0, c - coarse), std::min(a, c + coarse), fine, f);
    return finish(a, y, refined, fine, f);
}

} // namespace sqnm::oracle
