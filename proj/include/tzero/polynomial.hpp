#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace tzero {

// p(x) with coefficients in ascending order.
inline double horner(std::span<const double> coeffs, double x) noexcept {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

inline double horner_derivative(std::span<const double> coeffs, double x) noexcept {
    double acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 1;) acc = acc * x + static_cast<double>(k) * coeffs[k];
    return acc;
}

// Real roots of a real polynomial (ascending coefficients) from the
// eigenvalues of its companion matrix. Eigenvalues count as real when
// |Im| <= imag_tol * max(1, |lambda|); each is Newton-polished while the
// residual keeps shrinking. Result is sorted ascending.
inline std::vector<double> real_roots(std::span<const double> coeffs, double imag_tol = 1e-12) {
    std::size_t degree = coeffs.size();
    while (degree > 0 && coeffs[degree - 1] == 0.0) --degree;
    if (degree <= 1) return {};
    --degree;

    const auto n = static_cast<Eigen::Index>(degree);
    const double lead = coeffs[degree];
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        companion(i, n - 1) = -coeffs[static_cast<std::size_t>(i)] / lead;
    }

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    const auto& eig = solver.eigenvalues();
    const std::span<const double> poly(coeffs.data(), degree + 1);

    std::vector<double> roots;
    for (Eigen::Index i = 0; i < eig.size(); ++i) {
        const auto lambda = eig[i];
        if (std::abs(lambda.imag()) > imag_tol * std::max(1.0, std::abs(lambda))) continue;
        double x = lambda.real();
        double fx = std::abs(horner(poly, x));
        for (int iter = 0; iter < 8 && fx > 0.0; ++iter) {
            const double d = horner_derivative(poly, x);
            if (d == 0.0) break;
            const double cand = x - horner(poly, x) / d;
            const double fc = std::abs(horner(poly, cand));
            if (!(fc < fx)) break;
            x = cand;
            fx = fc;
        }
        roots.push_back(x);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

} // namespace tzero
