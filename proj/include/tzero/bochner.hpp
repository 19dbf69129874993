// bochner.hpp - positive-definiteness certificates for candidate overlap functions.
//
// A continuous f with f(0) = 1 is the characteristic function of a
// probability measure iff every Gram matrix M_ij = f(t_i - t_j) is positive
// semidefinite. gram_check evaluates one such matrix; the certify_* helpers
// sample many point sets.

#pragma once

#include "tzero/error.hpp"
#include "tzero/overlap.hpp"
#include "tzero/spectrum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace tzero {

using RealToComplex = std::function<std::complex<double>(double)>;

enum class GramVerdict { psd, violated };

struct GramCertificate {
    std::vector<double> points;
    double min_eigenvalue = 0.0;
    GramVerdict verdict = GramVerdict::psd;
    // Unit eigenvector of the minimum eigenvalue; alpha^H M alpha < 0.
    std::optional<std::vector<std::complex<double>>> witness;

    bool psd() const noexcept { return verdict == GramVerdict::psd; }
};

inline double default_psd_tolerance(std::size_t r) { return 1e-10 * static_cast<double>(r); }

inline GramCertificate gram_check(const RealToComplex& f, std::span<const double> points,
                                  std::optional<double> psd_tol = std::nullopt) {
    if (points.empty()) throw ValidationError("gram_check needs at least one point");
    const auto f0 = f(0.0);
    if (!(std::abs(f0 - std::complex<double>(1.0, 0.0)) <= 1e-9)) {
        throw ValidationError("normalization violated: f(0) != 1");
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i])) throw ValidationError("non-finite point");
        for (std::size_t j = 0; j < i; ++j) {
            if (points[i] == points[j]) throw ValidationError("points must be distinct");
        }
    }

    const auto r = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXcd m(r, r);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < r; ++j) {
            const auto v = f(points[static_cast<std::size_t>(i)] - points[static_cast<std::size_t>(j)]);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                throw ComputeError("non-finite f value in Gram matrix");
            }
            m(i, j) = v;
        }
    }
    const Eigen::MatrixXcd herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm);
    if (solver.info() != Eigen::Success) {
        throw ComputeError("Hermitian eigensolver failed");
    }

    GramCertificate cert;
    cert.points.assign(points.begin(), points.end());
    cert.min_eigenvalue = solver.eigenvalues()(0);
    const double tol = psd_tol.value_or(default_psd_tolerance(points.size()));
    if (cert.min_eigenvalue >= -tol) {
        cert.verdict = GramVerdict::psd;
    } else {
        cert.verdict = GramVerdict::violated;
        const auto vec = solver.eigenvectors().col(0);
        cert.witness.emplace(vec.data(), vec.data() + vec.size());
    }
    return cert;
}

// alpha^H M alpha for a candidate witness.
inline double gram_quadratic_form(const RealToComplex& f, std::span<const double> points,
                                  std::span<const std::complex<double>> alpha) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = 0; j < points.size(); ++j) {
            acc += std::conj(alpha[i]) * f(points[i] - points[j]) * alpha[j];
        }
    }
    return acc.real();
}

// Characteristic function of an arbitrary finite signed measure.
inline RealToComplex overlap_function(std::vector<Level> levels) {
    return [lv = std::move(levels)](double t) { return overlap_at(std::span<const Level>(lv), {t, 0.0}); };
}

inline RealToComplex overlap_function(const Spectrum& s) {
    return overlap_function(std::vector<Level>(s.levels().begin(), s.levels().end()));
}

struct CertifySummary {
    int trials = 0;
    int violations = 0;
    double worst_min_eigenvalue = 1.0;
    std::optional<GramCertificate> first_failure;

    bool all_psd() const noexcept { return violations == 0; }
};

// Trial k draws r ~ U{1..r_max} and r points ~ U[0, horizon] from a generator
// seeded with seed + k, so any single trial can be replayed.
inline CertifySummary certify_overlap(const RealToComplex& f, int trials, int r_max, double horizon,
                                      std::uint64_t seed) {
    if (trials < 1) throw ValidationError("trials must be >= 1");
    if (r_max < 1) throw ValidationError("r_max must be >= 1");
    if (!(horizon > 0.0)) throw ValidationError("horizon must be positive");
    CertifySummary summary;
    for (int k = 0; k < trials; ++k) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(k));
        std::uniform_int_distribution<int> size_dist(1, r_max);
        std::uniform_real_distribution<double> point_dist(0.0, horizon);
        const int r = size_dist(rng);
        std::vector<double> pts;
        pts.reserve(static_cast<std::size_t>(r));
        while (static_cast<int>(pts.size()) < r) {
            const double t = point_dist(rng);
            if (std::find(pts.begin(), pts.end(), t) == pts.end()) pts.push_back(t);
        }
        auto cert = gram_check(f, pts);
        ++summary.trials;
        summary.worst_min_eigenvalue = std::min(summary.worst_min_eigenvalue, cert.min_eigenvalue);
        if (!cert.psd()) {
            ++summary.violations;
            if (!summary.first_failure) summary.first_failure = std::move(cert);
        }
    }
    return summary;
}

inline CertifySummary certify_spectrum_overlap(const Spectrum& s, int trials, int r_max,
                                               std::uint64_t seed,
                                               std::optional<double> horizon = std::nullopt) {
    return certify_overlap(overlap_function(s), trials, r_max, horizon.value_or(default_horizon(s)), seed);
}

// f(t) = (-1)^n Phi_c^(2n)(t) / <E_c^(2n)> = sum_j w_j E_j^(2n) exp(-i E_j t) / <E^(2n)>
// on the centred spectrum, with the derivative taken analytically.
inline RealToComplex derivative_ratio_function(const Spectrum& s, int n) {
    if (n < 1) throw ValidationError("derivative order n must be >= 1");
    const auto c = center(s);
    const auto mt = moments(c, 2 * n);
    const double norm = mt.raw[static_cast<std::size_t>(2 * n)];
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw ComputeError("zero 2n-th moment: derivative ratio undefined");
    }
    std::vector<Level> tilted;
    for (const auto& l : c.levels()) {
        tilted.push_back({l.energy, l.weight * std::pow(l.energy, 2 * n) / norm});
    }
    return overlap_function(std::move(tilted));
}

inline GramCertificate derivative_ratio_check(const Spectrum& s, int n, std::span<const double> points) {
    return gram_check(derivative_ratio_function(s, n), points);
}

} // namespace tzero
