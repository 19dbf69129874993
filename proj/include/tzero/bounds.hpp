// bounds.hpp - lower bounds on the first orthogonalization time T0.
//
//   ml      pi hbar / (2 <H - E0>)
//   mt      (pi / 2) hbar / Delta H
//   family  inf of the T >= 0 satisfying Q_n(T) >= 0 for every n <= n_max
//   radius  radius of convergence of log Phi (diagnostic only)
//
// Q_n(T) = sum_{s=0}^{n} (-1)^s mu_{2(n-s)} T^{2(n-s)} / (2(n-s))!, with mu_k
// the central moments, i.e. (-1)^n times the order-2n Taylor partial sum of
// Re Phi_c. Every Q_n is nonnegative at T0, so T0 lies in the intersection
// of their positivity sets.

#pragma once

#include "tzero/error.hpp"
#include "tzero/feasible_set.hpp"
#include "tzero/polynomial.hpp"
#include "tzero/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

namespace tzero {

inline double ml_bound(const Spectrum& s) {
    const double gap_mean = ground_gap_mean(s);
    if (s.effective_size() < 2 || !(gap_mean > 0.0)) {
        throw ComputeError("undefined bound: <H - E0> is zero (single level)");
    }
    return std::numbers::pi * s.hbar() / (2.0 * gap_mean);
}

inline double mt_bound(const Spectrum& s) {
    const double var = variance(s);
    if (s.effective_size() < 2 || !(var > 0.0)) {
        throw ComputeError("undefined bound: energy variance is zero (single level)");
    }
    return std::numbers::pi / 2.0 * s.hbar() / std::sqrt(var);
}

// Coefficients gamma_n of log Phi(z) = sum_{n>=1} gamma_n z^n.
struct GammaSeries {
    int order = 0;
    std::vector<std::complex<double>> gamma; // gamma[0] holds gamma_1

    std::complex<double> operator()(int n) const { return gamma.at(static_cast<std::size_t>(n - 1)); }
};

// gamma_n = (-i)^n kappa_n / n! with kappa_n the cumulants. The scaled
// cumulants g_n = kappa_n / n! follow from the log-series recurrence
//   n g_n = n m_n - sum_{k=1}^{n-1} k g_k m_{n-k},   m_n = <E^n> / n!,
// run on the centred distribution (g_1 = <E> restored afterwards), which is
// algebraically identical and avoids cancellation in high raw moments.
inline GammaSeries gamma_series(const Spectrum& s, int order) {
    if (order < 1) throw ValidationError("gamma order must be >= 1");
    const double mean = s.mean_energy();
    const auto n_terms = static_cast<std::size_t>(order) + 1;

    std::vector<CompensatedSum> acc(n_terms);
    for (const auto& l : s.levels()) {
        const double x = l.energy - mean;
        double term = l.weight;
        for (std::size_t n = 0; n < n_terms; ++n) {
            acc[n] += term;
            term *= x / static_cast<double>(n + 1);
        }
    }
    std::vector<double> m(n_terms);
    for (std::size_t n = 0; n < n_terms; ++n) {
        m[n] = acc[n].value();
        if (!std::isfinite(m[n])) {
            throw ComputeError("moment overflow at order n=" + std::to_string(n));
        }
    }
    m[0] = 1.0;

    std::vector<double> g(n_terms, 0.0);
    for (std::size_t n = 1; n < n_terms; ++n) {
        CompensatedSum rhs;
        rhs += static_cast<double>(n) * m[n];
        for (std::size_t k = 1; k < n; ++k) rhs += -static_cast<double>(k) * g[k] * m[n - k];
        g[n] = rhs.value() / static_cast<double>(n);
        if (!std::isfinite(g[n])) {
            throw ComputeError("gamma coefficient overflow at order n=" + std::to_string(n));
        }
    }
    g[1] = mean;

    GammaSeries out;
    out.order = order;
    out.gamma.reserve(static_cast<std::size_t>(order));
    const std::complex<double> minus_i(0.0, -1.0);
    std::complex<double> rot = minus_i;
    for (std::size_t n = 1; n < n_terms; ++n) {
        // (-i)^n cycles exactly through -i, -1, i, 1.
        out.gamma.push_back(rot * g[n]);
        rot *= minus_i;
    }
    return out;
}

struct RadiusEstimate {
    // Rescaled-time estimate of 1 / limsup |gamma_n|^(1/n); unset means the
    // series imposes no constraint (all tail coefficients vanish).
    std::optional<double> estimate;
    bool certified = false;
    double naive = std::numeric_limits<double>::infinity();
    double extrapolated = std::numeric_limits<double>::infinity();
    int terms_used = 0;
    int window_begin = 0;
    int window_end = 0;
};

// Two readings of the tail window n in [order/2, order]:
//   naive        1 / max |gamma_n|^(1/n)
//   extrapolated least-squares fit of log(n |gamma_n|) = a - n log R, i.e. a
//                geometric rate with the 1/n prefactor of a logarithmic
//                singularity divided out.
// Terms whose n-th root is below half the tail maximum are dropped; for
// spectra with vanishing odd cumulants those are rounding noise. The smaller
// reading is returned, never certified.
inline RadiusEstimate radius_estimate(const Spectrum& s, int order) {
    if (order < 4) throw ValidationError("radius estimate needs gamma order >= 4");
    const auto series = gamma_series(s, order);
    RadiusEstimate r;
    r.window_begin = (order + 1) / 2;
    r.window_end = order;

    double max_root = 0.0;
    for (int n = r.window_begin; n <= order; ++n) {
        const double mag = std::abs(series(n));
        if (mag < 1e-300) continue;
        max_root = std::max(max_root, std::pow(mag, 1.0 / n));
    }
    if (max_root == 0.0) return r;

    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    int used = 0;
    for (int n = r.window_begin; n <= order; ++n) {
        const double mag = std::abs(series(n));
        if (mag < 1e-300 || std::pow(mag, 1.0 / n) < 0.5 * max_root) continue;
        const double x = n;
        const double y = std::log(n * mag);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++used;
    }
    r.terms_used = used;
    r.naive = 1.0 / max_root;
    if (used >= 2) {
        const double slope = (used * sxy - sx * sy) / (used * sxx - sx * sx);
        r.extrapolated = std::exp(-slope);
    } else {
        // Single surviving term: n |gamma_n| = R^-n.
        r.extrapolated = std::exp(-sy / sx);
    }
    r.estimate = std::min(r.naive, r.extrapolated);
    return r;
}

inline FeasibleSet family_feasible_set(const Spectrum& s, int n) {
    if (n < 1) throw ValidationError("family order n must be >= 1");
    if (s.effective_size() < 2) {
        // Q_n reduces to (-1)^n.
        if (n % 2 == 0) return FeasibleSet::ray();
        throw ComputeError("no constraint derivable: zero variance spectrum at odd order n=" +
                           std::to_string(n));
    }
    const auto mt = moments(s, 2 * n);
    const double var = mt.central[2];
    if (!(var > 0.0)) {
        throw ComputeError("no constraint derivable: zero variance");
    }

    // Polynomial in v = var * T^2 with standardized moments.
    std::vector<double> coeffs(static_cast<std::size_t>(n) + 1);
    double factorial = 1.0;
    double var_pow = 1.0;
    for (int k = 0; k <= n; ++k) {
        if (k > 0) {
            factorial *= static_cast<double>(2 * k - 1) * static_cast<double>(2 * k);
            var_pow *= var;
        }
        const double standardized = mt.central[static_cast<std::size_t>(2 * k)] / var_pow;
        const double sign = ((n - k) % 2 == 0) ? 1.0 : -1.0;
        coeffs[static_cast<std::size_t>(k)] = sign * standardized / factorial;
    }

    std::vector<double> breaks;
    for (double v : real_roots(coeffs)) {
        if (v > 0.0) breaks.push_back(v);
    }
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    const double inv_sigma = 1.0 / std::sqrt(var);
    auto to_time = [inv_sigma](double v) { return std::sqrt(v) * inv_sigma; };

    std::vector<Interval> kept;
    double lo_v = 0.0;
    bool prev_kept = false;
    for (std::size_t i = 0; i <= breaks.size(); ++i) {
        const bool last = i == breaks.size();
        const double hi_v = last ? std::numeric_limits<double>::infinity() : breaks[i];
        const double probe = last ? 2.0 * lo_v + 1.0 : 0.5 * (lo_v + hi_v);
        const bool keep = horner(coeffs, probe) >= 0.0;
        if (keep) {
            kept.push_back({to_time(lo_v), last ? hi_v : to_time(hi_v)});
        } else if (!prev_kept && i > 0) {
            // Isolated root between two excluded pieces: Q_n = 0 there.
            kept.push_back({to_time(lo_v), to_time(lo_v)});
        }
        prev_kept = keep;
        lo_v = hi_v;
    }
    return FeasibleSet(std::move(kept));
}

struct FamilyBound {
    double bound = 0.0;          // rescaled time
    std::vector<double> per_n;   // infimum after intersecting orders 1..n
    FeasibleSet intersection;
};

inline FamilyBound family_bound(const Spectrum& s, int n_max) {
    if (n_max < 1) throw ValidationError("n_max must be >= 1");
    if (s.effective_size() < 2 || !(variance(s) > 0.0)) {
        throw ComputeError("undefined bound: energy variance is zero (single level)");
    }
    FamilyBound out;
    out.intersection = FeasibleSet::ray();
    for (int n = 1; n <= n_max; ++n) {
        out.intersection = out.intersection.intersect(family_feasible_set(s, n));
        const auto inf = out.intersection.infimum();
        if (!inf) {
            throw ComputeError("internal inconsistency: empty intersection at order n=" + std::to_string(n));
        }
        out.per_n.push_back(*inf);
    }
    out.bound = out.per_n.back();
    return out;
}

// All values in natural units (rescaled times multiplied by hbar).
struct BoundReport {
    double hbar = 1.0;
    std::optional<double> ml;
    std::optional<double> mt;
    std::optional<double> family;
    std::vector<double> family_per_n;
    RadiusEstimate radius;
    std::optional<double> best; // max of ml, mt, family; radius never enters
};

inline BoundReport bound_report(const Spectrum& s, int n_max = 4, int gamma_order = 12) {
    BoundReport r;
    r.hbar = s.hbar();
    const double h = s.hbar();
    try {
        r.ml = ml_bound(s);
    } catch (const ComputeError&) {
    }
    try {
        r.mt = mt_bound(s);
    } catch (const ComputeError&) {
    }
    try {
        const auto fb = family_bound(s, n_max);
        r.family = fb.bound * h;
        for (double v : fb.per_n) r.family_per_n.push_back(v * h);
    } catch (const ComputeError&) {
    }
    r.radius = radius_estimate(s, gamma_order);
    if (r.radius.estimate) *r.radius.estimate *= h;
    r.radius.naive *= h;
    r.radius.extrapolated *= h;

    for (const auto& v : {r.ml, r.mt, r.family}) {
        if (v && (!r.best || *v > *r.best)) r.best = v;
    }
    return r;
}

// T0 (natural units) respects the certified bounds up to rounding slack.
inline bool consistent_with(const BoundReport& r, double t0) {
    if (!r.best) return true;
    return t0 >= *r.best - 1e-9 * (1.0 + *r.best);
}

} // namespace tzero
