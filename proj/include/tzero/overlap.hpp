// overlap.hpp - survival amplitude Phi(z) = sum_j w_j exp(-i E_j z), first
// orthogonalization time search and Zeno stasis quantities.
//
// Time arguments are rescaled, t = time / hbar. Conversion to natural units
// happens at report assembly.

#pragma once

#include "tzero/error.hpp"
#include "tzero/spectrum.hpp"
#include "tzero/summation.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tzero {

using complex = std::complex<double>;

// Works on any finite signed measure, not just validated spectra, so that
// invalid measures can be probed by the positive-definiteness checks.
inline complex overlap_at(std::span<const Level> levels, complex z) {
    if (z == complex(0.0, 0.0)) {
        CompensatedSum total;
        for (const auto& l : levels) total += l.weight;
        return {total.value(), 0.0};
    }
    CompensatedComplexSum acc;
    for (std::size_t j = 0; j < levels.size(); ++j) {
        const auto& l = levels[j];
        if (l.weight == 0.0) continue;
        // -i E z = E Im z - i E Re z
        const double growth = l.energy * z.imag();
        const double phase = -l.energy * z.real();
        const double mag = l.weight * std::exp(growth);
        if (!std::isfinite(mag)) {
            throw ComputeError("overlap overflow at level index " + std::to_string(j) +
                               " (E*Im z = " + std::to_string(growth) + ")");
        }
        acc += complex(mag * std::cos(phase), mag * std::sin(phase));
    }
    return acc.value();
}

inline complex overlap_at(const Spectrum& s, complex z) {
    if (z == complex(0.0, 0.0)) return {1.0, 0.0};
    return overlap_at(s.levels(), z);
}

// k-th derivative d^k Phi / dz^k = sum_j w_j (-i E_j)^k exp(-i E_j z).
inline complex overlap_derivative(std::span<const Level> levels, complex z, int k) {
    CompensatedComplexSum acc;
    const complex minus_i(0.0, -1.0);
    for (std::size_t j = 0; j < levels.size(); ++j) {
        const auto& l = levels[j];
        if (l.weight == 0.0) continue;
        const complex term = l.weight * std::pow(minus_i * l.energy, k) * std::exp(minus_i * l.energy * z);
        if (!std::isfinite(term.real()) || !std::isfinite(term.imag())) {
            throw ComputeError("overlap derivative overflow at level index " + std::to_string(j));
        }
        acc += term;
    }
    return acc.value();
}

inline double survival_probability(const Spectrum& s, double t) {
    return std::norm(overlap_at(s, complex(t, 0.0)));
}

struct ZeroSearchConfig {
    // Largest rescaled time searched; unset means default_horizon().
    std::optional<double> horizon;
    double zero_tol = 1e-9;
    double grid_factor = 0.05;

    void validate() const {
        if (horizon && !(*horizon > 0.0 && std::isfinite(*horizon))) {
            throw ValidationError("horizon must be positive");
        }
        if (!(zero_tol > 0.0 && zero_tol < 1.0)) {
            throw ValidationError("zero_tol must lie in (0, 1)");
        }
        if (!(grid_factor > 0.0 && grid_factor <= 0.25)) {
            throw ValidationError("grid_factor must lie in (0, 0.25]");
        }
    }
};

enum class ZeroStatus { found, no_zero_in_horizon, min_above_tol };

inline const char* to_string(ZeroStatus s) noexcept {
    switch (s) {
    case ZeroStatus::found: return "found";
    case ZeroStatus::no_zero_in_horizon: return "no_zero_in_horizon";
    case ZeroStatus::min_above_tol: return "min_above_tol";
    }
    return "unknown";
}

struct FirstZeroResult {
    ZeroStatus status = ZeroStatus::no_zero_in_horizon;
    std::optional<double> t0; // rescaled time, present iff status == found
    double min_abs = 1.0;     // smallest |Phi| seen (refined where bracketed)
    double argmin = 0.0;
};

// 64 periods of the slowest beat frequency.
inline double default_horizon(const Spectrum& s) {
    const double gap = s.min_gap();
    if (!(gap > 0.0)) return 2.0 * std::numbers::pi;
    return 64.0 * 2.0 * std::numbers::pi / gap;
}

namespace detail {

// Golden-section minimisation of f on [a, b] down to relative width rel_width.
template <class F>
std::pair<double, double> golden_minimize(F&& f, double a, double b, double rel_width) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int iter = 0; iter < 200; ++iter) {
        const double scale = std::max(std::abs(a), std::abs(b));
        if (b - a <= rel_width * std::max(scale, std::numeric_limits<double>::min())) break;
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? std::pair{c, fc} : std::pair{d, fd};
}

// Evaluates |Phi|^2 on t_k = k h by phasor recurrence, re-anchored exactly
// every kResync steps to bound the accumulated rounding.
class GridScanner {
public:
    GridScanner(std::span<const Level> levels, double step) : step_(step) {
        for (const auto& l : levels) {
            if (l.weight == 0.0) continue;
            weights_.push_back(l.weight);
            energies_.push_back(l.energy);
            rotors_.push_back(std::polar(1.0, -l.energy * step));
        }
        phasors_.assign(weights_.size(), complex(1.0, 0.0));
    }

    // |Phi(t_k)|^2 for the next k, starting at k = 0.
    double next() {
        if (k_ % kResync == 0) {
            const double t = static_cast<double>(k_) * step_;
            for (std::size_t j = 0; j < phasors_.size(); ++j) {
                phasors_[j] = std::polar(1.0, -energies_[j] * t);
            }
        }
        complex acc(0.0, 0.0);
        for (std::size_t j = 0; j < phasors_.size(); ++j) {
            acc += weights_[j] * phasors_[j];
            phasors_[j] *= rotors_[j];
        }
        ++k_;
        return std::norm(acc);
    }

private:
    static constexpr std::int64_t kResync = 256;
    double step_;
    std::int64_t k_ = 0;
    std::vector<double> weights_;
    std::vector<double> energies_;
    std::vector<complex> rotors_;
    std::vector<complex> phasors_;
};

} // namespace detail

inline FirstZeroResult find_first_zero(const Spectrum& s, const ZeroSearchConfig& cfg = {}) {
    cfg.validate();
    FirstZeroResult result;
    if (s.effective_size() < 2) {
        result.status = ZeroStatus::min_above_tol;
        result.min_abs = 1.0;
        result.argmin = 0.0;
        return result;
    }

    const double horizon = cfg.horizon.value_or(default_horizon(s));
    const double step = cfg.grid_factor / s.spectral_diameter();
    const auto count = static_cast<std::int64_t>(std::ceil(horizon / step));
    const double gate = 10.0 * cfg.zero_tol;
    auto abs2 = [&s](double t) { return std::norm(overlap_at(s, complex(t, 0.0))); };

    detail::GridScanner scanner(s.levels(), step);
    double g0 = scanner.next(); // k = 0
    double g1 = scanner.next(); // k = 1
    double best2 = std::min(g0, g1);
    double best_t = g1 < g0 ? step : 0.0;
    bool bracketed = false;

    for (std::int64_t k = 2; k <= count; ++k) {
        const double g2 = scanner.next();
        if (g2 < best2) {
            best2 = g2;
            best_t = static_cast<double>(k) * step;
        }
        if (g1 < g0 && g1 <= g2) {
            bracketed = true;
            const double lo = static_cast<double>(k - 2) * step;
            const double hi = static_cast<double>(k) * step;
            const auto [tm, fm] = detail::golden_minimize(abs2, lo, hi, 1e-14);
            if (fm < best2) {
                best2 = fm;
                best_t = tm;
            }
            const double refined = std::sqrt(fm);
            if (refined < gate) {
                result.min_abs = refined;
                result.argmin = tm;
                if (refined <= cfg.zero_tol) {
                    result.status = ZeroStatus::found;
                    result.t0 = tm;
                } else {
                    result.status = ZeroStatus::min_above_tol;
                }
                return result;
            }
        }
        g0 = g1;
        g1 = g2;
    }

    result.status = bracketed ? ZeroStatus::min_above_tol : ZeroStatus::no_zero_in_horizon;
    result.min_abs = std::sqrt(best2);
    result.argmin = best_t;
    return result;
}

struct ScanRow {
    double t = 0.0;
    complex phi;
};

// Phi on t_k = k step for k = 0 .. floor(t_max / step), evaluated directly.
inline std::vector<ScanRow> scan_overlap(const Spectrum& s, double t_max, double step) {
    if (!(step > 0.0 && std::isfinite(step))) throw ValidationError("scan step must be positive");
    if (!(t_max >= 0.0 && std::isfinite(t_max))) throw ValidationError("t_max must be >= 0");
    const auto count = static_cast<std::int64_t>(std::floor(t_max / step * (1.0 + 1e-12)));
    std::vector<ScanRow> rows;
    rows.reserve(static_cast<std::size_t>(count) + 1);
    for (std::int64_t k = 0; k <= count; ++k) {
        const double t = static_cast<double>(k) * step;
        rows.push_back({t, overlap_at(s, complex(t, 0.0))});
    }
    return rows;
}

struct ZenoStasis {
    double exact = 1.0;  // |Phi(t/n)|^(2n)
    double approx = 1.0; // exp(-(Delta H)^2 t^2 / n)
};

inline ZenoStasis zeno_stasis(const Spectrum& s, double t, std::int64_t n) {
    if (n < 1) throw ValidationError("measurement count n must be >= 1");
    if (!(t >= 0.0 && std::isfinite(t))) throw ValidationError("t must be >= 0");
    const double nd = static_cast<double>(n);
    ZenoStasis z;
    z.exact = std::pow(survival_probability(s, t / nd), nd);
    z.approx = std::exp(-variance(s) * t * t / nd);
    return z;
}

struct ZenoRequirement {
    std::int64_t n = 1;
    // (t / T0)^2 when T0 was supplied.
    std::optional<double> scale_ratio;
};

// Targets are compared with a 1e-12 relative slack so that exact equality
// cases (variance * t^2 == -ln target) resolve to the smaller n.
inline constexpr double kZenoTargetSlack = 1e-12;

inline ZenoRequirement zeno_required_n(const Spectrum& s, double t, double target,
                                       std::optional<double> t0 = std::nullopt) {
    if (!(target > 0.0 && target < 1.0)) {
        throw ValidationError("target must lie in (0, 1)");
    }
    if (!std::isfinite(t)) throw ValidationError("t must be finite");
    const double a = variance(s) * t * t;
    const double threshold = target * (1.0 - kZenoTargetSlack);
    auto meets = [&](double n) { return std::exp(-a / n) >= threshold; };

    const double guess = std::ceil(a / -std::log(target));
    if (!(guess < 9.0e18)) throw ComputeError("required measurement count overflows");
    auto n = std::max<std::int64_t>(1, static_cast<std::int64_t>(guess));
    while (n > 1 && meets(static_cast<double>(n - 1))) --n;
    while (!meets(static_cast<double>(n))) ++n;

    ZenoRequirement r;
    r.n = n;
    if (t0 && *t0 > 0.0) r.scale_ratio = (t / *t0) * (t / *t0);
    return r;
}

} // namespace tzero
