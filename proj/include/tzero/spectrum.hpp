// spectrum.hpp - discrete energy distribution of an initial state and its moments.
//
// A Spectrum is the list of (E_j, |c_j|^2) pairs of a pure state expanded in
// the energy eigenbasis. Everything downstream (overlap, bounds, thermo)
// consumes it read-only.

#pragma once

#include "tzero/error.hpp"
#include "tzero/summation.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace tzero {

struct Level {
    double energy = 0.0;
    double weight = 0.0;
};

struct SpectrumOptions {
    // Rescale any positive weight total to 1 instead of rejecting it.
    bool renormalize = false;
    // Accepted |sum(w) - 1| when renormalize is false.
    double sum_tolerance = 1e-9;
    double hbar = 1.0;
};

// Energies equal within this relative distance are one degenerate level.
inline constexpr double kMergeTolerance = 1e-12;

class Spectrum {
public:
    Spectrum(std::vector<Level> levels, const SpectrumOptions& opts) : hbar_(opts.hbar) {
        if (!(std::isfinite(hbar_) && hbar_ > 0.0)) {
            throw ValidationError("hbar must be a positive finite number");
        }
        if (levels.empty()) {
            throw ValidationError("empty level list");
        }
        for (std::size_t i = 0; i < levels.size(); ++i) {
            const auto& l = levels[i];
            if (!std::isfinite(l.energy) || !std::isfinite(l.weight)) {
                throw ValidationError("level " + std::to_string(i) + " has a non-finite value");
            }
            if (l.weight < 0.0) {
                throw ValidationError("negative weight at level " + std::to_string(i));
            }
        }
        std::stable_sort(levels.begin(), levels.end(),
                         [](const Level& a, const Level& b) { return a.energy < b.energy; });

        levels_.reserve(levels.size());
        for (const auto& l : levels) {
            if (!levels_.empty()) {
                auto& prev = levels_.back();
                const double scale = std::max(1.0, std::abs(l.energy));
                if (std::abs(l.energy - prev.energy) <= kMergeTolerance * scale) {
                    prev.weight += l.weight;
                    continue;
                }
            }
            levels_.push_back(l);
        }

        CompensatedSum total;
        for (const auto& l : levels_) total += l.weight;
        const double sum = total.value();
        if (!(sum > 0.0)) {
            throw ValidationError("weights sum to zero");
        }
        if (!opts.renormalize && std::abs(sum - 1.0) > opts.sum_tolerance) {
            throw ValidationError("weight-sum violation: weights sum to " + std::to_string(sum));
        }
        // Tighten to the internal 1e-12 invariant even for human-written decimals.
        for (auto& l : levels_) l.weight /= sum;
    }

    explicit Spectrum(std::vector<Level> levels) : Spectrum(std::move(levels), SpectrumOptions{}) {}

    std::span<const Level> levels() const noexcept { return levels_; }
    std::size_t size() const noexcept { return levels_.size(); }
    double hbar() const noexcept { return hbar_; }

    Spectrum with_hbar(double hbar) const {
        SpectrumOptions opts;
        opts.hbar = hbar;
        return Spectrum(levels_, opts);
    }

    // Number of levels carrying nonzero weight.
    std::size_t effective_size() const noexcept {
        return static_cast<std::size_t>(std::count_if(
            levels_.begin(), levels_.end(), [](const Level& l) { return l.weight > 0.0; }));
    }

    // Lowest energy with nonzero weight (E_0).
    double ground_energy() const noexcept {
        for (const auto& l : levels_) {
            if (l.weight > 0.0) return l.energy;
        }
        return levels_.front().energy;
    }

    double top_energy() const noexcept {
        for (auto it = levels_.rbegin(); it != levels_.rend(); ++it) {
            if (it->weight > 0.0) return it->energy;
        }
        return levels_.back().energy;
    }

    // E_max - E_min over weighted levels; the highest beat frequency of |Phi|^2.
    double spectral_diameter() const noexcept { return top_energy() - ground_energy(); }

    // Smallest gap between consecutive weighted levels, 0 for a point spectrum.
    double min_gap() const noexcept {
        double gap = 0.0;
        const Level* prev = nullptr;
        for (const auto& l : levels_) {
            if (!(l.weight > 0.0)) continue;
            if (prev != nullptr) {
                const double g = l.energy - prev->energy;
                if (gap == 0.0 || g < gap) gap = g;
            }
            prev = &l;
        }
        return gap;
    }

    double mean_energy() const noexcept {
        CompensatedSum acc;
        for (const auto& l : levels_) acc += l.weight * l.energy;
        return acc.value();
    }

private:
    Spectrum() = default;
    friend Spectrum shift(const Spectrum& s, double offset);

    std::vector<Level> levels_;
    double hbar_ = 1.0;
};

// Energies moved by +offset; weights and hbar untouched.
inline Spectrum shift(const Spectrum& s, double offset) {
    Spectrum out;
    out.hbar_ = s.hbar_;
    out.levels_.assign(s.levels().begin(), s.levels().end());
    for (auto& l : out.levels_) l.energy += offset;
    return out;
}

// Shift so that <E> = 0.
inline Spectrum center(const Spectrum& s) { return shift(s, -s.mean_energy()); }

struct MomentTable {
    int max_order = 0;
    std::vector<double> raw;     // <E^n>, n = 0..max_order
    std::vector<double> central; // <(E - <E>)^n>
};

namespace detail {

inline std::vector<double> power_sums(std::span<const Level> levels, double origin,
                                      int max_order, const char* which) {
    std::vector<CompensatedSum> acc(static_cast<std::size_t>(max_order) + 1);
    for (const auto& l : levels) {
        const double x = l.energy - origin;
        double p = l.weight;
        for (int n = 0; n <= max_order; ++n) {
            acc[static_cast<std::size_t>(n)] += p;
            p *= x;
        }
    }
    std::vector<double> out;
    out.reserve(acc.size());
    for (int n = 0; n <= max_order; ++n) {
        const double v = acc[static_cast<std::size_t>(n)].value();
        if (!std::isfinite(v)) {
            throw ComputeError(std::string(which) + " moment overflow at order n=" + std::to_string(n));
        }
        out.push_back(v);
    }
    return out;
}

} // namespace detail

inline MomentTable moments(const Spectrum& s, int max_order) {
    if (max_order < 0) {
        throw ValidationError("moment order must be >= 0");
    }
    MomentTable t;
    t.max_order = max_order;
    t.raw = detail::power_sums(s.levels(), 0.0, max_order, "raw");
    t.central = detail::power_sums(s.levels(), s.mean_energy(), max_order, "central");
    t.raw[0] = 1.0;
    t.central[0] = 1.0;
    return t;
}

// <H - E_0>; summed as w_j (E_j - E_0) so the result is exactly >= 0.
inline double ground_gap_mean(const Spectrum& s) {
    const double e0 = s.ground_energy();
    CompensatedSum acc;
    for (const auto& l : s.levels()) acc += l.weight * (l.energy - e0);
    return std::max(0.0, acc.value());
}

inline double variance(const Spectrum& s) {
    const double mean = s.mean_energy();
    CompensatedSum acc;
    for (const auto& l : s.levels()) {
        const double d = l.energy - mean;
        acc += l.weight * d * d;
    }
    return acc.value();
}

} // namespace tzero
