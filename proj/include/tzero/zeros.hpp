// zeros.hpp - complex zeros of Phi(z) by argument-principle cell scanning.
//
// Real zeros of Phi are the purely imaginary zeros of Z(beta) = Phi(-i beta).
// The region is tiled into cells; the winding number of Phi around each cell
// boundary counts the zeros inside, and cells with nonzero winding are
// subdivided and polished with Newton's method.

#pragma once

#include "tzero/error.hpp"
#include "tzero/overlap.hpp"
#include "tzero/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

namespace tzero {

struct Region {
    double re_min = 0.0;
    double re_max = 1.0;
    double im_min = -1.0;
    double im_max = 1.0;

    bool contains(complex z, double slack = 0.0) const noexcept {
        return z.real() >= re_min - slack && z.real() <= re_max + slack && z.imag() >= im_min - slack &&
               z.imag() <= im_max + slack;
    }
};

struct ComplexZero {
    complex location;
    double residual = 0.0; // |Phi| at location
    int winding = 1;
};

namespace detail {

struct Cell {
    double x0, x1, y0, y1;
    complex center() const noexcept { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
    double side() const noexcept { return std::max(x1 - x0, y1 - y0); }
};

class ZeroScanner {
public:
    explicit ZeroScanner(std::span<const Level> levels) {
        for (const auto& l : levels) {
            if (l.weight > 0.0) active_.push_back(l);
        }
    }

    // Phi(z) times a positive factor exp(-max_j E_j Im z): same argument and
    // zeros as Phi, but never overflows. Largest term magnitude is <= 1.
    complex scaled(complex z) const {
        double peak = -std::numeric_limits<double>::infinity();
        for (const auto& l : active_) peak = std::max(peak, l.energy * z.imag());
        complex acc(0.0, 0.0);
        for (const auto& l : active_) {
            acc += std::polar(l.weight * std::exp(l.energy * z.imag() - peak), -l.energy * z.real());
        }
        return acc;
    }

    // Winding number around the cell, or nullopt when the boundary passes
    // through (or too close to) a zero.
    std::optional<int> winding(const Cell& c, double sample_step) const {
        const complex corners[5] = {{c.x0, c.y0}, {c.x1, c.y0}, {c.x1, c.y1}, {c.x0, c.y1}, {c.x0, c.y0}};
        double total = 0.0;
        for (int e = 0; e < 4; ++e) {
            const complex a = corners[e];
            const complex b = corners[e + 1];
            const int segments = std::max(16, static_cast<int>(std::ceil(std::abs(b - a) / sample_step)));
            complex prev_z = a;
            complex prev_v = scaled(a);
            if (std::abs(prev_v) < kBoundaryTol) return std::nullopt;
            for (int k = 1; k <= segments; ++k) {
                const complex z = a + (b - a) * (static_cast<double>(k) / segments);
                const complex v = scaled(z);
                if (std::abs(v) < kBoundaryTol) return std::nullopt;
                const auto step = phase_change(prev_z, prev_v, z, v, 0);
                if (!step) return std::nullopt;
                total += *step;
                prev_z = z;
                prev_v = v;
            }
        }
        return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
    }

    // Newton (multiplicity-aware) polish from start; nullopt on failure.
    std::optional<ComplexZero> polish(complex start, int multiplicity) const {
        complex z = start;
        const double m = std::max(1, multiplicity);
        for (int iter = 0; iter < 200; ++iter) {
            const complex f = overlap_at(active_, z);
            if (f == complex(0.0, 0.0)) break;
            const complex d = overlap_derivative(active_, z, 1);
            if (d == complex(0.0, 0.0)) return std::nullopt;
            const complex step = m * f / d;
            z -= step;
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return std::nullopt;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        ComplexZero out;
        out.location = z;
        out.residual = std::abs(overlap_at(active_, z));
        out.winding = multiplicity;
        if (!(out.residual <= kResidualTol)) return std::nullopt;
        return out;
    }

    void refine(const Cell& c, int wind, double sample_step, int depth, std::vector<ComplexZero>& out) const {
        if (wind == 1 || depth >= kMaxDepth) {
            if (auto z = polish(c.center(), wind)) {
                const double slack = 1e-9 * std::max(1.0, c.side());
                if (z->location.real() >= c.x0 - slack && z->location.real() <= c.x1 + slack &&
                    z->location.imag() >= c.y0 - slack && z->location.imag() <= c.y1 + slack) {
                    out.push_back(*z);
                    return;
                }
            }
            if (depth >= kMaxDepth) {
                throw ComputeError("failed to polish a zero located by winding count");
            }
        }
        // Split at the midpoint, falling back to an off-centre split if a
        // child boundary hits a zero.
        for (double frac : {0.5, 0.5 + 1.0 / 7.0, 0.5 - 1.0 / 11.0}) {
            const double xm = c.x0 + frac * (c.x1 - c.x0);
            const double ym = c.y0 + frac * (c.y1 - c.y0);
            const Cell kids[4] = {{c.x0, xm, c.y0, ym}, {xm, c.x1, c.y0, ym}, {c.x0, xm, ym, c.y1}, {xm, c.x1, ym, c.y1}};
            std::optional<int> w[4];
            int sum = 0;
            bool ok = true;
            const double kid_step = sample_step * 0.5;
            for (int k = 0; k < 4 && ok; ++k) {
                w[k] = winding(kids[k], kid_step);
                if (!w[k]) ok = false;
                else sum += *w[k];
            }
            if (!ok || sum != wind) continue;
            for (int k = 0; k < 4; ++k) {
                if (*w[k] > 0) refine(kids[k], *w[k], kid_step, depth + 1, out);
            }
            return;
        }
        if (auto z = polish(c.center(), wind)) {
            out.push_back(*z);
            return;
        }
        throw ComputeError("could not isolate zeros inside a cell");
    }

    static constexpr double kBoundaryTol = 1e-12;
    static constexpr double kResidualTol = 1e-8;
    static constexpr int kMaxDepth = 14;

private:
    // Argument increment from (za, va) to (zb, vb), bisecting while a single
    // step exceeds pi/2.
    std::optional<double> phase_change(complex za, complex va, complex zb, complex vb, int depth) const {
        const double d = std::arg(vb / va);
        if (std::abs(d) <= std::numbers::pi / 2.0) return d;
        if (depth >= 40) return std::nullopt;
        const complex zm = 0.5 * (za + zb);
        const complex vm = scaled(zm);
        if (std::abs(vm) < kBoundaryTol) return std::nullopt;
        const auto left = phase_change(za, va, zm, vm, depth + 1);
        if (!left) return std::nullopt;
        const auto right = phase_change(zm, vm, zb, vb, depth + 1);
        if (!right) return std::nullopt;
        return *left + *right;
    }

    std::vector<Level> active_;
};

} // namespace detail

// Zeros of Phi inside region, sorted by real then imaginary part. A tiling
// whose cell boundary passes through a zero is shifted by cell/7 and redone.
inline std::vector<ComplexZero> complex_zero_scan(const Spectrum& s, const Region& region, double cell) {
    if (!(cell > 0.0) || !std::isfinite(cell)) throw ValidationError("cell must be positive");
    if (!(region.re_max > region.re_min) || !(region.im_max > region.im_min) ||
        !std::isfinite(region.re_min) || !std::isfinite(region.re_max) || !std::isfinite(region.im_min) ||
        !std::isfinite(region.im_max)) {
        throw ValidationError("region must be a bounded, nonempty rectangle");
    }
    if (s.effective_size() < 2) return {};

    const detail::ZeroScanner scanner(s.levels());
    const double sample_step = cell / 16.0;

    for (int attempt = 0; attempt < 7; ++attempt) {
        const double offset = attempt * cell / 7.0;
        const double x0 = region.re_min - offset;
        const double y0 = region.im_min - offset;
        const double width = region.re_max - x0;
        const double height = region.im_max - y0;
        const auto nx = static_cast<int>(std::ceil(width / cell));
        const auto ny = static_cast<int>(std::ceil(height / cell));
        const double dx = width / nx;
        const double dy = height / ny;

        std::vector<std::pair<detail::Cell, int>> hits;
        bool clean = true;
        for (int i = 0; i < nx && clean; ++i) {
            for (int j = 0; j < ny; ++j) {
                const detail::Cell c{x0 + i * dx, i + 1 == nx ? region.re_max : x0 + (i + 1) * dx,
                                     y0 + j * dy, j + 1 == ny ? region.im_max : y0 + (j + 1) * dy};
                const auto w = scanner.winding(c, sample_step);
                if (!w) {
                    clean = false;
                    break;
                }
                if (*w > 0) hits.emplace_back(c, *w);
            }
        }
        if (!clean) continue;

        std::vector<ComplexZero> zeros;
        for (const auto& [c, w] : hits) scanner.refine(c, w, sample_step, 0, zeros);
        const double slack = 1e-9 * std::max(1.0, std::abs(complex(region.re_max, region.im_max)));
        std::erase_if(zeros, [&](const ComplexZero& z) { return !region.contains(z.location, slack); });
        std::sort(zeros.begin(), zeros.end(), [](const ComplexZero& a, const ComplexZero& b) {
            if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
            return a.location.imag() < b.location.imag();
        });
        return zeros;
    }
    throw ComputeError("every jittered tiling put a zero on a cell boundary");
}

} // namespace tzero
