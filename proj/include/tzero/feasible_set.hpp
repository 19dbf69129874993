#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace tzero {

// Closed interval [lo, hi]; hi may be +inf.
struct Interval {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double t) const noexcept { return lo <= t && t <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

// Sorted, disjoint union of closed intervals inside [0, inf).
class FeasibleSet {
public:
    FeasibleSet() = default;

    // Sorts and merges overlapping or touching intervals.
    explicit FeasibleSet(std::vector<Interval> intervals) {
        std::sort(intervals.begin(), intervals.end(),
                  [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        for (auto iv : intervals) {
            iv.lo = std::max(iv.lo, 0.0);
            if (iv.hi < iv.lo) continue;
            if (!intervals_.empty() && iv.lo <= intervals_.back().hi) {
                intervals_.back().hi = std::max(intervals_.back().hi, iv.hi);
            } else {
                intervals_.push_back(iv);
            }
        }
    }

    static FeasibleSet ray(double from = 0.0) { return FeasibleSet({Interval{from}}); }

    const std::vector<Interval>& intervals() const noexcept { return intervals_; }
    bool empty() const noexcept { return intervals_.empty(); }

    std::optional<double> infimum() const noexcept {
        if (intervals_.empty()) return std::nullopt;
        return intervals_.front().lo;
    }

    bool contains(double t) const noexcept {
        return std::any_of(intervals_.begin(), intervals_.end(),
                           [t](const Interval& iv) { return iv.contains(t); });
    }

    FeasibleSet intersect(const FeasibleSet& other) const {
        std::vector<Interval> out;
        std::size_t i = 0;
        std::size_t j = 0;
        const auto& a = intervals_;
        const auto& b = other.intervals_;
        while (i < a.size() && j < b.size()) {
            const double lo = std::max(a[i].lo, b[j].lo);
            const double hi = std::min(a[i].hi, b[j].hi);
            if (lo <= hi) out.push_back({lo, hi});
            if (a[i].hi < b[j].hi) {
                ++i;
            } else {
                ++j;
            }
        }
        FeasibleSet s;
        s.intervals_ = std::move(out);
        return s;
    }

    FeasibleSet scaled(double factor) const {
        FeasibleSet s;
        s.intervals_ = intervals_;
        for (auto& iv : s.intervals_) {
            iv.lo *= factor;
            iv.hi *= factor;
        }
        return s;
    }

    std::string to_string() const;

private:
    std::vector<Interval> intervals_;
};

inline std::string FeasibleSet::to_string() const {
    if (intervals_.empty()) return "{}";
    std::string out;
    char buf[96];
    for (std::size_t k = 0; k < intervals_.size(); ++k) {
        const auto& iv = intervals_[k];
        if (std::isinf(iv.hi)) {
            std::snprintf(buf, sizeof buf, "[%.6f, inf)", iv.lo);
        } else {
            std::snprintf(buf, sizeof buf, "[%.6f, %.6f]", iv.lo, iv.hi);
        }
        if (k > 0) out += " U ";
        out += buf;
    }
    return out;
}

} // namespace tzero
