// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT
//
// Closed-interval arithmetic with outward rounding (one-ulp nudges after each
// operation), enough for the allocator's branch-and-prune: the enclosures are
// conservative rather than optimal, which only makes pruning safer.

#pragma once

#include <algorithm>
#include <cmath>

namespace floqmap {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double point) : lo(point), hi(point) {}
    Interval(double l, double h) : lo(l), hi(h) {}

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    // Largest and smallest magnitude over the interval.
    double mag() const { return std::max(std::abs(lo), std::abs(hi)); }
    double mig() const { return contains(0.0) ? 0.0 : std::min(std::abs(lo), std::abs(hi)); }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool empty() const { return !(lo <= hi); }
};

Interval widen(Interval a);  // one-ulp outward nudge

Interval operator+(Interval a, Interval b);
Interval operator-(Interval a, Interval b);
Interval operator-(Interval a);
Interval operator*(Interval a, Interval b);
Interval operator/(Interval a, Interval b);  // throws if b contains 0
Interval abs(Interval a);
Interval intersect(Interval a, Interval b);  // may be empty
Interval hull(Interval a, Interval b);

inline Interval operator+(Interval a, double b) { return a + Interval(b); }
inline Interval operator-(Interval a, double b) { return a - Interval(b); }
inline Interval operator*(double a, Interval b) { return Interval(a) * b; }

}  // namespace floqmap
