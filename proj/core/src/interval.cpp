// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT

#include "floqmap/interval.hpp"

#include <limits>
#include <stdexcept>

namespace floqmap {

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
}

Interval widen(Interval a) {
    return {std::nextafter(a.lo, -inf), std::nextafter(a.hi, inf)};
}

Interval operator+(Interval a, Interval b) { return widen({a.lo + b.lo, a.hi + b.hi}); }

Interval operator-(Interval a, Interval b) { return widen({a.lo - b.hi, a.hi - b.lo}); }

Interval operator-(Interval a) { return {-a.hi, -a.lo}; }

Interval operator*(Interval a, Interval b) {
    const double c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return widen({std::min({c[0], c[1], c[2], c[3]}), std::max({c[0], c[1], c[2], c[3]})});
}

Interval operator/(Interval a, Interval b) {
    if (b.contains(0.0)) throw std::domain_error("interval division by an interval containing 0");
    const double c[4] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
    return widen({std::min({c[0], c[1], c[2], c[3]}), std::max({c[0], c[1], c[2], c[3]})});
}

Interval abs(Interval a) {
    if (a.lo >= 0.0) return a;
    if (a.hi <= 0.0) return {-a.hi, -a.lo};
    return {0.0, std::max(-a.lo, a.hi)};
}

Interval intersect(Interval a, Interval b) {
    return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

Interval hull(Interval a, Interval b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

}  // namespace floqmap
