// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT
//
// Unit conventions. The core stores angular frequencies in rad/s and times
// in seconds; every user-facing number is an ordinary frequency f = omega/2pi
// in MHz or GHz. The constants below make "2pi * f" conversions read as
// multiplications: omega = 150.0 * units::MHz.

#pragma once

namespace floqmap::units {

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

// Angular frequency per unit of ordinary frequency.
inline constexpr double Hz = two_pi;
inline constexpr double kHz = two_pi * 1e3;
inline constexpr double MHz = two_pi * 1e6;
inline constexpr double GHz = two_pi * 1e9;

// Time.
inline constexpr double s = 1.0;
inline constexpr double us = 1e-6;
inline constexpr double ns = 1e-9;

constexpr double to_Hz(double omega) { return omega / Hz; }
constexpr double to_kHz(double omega) { return omega / kHz; }
constexpr double to_MHz(double omega) { return omega / MHz; }
constexpr double to_GHz(double omega) { return omega / GHz; }

}  // namespace floqmap::units
