#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace bellgame {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Maximal quantum violation of a Cereceda inequality, (sqrt(2) - 1) / 2.
inline const double kCirelsonBound = (std::sqrt(2.0) - 1.0) / 2.0;

// Default RNG seed for solver and search runs (reproducible by default,
// overridable via SolverConfig/SearchConfig or the CLI --seed flag).
inline constexpr std::uint64_t kDefaultSeed = 20070401;

// Wraps an angle to [0, 2*pi).
inline double wrap_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    // fmod can return exactly kTwoPi after the correction when theta is a
    // tiny negative number.
    if (t >= kTwoPi) t -= kTwoPi;
    if (t == 0.0) return 0.0;  // normalize -0
    return t;
}

// Signed circular difference a - b wrapped to (-pi, pi].
inline double angle_diff(double a, double b) {
    double d = std::fmod(a - b, kTwoPi);
    if (d <= -kPi) d += kTwoPi;
    if (d > kPi) d -= kTwoPi;
    return d;
}

// Distance between two angles on the circle, in [0, pi].
inline double circle_dist(double a, double b) { return std::abs(angle_diff(a, b)); }

}  // namespace bellgame
