// types.hpp - shared value types, transition labels and error classes for plmqm.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace plmqm {

using real = double;
using cplx = std::complex<double>;

inline constexpr real pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

// ---------------------------------------------------------------------------
// Errors. Every failure mode named by the module contracts has its own type so
// the CLI can map it to an exit code without string matching.
// ---------------------------------------------------------------------------

struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidConfig : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidTimeline : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SingularArgument : std::domain_error {
    using std::domain_error::domain_error;
};

struct PreconditionViolation : std::logic_error {
    using std::logic_error::logic_error;
};

struct NotFound : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct InsufficientData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Wavevectors (rad/m).
// ---------------------------------------------------------------------------

struct Vec3 {
    real x = 0.0;
    real y = 0.0;
    real z = 0.0;

    friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr Vec3 operator*(real s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
    friend constexpr bool operator==(Vec3 a, Vec3 b) = default;

    constexpr real dot(Vec3 o) const { return x * o.x + y * o.y + z * o.z; }
    real norm() const { return std::sqrt(dot(*this)); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

using WaveVector = Vec3;

// ---------------------------------------------------------------------------
// Level and transition labels.
//
// Levels 1, 2 are the spin sublevels of the optical ground state, 3 and 4 the
// sublevels of the excited optical state and s the auxiliary shelving level.
// ---------------------------------------------------------------------------

enum class Transition {
    t12,  // RF spin transition
    t23,  // signal transition
    t13,  // echo transition of the basic scheme
    t14,  // preparation / reprogramming laser pulses
    t24,  // storage-time reduction pulses
    t3s,  // shelving pulses for on-demand readout
};

inline std::string_view to_string(Transition t)
{
    switch (t) {
    case Transition::t12: return "1-2";
    case Transition::t23: return "2-3";
    case Transition::t13: return "1-3";
    case Transition::t14: return "1-4";
    case Transition::t24: return "2-4";
    case Transition::t3s: return "3-s";
    }
    return "?";
}

inline Transition transition_from_string(std::string_view s)
{
    for (auto t : {Transition::t12, Transition::t23, Transition::t13, Transition::t14,
                   Transition::t24, Transition::t3s}) {
        if (to_string(t) == s) return t;
    }
    throw InvalidArgument("unknown transition '" + std::string(s) + "'");
}

enum class Direction { forward, backward };

inline std::string_view to_string(Direction d)
{
    return d == Direction::forward ? "forward" : "backward";
}

}  // namespace plmqm
