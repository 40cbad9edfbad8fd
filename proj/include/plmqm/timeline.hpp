// timeline.hpp - timed pulse / propagation event sequences.

#pragma once

#include <algorithm>
#include <string>
#include <variant>
#include <vector>

#include "plmqm/field.hpp"
#include "plmqm/pulse_algebra.hpp"

namespace plmqm {

/// Forward absorption of the signal; starts at the first sample of `field`.
struct Absorb {
    FieldEnvelope field;
};

/// Backward retrieval stage on the given carrier transition.
struct Retrieve {
    real duration = 0.0;
    Transition carrier = Transition::t13;
};

/// Explicit field-free hold (free precession and decay).
struct Hold {
    real duration = 0.0;
};

using Action = std::variant<RfPulse, OpticalPiPulse, PlmPrep, Absorb, Retrieve, Hold>;

struct Event {
    real time = 0.0;
    Action action;
};

enum class Variant { basic, frequency_preserving, reprogrammed, on_demand, custom };

inline std::string_view to_string(Variant v)
{
    switch (v) {
    case Variant::basic: return "basic";
    case Variant::frequency_preserving: return "frequency_preserving";
    case Variant::reprogrammed: return "reprogrammed";
    case Variant::on_demand: return "on_demand";
    case Variant::custom: return "custom";
    }
    return "?";
}

inline Variant variant_from_string(std::string_view s)
{
    for (auto v : {Variant::basic, Variant::frequency_preserving, Variant::reprogrammed,
                   Variant::on_demand, Variant::custom}) {
        if (to_string(v) == s) return v;
    }
    throw InvalidConfig("unknown protocol variant '" + std::string(s) + "'");
}

struct ProtocolTimeline {
    Variant variant = Variant::custom;
    std::vector<Event> events;
    real expected_echo_time = 0.0;          // where the echo peak should appear at z = 0
    Transition echo_carrier = Transition::t13;
};

inline std::string_view action_name(const Action& a)
{
    return std::visit(
        [](const auto& v) -> std::string_view {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, RfPulse>) return "rf-pulse";
            else if constexpr (std::is_same_v<T, OpticalPiPulse>) return "optical-pi";
            else if constexpr (std::is_same_v<T, PlmPrep>) return "plm-prep";
            else if constexpr (std::is_same_v<T, Absorb>) return "absorb";
            else if constexpr (std::is_same_v<T, Retrieve>) return "retrieve";
            else return "decay-interval";
        },
        a);
}

/// Time the action occupies after its start (zero for instantaneous pulses).
inline real action_duration(const Action& a)
{
    return std::visit(
        [](const auto& v) -> real {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PlmPrep>) return v.tau + v.T;
            else if constexpr (std::is_same_v<T, Absorb>) return v.field.duration();
            else if constexpr (std::is_same_v<T, Retrieve>) return v.duration;
            else if constexpr (std::is_same_v<T, Hold>) return v.duration;
            else return 0.0;
        },
        a);
}

/// Throws InvalidTimeline unless times strictly increase, nothing overlaps a
/// stage, and there is exactly one absorb followed by exactly one retrieve.
inline void validate_timeline(const ProtocolTimeline& tl)
{
    if (tl.events.empty()) throw InvalidTimeline("timeline is empty");
    int absorbs = 0, retrieves = 0;
    std::size_t absorb_at = 0, retrieve_at = 0;
    for (std::size_t i = 0; i < tl.events.size(); ++i) {
        const Event& e = tl.events[i];
        if (!std::isfinite(e.time)) throw InvalidTimeline("event time is not finite");
        const real d = action_duration(e.action);
        if (!(d >= 0.0)) throw InvalidTimeline("negative duration in " + std::string(action_name(e.action)));
        if (i > 0) {
            const Event& prev = tl.events[i - 1];
            if (!(e.time > prev.time)) {
                throw InvalidTimeline("event times must be strictly increasing");
            }
            const real prev_end = prev.time + action_duration(prev.action);
            const real tol = 1e-9 * std::max({std::abs(prev_end), std::abs(e.time), 1e-30});
            if (e.time < prev_end - tol) {
                throw InvalidTimeline(std::string(action_name(e.action)) + " overlaps the preceding " +
                                      std::string(action_name(prev.action)) + " stage");
            }
        }
        if (const auto* a = std::get_if<Absorb>(&e.action)) {
            ++absorbs;
            absorb_at = i;
            if (!a->field.samples.empty() &&
                std::abs(a->field.start_time - e.time) > 1e-9 * std::max(std::abs(e.time), a->field.dt)) {
                throw InvalidTimeline("absorb event time must equal the first field sample time");
            }
        }
        if (std::holds_alternative<Retrieve>(e.action)) {
            ++retrieves;
            retrieve_at = i;
        }
    }
    if (absorbs != 1) throw InvalidTimeline("timeline needs exactly one absorb event");
    if (retrieves != 1) throw InvalidTimeline("timeline needs exactly one retrieve event");
    if (retrieve_at < absorb_at) throw InvalidTimeline("retrieve must follow absorb");
}

inline const FieldEnvelope& signal_of(const ProtocolTimeline& tl)
{
    for (const auto& e : tl.events)
        if (const auto* a = std::get_if<Absorb>(&e.action)) return a->field;
    throw InvalidTimeline("timeline has no absorb event");
}

}  // namespace plmqm
