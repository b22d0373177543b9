#pragma once

#include "drbcbf/model.hpp"

#include <cstdint>
#include <string_view>

namespace drbcbf {

enum class DisturbanceKind { constant_direction, sinusoidal_direction, random_piecewise };

std::string_view to_string(DisturbanceKind kind);
DisturbanceKind parse_disturbance_kind(std::string_view text);

/// Additive process disturbance with ||d(t)|| <= xi.
///
///  - constant_direction:   xi v / ||v||
///  - sinusoidal_direction: xi s(t) / ||s(t)||,  s(t) = sin(rate * t + phase) componentwise; zero when s(t) = 0
///  - random_piecewise:     uniform samples of the xi-ball, held for `hold` seconds, keyed on (seed, segment)
struct DisturbanceSignal {
    DisturbanceKind kind = DisturbanceKind::constant_direction;
    double xi = 0.0;
    Vector direction;
    Vector rate;
    Vector phase;
    std::uint64_t seed = 0;
    double hold = 0.1;
    int dim = 0;

    static DisturbanceSignal constant(double xi, Vector direction);
    static DisturbanceSignal sinusoidal(double xi, Vector rate, Vector phase);
    static DisturbanceSignal random(double xi, int dim, std::uint64_t seed, double hold);
};

/// d(t). With `left_limit` the value on a segment boundary is taken from the preceding segment,
/// which lets an integrator step [t, t + h] see a single segment of a piecewise signal.
Vector disturbance_signal(const DisturbanceSignal& d, double t, bool left_limit = false);

/// Deterministic generator of samples for test and Monte-Carlo harnesses.
class SampleStream {
public:
    explicit SampleStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    /// Uniform in [0, 1).
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();
    /// Uniform on the unit sphere in R^n.
    Vector unit_vector(int n);
    /// Uniform in the radius-r ball in R^n.
    Vector in_ball(int n, double r);

private:
    std::uint64_t state_;
};

}  // namespace drbcbf
