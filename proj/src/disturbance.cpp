#include "drbcbf/disturbance.hpp"

#include "drbcbf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace drbcbf {

std::string_view to_string(DisturbanceKind kind) {
    switch (kind) {
        case DisturbanceKind::constant_direction: return "constant";
        case DisturbanceKind::sinusoidal_direction: return "sinusoidal";
        case DisturbanceKind::random_piecewise: return "random";
    }
    return "unknown";
}

DisturbanceKind parse_disturbance_kind(std::string_view text) {
    if (text == "constant") return DisturbanceKind::constant_direction;
    if (text == "sinusoidal") return DisturbanceKind::sinusoidal_direction;
    if (text == "random") return DisturbanceKind::random_piecewise;
    throw ParameterError("unknown disturbance kind '" + std::string(text) + "'");
}

DisturbanceSignal DisturbanceSignal::constant(double xi, Vector direction) {
    DisturbanceSignal d;
    d.kind = DisturbanceKind::constant_direction;
    d.xi = xi;
    d.dim = static_cast<int>(direction.size());
    d.direction = std::move(direction);
    return d;
}

DisturbanceSignal DisturbanceSignal::sinusoidal(double xi, Vector rate, Vector phase) {
    if (rate.size() != phase.size()) throw ContractViolation("sinusoidal disturbance rate/phase sizes differ");
    DisturbanceSignal d;
    d.kind = DisturbanceKind::sinusoidal_direction;
    d.xi = xi;
    d.dim = static_cast<int>(rate.size());
    d.rate = std::move(rate);
    d.phase = std::move(phase);
    return d;
}

DisturbanceSignal DisturbanceSignal::random(double xi, int dim, std::uint64_t seed, double hold) {
    if (!(hold > 0.0)) throw ParameterError("random disturbance hold time must be positive");
    DisturbanceSignal d;
    d.kind = DisturbanceKind::random_piecewise;
    d.xi = xi;
    d.dim = dim;
    d.seed = seed;
    d.hold = hold;
    return d;
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

Vector normalized_or_zero(const Vector& v, double xi) {
    const double norm = v.norm();
    if (norm == 0.0 || xi == 0.0) return Vector::Zero(v.size());
    return xi * v / norm;
}

}  // namespace

std::uint64_t SampleStream::next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return splitmix64(state_);
}

double SampleStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double SampleStream::normal() {
    // Box-Muller; 1 - uniform() lies in (0, 1].
    const double r = std::sqrt(-2.0 * std::log(1.0 - uniform()));
    return r * std::cos(2.0 * std::numbers::pi * uniform());
}

Vector SampleStream::unit_vector(int n) {
    Vector v(n);
    do {
        for (int i = 0; i < n; ++i) v[i] = normal();
    } while (v.norm() == 0.0);
    return v / v.norm();
}

Vector SampleStream::in_ball(int n, double r) {
    const Vector dir = unit_vector(n);
    return r * std::pow(uniform(), 1.0 / n) * dir;
}

Vector disturbance_signal(const DisturbanceSignal& d, double t, bool left_limit) {
    switch (d.kind) {
        case DisturbanceKind::constant_direction:
            return normalized_or_zero(d.direction, d.xi);
        case DisturbanceKind::sinusoidal_direction: {
            const Vector s = (d.rate * t + d.phase).array().sin().matrix();
            return normalized_or_zero(s, d.xi);
        }
        case DisturbanceKind::random_piecewise: {
            // Boundaries within 1e-9 of a hold multiple count as on the boundary.
            const double pos = t / d.hold;
            const double seg = left_limit ? std::max(0.0, std::ceil(pos - 1e-9) - 1.0) : std::floor(pos + 1e-9);
            SampleStream stream(splitmix64(d.seed) ^ static_cast<std::uint64_t>(seg));
            if (d.xi == 0.0) return Vector::Zero(d.dim);
            return stream.in_ball(d.dim, d.xi);
        }
    }
    return Vector::Zero(d.dim);
}

}  // namespace drbcbf
