#include "doctest.h"

#include "drbcbf/disturbance.hpp"

#include <cmath>

using namespace drbcbf;

TEST_CASE("constant direction example") {
    Vector v(2);
    v << 1.0, 1.0;
    const Vector d = disturbance_signal(DisturbanceSignal::constant(0.08, v), 3.0);
    CHECK(d[0] == doctest::Approx(0.0565685).epsilon(1e-6));
    CHECK(d[1] == doctest::Approx(0.0565685).epsilon(1e-6));
    CHECK(d.norm() == doctest::Approx(0.08));
    CHECK(disturbance_signal(DisturbanceSignal::constant(0.08, Vector::Zero(2)), 1.0).norm() == 0.0);
}

TEST_CASE("sinusoidal direction example at t = 0") {
    Vector rate = Vector::Constant(3, 0.5);
    Vector phase(3);
    phase << M_PI / 2.0, 0.0, -M_PI / 2.0;
    const Vector d = disturbance_signal(DisturbanceSignal::sinusoidal(0.1, rate, phase), 0.0);
    const double c = 0.1 / std::sqrt(2.0);
    CHECK(d[0] == doctest::Approx(c).epsilon(1e-12));
    CHECK(std::abs(d[1]) <= 1e-15);
    CHECK(d[2] == doctest::Approx(-c).epsilon(1e-12));
}

TEST_CASE("every signal respects the bound") {
    SampleStream rng(1);
    Vector rate(3), phase(3), dir(3);
    rate << 0.5, 1.3, 0.2;
    phase << 0.1, -2.0, 1.0;
    dir << 1.0, -2.0, 0.5;
    const DisturbanceSignal signals[] = {
        DisturbanceSignal::constant(0.1, dir),
        DisturbanceSignal::sinusoidal(0.1, rate, phase),
        DisturbanceSignal::random(0.1, 3, 42, 0.25),
    };
    for (const auto& sig : signals) {
        for (int i = 0; i < 1000; ++i) {
            const double t = rng.uniform(0.0, 100.0);
            CHECK(disturbance_signal(sig, t).norm() <= 0.1 * (1.0 + 1e-12));
            CHECK(disturbance_signal(sig, t, true).norm() <= 0.1 * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("random piecewise signal is held and reproducible") {
    const DisturbanceSignal sig = DisturbanceSignal::random(0.2, 2, 7, 0.5);
    const Vector a = disturbance_signal(sig, 0.5);
    CHECK(disturbance_signal(sig, 0.74) == a);
    CHECK(disturbance_signal(sig, 0.99) == a);
    CHECK(disturbance_signal(sig, 1.0, true) == a);
    CHECK(disturbance_signal(sig, 1.0) != a);
    CHECK(disturbance_signal(sig, 0.5, true) == disturbance_signal(sig, 0.25));
    CHECK(disturbance_signal(DisturbanceSignal::random(0.2, 2, 7, 0.5), 0.6) == a);
    CHECK(disturbance_signal(DisturbanceSignal::random(0.2, 2, 8, 0.5), 0.6) != a);
}

TEST_CASE("sample stream distributions") {
    SampleStream rng(99);
    double sum = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
    }
    CHECK(sum / 10000.0 == doctest::Approx(0.5).epsilon(0.03));
    for (int i = 0; i < 100; ++i) {
        CHECK(rng.unit_vector(4).norm() == doctest::Approx(1.0));
        CHECK(rng.in_ball(3, 0.3).norm() <= 0.3);
    }
    SampleStream a(5), b(5);
    for (int i = 0; i < 10; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("kind names") {
    CHECK(parse_disturbance_kind("random") == DisturbanceKind::random_piecewise);
    CHECK(to_string(DisturbanceKind::sinusoidal_direction) == "sinusoidal");
    CHECK_THROWS(parse_disturbance_kind("gust"));
}
