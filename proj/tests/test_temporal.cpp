#include <doctest.h>

#include <cmath>
#include <functional>

#include "complexmech/temporal_barrier.hpp"

using namespace complexmech;
using namespace complexmech::temporal;

namespace {

const Units kUnits{};

// Plain bisection, independent of the integrator's event location.
double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

ClassicalState at_start(double t, double p0, double m = 1.0) { return {t, 0.0, p0, 0.0, 0.0, m, 1}; }

std::optional<double> event_time(const Trajectory& tr, EventKind kind) {
    for (const auto& e : tr.events)
        if (e.kind == kind) return e.t;
    return std::nullopt;
}

}  // namespace

TEST_SUITE("temporal_barrier") {

TEST_CASE("square profile") {
    const auto p = TemporalProfile::square(1.0, 2.0, 3.0);
    CHECK(profile_value(p, 0.5) == 0.0);
    CHECK(profile_value(p, 1.0) == 3.0);
    CHECK(profile_value(p, 1.5) == 3.0);
    CHECK(profile_value(p, 2.0) == 0.0);
    CHECK(profile_value_before(p, 1.0) == 0.0);
    CHECK(profile_value_before(p, 2.0) == 3.0);
    CHECK(p.breakpoints() == std::vector<double>{1.0, 2.0});
}

TEST_CASE("smooth bump is C1") {
    const auto p = TemporalProfile::smooth_bump(0.5, 1.0, 2.0, 2.5, 0.8);
    CHECK(profile_value(p, 1.5) == 0.8);
    CHECK(profile_value(p, 0.5) == 0.0);
    CHECK(profile_value(p, 2.5) == 0.0);
    CHECK(profile_value(p, 0.75) == doctest::Approx(0.4));
    const double h = 1e-6;
    for (double b : p.breakpoints()) {
        CAPTURE(b);
        const double left = (profile_value(p, b) - profile_value(p, b - h)) / h;
        const double right = (profile_value(p, b + h) - profile_value(p, b)) / h;
        CHECK(std::abs(left) < 1e-5);
        CHECK(std::abs(right) < 1e-5);
    }
    // Value continuity everywhere on a fine sweep.
    for (int i = 0; i < 3000; ++i) {
        const double t = i * 1e-3;
        CHECK(std::abs(profile_value(p, t + 1e-9) - profile_value(p, t)) < 1e-8);
    }
}

TEST_CASE("profile validation") {
    CHECK_THROWS_AS(TemporalProfile::square(2.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(TemporalProfile::square(1.0, 2.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(TemporalProfile::smooth_bump(1.0, 1.0, 2.0, 3.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(profile_kind_from_string("gaussian"), std::invalid_argument);
    CHECK(profile_kind_from_string("smooth_bump") == ProfileKind::SmoothBump);
    CHECK(energy_model_from_string("rel") == EnergyModel::Rel);
}

TEST_CASE("total energy examples") {
    const auto none = TemporalProfile::square(1.0, 2.0, 0.0);
    CHECK(total_energy({0.0, 0.0, 2.0, 0.0, 0.0, 1.0}, none, EnergyModel::NonRel, kUnits) == Complex(2.0, 0.0));
    CHECK(total_energy({0.0, 0.0, 0.0, 0.0, 2.0, 1.0}, none, EnergyModel::NonRel, kUnits) == Complex(-2.0, 0.0));
    const auto w = TemporalProfile::square(1.0, 2.0, 0.7);
    CHECK(total_energy({1.5, 0.0, 1.0, 0.0, 0.0, 1.0}, w, EnergyModel::NonRel, kUnits).real() ==
          doctest::Approx(1.2));
    CHECK_THROWS_AS(total_energy({0.0, 0.0, 1.0, 0.0, 0.0, 1.0}, none, EnergyModel::Rel, kUnits), std::domain_error);
    CHECK_THROWS_AS(total_energy({0.0, 0.0, 0.0, 0.0, 1.0, 1.0}, none, EnergyModel::Rel, kUnits), std::domain_error);
}

TEST_CASE("rest in both worlds has zero relativistic energy") {
    const auto p = TemporalProfile::square(1.0, 2.0, 1.0);
    for (double c : {1.0, 10.0, 3e8}) {
        for (double m : {1e-3, 1.0, 1e3}) {
            CAPTURE(m);
            const Units u{1.0, c, 1.0};
            CHECK(total_energy({0.0, 0.0, 0.0, 0.0, 0.0, m}, p, EnergyModel::Rel, u) == Complex(0.0, 0.0));
            ClassicalState neg{0.0, 0.0, 0.0, 0.0, 0.0, m, -1};
            CHECK(total_energy(neg, p, EnergyModel::Rel, u) == Complex(0.0, 0.0));
        }
    }
    // Moving in the real world only: m c^2 (gamma - 1), the usual kinetic energy.
    const Units u{1.0, 10.0, 1.0};
    const Complex e = total_energy({0.0, 0.0, 1.0, 0.0, 0.0, 1.0}, TemporalProfile::square(1.0, 2.0, 0.0),
                                   EnergyModel::Rel, u);
    CHECK(e.real() == doctest::Approx(100.0 * (1.0 / std::sqrt(1.0 - 0.01) - 1.0)).epsilon(1e-12));
    CHECK(e.imag() == 0.0);
}

TEST_CASE("W = 0 is free motion") {
    const auto p = TemporalProfile::square(1.0, 2.0, 0.0);
    const auto tr = integrate_classical(at_start(0.0, 1.3, 2.0), p, EnergyModel::NonRel, 1e-2, 3.0, kUnits);
    CHECK(tr.events.size() == 2);  // barrier edges only
    CHECK_FALSE(tr.destroyed);
    for (const auto& s : tr.samples) {
        CHECK(s.state.p_re == 1.3);
        CHECK(total_energy(s.state, p, EnergyModel::NonRel, kUnits).real() == tr.total_energy);
        CHECK(s.state.q_re == doctest::Approx(0.65 * s.state.t).epsilon(1e-13));
    }
    CHECK(tr.samples.back().state.t == 3.0);
}

TEST_CASE("W0 < E0 dips and recovers") {
    for (double m : {0.5, 1.0, 4.0}) {
        CAPTURE(m);
        const double p0 = 1.0, e0 = p0 * p0 / (2.0 * m), w0 = 0.6 * e0;
        const auto p = TemporalProfile::smooth_bump(0.5, 1.0, 2.0, 2.5, w0);
        const auto tr = integrate_classical(at_start(0.0, p0, m), p, EnergyModel::NonRel, 1e-3, 3.0, kUnits);
        CHECK_FALSE(tr.destroyed);
        CHECK_FALSE(event_time(tr, EventKind::EnergyZero));
        REQUIRE(event_time(tr, EventKind::BarrierEntered));
        CHECK(*event_time(tr, EventKind::BarrierEntered) == 0.5);
        CHECK(*event_time(tr, EventKind::BarrierExited) == 2.5);
        for (const auto& s : tr.samples) {
            const double expect = std::sqrt(2.0 * m * (e0 - profile_value(p, s.state.t)));
            CHECK(std::abs(s.state.p_re - expect) < 1e-6 * expect);
            const double rel = std::abs(total_energy(s.state, p, EnergyModel::NonRel, kUnits).real() - e0) / e0;
            CHECK(rel < 1e-8);
        }
        CHECK(std::abs(tr.samples.back().state.p_re - p0) < 1e-6 * p0);
        double lowest = p0;
        for (const auto& s : tr.samples) lowest = std::min(lowest, s.state.p_re);
        CHECK(lowest == doctest::Approx(std::sqrt(2.0 * m * (e0 - w0))).epsilon(1e-12));
    }
}

TEST_CASE("step refinement bounds dW") {
    const auto p = TemporalProfile::smooth_bump(0.5, 1.0, 2.0, 2.5, 0.3);
    const auto coarse = integrate_classical(at_start(0.0, 1.0), p, EnergyModel::NonRel, 0.1, 3.0, kUnits);
    CHECK(coarse.rejected_steps > 0);
    for (std::size_t i = 1; i < coarse.samples.size(); ++i)
        CHECK(std::abs(coarse.samples[i].w - coarse.samples[i - 1].w) <= 0.01 * 0.3 + 1e-15);
    const auto sq = TemporalProfile::square(1.0, 2.0, 0.3);
    const auto square = integrate_classical(at_start(0.0, 1.0), sq, EnergyModel::NonRel, 0.1, 3.0, kUnits);
    CHECK(square.rejected_steps == 0);
    CHECK_THROWS_AS(integrate_classical(at_start(0.0, 1.0), sq, EnergyModel::NonRel, 0.0, 3.0, kUnits),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate_classical(at_start(0.0, 1.0), sq, EnergyModel::NonRel, 0.1, 0.0, kUnits),
                    std::invalid_argument);
}

TEST_CASE("square barrier above E0 destroys the classical system at t_a") {
    const auto p = TemporalProfile::square(1.0, 2.0, 1.0);
    const auto tr = integrate_classical(at_start(0.0, 1.0), p, EnergyModel::NonRel, 1e-3, 3.0, kUnits);
    CHECK(tr.destroyed);
    REQUIRE(tr.events.size() == 3);
    CHECK(tr.events[0].kind == EventKind::BarrierEntered);
    CHECK(tr.events[1].kind == EventKind::EnergyZero);
    CHECK(tr.events[2].kind == EventKind::Destroyed);
    for (const auto& e : tr.events) CHECK(e.t == 1.0);
    CHECK(tr.samples.back().state.t == 1.0);
    CHECK(tr.samples.back().event == "BarrierEntered+EnergyZero+Destroyed");
}

TEST_CASE("event time converges to the bisection root") {
    const double e0 = 0.5;
    const auto p = TemporalProfile::smooth_bump(0.5, 1.0, 2.0, 2.5, 0.8);
    const double root = bisect_root([&](double t) { return e0 - profile_value(p, t); }, 0.5, 1.0);
    double previous = INFINITY;
    for (double dt : {1e-1, 1e-2, 1e-3, 1e-4}) {
        CAPTURE(dt);
        const auto tr = integrate_classical(at_start(0.0, 1.0), p, EnergyModel::NonRel, dt, 3.0, kUnits);
        REQUIRE(tr.destroyed);
        const double t_event = *event_time(tr, EventKind::Destroyed);
        CHECK(*event_time(tr, EventKind::EnergyZero) == t_event);
        const double err = std::abs(t_event - root);
        CHECK(err <= dt);
        CHECK(err <= previous);
        previous = err;
        const auto& last = tr.samples.back();
        CHECK(last.state.t == t_event);
        CHECK(last.system_energy == 0.0);
    }
}

TEST_CASE("relativistic run flips mass sign and continues") {
    const Units u{1.0, 10.0, 1.0};
    const auto p = TemporalProfile::smooth_bump(0.5, 1.0, 2.0, 2.5, 0.8);
    const auto tr = integrate_classical(at_start(0.0, 1.0), p, EnergyModel::Rel, 1e-3, 3.0, u);
    CHECK_FALSE(tr.destroyed);
    CHECK(tr.time_direction == -1);
    CHECK_FALSE(event_time(tr, EventKind::Destroyed));
    const auto tz = event_time(tr, EventKind::EnergyZero);
    REQUIRE(tz);
    CHECK(tr.samples.back().state.t == 3.0);
    for (const auto& s : tr.samples) CHECK(s.state.mass_sign == (s.state.t < *tz ? 1 : -1));
    // Negative system energy is carried by imaginary motion.
    bool saw_imaginary = false;
    for (const auto& s : tr.samples) {
        if (s.system_energy < 0.0) {
            saw_imaginary = true;
            CHECK(s.state.p_re == 0.0);
            CHECK(s.state.pi_im == doctest::Approx(std::sqrt(-2.0 * s.system_energy)).epsilon(1e-12));
        }
    }
    CHECK(saw_imaginary);
}

TEST_CASE("quantum contrast") {
    SUBCASE("barrier above E0") {
        const auto q = quantum_contrast(TemporalProfile::square(1.0, 2.0, 1.0), 1.0, 1.0, kUnits);
        CHECK(q.e0 == 0.5);
        CHECK(q.e_t == -0.5);
        CHECK(q.conservation_defect == 0.0);
        CHECK(q.quantum_survives);
        CHECK(q.classical_destroyed);
        CHECK(q.classical_event_time == 1.0);
        CHECK_FALSE(q.marginal);
        CHECK(q.state.regions[1].label.p_im == Complex(0.0, 1.0));
    }
    SUBCASE("barrier below E0") {
        const auto q = quantum_contrast(TemporalProfile::square(1.0, 2.0, 0.3), 1.0, 1.0, kUnits);
        CHECK(q.quantum_survives);
        CHECK_FALSE(q.classical_destroyed);
        CHECK_FALSE(q.classical_event_time);
        CHECK(q.state.regions[1].label.p_re.real() == doctest::Approx(std::sqrt(0.4)));
    }
    SUBCASE("marginal") {
        const auto q = quantum_contrast(TemporalProfile::square(1.0, 2.0, 0.5), 1.0, 1.0, kUnits);
        CHECK(q.marginal);
        CHECK(q.e_t == 0.0);
        CHECK(q.state.regions[1].label.p_im == Complex(0.0, 0.0));
        CHECK(q.state.regions[1].label.p_re == Complex(0.0, 0.0));
        CHECK(q.quantum_survives);
        CHECK(q.classical_event_time == 1.0);  // grazes zero at the jump
    }
    CHECK_THROWS_AS(quantum_contrast(TemporalProfile::smooth_bump(0.5, 1.0, 2.0, 2.5, 1.0), 1.0, 1.0, kUnits),
                    std::invalid_argument);
    for (double w0 : {0.6, 1.0, 3.0, 50.0}) {
        const auto q = quantum_contrast(TemporalProfile::square(0.0, 0.25, w0), 0.75, 1.0, kUnits);
        CHECK(q.quantum_survives);
        CHECK(q.classical_destroyed);
        CHECK(q.conservation_defect == 0.0);
    }
}

}
