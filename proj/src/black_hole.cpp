#include "complexmech/black_hole.hpp"

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace complexmech::black_hole {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double v, const char* what) {
    if (!(std::isfinite(v) && v > 0.0)) throw std::invalid_argument(std::string(what) + " must be finite and > 0");
}

}  // namespace

double horizon_radius(double mass, double grav, double c) {
    require_positive(mass, "hole mass");
    require_positive(grav, "gravitational constant");
    require_positive(c, "speed of light");
    return 2.0 * grav * mass / (c * c);
}

BlackHoleModel BlackHoleModel::make(double hole_mass, double particle_mass, const Units& units) {
    units.validate();
    require_positive(particle_mass, "particle mass");
    return {hole_mass, particle_mass, units.grav, units.c, horizon_radius(hole_mass, units.grav, units.c)};
}

void BlackHoleModel::validate() const {
    require_positive(hole_mass, "hole mass");
    require_positive(particle_mass, "particle mass");
    require_positive(grav, "gravitational constant");
    require_positive(c, "speed of light");
    require_positive(r_horizon, "horizon radius");
}

double potential(const BlackHoleModel& model, double r) {
    if (!(r >= 0.0)) throw std::invalid_argument("radius must be >= 0");
    return -model.coupling() / std::max(r, model.r_horizon);
}

double force(const BlackHoleModel& model, double r) {
    if (!(r >= 0.0)) throw std::invalid_argument("radius must be >= 0");
    if (r < model.r_horizon) return 0.0;
    return -model.coupling() / (r * r);
}

EscapeMomentum escape_momentum(const BlackHoleModel& model, double r, double p0_re) {
    if (!(r > 0.0)) throw std::invalid_argument("radius must be > 0");
    const double m = model.particle_mass;
    const double e0 = p0_re * p0_re / (2.0 * m);
    // V(r_E) - V(r) first: it is exactly zero at the horizon and inside.
    const double well = potential(model, model.r_horizon) - potential(model, r);
    const Complex p = principal_sqrt(2.0 * m * (well + e0));
    return {p, algebra::classify(p)};
}

std::optional<double> forbidden_shell_start(const BlackHoleModel& model, double e0) {
    const double total = e0 + potential(model, model.r_horizon);
    if (total >= 0.0) return std::nullopt;
    return model.coupling() / -total;
}

double wkb_escape_probability(const BlackHoleModel& model, double e0, const Units& units,
                              std::optional<double> outer_radius) {
    model.validate();
    units.validate();
    if (!(e0 > 0.0)) throw std::invalid_argument("E0 must be > 0");
    if (outer_radius && !(*outer_radius > model.r_horizon)) {
        throw std::invalid_argument("outer radius must lie beyond the horizon");
    }
    const auto shell_start = forbidden_shell_start(model, e0);
    if (!shell_start) return 1.0;
    if (!outer_radius || std::isinf(*outer_radius)) {
        throw NonIntegrableShell("forbidden shell starts at r = " + std::to_string(*shell_start) +
                                 " and extends to infinity; the WKB action diverges");
    }
    if (*outer_radius <= *shell_start) return 1.0;

    // With r = r_t + u^2 the integrand |p| dr = sqrt(2 m a (r - r_t) / (r r_t)) dr
    // becomes 2 u^2 sqrt(2 m a / (r_t r)), smooth at the turning point.
    const double a = model.coupling();
    const double rt = *shell_start;
    const double m = model.particle_mass;
    auto integrand = [&](double u) {
        const double r = rt + u * u;
        return 2.0 * u * u * std::sqrt(2.0 * m * a / (rt * r));
    };
    double error = 0.0;
    const double upper = std::sqrt(*outer_radius - rt);
    const double action = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        integrand, 0.0, upper, /*max_depth=*/30, /*tol=*/1e-10, &error);
    if (!std::isfinite(action)) throw NonIntegrableShell("WKB action is not finite");
    return std::exp(-2.0 * action / units.hbar);
}

ClassicalEscape classical_escape(const BlackHoleModel& model, double p0_re) {
    model.validate();
    const double m = model.particle_mass;
    const double e0 = p0_re * p0_re / (2.0 * m);
    if (e0 == 0.0) return {false, model.r_horizon, false};
    const double total = e0 + potential(model, model.r_horizon);
    if (total >= 0.0) return {true, kInf, true};
    return {false, model.coupling() / -total, true};
}

std::vector<RadialSample> radial_profile(const BlackHoleModel& model, double p0_re, double r_min,
                                         double r_max, std::size_t n) {
    if (!(r_min >= 0.0 && r_min < r_max)) throw std::invalid_argument("radial profile needs 0 <= r_min < r_max");
    if (n < 2) throw std::invalid_argument("radial profile needs n >= 2");
    std::vector<RadialSample> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        double r = r_min + (r_max - r_min) * static_cast<double>(k) / static_cast<double>(n - 1);
        // The escape momentum is defined for r > 0 only; the flat interior makes
        // r = 0 equivalent to any interior radius.
        const double r_eval = r > 0.0 ? r : 0.5 * model.r_horizon;
        const EscapeMomentum p = escape_momentum(model, r_eval, p0_re);
        out.push_back({r, potential(model, r), p.value, p.value_class == algebra::ValueClass::Real});
    }
    return out;
}

}  // namespace complexmech::black_hole
