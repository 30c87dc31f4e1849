#include "complexmech/spatial_tunneling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace complexmech::scattering {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Complex sinc(Complex z) {
    if (std::abs(z) < 1e-3) {
        const Complex z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0 - z2 * z2 * z2 / 5040.0;
    }
    return std::sin(z) / z;
}

// (psi, psi') at x + s from (psi, psi') at x inside one interval.
Eigen::Matrix2cd propagator(Complex k, double s) {
    const Complex ks = k * s;
    const Complex c = std::cos(ks);
    const Complex sn = s * sinc(ks);
    Eigen::Matrix2cd p;
    p << c, sn, -k * k * sn, c;
    return p;
}

// Columns are the two basis waves and their derivatives at x.
Eigen::Matrix2cd basis(Complex k, double x) {
    Eigen::Matrix2cd b;
    if (k == Complex{0.0, 0.0}) {
        b << 1.0, x, 0.0, 1.0;
        return b;
    }
    const Complex fwd = std::exp(kI * k * x);
    const Complex bwd = std::exp(-kI * k * x);
    b << fwd, bwd, kI * k * fwd, -kI * k * bwd;
    return b;
}

void check_scattering_inputs(const PiecewisePotential& pot, double e0, double m, const Units& units) {
    units.validate();
    if (!(m > 0.0)) throw std::invalid_argument("mass must be > 0");
    if (!(e0 > 0.0)) throw std::invalid_argument("scattering energy E0 must be > 0");
    if (!(e0 > pot.values().front() && e0 > pot.values().back())) {
        throw std::invalid_argument("E0 must exceed both asymptotic potential values");
    }
}

}  // namespace

PiecewisePotential::PiecewisePotential(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (values_.size() != breakpoints_.size() + 1) {
        throw std::invalid_argument("k breakpoints need exactly k + 1 interval values");
    }
    for (std::size_t j = 0; j < breakpoints_.size(); ++j) {
        if (!std::isfinite(breakpoints_[j])) throw std::invalid_argument("breakpoints must be finite");
        if (j > 0 && !(breakpoints_[j - 1] < breakpoints_[j])) {
            throw std::invalid_argument("breakpoints must be strictly ascending");
        }
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("potential values must be finite");
    }
}

PiecewisePotential PiecewisePotential::free() { return PiecewisePotential({}, {0.0}); }

PiecewisePotential PiecewisePotential::barrier(double q_a, double q_b, double v0) {
    if (!(q_a < q_b)) throw std::invalid_argument("barrier requires q_a < q_b");
    return PiecewisePotential({q_a, q_b}, {0.0, v0, 0.0});
}

std::size_t PiecewisePotential::interval_of(double q) const {
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), q);
    return static_cast<std::size_t>(it - breakpoints_.begin());
}

double PiecewisePotential::width(std::size_t interval) const {
    if (interval == 0 || interval >= breakpoints_.size()) return kInf;
    return breakpoints_[interval] - breakpoints_[interval - 1];
}

PiecewisePotential PiecewisePotential::concatenate(const PiecewisePotential& right) const {
    if (!breakpoints_.empty() && !right.breakpoints_.empty() &&
        !(breakpoints_.back() < right.breakpoints_.front())) {
        throw std::invalid_argument("concatenated potentials overlap");
    }
    if (values_.back() != right.values_.front()) {
        throw std::invalid_argument("concatenated potentials disagree on the shared asymptote");
    }
    std::vector<double> bps = breakpoints_;
    bps.insert(bps.end(), right.breakpoints_.begin(), right.breakpoints_.end());
    std::vector<double> vals = values_;
    vals.insert(vals.end(), right.values_.begin() + 1, right.values_.end());
    return {std::move(bps), std::move(vals)};
}

Complex tunneling_momentum(double e0, double v, double m) {
    if (!(m > 0.0)) throw std::invalid_argument("mass must be > 0");
    return principal_sqrt(2.0 * m * (e0 - v));
}

std::vector<Complex> wavenumbers(const PiecewisePotential& pot, double e0, double m, const Units& units) {
    std::vector<Complex> ks;
    ks.reserve(pot.interval_count());
    for (double v : pot.values()) ks.push_back(tunneling_momentum(e0, v, m) / units.hbar);
    return ks;
}

TransferMatrix transfer_matrix(const PiecewisePotential& pot, double e0, double m, const Units& units) {
    check_scattering_inputs(pot, e0, m, units);
    const auto& bps = pot.breakpoints();
    if (bps.empty()) return {Eigen::Matrix2cd::Identity(), false};

    const std::vector<Complex> ks = wavenumbers(pot, e0, m, units);
    const std::size_t last = ks.size() - 1;
    TransferMatrix out{basis(ks[0], bps.front()).inverse(), false};
    for (std::size_t j = 1; j < last; ++j) {
        if (ks[j] == Complex{0.0, 0.0}) out.marginal = true;
        out.matrix = out.matrix * propagator(ks[j], -pot.width(j));
    }
    out.matrix = out.matrix * basis(ks[last], bps.back());
    return out;
}

ScatterResult transmission_reflection(const PiecewisePotential& pot, double e0, double m, const Units& units) {
    const TransferMatrix tm = transfer_matrix(pot, e0, m, units);
    const std::vector<Complex> ks = wavenumbers(pot, e0, m, units);
    const std::size_t last = ks.size() - 1;

    const Complex t = 1.0 / tm.matrix(0, 0);
    const Complex r = tm.matrix(1, 0) * t;

    ScatterResult result;
    result.wavenumbers = ks;
    result.marginal = tm.marginal;
    result.transmission = std::norm(t) * ks[last].real() / ks[0].real();
    result.reflection = std::norm(r);
    result.amplitudes.resize(ks.size());
    result.amplitudes[last] = {t, 0.0};
    result.amplitudes[0] = {1.0, r};

    // Walk the (psi, psi') pair from the right asymptote back to the left one.
    const auto& bps = pot.breakpoints();
    if (!bps.empty()) {
        Eigen::Vector2cd v = basis(ks[last], bps.back()) * Eigen::Vector2cd(t, 0.0);
        for (std::size_t j = last - 1; j >= 1; --j) {
            const Eigen::Vector2cd c = basis(ks[j], bps[j]).inverse() * v;
            result.amplitudes[j] = {c[0], c[1]};
            v = propagator(ks[j], -pot.width(j)) * v;
        }
    }
    return result;
}

double square_barrier_transmission(double e0, double v0, double l, double m, const Units& units) {
    units.validate();
    if (!(e0 > 0.0 && v0 > 0.0 && l > 0.0 && m > 0.0)) {
        throw std::invalid_argument("closed-form barrier needs E0, V0, L, m > 0");
    }
    const double hbar = units.hbar;
    if (e0 < v0) {
        const double kappa = std::sqrt(2.0 * m * (v0 - e0)) / hbar;
        const double s = std::sinh(kappa * l);
        return 1.0 / (1.0 + v0 * v0 * s * s / (4.0 * e0 * (v0 - e0)));
    }
    if (e0 > v0) {
        const double k = std::sqrt(2.0 * m * (e0 - v0)) / hbar;
        const double s = std::sin(k * l);
        return 1.0 / (1.0 + v0 * v0 * s * s / (4.0 * e0 * (e0 - v0)));
    }
    return 1.0 / (1.0 + m * v0 * l * l / (2.0 * hbar * hbar));
}

std::string_view to_string(EncounterOutcome outcome) {
    return outcome == EncounterOutcome::Reflected ? "reflected" : "transmitted";
}

EncounterRecord classical_encounter(double q0, double p0, const PiecewisePotential& pot, double m) {
    if (!(m > 0.0)) throw std::invalid_argument("mass must be > 0");
    if (p0 == 0.0 || !std::isfinite(p0)) throw std::invalid_argument("classical launch needs p0 != 0");
    const std::size_t start = pot.interval_of(q0);
    if (pot.values()[start] != 0.0) {
        throw std::invalid_argument("classical launch point must lie outside every barrier");
    }
    const double energy = p0 * p0 / (2.0 * m);
    const auto& bps = pot.breakpoints();
    const auto& vals = pot.values();
    const bool rightward = p0 > 0.0;

    EncounterRecord rec{EncounterOutcome::Transmitted, std::nullopt, p0, {}};
    double position = q0;
    double potential = 0.0;
    std::size_t interval = start;
    while (true) {
        const bool at_end = rightward ? interval + 1 >= vals.size() : interval == 0;
        const double speed = std::sqrt(2.0 * (energy - potential) / m);
        if (at_end) {
            rec.itinerary.push_back({position, rightward ? kInf : -kInf, potential, speed});
            break;
        }
        const double edge = rightward ? bps[interval] : bps[interval - 1];
        const std::size_t next = rightward ? interval + 1 : interval - 1;
        rec.itinerary.push_back({position, edge, potential, speed});
        if (energy < vals[next]) {
            rec.outcome = EncounterOutcome::Reflected;
            rec.reflected_at = edge;
            rec.exit_momentum = -p0;
            return rec;
        }
        position = edge;
        potential = vals[next];
        interval = next;
    }
    rec.exit_momentum = (rightward ? 1.0 : -1.0) * std::sqrt(2.0 * m * (energy - potential));
    return rec;
}

}  // namespace complexmech::scattering
