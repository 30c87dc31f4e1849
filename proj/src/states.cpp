#include "complexmech/states.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "complexmech/algebra.hpp"
#include "complexmech/spatial_tunneling.hpp"

namespace complexmech::states {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr Complex kZero{0.0, 0.0};

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double sign_of(SignConvention convention) { return convention == SignConvention::Standard ? 1.0 : -1.0; }

// Integral of the complex local momentum from lo to q.
Complex local_phase_integral(const LocalEscapeMomentum& local, double lo, double q) {
    if (q == lo) return kZero;
    auto part = [&](bool imaginary) {
        auto f = [&](double r) {
            const Complex p = black_hole::escape_momentum(local.model, r, local.p0_re).value;
            return imaginary ? p.imag() : p.real();
        };
        return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, lo, q, 25, 1e-12);
    };
    return {part(false), part(true)};
}

nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

Complex complex_from(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

nlohmann::json bound_json(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double bound_from(const nlohmann::json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return kInf;
        if (s == "-inf") return -kInf;
        throw std::invalid_argument("bad region bound '" + s + "'");
    }
    return j.get<double>();
}

}  // namespace

void PlaneWaveLabel::validate() const {
    if (!(finite(p_re) && finite(p_im) && finite(energy))) {
        throw std::invalid_argument("plane-wave label has non-finite entries");
    }
    if (p_re.imag() != 0.0) throw std::invalid_argument("p_re must be purely real");
    if (p_im.real() != 0.0) throw std::invalid_argument("p_im must be purely imaginary");
}

PlaneWaveLabel label_from_momentum(Complex momentum, Complex energy) {
    if (momentum.imag() == 0.0) return {momentum.real(), kZero, energy};
    if (momentum.real() == 0.0) return {kZero, {0.0, momentum.imag()}, energy};
    throw std::invalid_argument("momentum is neither real nor imaginary");
}

Complex axis_momentum(const PlaneWaveLabel& label) { return label.p_re + label.p_im; }

std::string_view to_string(Mode mode) { return mode == Mode::Literal ? "literal" : "matched"; }

Mode mode_from_string(std::string_view name) {
    if (name == "literal") return Mode::Literal;
    if (name == "matched") return Mode::Matched;
    throw std::invalid_argument("unknown state mode '" + std::string(name) + "'");
}

Complex PlaneWaveSamples::at(std::size_t iq, std::size_t ix, std::size_t it) const {
    Complex v{1.0, 0.0};
    if (!q_re.empty()) v *= q_re.at(iq);
    if (!x_im.empty()) v *= x_im.at(ix);
    if (!t.empty()) v *= t.at(it);
    return v;
}

PlaneWaveSamples plane_wave(const PlaneWaveLabel& label, const ProductGrid& grids, const Units& units,
                            SignConvention convention) {
    label.validate();
    units.validate();
    const double hbar = units.hbar;
    const Complex ih = kI * hbar;
    const double s = sign_of(convention);
    PlaneWaveSamples out;
    if (grids.q_re) {
        for (double q : grids.q_re->points()) out.q_re.push_back(std::exp(-s * label.p_re * q / ih));
    }
    if (grids.x_im) {
        for (double x : grids.x_im->points()) {
            const Complex q_im = kI * x;
            out.x_im.push_back(std::exp(-s * label.p_im * q_im / ih));
        }
    }
    if (grids.t) {
        for (double t : grids.t->points()) out.t.push_back(std::exp(label.energy * t / ih));
    }
    return out;
}

std::vector<Complex> real_axis_wave(Complex momentum, const GridSpec& grid, const Units& units,
                                    SignConvention convention) {
    units.validate();
    const Complex ih = kI * units.hbar;
    const double s = sign_of(convention);
    std::vector<Complex> out;
    out.reserve(grid.size());
    for (double q : grid.points()) out.push_back(std::exp(-s * momentum * q / ih));
    return out;
}

PlaneWaveLabel Region::label_at(double q) const {
    if (!local) return label;
    const auto p = black_hole::escape_momentum(local->model, q, local->p0_re);
    return label_from_momentum(p.value, label.energy);
}

void PiecewiseState::validate() const {
    if (regions.empty()) throw std::invalid_argument("piecewise state has no regions");
    if (!(mass > 0.0)) throw std::invalid_argument("piecewise state mass must be > 0");
    const double start = axis == Axis::RRe ? 0.0 : -kInf;
    if (regions.front().lo != start) throw std::invalid_argument("regions do not start at the axis origin");
    if (regions.back().hi != kInf) throw std::invalid_argument("regions do not extend to +infinity");
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const Region& r = regions[i];
        if (r.axis != axis) throw std::invalid_argument("region axis differs from state axis");
        if (!(r.lo < r.hi)) throw std::invalid_argument("region requires lo < hi");
        if (i > 0 && regions[i - 1].hi != r.lo) throw std::invalid_argument("regions leave a gap or overlap");
        r.label.validate();
        if (!(finite(r.amp_fwd) && finite(r.amp_bwd))) throw std::invalid_argument("non-finite amplitude");
        if (mode == Mode::Literal && (r.amp_fwd != Complex{1.0, 0.0} || r.amp_bwd != kZero)) {
            throw std::invalid_argument("literal regions carry unit amplitudes");
        }
    }
}

double conserving_remainder(double e0, double w0) {
    double x = e0 - w0;
    for (int i = 0; i < 4 && x + w0 != e0; ++i) x += e0 - (x + w0);
    for (int i = 0; i < 16 && x + w0 != e0; ++i) x = std::nextafter(x, x + w0 < e0 ? kInf : -kInf);
    return x;
}

PiecewiseState spatial_tunnel_state(double q_a, double q_b, double v0, double e0, double m,
                                    const Units& units, Mode mode) {
    units.validate();
    if (!(q_a < q_b)) throw std::invalid_argument("spatial barrier requires q_a < q_b");
    if (!(e0 > 0.0)) throw std::invalid_argument("spatial barrier requires E0 > 0");
    if (!(m > 0.0)) throw std::invalid_argument("mass must be > 0");

    const PlaneWaveLabel outer = label_from_momentum(principal_sqrt(2.0 * m * e0), e0);
    const PlaneWaveLabel inner = label_from_momentum(scattering::tunneling_momentum(e0, v0, m), e0);

    PiecewiseState state{Axis::QRe, Mode::Literal, m, {}};
    state.regions.push_back({Axis::QRe, -kInf, q_a, outer});
    state.regions.push_back({Axis::QRe, q_a, q_b, inner});
    state.regions.back().potential = v0;
    state.regions.push_back({Axis::QRe, q_b, kInf, outer});
    return mode == Mode::Matched ? match(state, units) : state;
}

PiecewiseState temporal_tunnel_state(double t_a, double t_b, double w0, double p0_re, double m,
                                     const Units& units, Mode mode) {
    units.validate();
    if (!(t_a < t_b)) throw std::invalid_argument("temporal barrier requires t_a < t_b");
    if (!(m > 0.0)) throw std::invalid_argument("mass must be > 0");
    if (mode == Mode::Matched) {
        throw std::invalid_argument("no matching condition is defined on the time axis");
    }
    const double e0 = p0_re * p0_re / (2.0 * m);
    const double e_t = conserving_remainder(e0, w0);
    const PlaneWaveLabel outside{p0_re, kZero, e0};
    const PlaneWaveLabel during = label_from_momentum(principal_sqrt(2.0 * m * e_t), e_t);

    PiecewiseState state{Axis::T, Mode::Literal, m, {}};
    state.regions.push_back({Axis::T, -kInf, t_a, outside});
    state.regions.push_back({Axis::T, t_a, t_b, during});
    state.regions.back().external = w0;
    state.regions.push_back({Axis::T, t_b, kInf, outside});
    return state;
}

PiecewiseState bh_escape_state(const black_hole::BlackHoleModel& model, std::optional<double> r_a,
                               double p0_re, const Units& units) {
    model.validate();
    units.validate();
    const double ra = r_a.value_or(model.r_horizon);
    if (!(ra > 0.0)) throw std::invalid_argument("black-hole escape state requires r_a > 0");
    const double m = model.particle_mass;
    const double e0 = p0_re * p0_re / (2.0 * m);

    PiecewiseState state{Axis::RRe, Mode::Literal, m, {}};
    state.regions.push_back({Axis::RRe, 0.0, ra, PlaneWaveLabel{p0_re, kZero, e0}});
    Region outside{Axis::RRe, ra, kInf, PlaneWaveLabel{kZero, kZero, e0}};
    outside.local = LocalEscapeMomentum{model, p0_re};
    outside.label = outside.label_at(ra);
    outside.potential = black_hole::potential(model, ra) - black_hole::potential(model, model.r_horizon);
    state.regions.push_back(outside);
    return state;
}

BarrierMomentumProbe probe_barrier_momentum(double q_a, double q_b, double v0, double e0, double m,
                                            const Units& units, std::size_t n) {
    units.validate();
    if (!(q_a < q_b)) throw std::invalid_argument("barrier probe requires q_a < q_b");
    if (!(m > 0.0)) throw std::invalid_argument("mass must be > 0");
    const GridSpec grid(Axis::QRe, q_a, q_b, n);
    const Complex p_t = scattering::tunneling_momentum(e0, v0, m);
    if (p_t == Complex{}) throw std::invalid_argument("barrier probe needs E0 != V0");
    const auto samples = real_axis_wave(p_t, grid, units);
    const algebra::StateVector psi = Eigen::Map<const algebra::StateVector>(samples.data(), samples.size());
    const auto op = algebra::build_operator(algebra::OperatorKind::MomentumRe, grid, units);
    const Complex value = algebra::rayleigh_eigenvalue(op, psi, {1, n - 1});
    const double kd = std::abs(p_t) / units.hbar * grid.spacing();
    const double rel = std::abs(value - p_t) / std::abs(p_t);
    return {value, p_t, rel, kd * kd / 3.0, algebra::classify(value)};
}

PiecewiseState match(const PiecewiseState& state, const Units& units) {
    state.validate();
    if (state.axis == Axis::T) throw std::invalid_argument("no matching condition is defined on the time axis");
    std::vector<double> bps;
    std::vector<double> values;
    for (const Region& r : state.regions) {
        if (r.local) throw std::invalid_argument("regions with a local momentum cannot be matched");
        if (r.label.energy != state.regions.front().label.energy) {
            throw std::invalid_argument("matching needs one common energy across regions");
        }
        values.push_back(r.potential);
        if (r.hi != kInf) bps.push_back(r.hi);
    }
    const double e0 = state.regions.front().label.energy.real();
    const auto scatter = scattering::transmission_reflection(
        scattering::PiecewisePotential(std::move(bps), std::move(values)), e0, state.mass, units);

    PiecewiseState out = state;
    out.mode = Mode::Matched;
    for (std::size_t i = 0; i < out.regions.size(); ++i) {
        out.regions[i].amp_fwd = scatter.amplitudes[i].forward;
        out.regions[i].amp_bwd = scatter.amplitudes[i].backward;
    }
    return out;
}

double schrodinger_residual(const PlaneWaveLabel& label, double potential, double m) {
    if (!(m > 0.0)) throw std::invalid_argument("mass must be > 0");
    const Complex kinetic = (label.p_re * label.p_re + label.p_im * label.p_im) / (2.0 * m);
    return std::abs(label.energy - kinetic - potential);
}

double schrodinger_residual(const Region& region, double m) {
    if (!region.local) return schrodinger_residual(region.label, region.potential, m);
    const auto& model = region.local->model;
    const double v = black_hole::potential(model, region.lo) - black_hole::potential(model, model.r_horizon);
    return schrodinger_residual(region.label_at(region.lo), v, m);
}

WaveValue evaluate(const Region& region, double q, const Units& units) {
    if (region.axis == Axis::T) throw std::invalid_argument("wave evaluation is defined on spatial axes only");
    const double hbar = units.hbar;
    if (region.local) {
        const Complex phase = local_phase_integral(*region.local, region.lo, q) / hbar;
        const Complex p = axis_momentum(region.label_at(q));
        const Complex fwd = region.amp_fwd * std::exp(kI * phase);
        const Complex bwd = region.amp_bwd * std::exp(-kI * phase);
        return {fwd + bwd, kI * p / hbar * (fwd - bwd)};
    }
    const Complex k = axis_momentum(region.label) / hbar;
    if (k == kZero) return {region.amp_fwd + region.amp_bwd * q, region.amp_bwd};
    const Complex fwd = region.amp_fwd * std::exp(kI * k * q);
    const Complex bwd = region.amp_bwd * std::exp(-kI * k * q);
    return {fwd + bwd, kI * k * (fwd - bwd)};
}

std::vector<BoundaryMismatch> boundary_mismatch(const PiecewiseState& state, const Units& units) {
    if (state.axis == Axis::T) {
        throw std::invalid_argument("boundary matching is not defined for time-axis states");
    }
    units.validate();
    std::vector<BoundaryMismatch> out;
    for (std::size_t i = 0; i + 1 < state.regions.size(); ++i) {
        const double at = state.regions[i].hi;
        const WaveValue left = evaluate(state.regions[i], at, units);
        const WaveValue right = evaluate(state.regions[i + 1], at, units);
        const double dpsi = std::abs(left.psi - right.psi);
        const double ddpsi = std::abs(left.dpsi - right.dpsi);
        const double psi_scale = std::max(std::abs(left.psi), std::abs(right.psi));
        const double dpsi_scale = std::max(std::abs(left.dpsi), std::abs(right.dpsi));
        out.push_back({at, dpsi, ddpsi, psi_scale > 0 ? dpsi / psi_scale : dpsi,
                       dpsi_scale > 0 ? ddpsi / dpsi_scale : ddpsi});
    }
    return out;
}

std::vector<Complex> sample(const PiecewiseState& state, const GridSpec& grid, const Units& units) {
    std::vector<Complex> out;
    out.reserve(grid.size());
    std::size_t region = 0;
    for (double q : grid.points()) {
        while (region + 1 < state.regions.size() && q >= state.regions[region].hi) ++region;
        if (q < state.regions[region].lo) throw std::invalid_argument("grid point lies before the first region");
        out.push_back(evaluate(state.regions[region], q, units).psi);
    }
    return out;
}

nlohmann::json to_json(const PiecewiseState& state) {
    nlohmann::json regions = nlohmann::json::array();
    for (const Region& r : state.regions) {
        nlohmann::json j{{"lo", bound_json(r.lo)},
                         {"hi", bound_json(r.hi)},
                         {"p_re", complex_json(r.label.p_re)},
                         {"p_im", complex_json(r.label.p_im)},
                         {"E", complex_json(r.label.energy)},
                         {"amp_fwd", complex_json(r.amp_fwd)},
                         {"amp_bwd", complex_json(r.amp_bwd)},
                         {"potential", r.potential},
                         {"external", r.external}};
        if (r.local) {
            const auto& m = r.local->model;
            j["local_momentum"] = {{"kind", "black_hole_escape"},
                                   {"hole_mass", m.hole_mass},
                                   {"particle_mass", m.particle_mass},
                                   {"grav", m.grav},
                                   {"c", m.c},
                                   {"r_horizon", m.r_horizon},
                                   {"p0_re", r.local->p0_re}};
        }
        regions.push_back(std::move(j));
    }
    return {{"axis", std::string(to_string(state.axis))},
            {"mode", std::string(to_string(state.mode))},
            {"mass", state.mass},
            {"regions", std::move(regions)}};
}

PiecewiseState state_from_json(const nlohmann::json& j) {
    PiecewiseState state{axis_from_string(j.at("axis").get<std::string>()),
                         mode_from_string(j.at("mode").get<std::string>()), j.at("mass").get<double>(), {}};
    for (const auto& rj : j.at("regions")) {
        Region r{state.axis, bound_from(rj.at("lo")), bound_from(rj.at("hi")),
                 PlaneWaveLabel{complex_from(rj.at("p_re")), complex_from(rj.at("p_im")), complex_from(rj.at("E"))}};
        r.amp_fwd = complex_from(rj.at("amp_fwd"));
        r.amp_bwd = complex_from(rj.at("amp_bwd"));
        r.potential = rj.value("potential", 0.0);
        r.external = rj.value("external", 0.0);
        if (rj.contains("local_momentum")) {
            const auto& lj = rj.at("local_momentum");
            black_hole::BlackHoleModel model{lj.at("hole_mass").get<double>(), lj.at("particle_mass").get<double>(),
                                             lj.at("grav").get<double>(), lj.at("c").get<double>(),
                                             lj.at("r_horizon").get<double>()};
            r.local = LocalEscapeMomentum{model, lj.at("p0_re").get<double>()};
        }
        state.regions.push_back(std::move(r));
    }
    state.validate();
    return state;
}

}  // namespace complexmech::states
