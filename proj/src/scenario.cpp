#include "complexmech/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

#include <boost/math/tools/roots.hpp>
#include <toml.hpp>

#include "complexmech/algebra.hpp"
#include "complexmech/black_hole.hpp"
#include "complexmech/cosmology.hpp"
#include "complexmech/io.hpp"
#include "complexmech/spatial_tunneling.hpp"
#include "complexmech/states.hpp"
#include "complexmech/temporal_barrier.hpp"

namespace complexmech::scenario {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Parameter tables

enum class Kind { Real, Integer, Text };
enum class Domain { Any, Positive, NonNegative, GridPoints, AtLeast3 };

struct ParamSpec {
    std::string_view name;
    Kind kind;
    double number = 0.0;
    std::string_view text = {};
    Domain domain = Domain::Any;
    std::vector<std::string_view> choices = {};
};

ParamSpec real(std::string_view name, double def, Domain d = Domain::Any) { return {name, Kind::Real, def, {}, d}; }
ParamSpec integer(std::string_view name, double def, Domain d) { return {name, Kind::Integer, def, {}, d}; }
ParamSpec text(std::string_view name, std::string_view def, std::vector<std::string_view> choices) {
    return {name, Kind::Text, 0.0, def, Domain::Any, std::move(choices)};
}

struct ScenarioDef {
    ScenarioInfo info;
    std::vector<ParamSpec> params;
    // Cross-parameter checks; each returns the problems it finds.
    std::function<void(const ScenarioConfig&, std::vector<std::string>&)> cross;
    std::function<void(const ScenarioConfig&, struct Run&)> run;
};

// ---------------------------------------------------------------------------
// Run bookkeeping

struct Run {
    fs::path dir;
    std::vector<Artifact> artifacts;
    ojson results = ojson::object();
    ojson invariants = ojson::object();
    bool all_pass = true;

    fs::path file(const std::string& name) const { return dir / name; }

    void record(const std::string& name) {
        const fs::path p = file(name);
        artifacts.push_back({name, io::sha256_file(p), fs::file_size(p)});
    }

    void check(const std::string& name, bool pass, double measured, double limit) {
        invariants[name] = {{"pass", pass}, {"measured", measured}, {"limit", limit}};
        all_pass = all_pass && pass;
    }

    void check(const std::string& name, bool pass, std::string note) {
        invariants[name] = {{"pass", pass}, {"note", std::move(note)}};
        all_pass = all_pass && pass;
    }

    void write_json(const std::string& name, const nlohmann::json& j) {
        std::ofstream out(file(name), std::ios::binary | std::ios::trunc);
        out << j.dump(2) << '\n';
        if (!out) throw std::runtime_error("cannot write " + name);
        out.close();
        record(name);
    }
};

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = (i + 1 == n) ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return v;
}

// ---------------------------------------------------------------------------
// operator_algebra

void run_operator_algebra(const ScenarioConfig& cfg, Run& run) {
    using namespace algebra;
    const Units& u = cfg.units;
    const auto n = cfg.count("n");
    const double lo = cfg.num("q_min"), hi = cfg.num("q_max");
    const double width = cfg.num("probe_width");

    struct Built {
        OperatorKind kind;
        GridOperator op;
    };
    std::vector<Built> ops;
    for (OperatorKind kind : {OperatorKind::PositionRe, OperatorKind::MomentumRe, OperatorKind::PositionIm,
                              OperatorKind::MomentumIm, OperatorKind::Time, OperatorKind::Energy}) {
        ops.push_back({kind, build_operator(kind, GridSpec::periodic(axis_of(kind), lo, hi, n), u)});
    }

    io::CsvWriter csv(run.file("operators.csv"), {"operator", "axis", "symmetry", "declared_defect",
                                                  "spectral_radius", "max_abs_real", "max_abs_imag"});
    double worst_defect = 0.0, worst_spectrum = 0.0;
    for (const auto& b : ops) {
        const AdjointDefect d = adjoint_defect(b.op);
        const double declared = b.op.symmetry() == Symmetry::SelfAdjoint ? d.self_adjoint : d.anti_self_adjoint;
        const SpectrumCheck s = spectrum(b.op);
        const double off = b.op.symmetry() == Symmetry::SelfAdjoint ? s.max_abs_imag : s.max_abs_real;
        worst_defect = std::max(worst_defect, declared);
        if (s.spectral_radius > 0.0) worst_spectrum = std::max(worst_spectrum, off / s.spectral_radius);
        csv.cell(to_string(b.kind)).cell(to_string(b.op.axis())).cell(to_string(b.op.symmetry()));
        csv.cell(declared).cell(s.spectral_radius).cell(s.max_abs_real).cell(s.max_abs_imag);
        csv.end_row();
    }
    run.check("adjoint_defect_exact", worst_defect == 0.0, worst_defect, 0.0);
    run.check("eigenvalue_class", worst_spectrum <= 1e-10, worst_spectrum, 1e-10);

    struct Pair {
        const char* name;
        std::size_t a;
        std::size_t b;
        Complex expected;
    };
    const Pair pairs[] = {{"q_re_p_re", 0, 1, kI * u.hbar},
                          {"q_im_p_im", 2, 3, kI * u.hbar},
                          {"t_s", 4, 5, -kI * u.hbar}};
    io::CsvWriter ccsv(run.file("commutators.csv"),
                       {"pair", "expected_re", "expected_im", "residual", "bound", "boundary_warning"});
    ojson comm = ojson::object();
    for (const auto& p : pairs) {
        const auto& A = ops[p.a].op;
        const auto& B = ops[p.b].op;
        const StateVector probe = gaussian_probe(A.grid(), width);
        const CommutatorResidual r = commutator_residual(A, B, p.expected, probe);
        const double bound = commutator_bound(A.grid(), u);
        ccsv.cell(p.name).cell(p.expected.real()).cell(p.expected.imag()).cell(r.residual).cell(bound);
        ccsv.cell(static_cast<int>(r.boundary_warning));
        ccsv.end_row();
        comm[p.name] = r.residual;
        run.check(std::string("heisenberg_") + p.name, r.residual < bound, r.residual, bound);
        run.check(std::string("probe_clear_") + p.name, !r.boundary_warning,
                  r.boundary_warning ? "probe reaches the grid edge" : "probe negligible near edges");
    }
    run.results["grid_spacing"] = ops.front().op.grid().spacing();
    run.results["commutator_residuals"] = comm;
    csv.close();
    ccsv.close();
    run.record("operators.csv");
    run.record("commutators.csv");
}

// ---------------------------------------------------------------------------
// spatial_barrier

void run_spatial_barrier(const ScenarioConfig& cfg, Run& run) {
    using namespace scattering;
    const Units& u = cfg.units;
    const double m = cfg.num("m"), v0 = cfg.num("V0"), q_a = cfg.num("q_a"), q_b = cfg.num("q_b");
    const double e0 = cfg.num("E0");
    const double width = q_b - q_a;
    const auto pot = PiecewisePotential::barrier(q_a, q_b, v0);
    const double q_launch = q_a - width;

    const ScatterResult at = transmission_reflection(pot, e0, m, u);
    const double closed = square_barrier_transmission(e0, v0, width, m, u);
    const auto enc = classical_encounter(q_launch, std::sqrt(2.0 * m * e0), pot, m);
    run.results["E0"] = e0;
    run.results["T"] = at.transmission;
    run.results["R"] = at.reflection;
    run.results["T_closed_form"] = closed;
    run.results["classical"] = to_string(enc.outcome);

    double worst_unitarity = 0.0, worst_closed = 0.0, worst_probe = 0.0;
    bool contrast = true, probe_class = true;
    std::size_t forbidden = 0;
    io::CsvWriter csv(run.file("sweep.csv"), {"E0", "T", "R", "T_closed_form", "classical", "p_rayleigh_re",
                                              "p_rayleigh_im", "p_expected_im"});
    for (double e : linspace(cfg.num("E_min"), cfg.num("E_max"), cfg.count("n_sweep"))) {
        const ScatterResult s = transmission_reflection(pot, e, m, u);
        const double c = square_barrier_transmission(e, v0, width, m, u);
        const auto outcome = classical_encounter(q_launch, std::sqrt(2.0 * m * e), pot, m).outcome;
        worst_unitarity = std::max(worst_unitarity, std::abs(s.transmission + s.reflection - 1.0));
        worst_closed = std::max(worst_closed, std::abs(s.transmission - c) / c);
        csv.cell(e).cell(s.transmission).cell(s.reflection).cell(c).cell(to_string(outcome));
        if (e < v0) {
            ++forbidden;
            contrast = contrast && outcome == EncounterOutcome::Reflected && s.transmission > 0.0;
            const auto probe = states::probe_barrier_momentum(q_a, q_b, v0, e, m, u);
            probe_class = probe_class && probe.value_class == algebra::ValueClass::Imaginary;
            worst_probe = std::max(worst_probe, probe.rel_error / probe.tolerance);
            csv.cell(probe.value.real()).cell(probe.value.imag()).cell(probe.expected.imag());
        } else {
            contrast = contrast && outcome == EncounterOutcome::Transmitted;
            csv.cell("").cell("").cell("");
        }
        csv.end_row();
    }
    csv.close();
    run.record("sweep.csv");
    run.results["sweep_forbidden_points"] = forbidden;
    run.check("unitarity", worst_unitarity <= 1e-10, worst_unitarity, 1e-10);
    run.check("closed_form_transmission", worst_closed <= 1e-10, worst_closed, 1e-10);
    run.check("classical_reflects_while_tunneling", contrast,
              "classical Reflected and T > 0 for every E0 < V0; Transmitted above");
    run.check("barrier_momentum_imaginary", probe_class, "Rayleigh value of p_re on the decaying wave");
    run.check("barrier_momentum_magnitude", worst_probe <= 1.0, worst_probe, 1.0);

    const states::Mode mode = states::mode_from_string(cfg.text("mode"));
    const auto state = states::spatial_tunnel_state(q_a, q_b, v0, e0, m, u, mode);
    double worst_residual = 0.0;
    for (const auto& r : state.regions) worst_residual = std::max(worst_residual, states::schrodinger_residual(r, m));
    const double res_limit = 1e-12 * std::max({e0, v0, 1.0});
    run.check("schrodinger_residual", worst_residual <= res_limit, worst_residual, res_limit);

    double worst_mismatch = 0.0;
    for (const auto& bm : states::boundary_mismatch(state, u)) {
        worst_mismatch = std::max({worst_mismatch, bm.psi_rel, bm.dpsi_rel});
    }
    run.results["boundary_mismatch"] = worst_mismatch;
    if (mode == states::Mode::Matched) run.check("boundary_continuity", worst_mismatch <= 1e-10, worst_mismatch, 1e-10);
    run.write_json("state.json", states::to_json(state));

    const GridSpec grid(Axis::QRe, q_a - 2.0 * width, q_b + 2.0 * width, cfg.count("wave_points"));
    const auto psi = states::sample(state, grid, u);
    io::CsvWriter wcsv(run.file("wave.csv"), {"q", "re", "im", "abs"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        wcsv.cell(grid.point(i)).cell(psi[i].real()).cell(psi[i].imag()).cell(std::abs(psi[i]));
        wcsv.end_row();
    }
    wcsv.close();
    run.record("wave.csv");
}

// ---------------------------------------------------------------------------
// temporal_barrier

temporal::TemporalProfile profile_of(const ScenarioConfig& cfg) {
    const auto kind = temporal::profile_kind_from_string(cfg.text("profile"));
    if (kind == temporal::ProfileKind::Square) {
        return temporal::TemporalProfile::square(cfg.num("t_a"), cfg.num("t_b"), cfg.num("W0"));
    }
    return temporal::TemporalProfile::smooth_bump(cfg.num("t1"), cfg.num("t_a"), cfg.num("t_b"), cfg.num("t2"),
                                                  cfg.num("W0"));
}

void run_temporal_barrier(const ScenarioConfig& cfg, Run& run) {
    using namespace temporal;
    const Units& u = cfg.units;
    const double m = cfg.num("m"), p0 = cfg.num("p0"), dt = cfg.num("dt");
    const TemporalProfile profile = profile_of(cfg);
    const EnergyModel model = energy_model_from_string(cfg.text("model"));
    const ClassicalState start{cfg.num("t_start"), 0.0, p0, 0.0, 0.0, m, 1};
    const Trajectory traj = integrate_classical(start, profile, model, dt, cfg.num("t_end"), u);

    io::CsvWriter csv(run.file("trajectory.csv"),
                      {"t", "q_re", "p_re", "x_im", "pi_im", "W", "E_system", "mass_sign", "event"});
    double worst_book = 0.0;
    for (const auto& s : traj.samples) {
        const auto& st = s.state;
        csv.cell(st.t).cell(st.q_re).cell(st.p_re).cell(st.x_im).cell(st.pi_im).cell(s.w).cell(s.system_energy);
        csv.cell(st.mass_sign).cell(s.event);
        csv.end_row();
        const double e_sys = (st.p_re * st.p_re - st.pi_im * st.pi_im) / (2.0 * m);
        worst_book = std::max(worst_book, std::abs(e_sys + s.w - traj.total_energy));
    }
    csv.close();
    run.record("trajectory.csv");
    worst_book /= std::abs(traj.total_energy);

    ojson events = ojson::array();
    std::optional<double> zero_time;
    for (const auto& ev : traj.events) {
        events.push_back({{"kind", to_string(ev.kind)}, {"t", ev.t}});
        if (ev.kind == EventKind::EnergyZero) zero_time = ev.t;
    }
    const double e0 = traj.total_energy - profile_value(profile, start.t);
    run.results["E0"] = e0;
    run.results["W0"] = profile.w0;
    run.results["events"] = events;
    run.results["destroyed"] = traj.destroyed;
    run.results["time_direction"] = traj.time_direction;
    run.results["rejected_steps"] = traj.rejected_steps;
    run.check("energy_bookkeeping", worst_book <= 1e-8, worst_book, 1e-8);

    // Independent location of the first zero of E_total - W(t) on the rise.
    const bool expect_zero = traj.total_energy - profile.w0 <= 0.0 && start.t < profile.t_a &&
                             cfg.num("t_end") >= profile.t_a;
    if (expect_zero) {
        auto f = [&](double t) { return traj.total_energy - profile_value(profile, t); };
        const auto bracket = boost::math::tools::bisect(
            f, start.t, profile.t_a,
            [](double a, double b) { return std::abs(b - a) <= 1e-14 * std::max(1.0, std::abs(a)); });
        const double root = 0.5 * (bracket.first + bracket.second);
        run.results["bisection_root"] = root;
        const double gap = zero_time ? std::abs(*zero_time - root) : std::numeric_limits<double>::infinity();
        run.check("event_location", gap <= dt, gap, dt);
    } else {
        run.check("event_location", !zero_time.has_value(),
                  zero_time ? "EnergyZero emitted although W never reaches E0" : "no crossing expected or seen");
        if (cfg.num("t_end") > profile.support_end() && start.t <= profile.support_begin()) {
            const double p_end = traj.samples.back().state.p_re;
            const double rel = std::abs(p_end - p0) / std::abs(p0);
            run.check("momentum_recovery", rel <= 1e-6, rel, 1e-6);
        }
    }

    double worst_rest = 0.0;
    for (double mass : {1e-3, 1.0, 1e3}) {
        const ClassicalState rest{0.0, 0.0, 0.0, 0.0, 0.0, mass, 1};
        worst_rest = std::max(worst_rest, std::abs(total_energy(rest, profile, EnergyModel::Rel, u)));
    }
    run.check("rest_energy_identity", worst_rest == 0.0, worst_rest, 0.0);

    if (profile.kind == ProfileKind::Square) {
        const QuantumContrast qc = quantum_contrast(profile, p0, m, u);
        run.results["E_T"] = qc.e_t;
        run.results["quantum_survives"] = qc.quantum_survives;
        run.results["classical_destroyed"] = qc.classical_destroyed;
        run.results["marginal"] = qc.marginal;
        if (qc.classical_event_time) run.results["classical_event_time"] = *qc.classical_event_time;
        run.check("energy_conservation_exact", qc.conservation_defect == 0.0, qc.conservation_defect, 0.0);
        run.check("quantum_survival", qc.quantum_survives, "after-barrier label equals before-barrier label");
        run.write_json("state.json", states::to_json(qc.state));
    }
}

// ---------------------------------------------------------------------------
// black_hole

void run_black_hole(const ScenarioConfig& cfg, Run& run) {
    using namespace black_hole;
    const Units& u = cfg.units;
    const auto model = BlackHoleModel::make(cfg.num("M"), cfg.num("m"), u);
    const double p0 = cfg.num("p0");
    const double m = model.particle_mass;
    const double e0 = p0 * p0 / (2.0 * m);
    const double r_e = model.r_horizon;
    const double outer = cfg.num("outer_radius");

    run.results["r_E"] = r_e;
    run.results["E0"] = e0;
    run.results["well_depth"] = model.coupling() / r_e;

    // r_E from 1/2 c^2 = gamma M / r by bracketing, independent of the formula.
    {
        auto f = [&](double r) { return u.grav * model.hole_mass / r - 0.5 * u.c * u.c; };
        double hi = 1.0;
        while (f(hi) > 0.0) hi *= 2.0;
        double lo = hi;
        while (f(lo) < 0.0) lo *= 0.5;
        const auto b = boost::math::tools::bisect(
            f, lo, hi, [](double a, double c) { return std::abs(c - a) <= 4e-16 * std::abs(a); });
        const double oracle = 0.5 * (b.first + b.second);
        const double rel = std::abs(oracle - r_e) / r_e;
        run.check("horizon_oracle", rel <= 1e-12, rel, 1e-12);
    }

    const double v_e = potential(model, r_e);
    const double jump = std::max(std::abs(potential(model, std::nextafter(r_e, 0.0)) - v_e),
                                 std::abs(potential(model, std::nextafter(r_e, 2.0 * r_e)) - v_e));
    run.check("potential_continuity", jump <= 1e-14 * std::abs(v_e), jump / std::abs(v_e), 1e-14);

    double worst_force = 0.0;
    for (double r : linspace(0.0, std::nextafter(r_e, 0.0), 1000)) worst_force = std::max(worst_force, std::abs(force(model, r)));
    run.check("interior_force_zero", worst_force == 0.0, worst_force, 0.0);

    const auto profile = radial_profile(model, p0, 0.0, cfg.num("r_max"), cfg.count("n_radial"));
    io::CsvWriter csv(run.file("radial.csv"), {"r", "V", "p_re", "p_im", "classically_allowed"});
    std::size_t partition_misses = 0;
    for (const auto& s : profile) {
        csv.cell(s.r).cell(s.potential).cell(s.momentum.real()).cell(s.momentum.imag());
        csv.cell(static_cast<int>(s.classically_allowed));
        csv.end_row();
        const double margin = v_e + e0 - s.potential;
        const bool allowed = margin >= 0.0;
        if (allowed != s.classically_allowed && std::abs(margin) > 1e-12 * std::abs(v_e)) ++partition_misses;
    }
    csv.close();
    run.record("radial.csv");
    run.check("escape_momentum_partition", partition_misses == 0, static_cast<double>(partition_misses), 0.0);

    const ClassicalEscape ce = classical_escape(model, p0);
    run.results["classical_escapes"] = ce.escapes;
    run.results["turning_radius"] = ce.turning_radius;
    run.results["outer_radius"] = outer;

    // The unbounded probability is defined only without a forbidden shell;
    // otherwise the shell reaches infinity and the action diverges.
    std::optional<double> unbounded;
    try {
        unbounded = wkb_escape_probability(model, e0, u);
        run.results["wkb_probability"] = *unbounded;
    } catch (const NonIntegrableShell& e) {
        run.results["wkb_probability"] = std::string("non-integrable: ") + e.what();
    }
    run.check("escape_agreement", ce.escapes == (unbounded && *unbounded == 1.0),
              "classical escape iff unbounded WKB probability is exactly 1");

    const double bounded = wkb_escape_probability(model, e0, u, outer);
    run.results["wkb_probability_to_outer_radius"] = bounded;
    run.check("wkb_bounded_range", bounded > 0.0 && bounded <= 1.0, bounded, 1.0);

    // Monotonicity in E0 of the probability truncated at the outer radius.
    io::CsvWriter wcsv(run.file("wkb_sweep.csv"), {"E0", "P_outer", "classical_escapes"});
    const double e_top = 1.5 * model.coupling() / r_e;
    double prev = 0.0;
    bool monotone = true, in_range = true;
    for (double e : linspace(e_top / static_cast<double>(cfg.count("n_sweep")), e_top, cfg.count("n_sweep"))) {
        const double pr = wkb_escape_probability(model, e, u, outer);
        const bool esc = classical_escape(model, std::sqrt(2.0 * m * e)).escapes;
        wcsv.cell(e).cell(pr).cell(static_cast<int>(esc));
        wcsv.end_row();
        monotone = monotone && pr >= prev;
        in_range = in_range && pr > 0.0 && pr <= 1.0 && (!esc || pr == 1.0);
        prev = pr;
    }
    wcsv.close();
    run.record("wkb_sweep.csv");
    run.check("wkb_bounded_monotone", monotone && in_range, "non-decreasing in E0, in (0, 1], 1 when escaping");

    run.write_json("state.json", states::to_json(states::bh_escape_state(model, std::nullopt, p0, u)));
}

// ---------------------------------------------------------------------------
// cosmology

void run_cosmology(const ScenarioConfig& cfg, Run& run) {
    using namespace cosmology;
    const CosmoState s0{0.0, cfg.num("qT"), cfg.num("pT"), cfg.num("xR"), cfg.num("pR"), cfg.num("k"), cfg.num("m")};
    const CosmoTrajectory traj = integrate(s0, cfg.num("dt"), cfg.num("t_end"), cfg.count("sample_every"));
    const ExpansionReport rep = expansion_report(traj);
    const double h0 = hamiltonian(s0);

    io::CsvWriter csv(run.file("trajectory.csv"),
                      {"t", "qT_re", "pT_re", "xR_im", "pR_im_mag", "H", "aT_re", "aR_im_mag"});
    io::CsvWriter ecsv(run.file("expansion.csv"),
                       {"t", "vT_re", "vR_im_mag", "aT_fd", "aR_fd", "H_rel_drift"});
    double worst_hamilton = 0.0;
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const auto& s = traj.samples[i];
        const double h = hamiltonian(s);
        const Accelerations a = accelerations(s);
        csv.cell(s.t).cell(s.qT).cell(s.pT).cell(s.xR).cell(s.pR).cell(h).cell(a.aT).cell(a.aR);
        csv.end_row();
        ecsv.cell(s.t).cell(rep.vT[i]).cell(std::abs(rep.vR[i])).cell(rep.aT_fd[i]).cell(rep.aR_fd[i]);
        ecsv.cell(h0 != 0.0 ? (h - h0) / std::abs(h0) : h - h0);
        ecsv.end_row();

        // -(1/m) dH/dq by central differences; the imaginary coordinate
        // contributes through dq_im = i dx.
        const double dq = 1e-6 * s.qT, dx = 1e-6 * std::max(std::abs(s.xR), 1e-3);
        CosmoState a1 = s, a2 = s;
        a1.qT += dq;
        a2.qT -= dq;
        const double fd_t = -(hamiltonian(a1) - hamiltonian(a2)) / (2.0 * dq) / s.m;
        CosmoState b1 = s, b2 = s;
        b1.xR += dx;
        b2.xR -= dx;
        const Complex dH_dqim = (hamiltonian(b1) - hamiltonian(b2)) / (2.0 * dx) / kI;
        const double fd_r = (-dH_dqim / s.m).imag();
        auto rel = [](double fd, double exact) {
            return exact == 0.0 ? std::abs(fd) : std::abs(fd - exact) / std::abs(exact);
        };
        worst_hamilton = std::max({worst_hamilton, rel(fd_t, a.aT), rel(fd_r, a.aR)});
    }
    csv.close();
    ecsv.close();
    run.record("trajectory.csv");
    run.record("expansion.csv");

    run.results["steps"] = traj.steps;
    run.results["H0"] = h0;
    run.results["energy_drift"] = rep.energy_drift;
    run.results["degenerate"] = rep.degenerate;
    run.results["fd_acceleration_rel_error"] = rep.fd_rel_error;
    run.results["vT_monotone_span"] = rep.vT_monotone_span;
    run.results["vR_monotone_span"] = rep.vR_monotone_span;
    run.results["samples"] = traj.samples.size();
    run.check("hamilton_consistency", worst_hamilton <= 1e-6, worst_hamilton, 1e-6);
    run.check("acceleration_positivity", rep.positivity,
              std::to_string(rep.positivity_checked) + " samples with xR_im > 0 checked");
    const double tol = cfg.num("drift_tolerance");
    run.check("energy_drift", rep.energy_drift < tol, rep.energy_drift, tol);
}

// ---------------------------------------------------------------------------

void require(bool ok, std::vector<std::string>& errors, std::string message) {
    if (!ok) errors.push_back(std::move(message));
}

const std::vector<ScenarioDef>& registry() {
    static const std::vector<ScenarioDef> defs = [] {
        std::vector<ScenarioDef> d;
        d.push_back({{"operator_algebra", "operator symmetry, spectra and commutator probes on finite grids"},
                     {real("q_min", -10.0), real("q_max", 10.0), integer("n", 256, Domain::GridPoints),
                      real("probe_width", algebra::kStandardProbeWidth, Domain::Positive)},
                     [](const ScenarioConfig& c, std::vector<std::string>& e) {
                         require(c.num("q_min") < c.num("q_max"), e, "parameters: q_min < q_max required");
                     },
                     run_operator_algebra});
        d.push_back({{"spatial_barrier", "transfer-matrix tunneling through a square barrier, classical contrast"},
                     {real("m", 1.0, Domain::Positive), real("V0", 2.0, Domain::Positive), real("q_a", 0.0),
                      real("q_b", 1.0), real("E0", 1.0, Domain::Positive), real("E_min", 0.05, Domain::Positive),
                      real("E_max", 4.0, Domain::Positive), integer("n_sweep", 100, Domain::AtLeast3),
                      text("mode", "literal", {"literal", "matched"}),
                      integer("wave_points", 401, Domain::GridPoints)},
                     [](const ScenarioConfig& c, std::vector<std::string>& e) {
                         require(c.num("q_a") < c.num("q_b"), e, "parameters: q_a < q_b required");
                         require(c.num("E_min") < c.num("E_max"), e, "parameters: E_min < E_max required");
                     },
                     run_spatial_barrier});
        d.push_back({{"temporal_barrier", "classical energy drain W(t) with destruction events, quantum contrast"},
                     {real("m", 1.0, Domain::Positive), real("p0", 1.0, Domain::Positive),
                      real("W0", 1.0, Domain::NonNegative), text("profile", "square", {"square", "smooth_bump"}),
                      real("t1", 0.5), real("t_a", 1.0), real("t_b", 2.0), real("t2", 2.5),
                      text("model", "nonrel", {"nonrel", "rel"}), real("t_start", 0.0), real("t_end", 3.0),
                      real("dt", 1e-3, Domain::Positive)},
                     [](const ScenarioConfig& c, std::vector<std::string>& e) {
                         require(c.num("t_a") < c.num("t_b"), e, "parameters: t_a < t_b required");
                         if (c.text("profile") == "smooth_bump") {
                             require(c.num("t1") < c.num("t_a") && c.num("t_b") < c.num("t2"), e,
                                     "parameters: smooth_bump requires t1 < t_a < t_b < t2");
                         }
                         require(c.num("t_start") < c.num("t_end"), e, "parameters: t_start < t_end required");
                     },
                     run_temporal_barrier});
        d.push_back({{"black_hole", "finite-well horizon model: escape momentum, classical and WKB escape"},
                     {real("M", 1.0, Domain::Positive), real("m", 1.0, Domain::Positive),
                      real("p0", 0.8, Domain::NonNegative), real("r_max", 20.0, Domain::Positive),
                      integer("n_radial", 1001, Domain::GridPoints), real("outer_radius", 20.0, Domain::Positive),
                      integer("n_sweep", 50, Domain::AtLeast3)},
                     [](const ScenarioConfig& c, std::vector<std::string>& e) {
                         if (!(c.num("M") > 0.0)) return;
                         const double r_e = 2.0 * c.units.grav * c.num("M") / (c.units.c * c.units.c);
                         require(c.num("outer_radius") > r_e, e,
                                 "parameters: outer_radius must exceed the horizon radius " + io::format_double(r_e));
                         require(c.num("p0") > 0.0, e, "parameters: p0 must be > 0 (E0 > 0 for the WKB probability)");
                     },
                     run_black_hole});
        d.push_back({{"cosmology", "toy expanding universe: leapfrog trajectory and acceleration report"},
                     {real("k", 1.0, Domain::Positive), real("m", 1.0, Domain::Positive),
                      real("qT", 10.0, Domain::Positive), real("pT", 1.0), real("xR", 0.1), real("pR", 0.0),
                      real("dt", 1e-4, Domain::Positive), real("t_end", 10.0, Domain::Positive),
                      integer("sample_every", 1000, Domain::Positive), real("drift_tolerance", 1e-6, Domain::Positive)},
                     [](const ScenarioConfig& c, std::vector<std::string>& e) {
                         if (c.num("dt") > 0.0 && c.num("sample_every") > 0.0) {
                             const double steps = std::ceil(c.num("t_end") / c.num("dt") - 1e-9);
                             require(steps / c.num("sample_every") >= 2.0, e,
                                     "parameters: t_end / dt / sample_every must give >= 3 samples");
                         }
                     },
                     run_cosmology});
        return d;
    }();
    return defs;
}

const ScenarioDef* find_scenario(std::string_view name) {
    for (const auto& d : registry()) {
        if (d.info.name == name) return &d;
    }
    return nullptr;
}

std::string suggestion(std::string_view key, const std::vector<std::string_view>& known) {
    for (auto k : known) {
        if (edit_distance(key, k) == 1) return " (did you mean '" + std::string(k) + "'?)";
    }
    return {};
}

std::string where(const toml::node& node) {
    const auto& b = node.source().begin;
    return "line " + std::to_string(b.line) + ": ";
}

std::optional<double> number_of(const toml::node& node) {
    if (auto v = node.as_integer()) return static_cast<double>(v->get());
    if (auto v = node.as_floating_point()) return v->get();
    return std::nullopt;
}

std::string domain_error(const ParamSpec& spec, double v) {
    const std::string name = "parameters." + std::string(spec.name);
    if (!std::isfinite(v)) return name + " must be finite";
    switch (spec.domain) {
        case Domain::Positive:
            if (!(v > 0.0)) return name + " must be > 0";
            break;
        case Domain::NonNegative:
            if (!(v >= 0.0)) return name + " must be >= 0";
            break;
        case Domain::GridPoints:
            if (v < static_cast<double>(GridSpec::kMinPoints)) {
                return name + " must be >= " + std::to_string(GridSpec::kMinPoints);
            }
            break;
        case Domain::AtLeast3:
            if (v < 3.0) return name + " must be >= 3";
            break;
        case Domain::Any:
            break;
    }
    return {};
}

}  // namespace

const std::vector<ScenarioInfo>& scenarios() {
    static const std::vector<ScenarioInfo> infos = [] {
        std::vector<ScenarioInfo> v;
        for (const auto& d : registry()) v.push_back(d.info);
        return v;
    }();
    return infos;
}

ValidationError::ValidationError(std::vector<std::string> errors)
    : std::runtime_error([&] {
          std::string msg = "invalid config";
          for (const auto& e : errors) msg += "\n  " + e;
          return msg;
      }()),
      errors_(std::move(errors)) {}

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

ScenarioConfig validate_config(std::string_view text) {
    std::vector<std::string> errors;
    toml::table root;
    try {
        root = toml::parse(text);
    } catch (const toml::parse_error& e) {
        const auto& b = e.source().begin;
        throw ValidationError({"syntax error at line " + std::to_string(b.line) + ", column " +
                               std::to_string(b.column) + ": " + std::string(e.description())});
    }

    ScenarioConfig cfg;
    cfg.source = std::string(text);
    static const std::vector<std::string_view> top_keys = {"scenario", "output", "seed", "units", "parameters"};
    for (auto&& [key, node] : root) {
        if (std::find(top_keys.begin(), top_keys.end(), key.str()) == top_keys.end()) {
            errors.push_back(where(node) + "unknown key '" + std::string(key.str()) + "'" +
                             suggestion(key.str(), top_keys));
        }
    }

    const ScenarioDef* def = nullptr;
    if (auto s = root["scenario"].value<std::string>()) {
        cfg.scenario = *s;
        def = find_scenario(*s);
        if (!def) {
            std::vector<std::string_view> names;
            for (const auto& d : registry()) names.push_back(d.info.name);
            errors.push_back("unknown scenario '" + *s + "'" + suggestion(*s, names));
        }
    } else if (root.contains("scenario")) {
        errors.push_back("scenario must be a string");
    } else {
        errors.push_back("missing required key 'scenario'");
    }

    if (auto* node = root.get("output")) {
        if (auto s = node->value<std::string>()) {
            cfg.output = *s;
        } else {
            errors.push_back(where(*node) + "output must be a string");
        }
    }
    if (auto* node = root.get("seed")) {
        if (auto v = node->as_integer()) {
            cfg.seed = v->get();
        } else {
            errors.push_back(where(*node) + "seed must be an integer");
        }
    }

    if (auto* node = root.get("units")) {
        if (auto* tbl = node->as_table()) {
            static const std::vector<std::string_view> unit_keys = {"hbar", "c", "grav"};
            for (auto&& [key, value] : *tbl) {
                const auto k = key.str();
                const auto v = number_of(value);
                double* slot = k == "hbar" ? &cfg.units.hbar : k == "c" ? &cfg.units.c : k == "grav" ? &cfg.units.grav : nullptr;
                if (!slot) {
                    errors.push_back(where(value) + "unknown key 'units." + std::string(k) + "'" +
                                     suggestion(k, unit_keys));
                } else if (!v) {
                    errors.push_back(where(value) + "units." + std::string(k) + " must be a number");
                } else if (!(std::isfinite(*v) && *v > 0.0)) {
                    errors.push_back("units." + std::string(k) + " must be finite and > 0");
                } else {
                    *slot = *v;
                }
            }
        } else {
            errors.push_back(where(*node) + "units must be a table");
        }
    }

    if (!def) {
        if (!errors.empty()) throw ValidationError(std::move(errors));
        throw ValidationError({"no scenario selected"});
    }

    std::vector<std::string_view> names;
    for (const auto& p : def->params) {
        names.push_back(p.name);
        if (p.kind == Kind::Text) {
            cfg.texts[std::string(p.name)] = std::string(p.text);
        } else {
            cfg.numbers[std::string(p.name)] = p.number;
        }
    }

    const toml::table* params = nullptr;
    if (auto* node = root.get("parameters")) {
        params = node->as_table();
        if (!params) errors.push_back(where(*node) + "parameters must be a table");
    }
    if (params) {
        for (auto&& [key, value] : *params) {
            const auto k = key.str();
            const auto it = std::find_if(def->params.begin(), def->params.end(),
                                         [&](const ParamSpec& p) { return p.name == k; });
            if (it == def->params.end()) {
                errors.push_back(where(value) + "unknown key 'parameters." + std::string(k) + "' for scenario " +
                                 cfg.scenario + suggestion(k, names));
                continue;
            }
            const std::string name = "parameters." + std::string(k);
            switch (it->kind) {
                case Kind::Text: {
                    const auto s = value.value<std::string>();
                    if (!s) {
                        errors.push_back(where(value) + name + " must be a string");
                    } else if (std::find(it->choices.begin(), it->choices.end(), *s) == it->choices.end()) {
                        std::string opts;
                        for (auto c : it->choices) opts += (opts.empty() ? "" : ", ") + std::string(c);
                        errors.push_back(name + " must be one of {" + opts + "}, got '" + *s + "'" +
                                         suggestion(*s, it->choices));
                    } else {
                        cfg.texts[std::string(k)] = *s;
                    }
                    break;
                }
                case Kind::Integer: {
                    const auto v = value.as_integer();
                    if (!v) {
                        errors.push_back(where(value) + name + " must be an integer");
                    } else {
                        cfg.numbers[std::string(k)] = static_cast<double>(v->get());
                    }
                    break;
                }
                case Kind::Real: {
                    const auto v = number_of(value);
                    if (!v) {
                        errors.push_back(where(value) + name + " must be a number");
                    } else {
                        cfg.numbers[std::string(k)] = *v;
                    }
                    break;
                }
            }
        }
    }

    const std::size_t before_domain = errors.size();
    for (const auto& p : def->params) {
        if (p.kind == Kind::Text) continue;
        auto msg = domain_error(p, cfg.numbers.at(std::string(p.name)));
        if (!msg.empty()) errors.push_back(std::move(msg));
    }
    // Cross checks assume each parameter is individually sane.
    if (errors.size() == before_domain) def->cross(cfg, errors);

    if (!errors.empty()) throw ValidationError(std::move(errors));
    return cfg;
}

ScenarioResult run_scenario(const ScenarioConfig& config, const fs::path& out_dir) {
    const ScenarioDef* def = find_scenario(config.scenario);
    if (!def) throw ScenarioError("unknown scenario '" + config.scenario + "'");
    fs::create_directories(out_dir);

    Run run;
    run.dir = out_dir;
    try {
        def->run(config, run);
    } catch (const std::exception& e) {
        throw ScenarioError("scenario " + config.scenario + ": " + e.what());
    }

    ojson params = ojson::object();
    for (const auto& p : def->params) {
        const std::string k(p.name);
        if (p.kind == Kind::Text) {
            params[k] = config.texts.at(k);
        } else if (p.kind == Kind::Integer) {
            params[k] = static_cast<std::int64_t>(config.numbers.at(k));
        } else {
            params[k] = config.numbers.at(k);
        }
    }

    ScenarioResult result;
    result.artifacts = run.artifacts;
    result.all_invariants_pass = run.all_pass;
    ojson artifacts = ojson::array();
    for (const auto& a : run.artifacts) artifacts.push_back({{"path", a.path}, {"sha256", a.sha256}, {"bytes", a.bytes}});
    result.summary = {{"library_version", COMPLEXMECH_VERSION},
                      {"scenario", config.scenario},
                      {"config_sha256", io::sha256_hex(config.source)},
                      {"seed", config.seed},
                      {"units", {{"hbar", config.units.hbar}, {"c", config.units.c}, {"grav", config.units.grav}}},
                      {"parameters", params},
                      {"results", run.results},
                      {"invariants", run.invariants},
                      {"all_invariants_pass", run.all_pass},
                      {"artifacts", artifacts}};

    std::ofstream out(out_dir / "summary.json", std::ios::binary | std::ios::trunc);
    out << result.summary.dump(2) << '\n';
    if (!out) throw ScenarioError("cannot write summary.json");
    return result;
}

}  // namespace complexmech::scenario
