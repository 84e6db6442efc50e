#include "stepflow/scheme.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "stepflow/errors.hpp"

namespace stepflow {

SchemeSpec validated(SchemeSpec spec) {
    if (spec.central_both_at_step) {
        spec.central_mass_at_step = true;
    }
    if (spec.flux_family == FluxFamily::hllc) {
        if (spec.correction != BedCorrection::none || spec.central_mass_at_step ||
            spec.zero_mhat_at_step) {
            throw std::invalid_argument(
                "bed corrections and step-interface switches are defined for the "
                "Lax-Friedrichs flux family only");
        }
    }
    return spec;
}

SchemeSpec scheme_preset(std::string_view name) {
    std::string key(name);
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

    SchemeSpec spec;
    spec.name = key;
    if (key == "lxf") {
        // defaults
    } else if (key == "wblxf") {
        spec.correction = BedCorrection::mass_viscosity;
    } else if (key == "hr") {
        spec.correction = BedCorrection::hydrostatic;
    } else if (key == "xs") {
        spec.gamma = GammaChoice::zero;
        spec.correction = BedCorrection::free_surface;
    } else if (key == "clxf") {
        spec.central_mass_at_step = true;
    } else if (key == "hllc") {
        spec.flux_family = FluxFamily::hllc;
    } else {
        std::ostringstream msg;
        msg << "unknown scheme preset '" << name << "'; valid names:";
        for (const auto& n : scheme_preset_names()) msg << ' ' << n;
        throw std::invalid_argument(msg.str());
    }
    return validated(spec);
}

const std::vector<std::string>& scheme_preset_names() {
    static const std::vector<std::string> names = {"lxf", "wblxf", "hr",
                                                   "xs",  "clxf",  "hllc"};
    return names;
}

SimulationState::SimulationState(const Mesh& mesh_in, const Topography& topo_in)
    : mesh(mesh_in), topo(topo_in) {
    cells.resize(static_cast<size_t>(mesh.n_cells()));
    bed.resize(static_cast<size_t>(mesh.n_cells()));
    for (int j = 0; j < mesh.n_cells(); ++j) {
        bed[static_cast<size_t>(j)] = topo.value(mesh.center(j));
    }
}

SimulationState init_riemann(const Mesh& mesh, const Topography& topo,
                             const PrimitiveState& left, const PrimitiveState& right, double g) {
    SimulationState state(mesh, topo);
    const ConservedState u_l = from_primitive(left, g);
    const ConservedState u_r = from_primitive(right, g);
    for (int j = 0; j < mesh.n_cells(); ++j) {
        state.cells[static_cast<size_t>(j)] = mesh.center(j) < 0.0 ? u_l : u_r;
    }
    return state;
}

double cfl_dt(const SimulationState& state, double g, double cfl) {
    if (!(cfl > 0.0) || cfl > 1.0) {
        throw std::invalid_argument("cfl must lie in (0, 1]");
    }
    double smax = 0.0;
    for (const auto& u : state.cells) {
        smax = std::max(smax, char_speed(u, g));
    }
    if (!std::isfinite(smax) || !(smax > 0.0)) {
        throw NumericalError("non-finite characteristic speed while sizing the time step");
    }
    return cfl * state.mesh.dx() / smax;
}

void assemble_interface_terms(const SimulationState& state, const SchemeSpec& spec, double g,
                              std::vector<InterfaceTerms>& out, RunDiagnostics* diag) {
    const int n = state.mesh.n_cells();
    const int step_if = state.mesh.step_index();
    out.resize(static_cast<size_t>(n) + 1);

    for (int i = 0; i <= n; ++i) {
        // Zero-order extrapolation ghosts at both ends (states and bed).
        const int jl = std::max(i - 1, 0);
        const int jr = std::min(i, n - 1);
        const ConservedState& u_l = state.cells[static_cast<size_t>(jl)];
        const ConservedState& u_r = state.cells[static_cast<size_t>(jr)];
        const double b_l = state.bed[static_cast<size_t>(jl)];
        const double b_r = state.bed[static_cast<size_t>(jr)];
        const bool at_step = (i == step_if);

        InterfaceTerms& t = out[static_cast<size_t>(i)];
        t.s_hat = interface_source(u_l.h, u_r.h, b_l, b_r, spec.gamma, g);

        const double alpha = lxf_alpha(u_l, u_r, g);
        if (diag) {
            diag->max_alpha = std::max(diag->max_alpha, alpha);
        }

        if (spec.flux_family == FluxFamily::hllc) {
            HllcResult r = hllc_flux(u_l, u_r, g);
            t.f_hat = r.flux;
            t.m_hat = FluxVec{0.0, 0.0};
            if (r.fallback && diag) {
                ++diag->hllc_fallbacks;
            }
            continue;
        }

        double a1 = alpha;
        double a2 = alpha;
        if (at_step && spec.central_mass_at_step) {
            a1 = 0.0;
        }
        if (at_step && spec.central_both_at_step) {
            a1 = 0.0;
            a2 = 0.0;
        }
        t.f_hat = lxf_flux(u_l, u_r, ViscosityMatrix{a1, a2}, g);

        const double db = b_r - b_l;
        FluxVec n_vec;
        try {
            n_vec = n_hat(spec.correction, u_l, u_r, b_l, b_r, g, a1);
        } catch (const NumericalError& e) {
            std::ostringstream msg;
            msg << e.what() << " at interface x = " << state.mesh.interface(i);
            throw NumericalError(msg.str());
        }
        t.m_hat = FluxVec{0.5 * n_vec.mass * db, 0.5 * n_vec.mom * db};
        if (at_step && spec.zero_mhat_at_step) {
            t.m_hat = FluxVec{0.0, 0.0};
        }
    }
}

void step(SimulationState& state, const SchemeSpec& spec, double g, double dt,
          std::vector<InterfaceTerms>* workspace) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("step needs a positive finite dt");
    }
    std::vector<InterfaceTerms> local;
    std::vector<InterfaceTerms>& terms = workspace ? *workspace : local;
    assemble_interface_terms(state, spec, g, terms, &state.diag);

    const int n = state.mesh.n_cells();
    const double lam = dt / state.mesh.dx();
    std::vector<ConservedState> next(static_cast<size_t>(n));

    for (int j = 0; j < n; ++j) {
        const InterfaceTerms& l = terms[static_cast<size_t>(j)];
        const InterfaceTerms& r = terms[static_cast<size_t>(j) + 1];
        const ConservedState& u = state.cells[static_cast<size_t>(j)];
        const double h_new = u.h - lam * (r.f_hat.mass - l.f_hat.mass) +
                             lam * (r.s_hat.mass + l.s_hat.mass) +
                             lam * (r.m_hat.mass - l.m_hat.mass);
        const double m_new = u.m - lam * (r.f_hat.mom - l.f_hat.mom) +
                             lam * (r.s_hat.mom + l.s_hat.mom) +
                             lam * (r.m_hat.mom - l.m_hat.mom);
        if (!(h_new > 0.0) || !std::isfinite(h_new) || !std::isfinite(m_new)) {
            std::ostringstream msg;
            msg << "positivity lost in cell " << j << " (x = " << state.mesh.center(j)
                << ") at step " << state.steps + 1 << ", t = " << state.time
                << ": updated h = " << h_new;
            throw NumericalError(msg.str());
        }
        next[static_cast<size_t>(j)] = ConservedState{h_new, m_new};
    }

    state.cells.swap(next);
    for (const auto& u : state.cells) {
        state.diag.min_h = std::min(state.diag.min_h, u.h);
    }
    state.time += dt;
    ++state.steps;
}

SimulationState run(const RunProblem& problem, const SchemeSpec& spec_in) {
    if (!(problem.end_time >= 0.0) || !std::isfinite(problem.end_time)) {
        throw std::invalid_argument("run needs end_time >= 0");
    }
    const SchemeSpec spec = validated(spec_in);
    SimulationState state = init_riemann(problem.mesh, problem.topo, problem.left,
                                         problem.right, problem.g);
    for (const auto& u : state.cells) {
        state.diag.min_h = std::min(state.diag.min_h, u.h);
    }

    std::vector<InterfaceTerms> workspace;
    while (state.time < problem.end_time) {
        const double remaining = problem.end_time - state.time;
        double dt = cfl_dt(state, problem.g, problem.cfl);
        const bool last = dt >= remaining;
        if (last) {
            dt = remaining;
        }
        step(state, spec, problem.g, dt, &workspace);
        if (last) {
            state.time = problem.end_time;
            break;
        }
    }
    return state;
}

}  // namespace stepflow
