#include "stepflow/original_forms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "stepflow/errors.hpp"
#include "stepflow/fluxes.hpp"

namespace stepflow {

namespace {

struct Side {
    ConservedState u_l;
    ConservedState u_r;
    double b_l;
    double b_r;
};

Side interface_inputs(const SimulationState& state, int i) {
    const int n = state.mesh.n_cells();
    const int jl = std::max(i - 1, 0);
    const int jr = std::min(i, n - 1);
    return Side{state.cells[static_cast<size_t>(jl)], state.cells[static_cast<size_t>(jr)],
                state.bed[static_cast<size_t>(jl)], state.bed[static_cast<size_t>(jr)]};
}

void commit(SimulationState& state, std::vector<ConservedState>& next, double dt) {
    const int n = state.mesh.n_cells();
    for (int j = 0; j < n; ++j) {
        const ConservedState& u = next[static_cast<size_t>(j)];
        if (!(u.h > 0.0) || !std::isfinite(u.h) || !std::isfinite(u.m)) {
            std::ostringstream msg;
            msg << "positivity lost in cell " << j << " (x = " << state.mesh.center(j)
                << ") at step " << state.steps + 1 << ", t = " << state.time
                << ": updated h = " << u.h;
            throw NumericalError(msg.str());
        }
    }
    state.cells.swap(next);
    for (const auto& u : state.cells) {
        state.diag.min_h = std::min(state.diag.min_h, u.h);
    }
    state.time += dt;
    ++state.steps;
}

}  // namespace

void hr_original_step(SimulationState& state, double g, double dt) {
    const int n = state.mesh.n_cells();
    const double lam = dt / state.mesh.dx();

    // Per interface: the flux seen from the left cell (minus side) and from
    // the right cell (plus side).
    std::vector<FluxVec> f_minus(static_cast<size_t>(n) + 1);
    std::vector<FluxVec> f_plus(static_cast<size_t>(n) + 1);

    for (int i = 0; i <= n; ++i) {
        const Side s = interface_inputs(state, i);
        const double b_top = std::max(s.b_l, s.b_r);
        const double h_star_l = s.u_l.h + s.b_l - b_top;
        const double h_star_r = s.u_r.h + s.b_r - b_top;
        if (!(h_star_l > 0.0) || !(h_star_r > 0.0)) {
            std::ostringstream msg;
            msg << "hydrostatic reconstruction dried a cell at interface x = "
                << state.mesh.interface(i) << " (reconstructed heights " << h_star_l
                << ", " << h_star_r << ")";
            throw NumericalError(msg.str());
        }
        const ConservedState star_l{h_star_l, s.u_l.m};
        const ConservedState star_r{h_star_r, s.u_r.m};
        // Viscosity from the unreconstructed cells; the equivalence with the
        // unified form holds for exactly this choice.
        const double alpha = lxf_alpha(s.u_l, s.u_r, g);
        const FluxVec f_star = lxf_flux(star_l, star_r, ViscosityMatrix{alpha, alpha}, g);
        f_minus[static_cast<size_t>(i)] =
            f_star + FluxVec{0.0, 0.5 * g * s.u_l.h * s.u_l.h - 0.5 * g * h_star_l * h_star_l};
        f_plus[static_cast<size_t>(i)] =
            f_star + FluxVec{0.0, 0.5 * g * s.u_r.h * s.u_r.h - 0.5 * g * h_star_r * h_star_r};
    }

    std::vector<ConservedState> next(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        const ConservedState& u = state.cells[static_cast<size_t>(j)];
        const FluxVec& fr = f_minus[static_cast<size_t>(j) + 1];
        const FluxVec& fl = f_plus[static_cast<size_t>(j)];
        next[static_cast<size_t>(j)] =
            ConservedState{u.h - lam * (fr.mass - fl.mass), u.m - lam * (fr.mom - fl.mom)};
    }
    commit(state, next, dt);
}

namespace {

// Shared by the xs and wblxf originals: LxF flux with the extra bed-jump
// viscosity acting on the mass equation.
FluxVec bed_modified_flux(const Side& s, double g) {
    const double alpha = lxf_alpha(s.u_l, s.u_r, g);
    const FluxVec f = lxf_flux(s.u_l, s.u_r, ViscosityMatrix{alpha, alpha}, g);
    return FluxVec{f.mass - 0.5 * alpha * (s.b_r - s.b_l), f.mom};
}

}  // namespace

void xs_original_step(SimulationState& state, double g, double dt) {
    const int n = state.mesh.n_cells();
    const double lam = dt / state.mesh.dx();

    std::vector<FluxVec> flux(static_cast<size_t>(n) + 1);
    std::vector<double> b_avg(static_cast<size_t>(n) + 1);
    std::vector<double> b2_avg(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        const Side s = interface_inputs(state, i);
        flux[static_cast<size_t>(i)] = bed_modified_flux(s, g);
        b_avg[static_cast<size_t>(i)] = 0.5 * (s.b_l + s.b_r);
        b2_avg[static_cast<size_t>(i)] = 0.5 * (s.b_l * s.b_l + s.b_r * s.b_r);
    }

    std::vector<ConservedState> next(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        const ConservedState& u = state.cells[static_cast<size_t>(j)];
        const double b_j = state.bed[static_cast<size_t>(j)];
        const FluxVec& fr = flux[static_cast<size_t>(j) + 1];
        const FluxVec& fl = flux[static_cast<size_t>(j)];
        const double source =
            0.5 * g * (b2_avg[static_cast<size_t>(j) + 1] - b2_avg[static_cast<size_t>(j)]) -
            g * (u.h + b_j) * (b_avg[static_cast<size_t>(j) + 1] - b_avg[static_cast<size_t>(j)]);
        next[static_cast<size_t>(j)] = ConservedState{u.h - lam * (fr.mass - fl.mass),
                                                      u.m - lam * (fr.mom - fl.mom) + lam * source};
    }
    commit(state, next, dt);
}

void wb_lxf_original_step(SimulationState& state, double g, double dt) {
    const int n = state.mesh.n_cells();
    const double lam = dt / state.mesh.dx();

    std::vector<FluxVec> flux(static_cast<size_t>(n) + 1);
    std::vector<FluxVec> source(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        const Side s = interface_inputs(state, i);
        flux[static_cast<size_t>(i)] = bed_modified_flux(s, g);
        source[static_cast<size_t>(i)] =
            interface_source(s.u_l.h, s.u_r.h, s.b_l, s.b_r, GammaChoice::sign_of_jump, g);
    }

    std::vector<ConservedState> next(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        const ConservedState& u = state.cells[static_cast<size_t>(j)];
        const FluxVec& fr = flux[static_cast<size_t>(j) + 1];
        const FluxVec& fl = flux[static_cast<size_t>(j)];
        const FluxVec& sr = source[static_cast<size_t>(j) + 1];
        const FluxVec& sl = source[static_cast<size_t>(j)];
        next[static_cast<size_t>(j)] =
            ConservedState{u.h - lam * (fr.mass - fl.mass) + lam * (sr.mass + sl.mass),
                           u.m - lam * (fr.mom - fl.mom) + lam * (sr.mom + sl.mom)};
    }
    commit(state, next, dt);
}

}  // namespace stepflow
