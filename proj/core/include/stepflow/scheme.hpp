#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "stepflow/fluxes.hpp"
#include "stepflow/types.hpp"

namespace stepflow {

// ============================================================================
// Scheme description
// ============================================================================

enum class FluxFamily {
    lax_friedrichs,
    hllc,
};

// Complete description of one scheme variant. All catalog schemes share the
// update
//   U_j' = U_j - lam (F_{j+1/2} - F_{j-1/2}) + lam (S_{j+1/2} + S_{j-1/2})
//              + lam (M_{j+1/2} - M_{j-1/2}),      lam = dt/dx,
// and differ only in the ingredients selected here. The step switches apply at
// the single interface x = 0 where the bed jumps:
//   central_mass_at_step - zero alpha1 there (central mass flux)
//   central_both_at_step - zero alpha1 and alpha2 there (implies the above)
//   zero_mhat_at_step    - drop the M correction there
struct SchemeSpec {
    std::string name;
    FluxFamily flux_family = FluxFamily::lax_friedrichs;
    GammaChoice gamma = GammaChoice::sign_of_jump;
    BedCorrection correction = BedCorrection::none;
    bool central_mass_at_step = false;
    bool central_both_at_step = false;
    bool zero_mhat_at_step = false;
};

// Normalizes and checks a spec: central_both_at_step switches
// central_mass_at_step on; the step switches and bed corrections are defined
// for the Lax-Friedrichs family only and raise std::invalid_argument when
// combined with HLLC.
SchemeSpec validated(SchemeSpec spec);

// Frozen catalog presets, by conventional name (case-insensitive):
//   lxf    plain Lax-Friedrichs, lower-side pressure weight
//   wblxf  LxF + mass_viscosity bed correction (well balanced)
//   hr     LxF + hydrostatic bed correction (well balanced)
//   xs     LxF + free_surface bed correction, mean pressure weight (gamma 0)
//   clxf   LxF with the central mass flux at the step
//   hllc   HLLC flux, LxF-style interface source
// Throws std::invalid_argument for unknown names.
SchemeSpec scheme_preset(std::string_view name);
const std::vector<std::string>& scheme_preset_names();

// ============================================================================
// Simulation state
// ============================================================================

// Robustness counters accumulated over a run.
struct RunDiagnostics {
    double min_h = std::numeric_limits<double>::infinity();
    double max_alpha = 0.0;
    long long hllc_fallbacks = 0;
};

// One evolving finite-volume solution. Cell bed values are point samples of
// the topography at cell centers, fixed at construction.
struct SimulationState {
    SimulationState(const Mesh& mesh, const Topography& topo);

    Mesh mesh;
    Topography topo;
    std::vector<ConservedState> cells;
    std::vector<double> bed;
    double time = 0.0;
    long long steps = 0;
    RunDiagnostics diag;
};

// Riemann initial data: the left primitive state fills every cell with center
// x < 0, the right state the rest.
SimulationState init_riemann(const Mesh& mesh, const Topography& topo,
                             const PrimitiveState& left, const PrimitiveState& right, double g);

// ============================================================================
// Stepping
// ============================================================================

// Time step from the CFL condition: cfl * dx / (largest characteristic speed
// over all cells). cfl must lie in (0, 1].
double cfl_dt(const SimulationState& state, double g, double cfl);

// Computes the per-interface terms (flux, source, correction) of the scheme
// for the current cells, into out[0..n_cells]. Interface i sits between cells
// i-1 and i; boundary interfaces use zero-order extrapolation ghosts. Exposed
// separately from step() so tests and diagnostics can inspect single
// interfaces; step() consumes exactly these values.
void assemble_interface_terms(const SimulationState& state, const SchemeSpec& spec, double g,
                              std::vector<InterfaceTerms>& out, RunDiagnostics* diag);

// Advances the state by one explicit step of size dt. The caller is
// responsible for a CFL-stable dt. Throws NumericalError if any updated height
// is nonpositive, identifying the cell; the state is left unmodified in that
// case. workspace, when given, avoids reallocating the interface buffer across
// repeated steps.
void step(SimulationState& state, const SchemeSpec& spec, double g, double dt,
          std::vector<InterfaceTerms>* workspace = nullptr);

// ============================================================================
// Whole runs
// ============================================================================

// One Riemann problem over a step, ready to run.
struct RunProblem {
    Mesh mesh;
    Topography topo;
    PrimitiveState left;
    PrimitiveState right;
    double end_time = 0.0;
    double cfl = 0.5;
    double g = 9.81;
};

// Runs the scheme to end_time: repeated cfl_dt + step, with the final step
// clipped so the run lands on end_time exactly. Deterministic for fixed
// inputs. end_time = 0 returns the initial sampling untouched.
SimulationState run(const RunProblem& problem, const SchemeSpec& spec);

}  // namespace stepflow
