#pragma once

// Error measurement and structure diagnostics for finished runs: L1 errors
// against a reference solution, convergence orders across mesh ladders, the
// momentum spike bookkeeping at the bed step, transition-layer counting, and
// the still-water residual check.

#include <cstdint>
#include <optional>
#include <vector>

#include "stepflow/exact.hpp"
#include "stepflow/scheme.hpp"
#include "stepflow/types.hpp"

namespace stepflow {

// One row of an error table. Orders stay empty for the coarsest mesh.
struct ErrorRecord {
    int cells = 0;
    double e_h = 0.0;
    double e_m = 0.0;
    std::optional<double> order_h;
    std::optional<double> order_m;
};

// L1 errors of the numerical state against the reference evaluated at cell
// centers and the state's own final time. When expected_time is supplied, a
// mismatch with the state's clock is an error rather than a silent rescale.
struct L1Errors {
    double e_h = 0.0;
    double e_m = 0.0;
};
L1Errors l1_error(const SimulationState& state, const ReferenceSolution& reference,
                  std::optional<double> expected_time = std::nullopt);

// Fills order_h/order_m in place via log2(e_prev / e_curr). Requires each N to
// double the previous one. Non-finite ratios leave the order empty.
void convergence_orders(std::vector<ErrorRecord>& records);

// Bookkeeping for the momentum artifact adjacent to the bed step.
struct SpikeRecord {
    int cells = 0;
    double m_peak_avg = 0.0;   // mean momentum of the two cells touching the step
    double m_foot = 0.0;       // reference momentum at the step
    double alpha1_star = 0.0;  // effective mass viscosity at the step interface
    double bracket_jump = 0.0; // height jump, or surface jump for bed-aware presets
    double predicted = 0.0;
    double residual = 0.0;
};
SpikeRecord spike_record(const SimulationState& state, const ReferenceSolution& reference,
                         const SchemeSpec& spec, double g);

// Counts cells within plateau_window of the step whose depth strays from the
// side plateau (median over the outer half of the window) by more than tol.
int transition_count(const SimulationState& state, int plateau_window, double tol);

// Runs a lake-at-rest configuration (flat free surface, zero momentum) for the
// given number of steps and reports the largest momentum magnitude produced.
double well_balance_residual(const SchemeSpec& spec, const Topography& topo, double g,
                             int cells, long long steps, double surface_margin = 0.3,
                             double x_lo = -5.0, double x_hi = 5.0, double cfl = 0.5);

}  // namespace stepflow
