#pragma once

#include <string_view>
#include <vector>

#include "stepflow/fluxes.hpp"
#include "stepflow/types.hpp"

namespace stepflow {

// ============================================================================
// Solution structure
// ============================================================================

enum class WaveFamily {
    one,  // characteristic speed u - sqrt(gh)
    two,  // characteristic speed u + sqrt(gh)
};

// One wave of a self-similar solution. Shocks carry a single speed
// (left_speed == right_speed), rarefaction fans a [head, tail] interval, and
// the stationary step wave sits at x = 0 with both speeds zero.
struct WaveDescriptor {
    enum class Kind { shock, fan, step };
    Kind kind = Kind::shock;
    WaveFamily family = WaveFamily::one;  // meaningless for step waves
    double left_speed = 0.0;
    double right_speed = 0.0;
};

// Exact (or tabulated-exact) solution of one Riemann problem over a bottom
// step: constant states interleaved with waves, ordered left to right.
// states.size() == waves.size() + 1; states.front()/back() are the problem
// data.
struct ReferenceSolution {
    std::vector<ConservedState> states;
    std::vector<WaveDescriptor> waves;
    double b_left = 0.0;   // bed level left of x = 0
    double b_right = 0.0;  // bed level right of x = 0
    double g = 9.81;

    // Index of the stationary step wave, or -1 when the bed is flat.
    int step_wave_index() const;
    // Constant states immediately left/right of the step wave; throws
    // std::logic_error when there is none.
    const ConservedState& left_of_step() const;
    const ConservedState& right_of_step() const;
};

// ============================================================================
// Wave relations
// ============================================================================

// Velocity on the wave curve of the given family through state u_k, at
// height h_star: the Hugoniot locus for h_star > h_k, the rarefaction
// integral curve for h_star <= h_k.
double wave_curve(double h_star, WaveFamily family, const ConservedState& u_k, double g);

// Which Froude regime the unknown side of a step transition must land in.
enum class StepBranch {
    subcritical,
    supercritical,
};

// Solves the stationary-step jump conditions
//   [h u] = 0,   [h u^2 + g h^2 / 2] = -g * check_h * [b]
// for the state on the other side of the step. step_transition knows the left
// state and returns the right one; step_transition_left inverts that. The
// momentum equation is scalar in the unknown height; among its (at most two)
// positive roots the requested branch picks the one whose Froude regime
// matches. Errors: no root in the branch -> NumericalError "no step
// transition in branch"; two roots in the same branch -> NumericalError
// (refuses to guess). A zero bed jump returns the input unchanged.
ConservedState step_transition(const ConservedState& u_minus, double b_l, double b_r,
                               GammaChoice gamma, double g, StepBranch branch);
ConservedState step_transition_left(const ConservedState& u_plus, double b_l, double b_r,
                                    GammaChoice gamma, double g, StepBranch branch);

// Residuals of the two step closures, evaluated on a candidate pair of side
// states. Both share the mass relation; they differ in the second component:
// the momentum-balance closure above versus constancy of u^2/2 + g(h+b).
struct StepResiduals {
    double mass = 0.0;
    double momentum = 0.0;
};
StepResiduals grh_residual(const ConservedState& u_minus, const ConservedState& u_plus,
                           double b_l, double b_r, GammaChoice gamma, double g);
StepResiduals riemann_invariant_residual(const ConservedState& u_minus,
                                         const ConservedState& u_plus, double b_l, double b_r,
                                         double g);

// ============================================================================
// Solvers and builders
// ============================================================================

// Requested wave arrangement for solve_riemann_grh, parsed from strings like
// "1R-0-2S" (subcritical: one nonlinear wave each side of the step),
// "1S-2S-0" (negative supercritical: both nonlinear waves left of the step).
// 'W' in place of R/S leaves the character to the solver ("1W-0-2W").
struct WavePatternHint {
    enum class Layout { subcritical, negative_supercritical };
    enum class Kind { shock, rarefaction, automatic };
    Layout layout = Layout::subcritical;
    Kind first = Kind::automatic;
    Kind second = Kind::automatic;

    static WavePatternHint parse(std::string_view text);
};

// Exact solution of the step Riemann problem under the momentum-balance step
// closure, for the two nontransonic layouts. Root finding is a bracketing
// scan plus bisection, polished by safeguarded Newton iteration. Errors:
// NumericalError "pattern infeasible" when no bracket exists in the scanned
// height range (the transonic signature), "inadmissible pattern" when the
// assembled waves violate the layout's speed ordering or an explicit R/S
// hint. A flat bed (b_l == b_r) solves the classical two-wave problem, and
// identical data over a flat bed yield the trivial no-wave solution.
ReferenceSolution solve_riemann_grh(const PrimitiveState& w_l, const PrimitiveState& w_r,
                                    double b_l, double b_r, GammaChoice gamma, double g,
                                    const WavePatternHint& pattern);

// Classical flat-bottom two-wave solution (the inner solver of
// solve_riemann_grh, exposed for direct use and cross-checking).
ReferenceSolution solve_riemann_flat(const PrimitiveState& w_l, const PrimitiveState& w_r,
                                     double bed_level, double g);

// How two consecutive tabulated states are supposed to be connected.
enum class ConnectorKind {
    shock1,
    shock2,
    fan1,
    fan2,
    step,
};

// Builds a ReferenceSolution from a printed state chain (4-decimal rounded
// values) plus its connector annotations. Every connector is validated at
// tolerances matched to the rounding: shocks against the jump relations
// (relative 1e-2), fans against constancy of the family invariant (relative
// 1e-3), the step against the momentum-balance closure (absolute 1e-2), and
// the whole chain against left-to-right speed ordering. Violations raise
// ValidationError naming the offending pair and residual.
ReferenceSolution build_reference_from_states(const std::vector<PrimitiveState>& chain,
                                              const std::vector<ConnectorKind>& connectors,
                                              double b_l, double b_r, double g);

// Samples a self-similar solution at (x, t). t = 0 returns the Riemann data
// (left state for x < 0). Fans are evaluated by their closed-form interior
// profile. Exactly at the step's ray the left-limit state is returned for
// x < 0 queries and the right limit for x >= 0, never an average.
ConservedState evaluate_reference(const ReferenceSolution& sol, double x, double t);

}  // namespace stepflow
