#pragma once

#include "stepflow/scheme.hpp"

namespace stepflow {

// Historical formulations of the three well-balanced schemes, implemented
// verbatim from their published definitions rather than through the unified
// interface-term assembly. They exist to cross-check, numerically and per
// cell, that the unified forms in scheme.cpp really are reformulations: one
// step of hr_original_step must match one step of the 'hr' preset to roundoff,
// and likewise for xs/wblxf.
//
// All three advance the state by one explicit step of size dt with the same
// ghost-cell convention as step(). They throw NumericalError on positivity
// loss, and hr_original_step additionally when the hydrostatic reconstruction
// dries an interface state.

// Hydrostatic reconstruction: interface states are lifted to the higher bed
// side, the flux is the LxF flux of the reconstructed pair (viscosity taken
// from the unreconstructed cells), and each cell sees its own hydrostatic
// pressure correction instead of an explicit source term.
void hr_original_step(SimulationState& state, double g, double dt);

// Flux and source modification: the LxF flux gains a bed-jump viscosity term
// in the mass equation, and the momentum source balances through cell
// averages of b and b^2.
void xs_original_step(SimulationState& state, double g, double dt);

// Flux-modified LxF: the same bed-jump mass viscosity as xs, with the
// lower-side weighted interface source of the plain LxF scheme.
void wb_lxf_original_step(SimulationState& state, double g, double dt);

}  // namespace stepflow
