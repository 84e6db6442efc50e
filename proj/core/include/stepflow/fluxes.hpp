#pragma once

#include "stepflow/types.hpp"

namespace stepflow {

// ============================================================================
// Small vector/matrix helpers
// ============================================================================

// One (mass, momentum) pair: a physical flux, a numerical flux, a source
// contribution, or an interface correction, depending on context.
struct FluxVec {
    double mass = 0.0;
    double mom = 0.0;
};

inline FluxVec operator+(FluxVec a, FluxVec b) { return {a.mass + b.mass, a.mom + b.mom}; }
inline FluxVec operator-(FluxVec a, FluxVec b) { return {a.mass - b.mass, a.mom - b.mom}; }
inline FluxVec operator*(double s, FluxVec v) { return {s * v.mass, s * v.mom}; }

// Diagonal viscosity matrix diag(alpha1, alpha2) of the local
// Lax-Friedrichs flux. alpha1 damps the mass equation, alpha2 the momentum
// equation; both are nonnegative wave speeds.
struct ViscosityMatrix {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
};

// How the interface pressure weights the two water columns meeting at the
// bottom jump: take the lower-side column (the usual choice, weight
// gamma = sign of the bed jump) or the plain average (gamma = 0).
enum class GammaChoice {
    sign_of_jump,
    zero,
};

// Everything one interface contributes to the update of its two neighbor
// cells: numerical flux F, interface source S (zero mass component), and the
// bed-jump correction M = 0.5 * N * [b].
struct InterfaceTerms {
    FluxVec f_hat;
    FluxVec s_hat;
    FluxVec m_hat;
};

// Which bed-jump correction N a scheme adds at interfaces with a bed
// difference. Each value corresponds to one of the catalog schemes:
//   none           - plain LxF or HLLC (no correction)
//   mass_viscosity - N = (alpha1, 0); viscosity acting on the bed jump in the
//                    mass equation only
//   hydrostatic    - the correction equivalent to hydrostatic reconstruction
//                    of the interface states
//   free_surface   - N = (alpha1, g/2 * [h+b]); the correction equivalent to
//                    the free-surface/bed-square source splitting
enum class BedCorrection {
    none,
    mass_viscosity,
    hydrostatic,
    free_surface,
};

// ============================================================================
// Fluxes
// ============================================================================

// Exact flux F(U) = (m, m^2/h + g h^2 / 2).
FluxVec physical_flux(const ConservedState& u, double g);

// Local Lax-Friedrichs viscosity: max of char_speed over the two states.
double lxf_alpha(const ConservedState& u_l, const ConservedState& u_r, double g);

// F = {F(U)} - 0.5 * A * [U] with A = diag(alpha1, alpha2).
FluxVec lxf_flux(const ConservedState& u_l, const ConservedState& u_r,
                 const ViscosityMatrix& a, double g);

// HLLC flux for the homogeneous shallow water system. Wave speeds use the
// two-rarefaction star-region estimate; the contact speed is Toro's formula.
// If the estimated speeds fail to order (s_l >= s_r) the flux silently falls
// back to lxf_flux with lxf_alpha and reports it through the flag, so sweeps
// can surface how often the estimate degenerated.
struct HllcResult {
    FluxVec flux;
    bool fallback = false;
};
HllcResult hllc_flux(const ConservedState& u_l, const ConservedState& u_r, double g);

// ============================================================================
// Interface source and bed-jump corrections
// ============================================================================

// Numeric weight of a GammaChoice for a given bed jump: sign(jump) or 0.
double gamma_value(GammaChoice gamma, double bed_jump);

// Effective interface water column \check h: the gamma-weighted average of the
// two free-surface levels minus the mean bed,
//   {h + b} - gamma/2 * [h + b] - {b}.
// With gamma = sign([b]) this is the lower-side column above the mean bed;
// with gamma = 0 it is the plain height average.
double check_h_gamma(double h_l, double h_r, double b_l, double b_r, GammaChoice gamma);

// Interface source S = -(g/2) * (0, check_h)^T * [b]. The mass component is
// identically zero.
FluxVec interface_source(double h_l, double h_r, double b_l, double b_r,
                         GammaChoice gamma, double g);

// Bed-jump correction vector N for the requested scheme family. alpha1 must
// be the viscosity actually used in the mass flux at this interface (0 at the
// step for the central variants), since the correction reuses it.
//
// The hydrostatic correction requires the lower-side column to survive the
// reconstruction: h_low > |[b]|. Violations raise NumericalError ("hydrostatic
// reconstruction dried a cell"). Its momentum component is defined as 0 when
// [b] = 0; the correction enters the scheme only as M = 0.5 * N * [b], so
// that limit is exact.
FluxVec n_hat(BedCorrection correction, const ConservedState& u_l, const ConservedState& u_r,
              double b_l, double b_r, double g, double alpha1);

}  // namespace stepflow
