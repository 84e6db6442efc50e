#include "stepflow/fluxes.hpp"

#include <cmath>
#include <sstream>

#include "stepflow/errors.hpp"

namespace stepflow {

FluxVec physical_flux(const ConservedState& u, double g) {
    if (!(u.h > 0.0)) {
        throw std::domain_error("physical_flux needs h > 0");
    }
    return FluxVec{u.m, u.m * u.m / u.h + 0.5 * g * u.h * u.h};
}

double lxf_alpha(const ConservedState& u_l, const ConservedState& u_r, double g) {
    return std::max(char_speed(u_l, g), char_speed(u_r, g));
}

FluxVec lxf_flux(const ConservedState& u_l, const ConservedState& u_r,
                 const ViscosityMatrix& a, double g) {
    const FluxVec f_l = physical_flux(u_l, g);
    const FluxVec f_r = physical_flux(u_r, g);
    return FluxVec{0.5 * (f_l.mass + f_r.mass) - 0.5 * a.alpha1 * (u_r.h - u_l.h),
                   0.5 * (f_l.mom + f_r.mom) - 0.5 * a.alpha2 * (u_r.m - u_l.m)};
}

HllcResult hllc_flux(const ConservedState& u_l, const ConservedState& u_r, double g) {
    const double ul = u_l.m / u_l.h;
    const double ur = u_r.m / u_r.h;
    const double cl = std::sqrt(g * u_l.h);
    const double cr = std::sqrt(g * u_r.h);

    // Two-rarefaction estimate of the star region.
    const double c_star = 0.5 * (cl + cr) - 0.25 * (ur - ul);
    const double u_star = 0.5 * (ul + ur) + cl - cr;

    const double s_l = std::min(ul - cl, u_star - c_star);
    const double s_r = std::max(ur + cr, u_star + c_star);

    if (!(s_l < s_r) || !std::isfinite(s_l) || !std::isfinite(s_r)) {
        return HllcResult{lxf_flux(u_l, u_r, ViscosityMatrix{lxf_alpha(u_l, u_r, g),
                                                             lxf_alpha(u_l, u_r, g)},
                                   g),
                          true};
    }

    if (s_l >= 0.0) {
        return HllcResult{physical_flux(u_l, g), false};
    }
    if (s_r <= 0.0) {
        return HllcResult{physical_flux(u_r, g), false};
    }

    // Contact speed (Toro). The denominator is strictly negative whenever the
    // outer speeds straddle zero, so no division guard is needed.
    const double num = s_l * u_r.h * (ur - s_r) - s_r * u_l.h * (ul - s_l);
    const double den = u_r.h * (ur - s_r) - u_l.h * (ul - s_l);
    const double s_m = num / den;

    if (s_m >= 0.0) {
        const double h_star = u_l.h * (s_l - ul) / (s_l - s_m);
        const FluxVec f_l = physical_flux(u_l, g);
        return HllcResult{FluxVec{f_l.mass + s_l * (h_star - u_l.h),
                                  f_l.mom + s_l * (h_star * s_m - u_l.m)},
                          false};
    }
    const double h_star = u_r.h * (s_r - ur) / (s_r - s_m);
    const FluxVec f_r = physical_flux(u_r, g);
    return HllcResult{FluxVec{f_r.mass + s_r * (h_star - u_r.h),
                              f_r.mom + s_r * (h_star * s_m - u_r.m)},
                      false};
}

double gamma_value(GammaChoice gamma, double bed_jump) {
    if (gamma == GammaChoice::zero || bed_jump == 0.0) {
        return 0.0;
    }
    return bed_jump > 0.0 ? 1.0 : -1.0;
}

double check_h_gamma(double h_l, double h_r, double b_l, double b_r, GammaChoice gamma) {
    if (!(h_l > 0.0) || !(h_r > 0.0)) {
        throw std::domain_error("check_h_gamma needs positive heights");
    }
    const double w_l = h_l + b_l;
    const double w_r = h_r + b_r;
    const double gam = gamma_value(gamma, b_r - b_l);
    return 0.5 * (w_l + w_r) - 0.5 * gam * (w_r - w_l) - 0.5 * (b_l + b_r);
}

FluxVec interface_source(double h_l, double h_r, double b_l, double b_r,
                         GammaChoice gamma, double g) {
    const double check_h = check_h_gamma(h_l, h_r, b_l, b_r, gamma);
    return FluxVec{0.0, -0.5 * g * check_h * (b_r - b_l)};
}

FluxVec n_hat(BedCorrection correction, const ConservedState& u_l, const ConservedState& u_r,
              double b_l, double b_r, double g, double alpha1) {
    switch (correction) {
        case BedCorrection::none:
            return FluxVec{0.0, 0.0};
        case BedCorrection::mass_viscosity:
            return FluxVec{alpha1, 0.0};
        case BedCorrection::free_surface:
            return FluxVec{alpha1, 0.5 * g * ((u_r.h + b_r) - (u_l.h + b_l))};
        case BedCorrection::hydrostatic:
            break;
    }

    const double db = b_r - b_l;
    if (db == 0.0) {
        return FluxVec{alpha1, 0.0};
    }
    // The correction selects the lower-side cell; its reconstructed height is
    // h_low - |[b]| and must stay positive for the scheme to be defined.
    const ConservedState& low = db > 0.0 ? u_l : u_r;
    const double abs_db = std::abs(db);
    if (!(low.h > abs_db)) {
        std::ostringstream msg;
        msg << "hydrostatic reconstruction dried a cell: lower-side h = " << low.h
            << " does not cover the bed jump |" << db << "|";
        throw NumericalError(msg.str());
    }
    const double sgn = db > 0.0 ? 1.0 : -1.0;
    const double mom = (low.m * low.m / low.h) * sgn / (abs_db - low.h);
    return FluxVec{alpha1, mom};
}

}  // namespace stepflow
