#include "stepflow/exact.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "stepflow/errors.hpp"

namespace stepflow {

namespace {

double velocity(const ConservedState& u) { return u.m / u.h; }

double celerity(const ConservedState& u, double g) { return std::sqrt(g * u.h); }

// Momentum flux m^2/h + g h^2/2 for fixed momentum m.
double momentum_flux(double h, double m, double g) { return m * m / h + 0.5 * g * h * h; }

// Family invariant u + 2c (family one) or u - 2c (family two).
double fan_invariant(const ConservedState& u, WaveFamily family, double g) {
    const double c = celerity(u, g);
    return family == WaveFamily::one ? velocity(u) + 2.0 * c : velocity(u) - 2.0 * c;
}

double fan_edge_speed(const ConservedState& u, WaveFamily family, double g) {
    const double c = celerity(u, g);
    return family == WaveFamily::one ? velocity(u) - c : velocity(u) + c;
}

// ----------------------------------------------------------------------------
// Scalar root refinement: bisection into a 1e-6 bracket, then Newton with a
// numerical derivative, safeguarded to stay inside the bracket. The callable
// may report an invalid sample via nullopt (used by the outer residual whose
// evaluation itself involves a conditional root solve).
// ----------------------------------------------------------------------------

template <typename F>
std::optional<double> refine_root(const F& f, double a, double b, double fa, double fb) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa < 0.0) == (fb < 0.0)) return std::nullopt;

    // Probes an interior split point, retrying off-center if the callable
    // reports the midpoint invalid. Evaluation holes are rare and thin.
    auto probe = [&f](double lo, double hi) -> std::optional<std::pair<double, double>> {
        for (double frac : {0.5, 0.25, 0.75, 0.4, 0.6}) {
            const double x = lo + frac * (hi - lo);
            if (auto v = f(x); v && std::isfinite(*v)) return std::make_pair(x, *v);
        }
        return std::nullopt;
    };

    const bool a_better = std::abs(fa) < std::abs(fb);
    double best_x = a_better ? a : b;
    double best_f = a_better ? fa : fb;
    auto shrink = [&](double x, double fx) {
        if ((fx < 0.0) == (fa < 0.0)) {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        if (std::abs(fx) < std::abs(best_f)) {
            best_f = fx;
            best_x = x;
        }
    };

    while (b - a > 1e-6) {
        const auto mid = probe(a, b);
        if (!mid) return std::nullopt;
        if (mid->second == 0.0) return mid->first;
        shrink(mid->first, mid->second);
    }

    // Newton polish from the best iterate so far, safeguarded to stay inside.
    for (int it = 0; it < 40 && std::abs(best_f) > 1e-14; ++it) {
        const double x = best_x;
        const double h = 1e-8 * std::max(1.0, std::abs(x));
        const auto fp = f(x + h);
        const auto fm = f(x - h);
        double x_next = 0.5 * (a + b);
        if (fp && fm && *fp != *fm) {
            const double slope = (*fp - *fm) / (2.0 * h);
            const double candidate = x - best_f / slope;
            if (candidate > a && candidate < b) x_next = candidate;
        }
        const auto f_next = f(x_next);
        if (!f_next || !std::isfinite(*f_next)) break;
        if (*f_next == 0.0) return x_next;
        shrink(x_next, *f_next);
        if (b - a < 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
            break;
        }
    }
    return best_x;
}

// ----------------------------------------------------------------------------
// Step-transition root structure. The momentum jump condition with fixed
// momentum m is scalar in the unknown side height; it is strictly convex on
// h > 0, so at most two positive roots exist, classified by Froude regime.
// ----------------------------------------------------------------------------

struct StepRoots {
    std::vector<double> sub;
    std::vector<double> super;
};

// Walks from a valid abscissa toward an invalid one by bisection until the
// valid side hugs the edge of the evaluation hole, and returns that boundary
// sample. The residual can vary sharply there (the same square-root geometry
// that closes the hole), so the edge sample is what makes brackets against
// the neighboring coarse sample reliable.
template <typename F>
std::optional<std::pair<double, double>> hole_edge_sample(const F& f, double valid_x,
                                                          double valid_f, double hole_x) {
    double vx = valid_x;
    double vf = valid_f;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (vx + hole_x);
        if (mid == vx || mid == hole_x) break;
        if (const auto fm = f(mid); fm && std::isfinite(*fm)) {
            vx = mid;
            vf = *fm;
        } else {
            hole_x = mid;
        }
    }
    if (vx == valid_x) return std::nullopt;
    return std::make_pair(vx, vf);
}

template <typename F>
std::vector<double> scan_positive_roots(const F& f, double h_ref) {
    constexpr int kSamples = 600;
    const double lo = 1e-6 * h_ref;
    const double hi = 1e3 * h_ref;
    const double ratio = std::log(hi / lo) / (kSamples - 1);

    std::vector<double> roots;
    auto take_bracket = [&f, &roots](double a, double b, double fa, double fb) {
        if (fa == 0.0) {
            roots.push_back(a);
        } else if (fb == 0.0) {
            roots.push_back(b);
        } else if ((fa < 0.0) != (fb < 0.0)) {
            if (auto r = refine_root(f, a, b, fa, fb)) roots.push_back(*r);
        }
    };

    double prev_x = 0.0;
    std::optional<double> prev_f;
    bool have_prev = false;
    for (int i = 0; i < kSamples; ++i) {
        const double x = lo * std::exp(ratio * i);
        auto fx = f(x);
        if (fx && !std::isfinite(*fx)) fx.reset();
        if (have_prev) {
            if (prev_f && fx) {
                take_bracket(prev_x, x, *prev_f, *fx);
            } else if (prev_f && !fx) {
                // The function ceased to evaluate: bracket against the edge.
                if (auto edge = hole_edge_sample(f, prev_x, *prev_f, x)) {
                    take_bracket(prev_x, edge->first, *prev_f, edge->second);
                }
            } else if (!prev_f && fx) {
                if (auto edge = hole_edge_sample(f, x, *fx, prev_x)) {
                    take_bracket(edge->first, x, edge->second, *fx);
                }
            }
        }
        prev_x = x;
        prev_f = fx;
        have_prev = true;
    }
    // Deduplicate near-identical refinements from adjacent brackets.
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) {
                                return std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(b));
                            }),
                roots.end());
    return roots;
}

StepRoots step_roots(double m, double h_known, bool known_is_left, double b_l, double b_r,
                     GammaChoice gamma, double g) {
    const double db = b_r - b_l;
    const double pi_known = momentum_flux(h_known, m, g);
    auto residual = [&](double eta) -> std::optional<double> {
        if (!(eta > 0.0)) return std::nullopt;
        const double h_l = known_is_left ? h_known : eta;
        const double h_r = known_is_left ? eta : h_known;
        const double check_h = check_h_gamma(h_l, h_r, b_l, b_r, gamma);
        const double pi_eta = momentum_flux(eta, m, g);
        // [pi] + g * check_h * [b] with [.] = right minus left.
        const double jump = known_is_left ? pi_eta - pi_known : pi_known - pi_eta;
        return jump + g * check_h * db;
    };

    const double h_ref = std::max(h_known, std::abs(db));
    StepRoots out;
    for (double r : scan_positive_roots(residual, h_ref)) {
        const auto res = residual(r);
        if (!res || std::abs(*res) > 1e-11) continue;
        const double fr = (m / r) / std::sqrt(g * r);
        (std::abs(fr) < 1.0 ? out.sub : out.super).push_back(r);
    }
    return out;
}

ConservedState pick_branch_root(const StepRoots& roots, double m, StepBranch branch,
                                const char* direction) {
    const std::vector<double>& want =
        branch == StepBranch::subcritical ? roots.sub : roots.super;
    const char* regime = branch == StepBranch::subcritical ? "subcritical" : "supercritical";
    if (want.empty()) {
        std::ostringstream msg;
        msg << "no step transition in branch: no " << regime << " height solves the "
            << direction << " jump conditions";
        throw NumericalError(msg.str());
    }
    if (want.size() > 1) {
        std::ostringstream msg;
        msg << "ambiguous step transition: " << want.size() << " " << regime
            << " heights solve the " << direction << " jump conditions";
        throw NumericalError(msg.str());
    }
    return ConservedState{want.front(), m};
}

// ----------------------------------------------------------------------------
// Wave assembly
// ----------------------------------------------------------------------------

// Builds the nonlinear wave between adjacent states; u_a is left of the wave.
// The wave character follows from the height ordering: the middle state sits
// right of a family-one wave and left of a family-two wave.
WaveDescriptor make_nonlinear_wave(const ConservedState& u_a, const ConservedState& u_b,
                                   WaveFamily family, double g) {
    WaveDescriptor w;
    w.family = family;
    const bool shock = family == WaveFamily::one ? u_b.h > u_a.h : u_a.h > u_b.h;
    if (shock) {
        w.kind = WaveDescriptor::Kind::shock;
        const double s = (u_b.m - u_a.m) / (u_b.h - u_a.h);
        w.left_speed = s;
        w.right_speed = s;
    } else {
        w.kind = WaveDescriptor::Kind::fan;
        w.left_speed = fan_edge_speed(u_a, family, g);
        w.right_speed = fan_edge_speed(u_b, family, g);
    }
    return w;
}

WaveDescriptor make_step_wave() {
    WaveDescriptor w;
    w.kind = WaveDescriptor::Kind::step;
    w.left_speed = 0.0;
    w.right_speed = 0.0;
    return w;
}

void require_wave_kind(const WaveDescriptor& w, WavePatternHint::Kind hint, const char* label) {
    if (hint == WavePatternHint::Kind::automatic) return;
    const bool want_shock = hint == WavePatternHint::Kind::shock;
    const bool is_shock = w.kind == WaveDescriptor::Kind::shock;
    if (want_shock != is_shock) {
        std::ostringstream msg;
        msg << "inadmissible pattern: the " << label << " wave is a "
            << (is_shock ? "shock" : "rarefaction") << " but the hint requested a "
            << (want_shock ? "shock" : "rarefaction");
        throw NumericalError(msg.str());
    }
}

ConservedState prim_to_cons(const PrimitiveState& w, double g) { return from_primitive(w, g); }

}  // namespace

// ============================================================================
// ReferenceSolution helpers
// ============================================================================

int ReferenceSolution::step_wave_index() const {
    for (size_t i = 0; i < waves.size(); ++i) {
        if (waves[i].kind == WaveDescriptor::Kind::step) return static_cast<int>(i);
    }
    return -1;
}

const ConservedState& ReferenceSolution::left_of_step() const {
    const int i = step_wave_index();
    if (i < 0) throw std::logic_error("solution has no step wave");
    return states[static_cast<size_t>(i)];
}

const ConservedState& ReferenceSolution::right_of_step() const {
    const int i = step_wave_index();
    if (i < 0) throw std::logic_error("solution has no step wave");
    return states[static_cast<size_t>(i) + 1];
}

// ============================================================================
// Wave relations
// ============================================================================

double wave_curve(double h_star, WaveFamily family, const ConservedState& u_k, double g) {
    if (!(h_star > 0.0) || !(u_k.h > 0.0)) {
        throw std::domain_error("wave_curve needs positive heights");
    }
    const double u = velocity(u_k);
    const double sign = family == WaveFamily::one ? -1.0 : 1.0;
    if (h_star > u_k.h) {
        // Hugoniot locus.
        const double slope = std::sqrt(0.5 * g * (h_star + u_k.h) / (h_star * u_k.h));
        return u + sign * (h_star - u_k.h) * slope;
    }
    // Rarefaction integral curve.
    return u - sign * 2.0 * (std::sqrt(g * u_k.h) - std::sqrt(g * h_star));
}

ConservedState step_transition(const ConservedState& u_minus, double b_l, double b_r,
                               GammaChoice gamma, double g, StepBranch branch) {
    if (!(u_minus.h > 0.0)) throw std::domain_error("step_transition needs h > 0");
    if (b_r - b_l == 0.0) return u_minus;
    const StepRoots roots = step_roots(u_minus.m, u_minus.h, true, b_l, b_r, gamma, g);
    return pick_branch_root(roots, u_minus.m, branch, "left-to-right");
}

ConservedState step_transition_left(const ConservedState& u_plus, double b_l, double b_r,
                                    GammaChoice gamma, double g, StepBranch branch) {
    if (!(u_plus.h > 0.0)) throw std::domain_error("step_transition_left needs h > 0");
    if (b_r - b_l == 0.0) return u_plus;
    const StepRoots roots = step_roots(u_plus.m, u_plus.h, false, b_l, b_r, gamma, g);
    return pick_branch_root(roots, u_plus.m, branch, "right-to-left");
}

StepResiduals grh_residual(const ConservedState& u_minus, const ConservedState& u_plus,
                           double b_l, double b_r, GammaChoice gamma, double g) {
    const double check_h = check_h_gamma(u_minus.h, u_plus.h, b_l, b_r, gamma);
    return StepResiduals{
        u_plus.m - u_minus.m,
        momentum_flux(u_plus.h, u_plus.m, g) - momentum_flux(u_minus.h, u_minus.m, g) +
            g * check_h * (b_r - b_l)};
}

StepResiduals riemann_invariant_residual(const ConservedState& u_minus,
                                         const ConservedState& u_plus, double b_l, double b_r,
                                         double g) {
    const double ul = velocity(u_minus);
    const double ur = velocity(u_plus);
    return StepResiduals{u_plus.m - u_minus.m,
                         (0.5 * ur * ur + g * (u_plus.h + b_r)) -
                             (0.5 * ul * ul + g * (u_minus.h + b_l))};
}

// ============================================================================
// Pattern hints
// ============================================================================

WavePatternHint WavePatternHint::parse(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        if (c == '-') {
            tokens.push_back(current);
            current.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            current.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        }
    }
    tokens.push_back(current);

    auto fail = [&text]() -> WavePatternHint {
        throw std::invalid_argument("unrecognized wave pattern '" + std::string(text) +
                                   "'; expected forms like 1R-0-2S, 1W-0-2W, 1S-2S-0");
    };
    if (tokens.size() != 3) return fail();

    auto parse_kind = [&](const std::string& tok, char family) -> Kind {
        if (tok.size() != 2 || tok[0] != family) fail();
        switch (tok[1]) {
            case 'R': return Kind::rarefaction;
            case 'S': return Kind::shock;
            case 'W': return Kind::automatic;
            default: fail();
        }
        return Kind::automatic;
    };

    WavePatternHint hint;
    if (tokens[1] == "0") {
        hint.layout = Layout::subcritical;
        hint.first = parse_kind(tokens[0], '1');
        hint.second = parse_kind(tokens[2], '2');
    } else if (tokens[2] == "0") {
        hint.layout = Layout::negative_supercritical;
        hint.first = parse_kind(tokens[0], '1');
        hint.second = parse_kind(tokens[1], '2');
    } else {
        fail();
    }
    return hint;
}

// ============================================================================
// Solvers
// ============================================================================

ReferenceSolution solve_riemann_flat(const PrimitiveState& w_l, const PrimitiveState& w_r,
                                     double bed_level, double g) {
    const ConservedState u_l = prim_to_cons(w_l, g);
    const ConservedState u_r = prim_to_cons(w_r, g);

    ReferenceSolution sol;
    sol.b_left = bed_level;
    sol.b_right = bed_level;
    sol.g = g;

    if (w_l.h == w_r.h && w_l.fr == w_r.fr) {
        sol.states = {u_l};
        return sol;
    }

    // Middle height from equality of the two wave-curve velocities. The
    // residual is strictly decreasing in h, so a single bracket suffices.
    auto resid = [&](double h) -> std::optional<double> {
        if (!(h > 0.0)) return std::nullopt;
        return wave_curve(h, WaveFamily::one, u_l, g) - wave_curve(h, WaveFamily::two, u_r, g);
    };

    const double h_ref = std::max(u_l.h, u_r.h);
    double lo = 1e-12 * h_ref;
    if (*resid(lo) <= 0.0) {
        throw NumericalError(
            "pattern infeasible: the data expand toward a dry state, which is out of scope");
    }
    double hi = 4.0 * h_ref;
    while (*resid(hi) > 0.0) {
        hi *= 2.0;
        if (hi > 1e8 * h_ref) {
            throw NumericalError("pattern infeasible: no middle height balances the wave curves");
        }
    }
    const auto root = refine_root(resid, lo, hi, *resid(lo), *resid(hi));
    if (!root) {
        throw NumericalError("pattern infeasible: middle-height refinement failed");
    }
    const double h_m = *root;
    const double u_m = wave_curve(h_m, WaveFamily::one, u_l, g);
    const ConservedState mid{h_m, h_m * u_m};

    sol.states = {u_l, mid, u_r};
    sol.waves = {make_nonlinear_wave(u_l, mid, WaveFamily::one, g),
                 make_nonlinear_wave(mid, u_r, WaveFamily::two, g)};
    if (sol.waves[0].right_speed > sol.waves[1].left_speed + 1e-12) {
        throw NumericalError("inadmissible pattern: flat-bed wave speeds fail to order");
    }
    return sol;
}

ReferenceSolution solve_riemann_grh(const PrimitiveState& w_l, const PrimitiveState& w_r,
                                    double b_l, double b_r, GammaChoice gamma, double g,
                                    const WavePatternHint& pattern) {
    if (b_l == b_r) {
        ReferenceSolution sol = solve_riemann_flat(w_l, w_r, b_l, g);
        if (sol.waves.size() == 2) {
            require_wave_kind(sol.waves[0], pattern.first, "family-one");
            require_wave_kind(sol.waves[1], pattern.second, "family-two");
        }
        return sol;
    }

    const ConservedState u_l = prim_to_cons(w_l, g);
    const ConservedState u_r = prim_to_cons(w_r, g);

    ReferenceSolution sol;
    sol.b_left = b_l;
    sol.b_right = b_r;
    sol.g = g;

    if (pattern.layout == WavePatternHint::Layout::subcritical) {
        // Unknown: the height immediately left of the step. The family-one
        // curve from the left datum supplies its velocity; the step transition
        // carries it across; the residual is the velocity mismatch against the
        // family-two curve from the right datum.
        auto resid = [&](double eta) -> std::optional<double> {
            if (!(eta > 0.0)) return std::nullopt;
            const double u_mid = wave_curve(eta, WaveFamily::one, u_l, g);
            const double m = eta * u_mid;
            const StepRoots roots = step_roots(m, eta, true, b_l, b_r, gamma, g);
            if (roots.sub.size() != 1) return std::nullopt;
            const double h_plus = roots.sub.front();
            return m / h_plus - wave_curve(h_plus, WaveFamily::two, u_r, g);
        };

        const double h_ref = std::max(u_l.h, u_r.h);
        const std::vector<double> etas = scan_positive_roots(resid, h_ref);
        if (etas.empty()) {
            throw NumericalError(
                "pattern infeasible: no height left of the step closes the wave system "
                "(transonic data are outside this solver's scope)");
        }

        std::string last_failure;
        for (double eta : etas) {
            const double u_mid = wave_curve(eta, WaveFamily::one, u_l, g);
            const ConservedState minus{eta, eta * u_mid};
            try {
                const ConservedState plus =
                    step_transition(minus, b_l, b_r, gamma, g, StepBranch::subcritical);
                ReferenceSolution candidate = sol;
                candidate.states = {u_l, minus, plus, u_r};
                candidate.waves = {make_nonlinear_wave(u_l, minus, WaveFamily::one, g),
                                   make_step_wave(),
                                   make_nonlinear_wave(plus, u_r, WaveFamily::two, g)};
                if (!(candidate.waves[0].right_speed < 0.0)) {
                    throw NumericalError(
                        "inadmissible pattern: the family-one wave reaches x >= 0");
                }
                if (!(candidate.waves[2].left_speed > 0.0)) {
                    throw NumericalError(
                        "inadmissible pattern: the family-two wave reaches x <= 0");
                }
                require_wave_kind(candidate.waves[0], pattern.first, "family-one");
                require_wave_kind(candidate.waves[2], pattern.second, "family-two");
                return candidate;
            } catch (const NumericalError& e) {
                last_failure = e.what();
            }
        }
        throw NumericalError(last_failure.empty() ? "pattern infeasible" : last_failure);
    }

    // Negative supercritical: both nonlinear waves left of the step. The step
    // transition is solved right to left from the right datum, then the flat
    // two-wave problem connects the left datum to that state.
    const ConservedState just_left =
        step_transition_left(u_r, b_l, b_r, gamma, g, StepBranch::supercritical);
    const PrimitiveState w_just_left{just_left.h,
                                     velocity(just_left) / std::sqrt(g * just_left.h)};
    ReferenceSolution inner = solve_riemann_flat(w_l, w_just_left, b_l, g);
    if (inner.waves.size() != 2) {
        throw NumericalError("inadmissible pattern: degenerate flat solve left of the step");
    }

    sol.states = {inner.states[0], inner.states[1], just_left, u_r};
    sol.waves = {inner.waves[0], inner.waves[1], make_step_wave()};
    if (!(sol.waves[1].right_speed < 0.0)) {
        throw NumericalError(
            "inadmissible pattern: the family-two wave reaches the step from the left");
    }
    require_wave_kind(sol.waves[0], pattern.first, "family-one");
    require_wave_kind(sol.waves[1], pattern.second, "family-two");
    return sol;
}

// ============================================================================
// Tabulated chains
// ============================================================================

ReferenceSolution build_reference_from_states(const std::vector<PrimitiveState>& chain,
                                              const std::vector<ConnectorKind>& connectors,
                                              double b_l, double b_r, double g) {
    if (chain.size() < 2 || connectors.size() + 1 != chain.size()) {
        throw std::invalid_argument(
            "state chain and connector list sizes do not line up (need one connector "
            "between each pair of states)");
    }

    ReferenceSolution sol;
    sol.b_left = b_l;
    sol.b_right = b_r;
    sol.g = g;
    for (const auto& w : chain) {
        sol.states.push_back(prim_to_cons(w, g));
    }

    auto fail = [](size_t k, const std::string& why) {
        std::ostringstream msg;
        msg << "connector " << k << " (between states " << k << " and " << k + 1
            << ") rejected: " << why;
        throw ValidationError(msg.str());
    };

    for (size_t k = 0; k < connectors.size(); ++k) {
        const ConservedState& a = sol.states[k];
        const ConservedState& b = sol.states[k + 1];
        switch (connectors[k]) {
            case ConnectorKind::shock1:
            case ConnectorKind::shock2: {
                const WaveFamily fam =
                    connectors[k] == ConnectorKind::shock1 ? WaveFamily::one : WaveFamily::two;
                if (a.h == b.h) {
                    fail(k, "zero height jump across a claimed shock");
                }
                const double s = (b.m - a.m) / (b.h - a.h);
                const double dpi = momentum_flux(b.h, b.m, g) - momentum_flux(a.h, a.m, g);
                const double res = std::abs(s * (b.m - a.m) - dpi);
                if (res > 1e-2 * std::max(1.0, std::abs(dpi))) {
                    std::ostringstream why;
                    why << "momentum jump relation residual " << res;
                    fail(k, why.str());
                }
                WaveDescriptor w;
                w.kind = WaveDescriptor::Kind::shock;
                w.family = fam;
                w.left_speed = s;
                w.right_speed = s;
                sol.waves.push_back(w);
                break;
            }
            case ConnectorKind::fan1:
            case ConnectorKind::fan2: {
                const WaveFamily fam =
                    connectors[k] == ConnectorKind::fan1 ? WaveFamily::one : WaveFamily::two;
                const double ia = fan_invariant(a, fam, g);
                const double ib = fan_invariant(b, fam, g);
                if (std::abs(ia - ib) > 1e-3 * std::max(1.0, std::abs(ia))) {
                    std::ostringstream why;
                    why << "family invariant differs across the fan by " << std::abs(ia - ib);
                    fail(k, why.str());
                }
                WaveDescriptor w;
                w.kind = WaveDescriptor::Kind::fan;
                w.family = fam;
                w.left_speed = fan_edge_speed(a, fam, g);
                w.right_speed = fan_edge_speed(b, fam, g);
                if (w.left_speed > w.right_speed + 1e-9) {
                    fail(k, "fan edge speeds are not ordered");
                }
                sol.waves.push_back(w);
                break;
            }
            case ConnectorKind::step: {
                const StepResiduals res = grh_residual(a, b, b_l, b_r,
                                                       GammaChoice::sign_of_jump, g);
                if (std::abs(res.mass) > 1e-2 || std::abs(res.momentum) > 1e-2) {
                    std::ostringstream why;
                    why << "step jump residuals (" << res.mass << ", " << res.momentum
                        << ") exceed the transcription tolerance";
                    fail(k, why.str());
                }
                sol.waves.push_back(make_step_wave());
                break;
            }
        }
    }

    for (size_t k = 0; k + 1 < sol.waves.size(); ++k) {
        if (sol.waves[k].right_speed > sol.waves[k + 1].left_speed + 1e-6) {
            std::ostringstream msg;
            msg << "connector " << k << " rejected: wave speeds out of order ("
                << sol.waves[k].right_speed << " ahead of " << sol.waves[k + 1].left_speed
                << ")";
            throw ValidationError(msg.str());
        }
    }
    return sol;
}

// ============================================================================
// Evaluation
// ============================================================================

ConservedState evaluate_reference(const ReferenceSolution& sol, double x, double t) {
    if (sol.states.empty()) {
        throw std::invalid_argument("cannot evaluate an empty solution");
    }
    if (!(t >= 0.0)) {
        throw std::invalid_argument("evaluate_reference needs t >= 0");
    }
    if (sol.waves.empty()) {
        return sol.states.front();
    }
    if (t == 0.0) {
        return x < 0.0 ? sol.states.front() : sol.states.back();
    }

    const double xi = x / t;
    for (size_t i = 0; i < sol.waves.size(); ++i) {
        const WaveDescriptor& w = sol.waves[i];
        if (w.kind == WaveDescriptor::Kind::step) {
            // The stationary wave separates by position, not by ray.
            if (x < 0.0) return sol.states[i];
            continue;
        }
        if (xi < w.left_speed) {
            return sol.states[i];
        }
        if (w.kind == WaveDescriptor::Kind::fan && xi < w.right_speed) {
            // Interior profile from the family invariant of the outer state.
            const ConservedState& anchor =
                w.family == WaveFamily::one ? sol.states[i] : sol.states[i + 1];
            const double inv = fan_invariant(anchor, w.family, sol.g);
            double u, c;
            if (w.family == WaveFamily::one) {
                u = (inv + 2.0 * xi) / 3.0;
                c = (inv - xi) / 3.0;
            } else {
                u = (inv + 2.0 * xi) / 3.0;
                c = (xi - inv) / 3.0;
            }
            const double h = c * c / sol.g;
            return ConservedState{h, h * u};
        }
    }
    return sol.states.back();
}

}  // namespace stepflow
