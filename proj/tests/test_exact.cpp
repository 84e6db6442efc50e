#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "stepflow/errors.hpp"
#include "stepflow/exact.hpp"
#include "stepflow/types.hpp"

using namespace stepflow;

namespace {

constexpr double kG = 9.81;

double u_of(const ConservedState& s) { return s.m / s.h; }
double c_of(const ConservedState& s) { return std::sqrt(kG * s.h); }
double fr_of(const ConservedState& s) { return u_of(s) / c_of(s); }
double pi_of(const ConservedState& s) { return s.m * s.m / s.h + 0.5 * kG * s.h * s.h; }

// Residual and structure sanity for a solver-produced solution.
void check_solution_quality(const ReferenceSolution& sol) {
    for (size_t i = 0; i < sol.waves.size(); ++i) {
        const WaveDescriptor& w = sol.waves[i];
        const ConservedState& a = sol.states[i];
        const ConservedState& b = sol.states[i + 1];
        switch (w.kind) {
            case WaveDescriptor::Kind::shock: {
                const double s = (b.m - a.m) / (b.h - a.h);
                CHECK(w.left_speed == w.right_speed);
                CHECK(w.left_speed == doctest::Approx(s).epsilon(1e-12));
                CHECK(std::abs(s * (b.m - a.m) - (pi_of(b) - pi_of(a))) <= 1e-10);
                break;
            }
            case WaveDescriptor::Kind::fan: {
                const double sign = w.family == WaveFamily::one ? 1.0 : -1.0;
                const double ia = u_of(a) + sign * 2.0 * c_of(a);
                const double ib = u_of(b) + sign * 2.0 * c_of(b);
                CHECK(std::abs(ia - ib) <= 1e-10);
                CHECK(w.left_speed <= w.right_speed + 1e-12);
                break;
            }
            case WaveDescriptor::Kind::step: {
                const StepResiduals res = grh_residual(a, b, sol.b_left, sol.b_right,
                                                       GammaChoice::sign_of_jump, kG);
                CHECK(std::abs(res.mass) <= 1e-10);
                CHECK(std::abs(res.momentum) <= 1e-10);
                break;
            }
        }
    }
    for (size_t i = 0; i + 1 < sol.waves.size(); ++i) {
        CHECK(sol.waves[i].right_speed <= sol.waves[i + 1].left_speed + 1e-9);
    }
}

void check_state(const ConservedState& got, double h_expect, double fr_expect) {
    CHECK(std::abs(got.h - h_expect) <= 1e-4);
    CHECK(std::abs(fr_of(got) - fr_expect) <= 1e-4);
}

}  // namespace

TEST_CASE("wave curves reduce to the datum at equal height") {
    const ConservedState u{0.8, 0.3};
    CHECK(wave_curve(0.8, WaveFamily::one, u, kG) == doctest::Approx(u_of(u)).epsilon(1e-15));
    CHECK(wave_curve(0.8, WaveFamily::two, u, kG) == doctest::Approx(u_of(u)).epsilon(1e-15));
}

TEST_CASE("wave curve branches and mirror symmetry") {
    const ConservedState u{1.0, 0.5};
    // Family one loses velocity with depth on the shock branch and gains it
    // toward smaller depth on the rarefaction branch.
    CHECK(wave_curve(1.5, WaveFamily::one, u, kG) < u_of(u));
    CHECK(wave_curve(0.5, WaveFamily::one, u, kG) > u_of(u));  // u + 2(c_K - c*)
    CHECK(wave_curve(1.5, WaveFamily::two, u, kG) > u_of(u));

    // Rarefaction side keeps the family invariant.
    const double u_star = wave_curve(0.6, WaveFamily::one, u, kG);
    CHECK(u_star + 2.0 * std::sqrt(kG * 0.6) ==
          doctest::Approx(u_of(u) + 2.0 * c_of(u)).epsilon(1e-13));

    // Reflection: negating the flow swaps the families.
    const ConservedState mirrored{1.0, -0.5};
    for (double h : {0.3, 0.9, 1.7, 3.0}) {
        CHECK(wave_curve(h, WaveFamily::two, mirrored, kG) ==
              doctest::Approx(-wave_curve(h, WaveFamily::one, u, kG)).epsilon(1e-13));
    }
}

TEST_CASE("step transition: identity, inverse, and residual") {
    const ConservedState minus{0.9458, 0.1629};

    const ConservedState same = step_transition(minus, 0.3, 0.3, GammaChoice::sign_of_jump,
                                                kG, StepBranch::subcritical);
    CHECK(same.h == minus.h);
    CHECK(same.m == minus.m);

    const ConservedState plus = step_transition(minus, 0.0, 0.7, GammaChoice::sign_of_jump,
                                                kG, StepBranch::subcritical);
    CHECK(plus.m == minus.m);
    const StepResiduals res =
        grh_residual(minus, plus, 0.0, 0.7, GammaChoice::sign_of_jump, kG);
    CHECK(std::abs(res.momentum) <= 1e-11);

    // The subcritical inverse is two-valued for this datum (a second, faster
    // left state satisfies the same jump conditions), so the library refuses
    // to pick one.
    CHECK_THROWS_WITH_AS(step_transition_left(plus, 0.0, 0.7, GammaChoice::sign_of_jump,
                                              kG, StepBranch::subcritical),
                         doctest::Contains("ambiguous step transition"), NumericalError);

    // In the supercritical regime the inverse is single-valued: carry a state
    // right-to-left over the step and then forward again.
    const double fr_r = -1.05;
    const ConservedState u_r{0.7, 0.7 * fr_r * std::sqrt(kG * 0.7)};
    const ConservedState just_left = step_transition_left(
        u_r, 0.0, 0.2, GammaChoice::sign_of_jump, kG, StepBranch::supercritical);
    CHECK(just_left.m == doctest::Approx(u_r.m).epsilon(1e-12));
    const ConservedState forward = step_transition(just_left, 0.0, 0.2,
                                                   GammaChoice::sign_of_jump, kG,
                                                   StepBranch::supercritical);
    CHECK(forward.h == doctest::Approx(u_r.h).epsilon(1e-9));
}

TEST_CASE("step transition depends on the interface weighting") {
    const ConservedState minus{0.9458, 0.1629};
    const ConservedState sign_side = step_transition(
        minus, 0.0, 0.7, GammaChoice::sign_of_jump, kG, StepBranch::subcritical);
    const ConservedState centered = step_transition(minus, 0.0, 0.7, GammaChoice::zero, kG,
                                                    StepBranch::subcritical);
    CHECK(std::abs(sign_side.h - centered.h) > 1e-3);
}

TEST_CASE("step transition refuses an infeasible or absent branch") {
    // A slow stream is choked by a step as tall as its own depth: the required
    // momentum-flux level drops below the sonic minimum and no height on the
    // far side satisfies the jump conditions in either regime.
    const ConservedState minus{0.3, 0.05};
    CHECK_THROWS_AS(step_transition(minus, 0.0, 0.3, GammaChoice::sign_of_jump, kG,
                                    StepBranch::subcritical),
                    NumericalError);
    CHECK_THROWS_WITH_AS(step_transition(minus, 0.0, 0.3, GammaChoice::sign_of_jump, kG,
                                         StepBranch::supercritical),
                         doctest::Contains("no step transition"), NumericalError);
}

TEST_CASE("wave pattern parsing") {
    const WavePatternHint sub = WavePatternHint::parse("1R-0-2S");
    CHECK(sub.layout == WavePatternHint::Layout::subcritical);
    CHECK(sub.first == WavePatternHint::Kind::rarefaction);
    CHECK(sub.second == WavePatternHint::Kind::shock);

    const WavePatternHint open = WavePatternHint::parse("1W-0-2W");
    CHECK(open.first == WavePatternHint::Kind::automatic);

    const WavePatternHint swept = WavePatternHint::parse("1S-2S-0");
    CHECK(swept.layout == WavePatternHint::Layout::negative_supercritical);
    CHECK(swept.second == WavePatternHint::Kind::shock);

    CHECK_THROWS_AS(WavePatternHint::parse("2R-0-1S"), std::invalid_argument);
    CHECK_THROWS_AS(WavePatternHint::parse("1X-0-2S"), std::invalid_argument);
    CHECK_THROWS_AS(WavePatternHint::parse("1R-2R"), std::invalid_argument);
    CHECK_THROWS_AS(WavePatternHint::parse(""), std::invalid_argument);
}

TEST_CASE("flat-bed solve: structure and mirror symmetry") {
    const ReferenceSolution sol =
        solve_riemann_flat(PrimitiveState{1.0, 0.0}, PrimitiveState{0.1, 0.0}, 0.0, kG);
    REQUIRE(sol.states.size() == 3);
    REQUIRE(sol.waves.size() == 2);
    CHECK(sol.waves[0].kind == WaveDescriptor::Kind::fan);
    CHECK(sol.waves[1].kind == WaveDescriptor::Kind::shock);
    CHECK(sol.step_wave_index() == -1);
    check_solution_quality(sol);

    const ReferenceSolution mirror =
        solve_riemann_flat(PrimitiveState{0.1, 0.0}, PrimitiveState{1.0, 0.0}, 0.0, kG);
    CHECK(mirror.states[1].h == doctest::Approx(sol.states[1].h).epsilon(1e-10));
    CHECK(u_of(mirror.states[1]) == doctest::Approx(-u_of(sol.states[1])).epsilon(1e-9));

    // Identical data collapse to a single state.
    const ReferenceSolution trivial =
        solve_riemann_flat(PrimitiveState{0.4, 0.2}, PrimitiveState{0.4, 0.2}, 0.0, kG);
    CHECK(trivial.states.size() == 1);
    CHECK(trivial.waves.empty());
}

TEST_CASE("dam break over a step matches the published chain") {
    const WavePatternHint hint = WavePatternHint::parse("1R-0-2S");
    const ReferenceSolution sol = solve_riemann_grh(
        PrimitiveState{1.0, 0.0}, PrimitiveState{0.1, 0.0}, 0.0, 0.7,
        GammaChoice::sign_of_jump, kG, hint);
    REQUIRE(sol.states.size() == 4);
    REQUIRE(sol.waves.size() == 3);
    CHECK(sol.waves[0].kind == WaveDescriptor::Kind::fan);
    CHECK(sol.waves[1].kind == WaveDescriptor::Kind::step);
    CHECK(sol.waves[2].kind == WaveDescriptor::Kind::shock);

    // Chain in (h, m): the momenta of the middle states agree and the heights
    // match the published four-decimal values.
    CHECK(std::abs(sol.states[1].h - 0.9458) <= 1e-4);
    CHECK(std::abs(sol.states[1].m - 0.1629) <= 1e-4);
    CHECK(std::abs(sol.states[2].h - 0.1964) <= 1e-4);
    CHECK(std::abs(sol.states[2].m - 0.1629) <= 1e-4);
    CHECK(sol.left_of_step().m == sol.right_of_step().m);

    check_solution_quality(sol);

    // Two-shock speed against the jump-condition value.
    CHECK(sol.waves[2].left_speed == doctest::Approx(1.6898).epsilon(1e-3));

    // Admissibility around the step.
    CHECK(sol.waves[0].right_speed < 0.0);
    CHECK(sol.waves[2].left_speed > 0.0);
}

TEST_CASE("subcritical catalog chains in height and Froude") {
    struct Case {
        const char* pattern;
        PrimitiveState left, right;
        double b_r;
        double mid[4];  // h-, fr-, h+, fr+
    };
    const std::vector<Case> cases = {
        {"1S-0-2R", {0.95, 0.55}, {0.7, 0.85}, 0.5, {1.2295, 0.24, 0.5814, 0.7381}},
        {"1R-0-2R", {1.0, 0.3}, {1.2, 0.95}, 0.2, {0.9443, 0.3669, 0.6780, 0.6031}},
        {"1S-0-2S", {0.7, 0.2}, {0.2, 0.2}, 0.5, {0.7849, 0.0774, 0.2569, 0.4133}},
        {"1S-0-2S", {0.5, 1.5}, {0.3, 0.0}, 0.2, {1.0141, 0.4295, 0.7041, 0.7424}},
    };
    for (const Case& c : cases) {
        CAPTURE(c.pattern);
        CAPTURE(c.left.h);
        const ReferenceSolution sol =
            solve_riemann_grh(c.left, c.right, 0.0, c.b_r, GammaChoice::sign_of_jump, kG,
                              WavePatternHint::parse(c.pattern));
        REQUIRE(sol.states.size() == 4);
        check_state(sol.states[1], c.mid[0], c.mid[1]);
        check_state(sol.states[2], c.mid[2], c.mid[3]);
        CHECK(sol.step_wave_index() == 1);
        CHECK(sol.left_of_step().m == sol.right_of_step().m);
        check_solution_quality(sol);
        CHECK(sol.waves[0].right_speed < 0.0);
        CHECK(sol.waves[2].left_speed > 0.0);
    }
}

TEST_CASE("negative supercritical chains in height and Froude") {
    struct Case {
        const char* pattern;
        PrimitiveState left, right;
        double mid[4];
    };
    const std::vector<Case> cases = {
        {"1S-2S-0", {0.5, -1.5}, {0.7, -1.05}, {0.5565, -1.5262, 0.5138, -1.6697}},
        {"1R-2R-0", {0.5, -2.0}, {0.7, -1.05}, {0.4325, -2.0, 0.5138, -1.6697}},
    };
    for (const Case& c : cases) {
        CAPTURE(c.pattern);
        const ReferenceSolution sol =
            solve_riemann_grh(c.left, c.right, 0.0, 0.2, GammaChoice::sign_of_jump, kG,
                              WavePatternHint::parse(c.pattern));
        REQUIRE(sol.states.size() == 4);
        check_state(sol.states[1], c.mid[0], c.mid[1]);
        check_state(sol.states[2], c.mid[2], c.mid[3]);
        CHECK(sol.step_wave_index() == 2);
        check_solution_quality(sol);
        // Every moving wave is swept to the left of the step.
        CHECK(sol.waves[0].right_speed < 0.0);
        CHECK(sol.waves[1].right_speed < 0.0);
    }
}

TEST_CASE("head mismatch across the step is structural") {
    // The stationary-wave closure conserves mass and momentum flux but not the
    // energy head, so the head residual must stay visibly nonzero.
    struct Case {
        PrimitiveState left, right;
        double b_r;
        const char* pattern;
        double head;  // expected momentum component of the head residual
    };
    const std::vector<Case> cases = {
        {{1.0, 0.0}, {0.1, 0.0}, 0.7, "1R-0-2S", -0.1555},
        {{0.95, 0.55}, {0.7, 0.85}, 0.5, "1S-0-2R", -0.2466},
        {{1.0, 0.3}, {1.2, 0.95}, 0.2, "1R-0-2R", -0.064},
        {{0.7, 0.2}, {0.2, 0.2}, 0.5, "1S-0-2S", -0.0829},
        {{0.5, 1.5}, {0.3, 0.0}, 0.2, "1S-0-2S", -0.0929},
        {{0.5, -1.5}, {0.7, -1.05}, 0.2, "1S-2S-0", 0.549},
        {{0.5, -2.0}, {0.7, -1.05}, 0.2, "1R-2R-0", 0.549},
    };
    for (const Case& c : cases) {
        CAPTURE(c.pattern);
        CAPTURE(c.left.fr);
        const ReferenceSolution sol = solve_riemann_grh(
            c.left, c.right, 0.0, c.b_r, GammaChoice::sign_of_jump, kG,
            WavePatternHint::parse(c.pattern));
        const StepResiduals res = riemann_invariant_residual(
            sol.left_of_step(), sol.right_of_step(), 0.0, c.b_r, kG);
        CHECK(res.mass == 0.0);
        CHECK(std::abs(res.momentum) > 1e-3);
        CHECK(res.momentum == doctest::Approx(c.head).epsilon(0.1));
    }
}

TEST_CASE("hint mismatch is rejected") {
    CHECK_THROWS_WITH_AS(
        solve_riemann_grh(PrimitiveState{1.0, 0.0}, PrimitiveState{0.1, 0.0}, 0.0, 0.7,
                          GammaChoice::sign_of_jump, kG, WavePatternHint::parse("1S-0-2S")),
        doctest::Contains("inadmissible"), NumericalError);
}

TEST_CASE("flat-bed data through the full solver short-circuits") {
    const ReferenceSolution sol = solve_riemann_grh(
        PrimitiveState{1.0, 0.0}, PrimitiveState{0.1, 0.0}, 0.3, 0.3,
        GammaChoice::sign_of_jump, kG, WavePatternHint::parse("1W-0-2W"));
    CHECK(sol.step_wave_index() == -1);
    CHECK(sol.states.size() == 3);
    CHECK(sol.b_left == 0.3);
    CHECK(sol.b_right == 0.3);
}

TEST_CASE("tabulated resonant chains validate and build") {
    // Rarefaction pinned to the step on its right, shocks on both flanks.
    const std::vector<PrimitiveState> chain_a = {
        {4.0, 1.1175}, {6.1431, 0.5089}, {3.9157, 1.0}, {1.9999, 2.1977},
        {1.0299, 2.2428}};
    const std::vector<ConnectorKind> conn_a = {ConnectorKind::shock1, ConnectorKind::step,
                                               ConnectorKind::fan1, ConnectorKind::shock2};
    const ReferenceSolution a = build_reference_from_states(chain_a, conn_a, 0.0, 1.0, kG);
    REQUIRE(a.waves.size() == 4);
    CHECK(a.step_wave_index() == 1);
    CHECK(a.waves[2].kind == WaveDescriptor::Kind::fan);
    // The fan hangs off the step: its head sits at speed zero (critical flow).
    CHECK(std::abs(a.waves[2].left_speed) <= 1e-12);
    CHECK(a.waves[2].right_speed > 0.0);
    CHECK(a.waves[0].left_speed < 0.0);
    CHECK(a.waves[3].left_speed > 0.0);

    // Both moving fans left of the step, the third pinned on its right.
    const std::vector<PrimitiveState> chain_b = {
        {6.0, -2.0855}, {1.9766, -2.1490}, {2.5253, -1.6707}, {3.5556, -1.0}, {8.0, 0.0}};
    const std::vector<ConnectorKind> conn_b = {ConnectorKind::fan1, ConnectorKind::fan2,
                                               ConnectorKind::step, ConnectorKind::fan2};
    const ReferenceSolution b = build_reference_from_states(chain_b, conn_b, 0.0, 1.0, kG);
    REQUIRE(b.waves.size() == 4);
    CHECK(b.step_wave_index() == 2);
    CHECK(std::abs(b.waves[3].left_speed) <= 1e-12);
    CHECK(b.waves[1].right_speed < 0.0);
}

TEST_CASE("tabulated chain validation catches transcription damage") {
    const std::vector<PrimitiveState> chain = {
        {4.0, 1.1175}, {6.1431, 0.5089}, {3.9157, 1.0}, {1.9999, 2.1977}, {1.0299, 2.2428}};
    const std::vector<ConnectorKind> conn = {ConnectorKind::shock1, ConnectorKind::step,
                                             ConnectorKind::fan1, ConnectorKind::shock2};

    auto damaged = chain;
    damaged[1].h += 0.05;
    CHECK_THROWS_WITH_AS(build_reference_from_states(damaged, conn, 0.0, 1.0, kG),
                         doctest::Contains("connector"), ValidationError);

    auto bad_step = chain;
    bad_step[2].h = 3.1;
    CHECK_THROWS_AS(build_reference_from_states(bad_step, conn, 0.0, 1.0, kG),
                    ValidationError);

    auto bad_fan = chain;
    bad_fan[3].fr += 0.08;
    CHECK_THROWS_AS(build_reference_from_states(bad_fan, conn, 0.0, 1.0, kG),
                    ValidationError);

    CHECK_THROWS_AS(
        build_reference_from_states(chain, {ConnectorKind::shock1}, 0.0, 1.0, kG),
        std::invalid_argument);
}

TEST_CASE("reference evaluation walks the wave structure") {
    const ReferenceSolution sol = solve_riemann_grh(
        PrimitiveState{1.0, 0.0}, PrimitiveState{0.1, 0.0}, 0.0, 0.7,
        GammaChoice::sign_of_jump, kG, WavePatternHint::parse("1R-0-2S"));

    // Initial data by side of the step.
    CHECK(evaluate_reference(sol, -2.0, 0.0).h == 1.0);
    CHECK(evaluate_reference(sol, 2.0, 0.0).h == 0.1);
    CHECK(evaluate_reference(sol, 0.0, 0.0).h == 0.1);

    const double t = 1.0;
    CHECK(evaluate_reference(sol, -4.9, t).h == 1.0);
    CHECK(evaluate_reference(sol, -1e-9, t).h == doctest::Approx(sol.states[1].h));
    CHECK(evaluate_reference(sol, 1e-9, t).h == doctest::Approx(sol.states[2].h));
    CHECK(evaluate_reference(sol, 4.9, t).h == 0.1);

    // Inside the fan the invariant and the ray relation pin the state.
    const ConservedState inside = evaluate_reference(sol, -3.0, t);
    CHECK(u_of(inside) + 2.0 * c_of(inside) ==
          doctest::Approx(2.0 * std::sqrt(kG)).epsilon(1e-12));
    CHECK(u_of(inside) - c_of(inside) == doctest::Approx(-3.0).epsilon(1e-12));

    // Just beyond the two-shock everything is right datum.
    const double s2 = sol.waves[2].left_speed;
    CHECK(evaluate_reference(sol, s2 * t + 1e-6, t).h == 0.1);
    CHECK(evaluate_reference(sol, s2 * t - 1e-6, t).h ==
          doctest::Approx(sol.states[2].h));
}

TEST_CASE("reference evaluation across a pinned resonant fan") {
    const std::vector<PrimitiveState> chain = {
        {4.0, 1.1175}, {6.1431, 0.5089}, {3.9157, 1.0}, {1.9999, 2.1977}, {1.0299, 2.2428}};
    const std::vector<ConnectorKind> conn = {ConnectorKind::shock1, ConnectorKind::step,
                                             ConnectorKind::fan1, ConnectorKind::shock2};
    const ReferenceSolution sol = build_reference_from_states(chain, conn, 0.0, 1.0, kG);

    const double t = 0.8;
    // Left of the step: the post-shock state.
    CHECK(evaluate_reference(sol, -1e-9, t).h == doctest::Approx(6.1431));
    // At the right edge of the step the fan starts from the critical state.
    const ConservedState sonic = evaluate_reference(sol, 1e-12, t);
    CHECK(sonic.h == doctest::Approx(3.9157).epsilon(1e-6));
    // Mid-fan: invariant of the critical state carried along the ray.
    const double xi = 0.5 * sol.waves[2].right_speed;
    const ConservedState mid = evaluate_reference(sol, xi * t, t);
    CHECK(u_of(mid) + 2.0 * c_of(mid) ==
          doctest::Approx(u_of(sol.states[2]) + 2.0 * c_of(sol.states[2])).epsilon(1e-10));
    CHECK(u_of(mid) - c_of(mid) == doctest::Approx(xi).epsilon(1e-10));
    // Beyond the trailing shock: right datum.
    CHECK(evaluate_reference(sol, sol.waves[3].left_speed * t + 1e-6, t).h ==
          doctest::Approx(chain.back().h));
}
