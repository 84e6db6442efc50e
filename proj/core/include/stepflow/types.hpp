#pragma once

#include <functional>

namespace stepflow {

// ============================================================================
// States
// ============================================================================

// Conserved variables of the shallow water equations: water height h and
// momentum per unit width m = h*u. Heights are strictly positive everywhere in
// this library; dry states are out of scope. Components are expected to stay
// finite; construction sites that accept external input validate this.
struct ConservedState {
    double h = 0.0;  // water height, > 0
    double m = 0.0;  // momentum h*u
};

// Primitive description used by the test definitions: height plus Froude
// number Fr = u / sqrt(g*h).
struct PrimitiveState {
    double h = 0.0;   // water height, > 0
    double fr = 0.0;  // Froude number, signed
};

// Conversions between the two descriptions. Both throw std::domain_error on
// nonpositive height (or nonpositive gravity for from_primitive).
ConservedState from_primitive(const PrimitiveState& w, double g);
double froude(const ConservedState& u, double g);
PrimitiveState to_primitive(const ConservedState& u, double g);

// Largest characteristic speed |u| + sqrt(g*h) of a single state.
double char_speed(const ConservedState& u, double g);

// ============================================================================
// Topography
// ============================================================================

// Bottom topography with a single admissible jump at x = 0. The two sides are
// stored as separate functions so the jump height is exact rather than the
// difference of two point evaluations near 0. Each side must be smooth on its
// half line; left covers x < 0 and right covers x >= 0.
class Topography {
public:
    Topography(std::function<double(double)> left, std::function<double(double)> right);

    // Flat bed on each side: b = 0 for x < 0 and b = b_right for x >= 0.
    // This is the shape of every built-in test.
    static Topography step(double b_right);
    static Topography flat(double level = 0.0);

    double value(double x) const;
    double left_limit() const;   // b(0-)
    double right_limit() const;  // b(0+)
    double jump() const;         // b(0+) - b(0-)

private:
    std::function<double(double)> left_;
    std::function<double(double)> right_;
};

// ============================================================================
// Mesh
// ============================================================================

// Uniform cell partition of [x_lo, x_hi]. Construction requires that a cell
// interface lands on x = 0 to within one unit in the last place of the domain
// scale; the bottom jump must sit exactly on an interface for the interface
// source terms to make sense. Cells are indexed 0..n-1 left to right; the
// interface between cells step_index()-1 and step_index() is the one at 0, so
// step_index()-1 is the last cell left of the jump and step_index() the first
// cell right of it.
class Mesh {
public:
    static Mesh uniform(double x_lo, double x_hi, int n_cells);

    double x_lo() const { return x_lo_; }
    double x_hi() const { return x_hi_; }
    int n_cells() const { return n_; }
    double dx() const { return dx_; }

    double center(int j) const { return x_lo_ + (j + 0.5) * dx_; }
    double interface(int i) const { return x_lo_ + i * dx_; }

    // Global index of the interface sitting at x = 0.
    int step_index() const { return step_; }
    int left_cell_of_step() const { return step_ - 1; }
    int right_cell_of_step() const { return step_; }

private:
    Mesh(double x_lo, double x_hi, int n, double dx, int step)
        : x_lo_(x_lo), x_hi_(x_hi), n_(n), dx_(dx), step_(step) {}

    double x_lo_;
    double x_hi_;
    int n_;
    double dx_;
    int step_;
};

}  // namespace stepflow
