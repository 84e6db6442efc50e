#include "stepflow/types.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace stepflow {

namespace {

void require_positive_height(double h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw std::domain_error("water height must be positive and finite, got " +
                                std::to_string(h));
    }
}

void require_positive_gravity(double g) {
    if (!(g > 0.0) || !std::isfinite(g)) {
        throw std::domain_error("gravity must be positive and finite, got " +
                                std::to_string(g));
    }
}

}  // namespace

ConservedState from_primitive(const PrimitiveState& w, double g) {
    require_positive_height(w.h);
    require_positive_gravity(g);
    if (!std::isfinite(w.fr)) {
        throw std::domain_error("Froude number must be finite");
    }
    const double u = w.fr * std::sqrt(g * w.h);
    return ConservedState{w.h, w.h * u};
}

double froude(const ConservedState& u, double g) {
    require_positive_height(u.h);
    require_positive_gravity(g);
    return (u.m / u.h) / std::sqrt(g * u.h);
}

PrimitiveState to_primitive(const ConservedState& u, double g) {
    return PrimitiveState{u.h, froude(u, g)};
}

double char_speed(const ConservedState& u, double g) {
    require_positive_height(u.h);
    require_positive_gravity(g);
    return std::abs(u.m / u.h) + std::sqrt(g * u.h);
}

Topography::Topography(std::function<double(double)> left, std::function<double(double)> right)
    : left_(std::move(left)), right_(std::move(right)) {
    if (!left_ || !right_) {
        throw std::invalid_argument("topography sides must both be callable");
    }
    if (!std::isfinite(jump())) {
        throw std::invalid_argument("topography jump at 0 must be finite");
    }
}

Topography Topography::step(double b_right) {
    return Topography([](double) { return 0.0; }, [b_right](double) { return b_right; });
}

Topography Topography::flat(double level) {
    return Topography([level](double) { return level; }, [level](double) { return level; });
}

double Topography::value(double x) const { return x < 0.0 ? left_(x) : right_(x); }

double Topography::left_limit() const { return left_(0.0); }

double Topography::right_limit() const { return right_(0.0); }

double Topography::jump() const { return right_(0.0) - left_(0.0); }

Mesh Mesh::uniform(double x_lo, double x_hi, int n_cells) {
    if (!(x_lo < x_hi) || !std::isfinite(x_lo) || !std::isfinite(x_hi)) {
        throw std::invalid_argument("mesh needs finite x_lo < x_hi");
    }
    if (n_cells < 2) {
        throw std::invalid_argument("mesh needs at least two cells");
    }
    if (!(x_lo < 0.0 && 0.0 < x_hi)) {
        throw std::invalid_argument("mesh domain must contain x = 0 in its interior");
    }
    const double dx = (x_hi - x_lo) / n_cells;
    const int step = static_cast<int>(std::lround(-x_lo / dx));
    const double scale = std::max(std::abs(x_lo), std::abs(x_hi));
    const double miss = std::abs(x_lo + step * dx);
    if (step < 1 || step > n_cells - 1 ||
        miss > std::numeric_limits<double>::epsilon() * scale) {
        throw std::invalid_argument(
            "no cell interface lands on x = 0 for this (x_lo, x_hi, n_cells); "
            "choose n so that -x_lo / (x_hi - x_lo) * n is an integer");
    }
    return Mesh(x_lo, x_hi, n_cells, dx, step);
}

}  // namespace stepflow
