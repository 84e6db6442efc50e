#include "stepflow/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "stepflow/errors.hpp"
#include "stepflow/fluxes.hpp"

namespace stepflow {

L1Errors l1_error(const SimulationState& state, const ReferenceSolution& reference,
                  std::optional<double> expected_time) {
    if (expected_time && std::abs(state.time - *expected_time) >
                             1e-9 * std::max(1.0, std::abs(*expected_time))) {
        std::ostringstream msg;
        msg << "final-time mismatch: state is at t = " << state.time << ", expected "
            << *expected_time;
        throw std::invalid_argument(msg.str());
    }
    const Mesh& mesh = state.mesh;
    L1Errors out;
    for (int j = 0; j < mesh.n_cells(); ++j) {
        const ConservedState ref = evaluate_reference(reference, mesh.center(j), state.time);
        out.e_h += std::abs(state.cells[static_cast<size_t>(j)].h - ref.h);
        out.e_m += std::abs(state.cells[static_cast<size_t>(j)].m - ref.m);
    }
    out.e_h *= mesh.dx();
    out.e_m *= mesh.dx();
    return out;
}

void convergence_orders(std::vector<ErrorRecord>& records) {
    for (size_t i = 0; i < records.size(); ++i) {
        if (records[i].cells <= 0) {
            throw std::invalid_argument("error records need positive cell counts");
        }
        if (i == 0) {
            records[i].order_h.reset();
            records[i].order_m.reset();
            continue;
        }
        if (records[i].cells != 2 * records[i - 1].cells) {
            std::ostringstream msg;
            msg << "cell counts must double between rows; got " << records[i - 1].cells
                << " then " << records[i].cells;
            throw std::invalid_argument(msg.str());
        }
        auto order = [](double prev, double curr) -> std::optional<double> {
            const double value = std::log2(prev / curr);
            if (!std::isfinite(value)) return std::nullopt;
            return value;
        };
        records[i].order_h = order(records[i - 1].e_h, records[i].e_h);
        records[i].order_m = order(records[i - 1].e_m, records[i].e_m);
    }
}

SpikeRecord spike_record(const SimulationState& state, const ReferenceSolution& reference,
                         const SchemeSpec& spec, double g) {
    const Mesh& mesh = state.mesh;
    const ConservedState& left = state.cells[static_cast<size_t>(mesh.left_cell_of_step())];
    const ConservedState& right = state.cells[static_cast<size_t>(mesh.right_cell_of_step())];

    SpikeRecord rec;
    rec.cells = mesh.n_cells();
    rec.m_peak_avg = 0.5 * (left.m + right.m);
    // The reference momentum is continuous across the step, so either side
    // serves as the foot value; prefer the stored state when a step exists.
    rec.m_foot = reference.step_wave_index() >= 0
                     ? reference.left_of_step().m
                     : evaluate_reference(reference, 0.0, state.time).m;

    const bool central = spec.central_mass_at_step || spec.central_both_at_step;
    rec.alpha1_star = central ? 0.0 : lxf_alpha(left, right, g);
    const double db = state.bed[static_cast<size_t>(mesh.right_cell_of_step())] -
                      state.bed[static_cast<size_t>(mesh.left_cell_of_step())];
    rec.bracket_jump =
        spec.correction == BedCorrection::none ? right.h - left.h : (right.h + db) - left.h;
    rec.predicted = 0.5 * rec.alpha1_star * rec.bracket_jump;
    rec.residual = (rec.m_peak_avg - rec.m_foot) - rec.predicted;
    return rec;
}

int transition_count(const SimulationState& state, int plateau_window, double tol) {
    if (plateau_window < 3) {
        throw std::invalid_argument("plateau window must be at least 3 cells");
    }
    const Mesh& mesh = state.mesh;
    const int step = mesh.step_index();
    if (step - plateau_window < 0 || step + plateau_window - 1 >= mesh.n_cells()) {
        throw std::invalid_argument("plateau window extends past the mesh boundary");
    }

    auto median_of = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        const size_t n = v.size();
        return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };

    int count = 0;
    const int inner = plateau_window / 2;
    for (int side = 0; side < 2; ++side) {
        // Distance d counts cells away from the step interface on this side.
        auto cell_at = [&](int d) {
            return side == 0 ? step - d : step + d - 1;
        };
        std::vector<double> plateau_cells;
        for (int d = inner; d <= plateau_window; ++d) {
            plateau_cells.push_back(state.cells[static_cast<size_t>(cell_at(d))].h);
        }
        const double plateau = median_of(std::move(plateau_cells));
        for (int d = 1; d <= plateau_window; ++d) {
            if (std::abs(state.cells[static_cast<size_t>(cell_at(d))].h - plateau) > tol) {
                ++count;
            }
        }
    }
    return count;
}

double well_balance_residual(const SchemeSpec& spec, const Topography& topo, double g,
                             int cells, long long steps, double surface_margin, double x_lo,
                             double x_hi, double cfl) {
    if (steps < 0) throw std::invalid_argument("step count must be nonnegative");
    if (!(surface_margin > 0.0)) {
        throw std::invalid_argument("surface margin must be positive");
    }

    SimulationState state{Mesh::uniform(x_lo, x_hi, cells), topo};
    const double surface =
        std::max(topo.left_limit(), topo.right_limit()) + surface_margin;
    for (size_t j = 0; j < state.cells.size(); ++j) {
        state.cells[j] = ConservedState{surface - state.bed[j], 0.0};
        if (!(state.cells[j].h > 0.0)) {
            throw std::invalid_argument("flat surface leaves a nonpositive depth over the bed");
        }
    }

    const SchemeSpec checked = validated(spec);
    double residual = 0.0;
    for (long long n = 0; n < steps; ++n) {
        const double dt = cfl_dt(state, g, cfl);
        step(state, checked, g, dt);
        for (const ConservedState& cell : state.cells) {
            residual = std::max(residual, std::abs(cell.m));
        }
    }
    return residual;
}

}  // namespace stepflow
