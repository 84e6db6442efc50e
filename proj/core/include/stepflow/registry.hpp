#pragma once

// The frozen catalog of Riemann experiments: domains, final times, data,
// step heights, wave patterns, reference construction, mesh ladders, and the
// scheme presets each experiment exercises. A checksum over the canonical
// serialization guards the transcription against accidental edits.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stepflow/exact.hpp"
#include "stepflow/scheme.hpp"
#include "stepflow/types.hpp"

namespace stepflow {

enum class ReferenceMode {
    solve,      // run the semi-analytic solver on the Riemann data
    tabulated,  // validate and use a transcribed state chain
};

struct ExperimentConfig {
    std::string name;
    double x_lo = 0.0;
    double x_hi = 0.0;
    double end_time = 0.0;
    PrimitiveState left;
    PrimitiveState right;
    double bed_right = 0.0;  // bed level right of the step; left is always 0
    std::string pattern;
    // Scheme-side gamma override; empty means every preset keeps its own.
    std::optional<GammaChoice> gamma_override;
    ReferenceMode reference_mode = ReferenceMode::solve;
    std::vector<PrimitiveState> chain;      // tabulated mode only
    std::vector<ConnectorKind> connectors;  // tabulated mode only
    std::vector<int> mesh_sizes;
    std::vector<std::string> schemes;
    double cfl = 0.5;
    double g = 9.81;

    // The default ladder, extended by three extra doublings when deep is set.
    std::vector<int> mesh_ladder(bool deep) const;
};

const std::vector<ExperimentConfig>& registry();

// Lookup by name; lists the known names in the error on a miss.
const ExperimentConfig& find_experiment(const std::string& name);

// FNV-1a 64 over the canonical serialization of every entry.
std::uint64_t registry_checksum();

// Throws ValidationError when the computed checksum drifts from the frozen one.
void verify_registry_checksum();

Mesh make_mesh(const ExperimentConfig& config, int cells);
Topography make_topography(const ExperimentConfig& config);
RunProblem make_problem(const ExperimentConfig& config, int cells);

// Resolves a preset and applies the experiment's gamma override, if any.
SchemeSpec make_scheme(const ExperimentConfig& config, const std::string& preset);

ReferenceSolution make_reference(const ExperimentConfig& config);

}  // namespace stepflow
