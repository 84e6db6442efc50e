#include "stepflow/registry.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "stepflow/errors.hpp"

namespace stepflow {

namespace {

// Frozen after the first transcription pass; any edit to the tables below is
// deliberate and must update this value alongside.
constexpr std::uint64_t kRegistryChecksum = 0x760103b7a651e38cull;

std::vector<int> default_ladder() { return {100, 200, 400, 800, 1600, 3200}; }

std::vector<std::string> pair_schemes() { return {"clxf", "lxf"}; }

std::vector<ExperimentConfig> build_registry() {
    std::vector<ExperimentConfig> entries;

    {
        // Dam break over a raised step; the only entry swept with every preset.
        ExperimentConfig c;
        c.name = "dam-break";
        c.x_lo = -5.0;
        c.x_hi = 5.0;
        c.end_time = 1.0;
        c.left = PrimitiveState{1.0, 0.0};
        c.right = PrimitiveState{0.1, 0.0};
        c.bed_right = 0.7;
        c.pattern = "1R-0-2S";
        c.mesh_sizes = default_ladder();
        c.schemes = {"clxf", "lxf", "wblxf", "hr", "xs", "hllc"};
        entries.push_back(c);
    }
    {
        ExperimentConfig c;
        c.name = "shock-raref";
        c.x_lo = -5.0;
        c.x_hi = 5.0;
        c.end_time = 0.7;
        c.left = PrimitiveState{0.95, 0.55};
        c.right = PrimitiveState{0.7, 0.85};
        c.bed_right = 0.5;
        c.pattern = "1S-0-2R";
        c.mesh_sizes = default_ladder();
        c.schemes = pair_schemes();
        entries.push_back(c);
    }
    {
        ExperimentConfig c;
        c.name = "raref-raref";
        c.x_lo = -5.0;
        c.x_hi = 5.0;
        c.end_time = 0.5;
        c.left = PrimitiveState{1.0, 0.3};
        c.right = PrimitiveState{1.2, 0.95};
        c.bed_right = 0.2;
        c.pattern = "1R-0-2R";
        c.mesh_sizes = default_ladder();
        c.schemes = pair_schemes();
        entries.push_back(c);
    }
    {
        ExperimentConfig c;
        c.name = "shock-shock";
        c.x_lo = -5.0;
        c.x_hi = 5.0;
        c.end_time = 1.0;
        c.left = PrimitiveState{0.7, 0.2};
        c.right = PrimitiveState{0.2, 0.2};
        c.bed_right = 0.5;
        c.pattern = "1S-0-2S";
        c.mesh_sizes = default_ladder();
        c.schemes = pair_schemes();
        entries.push_back(c);
    }
    {
        // Supercritical inflow from the left. The domain puts the step at
        // one sixth of the width, so the ladder uses multiples of six.
        ExperimentConfig c;
        c.name = "shock-shock-torrent";
        c.x_lo = -1.0;
        c.x_hi = 5.0;
        c.end_time = 1.0;
        c.left = PrimitiveState{0.5, 1.5};
        c.right = PrimitiveState{0.3, 0.0};
        c.bed_right = 0.2;
        c.pattern = "1S-0-2S";
        c.mesh_sizes = {96, 192, 384, 768, 1536, 3072};
        c.schemes = pair_schemes();
        entries.push_back(c);
    }
    {
        ExperimentConfig c;
        c.name = "swept-shocks";
        c.x_lo = -8.0;
        c.x_hi = 2.0;
        c.end_time = 1.0;
        c.left = PrimitiveState{0.5, -1.5};
        c.right = PrimitiveState{0.7, -1.05};
        c.bed_right = 0.2;
        c.pattern = "1S-2S-0";
        c.mesh_sizes = default_ladder();
        c.schemes = pair_schemes();
        entries.push_back(c);
    }
    {
        ExperimentConfig c;
        c.name = "swept-rarefs";
        c.x_lo = -8.0;
        c.x_hi = 2.0;
        c.end_time = 1.0;
        c.left = PrimitiveState{0.5, -2.0};
        c.right = PrimitiveState{0.7, -1.05};
        c.bed_right = 0.2;
        c.pattern = "1R-2R-0";
        c.mesh_sizes = default_ladder();
        c.schemes = pair_schemes();
        entries.push_back(c);
    }
    {
        // Dam-break data rerun with the centered interface-height weighting;
        // the reference stays the physical solution.
        ExperimentConfig c;
        c.name = "dam-break-gamma0";
        c.x_lo = -5.0;
        c.x_hi = 5.0;
        c.end_time = 1.0;
        c.left = PrimitiveState{1.0, 0.0};
        c.right = PrimitiveState{0.1, 0.0};
        c.bed_right = 0.7;
        c.pattern = "1R-0-2S";
        c.gamma_override = GammaChoice::zero;
        c.mesh_sizes = default_ladder();
        c.schemes = pair_schemes();
        entries.push_back(c);
    }
    {
        // Resonant test: the right-going fan hangs off the step at Fr = 1.
        ExperimentConfig c;
        c.name = "transonic-shocks";
        c.x_lo = -5.0;
        c.x_hi = 15.0;
        c.end_time = 0.8;
        c.left = PrimitiveState{4.0, 1.1175};
        c.right = PrimitiveState{1.0299, 2.2428};
        c.bed_right = 1.0;
        c.pattern = "1S-0-2S";
        c.reference_mode = ReferenceMode::tabulated;
        c.chain = {PrimitiveState{4.0, 1.1175}, PrimitiveState{6.1431, 0.5089},
                   PrimitiveState{3.9157, 1.0}, PrimitiveState{1.9999, 2.1977},
                   PrimitiveState{1.0299, 2.2428}};
        c.connectors = {ConnectorKind::shock1, ConnectorKind::step, ConnectorKind::fan1,
                        ConnectorKind::shock2};
        c.mesh_sizes = {200, 400, 800, 1600, 3200};
        c.schemes = pair_schemes();
        entries.push_back(c);
    }
    {
        ExperimentConfig c;
        c.name = "transonic-rarefs";
        c.x_lo = -25.0;
        c.x_hi = 15.0;
        c.end_time = 0.8;
        c.left = PrimitiveState{6.0, -2.0855};
        c.right = PrimitiveState{8.0, 0.0};
        c.bed_right = 1.0;
        c.pattern = "1R-2R-0";
        c.reference_mode = ReferenceMode::tabulated;
        c.chain = {PrimitiveState{6.0, -2.0855}, PrimitiveState{1.9766, -2.1490},
                   PrimitiveState{2.5253, -1.6707}, PrimitiveState{3.5556, -1.0},
                   PrimitiveState{8.0, 0.0}};
        c.connectors = {ConnectorKind::fan1, ConnectorKind::fan2, ConnectorKind::step,
                        ConnectorKind::fan2};
        c.mesh_sizes = {200, 400, 800, 1600, 3200};
        c.schemes = pair_schemes();
        entries.push_back(c);
    }

    return entries;
}

void append_number(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
    out += ';';
}

std::string canonical_serialization() {
    std::string text;
    for (const ExperimentConfig& c : registry()) {
        text += c.name;
        text += ';';
        append_number(text, c.x_lo);
        append_number(text, c.x_hi);
        append_number(text, c.end_time);
        append_number(text, c.left.h);
        append_number(text, c.left.fr);
        append_number(text, c.right.h);
        append_number(text, c.right.fr);
        append_number(text, c.bed_right);
        text += c.pattern;
        text += ';';
        text += c.gamma_override
                    ? (*c.gamma_override == GammaChoice::zero ? "zero" : "sign")
                    : "preset";
        text += ';';
        text += c.reference_mode == ReferenceMode::solve ? "solve" : "tabulated";
        text += ';';
        for (const PrimitiveState& w : c.chain) {
            append_number(text, w.h);
            append_number(text, w.fr);
        }
        for (ConnectorKind k : c.connectors) {
            switch (k) {
                case ConnectorKind::shock1: text += "s1,"; break;
                case ConnectorKind::shock2: text += "s2,"; break;
                case ConnectorKind::fan1: text += "f1,"; break;
                case ConnectorKind::fan2: text += "f2,"; break;
                case ConnectorKind::step: text += "b,"; break;
            }
        }
        text += ';';
        for (int n : c.mesh_sizes) {
            text += std::to_string(n);
            text += ',';
        }
        text += ';';
        for (const std::string& s : c.schemes) {
            text += s;
            text += ',';
        }
        text += ';';
        append_number(text, c.cfl);
        append_number(text, c.g);
        text += '\n';
    }
    return text;
}

}  // namespace

std::vector<int> ExperimentConfig::mesh_ladder(bool deep) const {
    std::vector<int> ladder = mesh_sizes;
    if (deep && !ladder.empty()) {
        for (int i = 0; i < 3; ++i) {
            ladder.push_back(2 * ladder.back());
        }
    }
    return ladder;
}

const std::vector<ExperimentConfig>& registry() {
    static const std::vector<ExperimentConfig> entries = build_registry();
    return entries;
}

const ExperimentConfig& find_experiment(const std::string& name) {
    for (const ExperimentConfig& c : registry()) {
        if (c.name == name) return c;
    }
    std::ostringstream msg;
    msg << "unknown test '" << name << "'; known tests:";
    for (const ExperimentConfig& c : registry()) {
        msg << ' ' << c.name;
    }
    throw std::invalid_argument(msg.str());
}

std::uint64_t registry_checksum() {
    // FNV-1a, 64 bit.
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char byte : canonical_serialization()) {
        hash ^= byte;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

void verify_registry_checksum() {
    const std::uint64_t computed = registry_checksum();
    if (computed != kRegistryChecksum) {
        std::ostringstream msg;
        msg << "experiment registry drifted from its frozen transcription: checksum "
            << std::hex << computed << " != " << kRegistryChecksum;
        throw ValidationError(msg.str());
    }
}

Mesh make_mesh(const ExperimentConfig& config, int cells) {
    return Mesh::uniform(config.x_lo, config.x_hi, cells);
}

Topography make_topography(const ExperimentConfig& config) {
    return Topography::step(config.bed_right);
}

RunProblem make_problem(const ExperimentConfig& config, int cells) {
    RunProblem p{make_mesh(config, cells), make_topography(config), config.left,
                 config.right, config.end_time, config.cfl, config.g};
    return p;
}

SchemeSpec make_scheme(const ExperimentConfig& config, const std::string& preset) {
    SchemeSpec spec = scheme_preset(preset);
    if (config.gamma_override) {
        spec.gamma = *config.gamma_override;
        spec.name += *config.gamma_override == GammaChoice::zero ? "-gamma0" : "-gammasign";
    }
    return validated(spec);
}

ReferenceSolution make_reference(const ExperimentConfig& config) {
    if (config.reference_mode == ReferenceMode::tabulated) {
        return build_reference_from_states(config.chain, config.connectors, 0.0,
                                           config.bed_right, config.g);
    }
    // The reference is always the physical solution, with the jump-sign
    // interface weighting, regardless of any scheme-side gamma override.
    return solve_riemann_grh(config.left, config.right, 0.0, config.bed_right,
                             GammaChoice::sign_of_jump, config.g,
                             WavePatternHint::parse(config.pattern));
}

}  // namespace stepflow
