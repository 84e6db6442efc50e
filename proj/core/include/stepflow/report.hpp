#pragma once

// Plain-text emission and parsing for run artifacts: whitespace-columnar
// profiles with '#' provenance headers, and comma-separated error and spike
// tables laid out like the reference tables. All payload numbers are written
// with enough digits to round-trip doubles exactly, so repeated runs with the
// same inputs produce byte-identical files.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stepflow/analysis.hpp"
#include "stepflow/exact.hpp"
#include "stepflow/scheme.hpp"

namespace stepflow {

struct ProfileHeader {
    std::string test;
    std::string scheme;
    int cells = 0;
    double cfl = 0.0;
    double g = 0.0;
    std::string gamma;  // "sign" or "zero"
    double end_time = 0.0;
    double x_lo = 0.0;
    double x_hi = 0.0;
};

struct Profile {
    ProfileHeader header;
    std::vector<double> x;
    std::vector<double> h;
    std::vector<double> m;
    std::vector<double> b;
    std::vector<double> h_exact;
    std::vector<double> m_exact;
};

// Samples the final state and the reference at cell centers.
Profile make_profile(const ProfileHeader& header, const SimulationState& state,
                     const ReferenceSolution& reference);

void write_profile(std::ostream& os, const Profile& profile);

// Parses what write_profile emits; malformed input raises ValidationError.
Profile read_profile(std::istream& is);

const char* gamma_label(GammaChoice gamma);

// Comma-separated error table: one N column, then e_h, order, e_m, order per
// scheme. Order cells stay empty where no coarser mesh exists.
void write_error_table(std::ostream& os, const std::string& test,
                       const std::vector<std::string>& schemes,
                       const std::vector<std::vector<ErrorRecord>>& per_scheme);

// Comma-separated spike table per (scheme, N).
void write_spike_table(std::ostream& os, const std::string& test,
                       const std::vector<std::string>& schemes,
                       const std::vector<std::vector<SpikeRecord>>& per_scheme);

}  // namespace stepflow
