#include "stepflow/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "stepflow/errors.hpp"

namespace stepflow {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

double parse_double(const std::string& text, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || (end && *end != '\0')) {
        throw ValidationError(std::string("cannot parse ") + what + " from '" + text + "'");
    }
    return v;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

const char* gamma_label(GammaChoice gamma) {
    return gamma == GammaChoice::zero ? "zero" : "sign";
}

Profile make_profile(const ProfileHeader& header, const SimulationState& state,
                     const ReferenceSolution& reference) {
    Profile p;
    p.header = header;
    const Mesh& mesh = state.mesh;
    p.header.cells = mesh.n_cells();
    p.header.x_lo = mesh.x_lo();
    p.header.x_hi = mesh.x_hi();
    for (int j = 0; j < mesh.n_cells(); ++j) {
        const double x = mesh.center(j);
        const ConservedState ref = evaluate_reference(reference, x, state.time);
        p.x.push_back(x);
        p.h.push_back(state.cells[static_cast<size_t>(j)].h);
        p.m.push_back(state.cells[static_cast<size_t>(j)].m);
        p.b.push_back(state.bed[static_cast<size_t>(j)]);
        p.h_exact.push_back(ref.h);
        p.m_exact.push_back(ref.m);
    }
    return p;
}

void write_profile(std::ostream& os, const Profile& profile) {
    const ProfileHeader& hd = profile.header;
    os << "# test = " << hd.test << '\n';
    os << "# scheme = " << hd.scheme << '\n';
    os << "# cells = " << hd.cells << '\n';
    os << "# cfl = " << fmt(hd.cfl) << '\n';
    os << "# g = " << fmt(hd.g) << '\n';
    os << "# gamma = " << hd.gamma << '\n';
    os << "# end_time = " << fmt(hd.end_time) << '\n';
    os << "# x_lo = " << fmt(hd.x_lo) << '\n';
    os << "# x_hi = " << fmt(hd.x_hi) << '\n';
    os << "# columns = x h m b h_exact m_exact\n";
    for (size_t j = 0; j < profile.x.size(); ++j) {
        os << fmt(profile.x[j]) << ' ' << fmt(profile.h[j]) << ' ' << fmt(profile.m[j])
           << ' ' << fmt(profile.b[j]) << ' ' << fmt(profile.h_exact[j]) << ' '
           << fmt(profile.m_exact[j]) << '\n';
    }
}

Profile read_profile(std::istream& is) {
    Profile p;
    std::map<std::string, std::string> header;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string body = trim(line);
        if (body.empty()) continue;
        if (body.front() == '#') {
            const auto eq = body.find('=');
            if (eq == std::string::npos) {
                throw ValidationError("malformed header line " + std::to_string(line_no) +
                                      ": expected '# key = value'");
            }
            const std::string key = trim(body.substr(1, eq - 1));
            header[key] = trim(body.substr(eq + 1));
            continue;
        }
        std::istringstream row(body);
        double x, h, m, b, he, me;
        if (!(row >> x >> h >> m >> b >> he >> me)) {
            throw ValidationError("malformed data row at line " + std::to_string(line_no));
        }
        std::string extra;
        if (row >> extra) {
            throw ValidationError("trailing column at line " + std::to_string(line_no));
        }
        p.x.push_back(x);
        p.h.push_back(h);
        p.m.push_back(m);
        p.b.push_back(b);
        p.h_exact.push_back(he);
        p.m_exact.push_back(me);
    }

    auto need = [&header](const char* key) -> std::string {
        const auto it = header.find(key);
        if (it == header.end()) {
            throw ValidationError(std::string("profile header lacks '") + key + "'");
        }
        return it->second;
    };
    p.header.test = need("test");
    p.header.scheme = need("scheme");
    p.header.cells = static_cast<int>(parse_double(need("cells"), "cells"));
    p.header.cfl = parse_double(need("cfl"), "cfl");
    p.header.g = parse_double(need("g"), "g");
    p.header.gamma = need("gamma");
    p.header.end_time = parse_double(need("end_time"), "end_time");
    p.header.x_lo = parse_double(need("x_lo"), "x_lo");
    p.header.x_hi = parse_double(need("x_hi"), "x_hi");
    if (need("columns") != "x h m b h_exact m_exact") {
        throw ValidationError("unexpected column layout '" + need("columns") + "'");
    }
    if (static_cast<int>(p.x.size()) != p.header.cells) {
        throw ValidationError("row count " + std::to_string(p.x.size()) +
                              " does not match declared cells " +
                              std::to_string(p.header.cells));
    }
    return p;
}

void write_error_table(std::ostream& os, const std::string& test,
                       const std::vector<std::string>& schemes,
                       const std::vector<std::vector<ErrorRecord>>& per_scheme) {
    if (schemes.size() != per_scheme.size()) {
        throw std::invalid_argument("one record list per scheme required");
    }
    os << "# test = " << test << '\n';
    os << "N";
    for (const std::string& s : schemes) {
        os << ',' << s << "_e_h," << s << "_order_h," << s << "_e_m," << s << "_order_m";
    }
    os << '\n';

    const size_t rows = per_scheme.empty() ? 0 : per_scheme.front().size();
    for (const auto& records : per_scheme) {
        if (records.size() != rows) {
            throw std::invalid_argument("scheme sweeps cover different mesh ladders");
        }
    }
    for (size_t r = 0; r < rows; ++r) {
        os << per_scheme.front()[r].cells;
        for (const auto& records : per_scheme) {
            if (records[r].cells != per_scheme.front()[r].cells) {
                throw std::invalid_argument("scheme sweeps cover different mesh ladders");
            }
            const ErrorRecord& rec = records[r];
            os << ',' << fmt_short(rec.e_h) << ',';
            if (rec.order_h) {
                char buf[16];
                std::snprintf(buf, sizeof(buf), "%.2f", *rec.order_h);
                os << buf;
            }
            os << ',' << fmt_short(rec.e_m) << ',';
            if (rec.order_m) {
                char buf[16];
                std::snprintf(buf, sizeof(buf), "%.2f", *rec.order_m);
                os << buf;
            }
        }
        os << '\n';
    }
}

void write_spike_table(std::ostream& os, const std::string& test,
                       const std::vector<std::string>& schemes,
                       const std::vector<std::vector<SpikeRecord>>& per_scheme) {
    if (schemes.size() != per_scheme.size()) {
        throw std::invalid_argument("one record list per scheme required");
    }
    os << "# test = " << test << '\n';
    os << "scheme,N,m_peak_avg,m_foot,alpha1_star,bracket_jump,predicted,residual\n";
    for (size_t s = 0; s < schemes.size(); ++s) {
        for (const SpikeRecord& rec : per_scheme[s]) {
            os << schemes[s] << ',' << rec.cells << ',' << fmt(rec.m_peak_avg) << ','
               << fmt(rec.m_foot) << ',' << fmt(rec.alpha1_star) << ','
               << fmt(rec.bracket_jump) << ',' << fmt(rec.predicted) << ','
               << fmt(rec.residual) << '\n';
        }
    }
}

}  // namespace stepflow
