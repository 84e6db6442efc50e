// ============================================================================
// stepflow command line tool: runs the experiment registry, emits profiles,
// error tables, spike tables, still-water checks, and exact solutions.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure (positivity loss,
// infeasible solve), 3 validation failure (connector or registry checksum).
// ============================================================================

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "stepflow/analysis.hpp"
#include "stepflow/errors.hpp"
#include "stepflow/exact.hpp"
#include "stepflow/registry.hpp"
#include "stepflow/report.hpp"
#include "stepflow/scheme.hpp"
#include "stepflow/types.hpp"

namespace sf = stepflow;

namespace {

// ============================================================================
// Shared option plumbing
// ============================================================================

struct CommonOptions {
    std::string test;
    std::vector<std::string> schemes;
    std::vector<int> cells;
    double cfl = -1.0;       // negative: keep the registry value
    std::string gamma;       // "", "sign", or "zero"
    std::string out;
    bool deep = false;
    int jobs = 1;
};

sf::SchemeSpec effective_scheme(const sf::ExperimentConfig& config, const std::string& preset,
                                const std::string& gamma_flag) {
    sf::SchemeSpec spec = sf::make_scheme(config, preset);
    if (!gamma_flag.empty()) {
        const sf::GammaChoice forced =
            gamma_flag == "zero" ? sf::GammaChoice::zero : sf::GammaChoice::sign_of_jump;
        if (forced != spec.gamma) {
            spec.gamma = forced;
            spec.name += forced == sf::GammaChoice::zero ? "-gamma0" : "-gammasign";
        }
    }
    return sf::validated(spec);
}

sf::RunProblem effective_problem(const sf::ExperimentConfig& config, int cells, double cfl) {
    sf::RunProblem p = sf::make_problem(config, cells);
    if (cfl > 0.0) p.cfl = cfl;
    return p;
}

std::vector<int> ladder_for(const sf::ExperimentConfig& config, const CommonOptions& opt) {
    if (!opt.cells.empty()) return opt.cells;
    return config.mesh_ladder(opt.deep);
}

std::vector<std::string> schemes_for(const sf::ExperimentConfig& config,
                                     const CommonOptions& opt) {
    if (!opt.schemes.empty()) return opt.schemes;
    return config.schemes;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::invalid_argument("cannot open output file '" + path + "'");
    return os;
}

void require_doubling(const std::vector<int>& ladder) {
    for (size_t i = 1; i < ladder.size(); ++i) {
        if (ladder[i] != 2 * ladder[i - 1]) {
            throw std::invalid_argument(
                "cell counts must double between entries; got " +
                std::to_string(ladder[i - 1]) + " then " + std::to_string(ladder[i]));
        }
    }
}

// ============================================================================
// run: one (test, scheme, N) cell to a columnar profile
// ============================================================================

int cmd_run(const CommonOptions& opt) {
    sf::verify_registry_checksum();
    const sf::ExperimentConfig& config = sf::find_experiment(opt.test);
    const std::string preset = opt.schemes.empty() ? "clxf" : opt.schemes.front();
    const int cells = opt.cells.empty() ? config.mesh_sizes.front() : opt.cells.front();

    const sf::SchemeSpec spec = effective_scheme(config, preset, opt.gamma);
    const sf::ReferenceSolution ref = sf::make_reference(config);
    const sf::RunProblem problem = effective_problem(config, cells, opt.cfl);
    const sf::SimulationState state = sf::run(problem, spec);

    sf::ProfileHeader header;
    header.test = config.name;
    header.scheme = spec.name;
    header.cfl = problem.cfl;
    header.g = problem.g;
    header.gamma = sf::gamma_label(spec.gamma);
    header.end_time = state.time;

    const std::string path = opt.out.empty()
                                 ? config.name + "-" + spec.name + "-N" +
                                       std::to_string(cells) + ".dat"
                                 : opt.out;
    auto os = open_output(path);
    sf::write_profile(os, sf::make_profile(header, state, ref));
    std::cout << "wrote " << path << " (" << cells << " rows)\n";
    return 0;
}

// ============================================================================
// table: error sweep over (scheme, N) with a JSON report sidecar
// ============================================================================

struct SweepCell {
    sf::ErrorRecord error;
    sf::SpikeRecord spike;
    int transitions = -1;
    double wall_seconds = 0.0;
    sf::RunDiagnostics diag;
};

SweepCell run_cell(const sf::ExperimentConfig& config, const sf::SchemeSpec& spec,
                   const sf::ReferenceSolution& ref, int cells, double cfl) {
    const auto t0 = std::chrono::steady_clock::now();
    const sf::SimulationState state = sf::run(effective_problem(config, cells, cfl), spec);

    SweepCell cell;
    const sf::L1Errors err = sf::l1_error(state, ref, config.end_time);
    cell.error = {cells, err.e_h, err.e_m, {}, {}};
    cell.spike = sf::spike_record(state, ref, spec, config.g);
    try {
        cell.transitions = sf::transition_count(state, 8, 1e-2);
    } catch (const std::invalid_argument&) {
        cell.transitions = -1;  // window does not fit this mesh
    }
    cell.diag = state.diag;
    cell.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return cell;
}

// Runs the (scheme, N) grid, possibly concurrently; the grid is indexed
// scheme-major and every worker writes only its own cells.
std::vector<std::vector<SweepCell>> run_grid(const sf::ExperimentConfig& config,
                                             const std::vector<sf::SchemeSpec>& specs,
                                             const std::vector<int>& ladder, double cfl,
                                             int jobs) {
    const sf::ReferenceSolution ref = sf::make_reference(config);
    std::vector<std::vector<SweepCell>> grid(specs.size(),
                                             std::vector<SweepCell>(ladder.size()));

    const int total = static_cast<int>(specs.size() * ladder.size());
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::string failure_message;
    std::mutex failure_mutex;

    auto worker = [&]() {
        for (int task = next.fetch_add(1); task < total && !failed.load();
             task = next.fetch_add(1)) {
            const size_t si = static_cast<size_t>(task) / ladder.size();
            const size_t ni = static_cast<size_t>(task) % ladder.size();
            try {
                grid[si][ni] = run_cell(config, specs[si], ref, ladder[ni], cfl);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                failed.store(true);
                if (failure_message.empty()) failure_message = e.what();
            }
        }
    };

    const int n_threads = std::max(1, std::min(jobs, total));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (failed.load()) throw sf::NumericalError(failure_message);
    return grid;
}

int cmd_table(const CommonOptions& opt) {
    sf::verify_registry_checksum();
    const sf::ExperimentConfig& config = sf::find_experiment(opt.test);
    const std::vector<int> ladder = ladder_for(config, opt);
    require_doubling(ladder);

    std::vector<sf::SchemeSpec> specs;
    std::vector<std::string> names;
    for (const std::string& preset : schemes_for(config, opt)) {
        specs.push_back(effective_scheme(config, preset, opt.gamma));
        names.push_back(specs.back().name);
    }

    const auto grid = run_grid(config, specs, ladder, opt.cfl, opt.jobs);

    std::vector<std::vector<sf::ErrorRecord>> tables(specs.size());
    for (size_t si = 0; si < specs.size(); ++si) {
        for (const SweepCell& cell : grid[si]) tables[si].push_back(cell.error);
        sf::convergence_orders(tables[si]);
    }

    const std::string path = opt.out.empty() ? config.name + "-table.csv" : opt.out;
    {
        auto os = open_output(path);
        sf::write_error_table(os, config.name, names, tables);
    }

    // Machine-readable copy of every run in the sweep. Wall-clock times live
    // here and only here; the CSV stays byte-identical across reruns.
    nlohmann::json report;
    report["test"] = config.name;
    report["cfl"] = opt.cfl > 0.0 ? opt.cfl : config.cfl;
    report["g"] = config.g;
    report["cells"] = ladder;
    report["reports"] = nlohmann::json::array();
    for (size_t si = 0; si < specs.size(); ++si) {
        for (size_t ni = 0; ni < ladder.size(); ++ni) {
            const SweepCell& cell = grid[si][ni];
            const sf::ErrorRecord& rec = tables[si][ni];
            nlohmann::json entry;
            entry["scheme"] = names[si];
            entry["cells"] = rec.cells;
            entry["e_h"] = rec.e_h;
            entry["e_m"] = rec.e_m;
            entry["order_h"] = rec.order_h ? nlohmann::json(*rec.order_h)
                                           : nlohmann::json(nullptr);
            entry["order_m"] = rec.order_m ? nlohmann::json(*rec.order_m)
                                           : nlohmann::json(nullptr);
            entry["spike"] = {{"m_peak_avg", cell.spike.m_peak_avg},
                              {"m_foot", cell.spike.m_foot},
                              {"alpha1_star", cell.spike.alpha1_star},
                              {"bracket_jump", cell.spike.bracket_jump},
                              {"predicted", cell.spike.predicted},
                              {"residual", cell.spike.residual}};
            entry["transition_count"] = cell.transitions;
            entry["wall_seconds"] = cell.wall_seconds;
            entry["diagnostics"] = {{"min_h", cell.diag.min_h},
                                    {"max_alpha", cell.diag.max_alpha},
                                    {"hllc_fallbacks", cell.diag.hllc_fallbacks}};
            report["reports"].push_back(entry);
        }
    }
    {
        auto os = open_output(path + ".report.json");
        os << report.dump(2) << '\n';
    }

    std::cout << "wrote " << path << " and " << path << ".report.json\n";
    return 0;
}

// ============================================================================
// exact: state chain to stdout, sampled profile to disk
// ============================================================================

const char* wave_kind_name(const sf::WaveDescriptor& w) {
    switch (w.kind) {
        case sf::WaveDescriptor::Kind::shock: return "shock";
        case sf::WaveDescriptor::Kind::fan: return "rarefaction";
        case sf::WaveDescriptor::Kind::step: return "step";
    }
    return "?";
}

// Residual of each connection in the chain, recomputed from the public jump
// relations so the printout doubles as a validation report.
double connector_residual(const sf::ReferenceSolution& sol, size_t w) {
    const sf::ConservedState& l = sol.states[w];
    const sf::ConservedState& r = sol.states[w + 1];
    const double g = sol.g;
    switch (sol.waves[w].kind) {
        case sf::WaveDescriptor::Kind::step: {
            const sf::StepResiduals res = sf::grh_residual(
                l, r, sol.b_left, sol.b_right, sf::GammaChoice::sign_of_jump, g);
            return std::max(std::abs(res.mass), std::abs(res.momentum));
        }
        case sf::WaveDescriptor::Kind::shock: {
            const double s = sol.waves[w].left_speed;
            const double dpi = (r.m * r.m / r.h + 0.5 * g * r.h * r.h) -
                               (l.m * l.m / l.h + 0.5 * g * l.h * l.h);
            return std::max(std::abs(s * (r.h - l.h) - (r.m - l.m)),
                            std::abs(s * (r.m - l.m) - dpi));
        }
        case sf::WaveDescriptor::Kind::fan: {
            const double sign = sol.waves[w].family == sf::WaveFamily::one ? 2.0 : -2.0;
            const double il = l.m / l.h + sign * std::sqrt(g * l.h);
            const double ir = r.m / r.h + sign * std::sqrt(g * r.h);
            return std::abs(ir - il);
        }
    }
    return 0.0;
}

int cmd_exact(const CommonOptions& opt, int samples) {
    sf::verify_registry_checksum();
    const sf::ExperimentConfig& config = sf::find_experiment(opt.test);
    const sf::ReferenceSolution sol = sf::make_reference(config);

    std::cout << "# test = " << config.name << "\n";
    std::cout << "# reference = "
              << (config.reference_mode == sf::ReferenceMode::tabulated ? "tabulated"
                                                                        : "solved")
              << "\n";
    for (size_t i = 0; i < sol.states.size(); ++i) {
        const sf::ConservedState& u = sol.states[i];
        const double fr = (u.m / u.h) / std::sqrt(sol.g * u.h);
        std::printf("state %zu: h = %.5f  m = %.5f  Fr = %.5f\n", i, u.h, u.m, fr);
        if (i < sol.waves.size()) {
            const sf::WaveDescriptor& w = sol.waves[i];
            if (w.kind == sf::WaveDescriptor::Kind::step) {
                std::printf("  step wave at x = 0 (bed %.5f -> %.5f), residual %.2e\n",
                            sol.b_left, sol.b_right, connector_residual(sol, i));
            } else {
                std::printf("  %s (family %s), speeds [%.5f, %.5f], residual %.2e\n",
                            wave_kind_name(w),
                            w.family == sf::WaveFamily::one ? "1" : "2", w.left_speed,
                            w.right_speed, connector_residual(sol, i));
            }
        }
    }

    const std::string path = opt.out.empty() ? config.name + "-exact.dat" : opt.out;
    auto os = open_output(path);
    os << "# test = " << config.name << "\n";
    os << "# end_time = " << config.end_time << "\n";
    os << "# columns = x h m\n";
    const double width = config.x_hi - config.x_lo;
    for (int i = 0; i < samples; ++i) {
        const double x = config.x_lo + (i + 0.5) * width / samples;
        const sf::ConservedState u = sf::evaluate_reference(sol, x, config.end_time);
        char buf[120];
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", x, u.h, u.m);
        os << buf;
    }
    std::cout << "wrote " << path << " (" << samples << " samples)\n";
    return 0;
}

// ============================================================================
// spike: step-adjacent momentum bookkeeping per (scheme, N)
// ============================================================================

int cmd_spike(const CommonOptions& opt) {
    sf::verify_registry_checksum();
    const sf::ExperimentConfig& config = sf::find_experiment(opt.test);
    const std::vector<int> ladder = ladder_for(config, opt);

    std::vector<sf::SchemeSpec> specs;
    std::vector<std::string> names;
    for (const std::string& preset : schemes_for(config, opt)) {
        specs.push_back(effective_scheme(config, preset, opt.gamma));
        names.push_back(specs.back().name);
    }

    const auto grid = run_grid(config, specs, ladder, opt.cfl, opt.jobs);
    std::vector<std::vector<sf::SpikeRecord>> records(specs.size());
    for (size_t si = 0; si < specs.size(); ++si) {
        for (const SweepCell& cell : grid[si]) records[si].push_back(cell.spike);
    }

    const std::string path = opt.out.empty() ? config.name + "-spike.csv" : opt.out;
    auto os = open_output(path);
    sf::write_spike_table(os, config.name, names, records);
    std::cout << "wrote " << path << "\n";
    return 0;
}

// ============================================================================
// wb-check: still-water momentum residuals per preset
// ============================================================================

int cmd_wb_check(const std::vector<std::string>& schemes, int cells, long long steps,
                 double bed) {
    sf::verify_registry_checksum();
    const sf::Topography topo = sf::Topography::step(bed);
    bool balanced_ok = true;
    for (const std::string& name : schemes) {
        const sf::SchemeSpec spec = sf::scheme_preset(name);
        const double residual = sf::well_balance_residual(spec, topo, 9.81, cells, steps);
        const bool claims_balance = spec.correction != sf::BedCorrection::none ||
                                    spec.central_mass_at_step || spec.central_both_at_step;
        std::printf("%-8s max|m| = %.3e%s\n", name.c_str(), residual,
                    claims_balance ? (residual <= 1e-12 ? "  (balanced)" : "  (DRIFTED)")
                                   : "");
        if (claims_balance && residual > 1e-12) balanced_ok = false;
    }
    if (!balanced_ok) {
        throw sf::NumericalError("a balanced preset produced still-water momentum drift");
    }
    return 0;
}

// ============================================================================
// list: the experiment registry
// ============================================================================

int cmd_list() {
    sf::verify_registry_checksum();
    for (const sf::ExperimentConfig& c : sf::registry()) {
        std::printf("%-20s [%g, %g]  T=%g  left=(%g, %g)  right=(%g, %g)  b=%g  %s\n",
                    c.name.c_str(), c.x_lo, c.x_hi, c.end_time, c.left.h, c.left.fr,
                    c.right.h, c.right.fr, c.bed_right, c.pattern.c_str());
        std::printf("    reference=%s%s  cells={",
                    c.reference_mode == sf::ReferenceMode::tabulated ? "tabulated"
                                                                     : "solved",
                    c.gamma_override ? "  gamma=forced-zero" : "");
        for (size_t i = 0; i < c.mesh_sizes.size(); ++i) {
            std::printf("%s%d", i ? "," : "", c.mesh_sizes[i]);
        }
        std::printf("}  schemes={");
        for (size_t i = 0; i < c.schemes.size(); ++i) {
            std::printf("%s%s", i ? "," : "", c.schemes[i].c_str());
        }
        std::printf("}\n");
    }
    return 0;
}

}  // namespace

// ============================================================================
// Argument wiring
// ============================================================================

int main(int argc, char** argv) {
    CLI::App app{"finite volume schemes for shallow water flow over a bottom step"};
    app.require_subcommand(1);
    app.set_config("--config", "", "plain-text config file (key = value); flags override");

    CommonOptions run_opt, table_opt, exact_opt, spike_opt;
    int exact_samples = 400;
    std::vector<std::string> wb_schemes = {"lxf", "clxf", "wblxf", "hr", "xs", "hllc"};
    int wb_cells = 100;
    long long wb_steps = 100;
    double wb_bed = 0.7;

    auto add_common = [](CLI::App* cmd, CommonOptions& opt, bool sweeps) {
        cmd->fallthrough();  // lets --config after the subcommand reach the app
        cmd->add_option("--test", opt.test, "registry test name")->required();
        cmd->add_option("--scheme", opt.schemes, "scheme preset (repeatable)");
        cmd->add_option("--cells", opt.cells, "cell count (repeatable)");
        cmd->add_option("--cfl", opt.cfl, "CFL number override");
        cmd->add_option("--gamma", opt.gamma, "interface height weighting override")
            ->check(CLI::IsMember({"sign", "zero"}));
        cmd->add_option("--out", opt.out, "output path");
        if (sweeps) {
            cmd->add_flag("--deep", opt.deep, "extend the mesh ladder by three doublings");
            cmd->add_option("--jobs", opt.jobs, "concurrent (scheme, N) runs")
                ->check(CLI::PositiveNumber);
        }
    };

    CLI::App* c_run = app.add_subcommand("run", "run one scheme and write its profile");
    add_common(c_run, run_opt, false);

    CLI::App* c_table = app.add_subcommand("table", "error table over a mesh ladder");
    add_common(c_table, table_opt, true);

    CLI::App* c_exact = app.add_subcommand("exact", "print the reference state chain");
    c_exact->fallthrough();
    c_exact->add_option("--test", exact_opt.test, "registry test name")->required();
    c_exact->add_option("--samples", exact_samples, "profile sample count")
        ->check(CLI::PositiveNumber);
    c_exact->add_option("--out", exact_opt.out, "output path");

    CLI::App* c_spike = app.add_subcommand("spike", "step-adjacent momentum table");
    add_common(c_spike, spike_opt, true);

    CLI::App* c_wb = app.add_subcommand("wb-check", "still-water residual per preset");
    c_wb->fallthrough();
    c_wb->add_option("--scheme", wb_schemes, "scheme preset (repeatable)");
    c_wb->add_option("--cells", wb_cells, "cell count")->check(CLI::PositiveNumber);
    c_wb->add_option("--steps", wb_steps, "number of time steps")
        ->check(CLI::PositiveNumber);
    c_wb->add_option("--bed", wb_bed, "step height");

    CLI::App* c_list = app.add_subcommand("list", "print the experiment registry");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (c_run->parsed()) return cmd_run(run_opt);
        if (c_table->parsed()) return cmd_table(table_opt);
        if (c_exact->parsed()) return cmd_exact(exact_opt, exact_samples);
        if (c_spike->parsed()) return cmd_spike(spike_opt);
        if (c_wb->parsed()) return cmd_wb_check(wb_schemes, wb_cells, wb_steps, wb_bed);
        if (c_list->parsed()) return cmd_list();
    } catch (const sf::ValidationError& e) {
        std::cerr << "validation failure: " << e.what() << "\n";
        return 3;
    } catch (const sf::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
