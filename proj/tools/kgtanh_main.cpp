// Command-line surface: spectrum / critical / phase / delay / resonance /
// norm / verify, emitting plot-ready CSV or JSON with fixed 12-significant-
// digit formatting so identical configurations produce byte-identical files.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kgtanh/eigensolve.hpp"
#include "kgtanh/norm.hpp"
#include "kgtanh/oracle.hpp"
#include "kgtanh/scattering.hpp"

using namespace kgtanh;

namespace {

struct Sweep {
    double start = 0.0;
    double end = 0.0;
    int steps = 0;
};

struct RunConfig {
    double D = 0.0, B = 0.0, lambda = 1.0, a = 1.0, m = 1.0;
    std::string command;
    std::optional<Sweep> b_sweep;
    std::optional<Sweep> e_sweep;
    std::string continuum = "negative";
    std::string mode;  // critical: coalescence | embedding
    std::string out;
    std::string format = "csv";
    int grid_points = 1200;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.11e", v);
    return buf;
}

// One output table: fixed column order, rows of preformatted cells.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const {
        std::ostringstream os;
        for (size_t i = 0; i < columns.size(); ++i)
            os << columns[i] << (i + 1 < columns.size() ? "," : "\n");
        for (const auto& r : rows)
            for (size_t i = 0; i < r.size(); ++i) os << r[i] << (i + 1 < r.size() ? "," : "\n");
        return os.str();
    }

    // Array of objects keyed by the column names. Numeric cells are emitted
    // verbatim (the %.11e form is valid JSON); everything else is quoted.
    std::string to_json() const {
        const auto is_numeric = [](const std::string& s) {
            if (s.empty()) return false;
            char* end = nullptr;
            std::strtod(s.c_str(), &end);
            return end == s.c_str() + s.size();
        };
        std::ostringstream os;
        os << "[\n";
        for (size_t r = 0; r < rows.size(); ++r) {
            os << "  {";
            for (size_t i = 0; i < columns.size(); ++i) {
                os << "\"" << columns[i] << "\": ";
                if (is_numeric(rows[r][i]))
                    os << rows[r][i];
                else
                    os << "\"" << rows[r][i] << "\"";
                if (i + 1 < columns.size()) os << ", ";
            }
            os << "}" << (r + 1 < rows.size() ? "," : "") << "\n";
        }
        os << "]\n";
        return os.str();
    }
};

void write_output(const Table& t, const RunConfig& cfg) {
    const std::string text = cfg.format == "json" ? t.to_json() : t.to_csv();
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw Error("cannot open output file: " + cfg.out);
    f << text;
}

model::PotentialParams params_of(const RunConfig& cfg) {
    return model::PotentialParams(cfg.D, cfg.B, cfg.lambda, cfg.a, cfg.m);
}

int run_spectrum(const RunConfig& cfg) {
    const model::PotentialParams p = params_of(cfg);
    const auto curves = eigensolve::trace_branch(p, cfg.b_sweep->start, cfg.b_sweep->end,
                                                 cfg.b_sweep->steps, cfg.grid_points);
    Table t;
    t.columns = {"B", "branch_id", "E", "norm_value", "classification", "residual"};
    for (size_t bi = 0; bi < curves.size(); ++bi) {
        const auto& c = curves[bi];
        for (const auto& [B, E] : c.points) {
            const model::PotentialParams pb = p.with_B(B);
            const norm::NormResult n = norm::kg_norm(E, pb);
            const double residual = std::abs(eigensolve::matching_function(E, pb));
            t.rows.push_back({fmt(B), std::to_string(bi), fmt(E), fmt(n.value),
                              norm::to_string(norm::classify_state(n)), fmt(residual)});
        }
        if (c.terminal_event != eigensolve::TerminalEvent::range_end && c.critical_B) {
            // Terminal record: norm evaluated at the critical point (at the
            // window inset for an embedding, where the matching is defined).
            const double Bs = *c.critical_B;
            const double Es =
                c.terminal_event == eigensolve::TerminalEvent::embedding
                    ? -p.m + 1e-6 * p.m
                    : *c.critical_E;
            const model::PotentialParams pb = p.with_B(Bs);
            const norm::NormResult n = norm::kg_norm(Es, pb);
            const double residual = std::abs(eigensolve::matching_function(Es, pb));
            t.rows.push_back({fmt(Bs), std::to_string(bi), fmt(*c.critical_E), fmt(n.value),
                              norm::to_string(norm::classify_state(n)), fmt(residual)});
        }
    }
    write_output(t, cfg);
    return 0;
}

int run_critical(const RunConfig& cfg) {
    const model::PotentialParams p = params_of(cfg);
    const auto mode = cfg.mode == "coalescence" ? eigensolve::TerminalEvent::coalescence
                                                : eigensolve::TerminalEvent::embedding;
    const auto [b_star, e_star] =
        eigensolve::find_critical_B(p, cfg.b_sweep->start, cfg.b_sweep->end, mode);
    Table t;
    t.columns = {"mode", "B_star", "E_star"};
    t.rows.push_back({cfg.mode, fmt(b_star), fmt(e_star)});
    write_output(t, cfg);
    return 0;
}

int run_phase(const RunConfig& cfg) {
    const model::PotentialParams p = params_of(cfg);
    const auto pts =
        scattering::scan_phase(p, cfg.e_sweep->start, cfg.e_sweep->end, cfg.e_sweep->steps);
    Table t;
    t.columns = {"E", "delta_unwrapped", "tau"};
    for (const auto& s : pts) t.rows.push_back({fmt(s.E), fmt(s.delta), fmt(s.tau)});
    write_output(t, cfg);
    return 0;
}

int run_resonance(const RunConfig& cfg) {
    const model::PotentialParams p = params_of(cfg);
    const int grid = std::max(cfg.grid_points, cfg.e_sweep->steps);
    const auto res =
        scattering::find_resonance(p, cfg.e_sweep->start, cfg.e_sweep->end, grid);
    Table t;
    t.columns = {"E_res", "width", "tau_peak", "crossing"};
    if (res) {
        t.rows.push_back({fmt(res->E_res), fmt(res->width), fmt(res->tau_peak),
                          fmt(res->crossing)});
    } else {
        t.rows.push_back({"none", "none", "none", "none"});
    }
    write_output(t, cfg);
    return 0;
}

int run_norm(const RunConfig& cfg) {
    const model::PotentialParams p = params_of(cfg);
    const auto states = eigensolve::find_bound_states(p, cfg.grid_points);
    Table t;
    t.columns = {"E", "value", "interior_part", "tail_part", "zero_tolerance",
                 "classification"};
    for (const auto& s : states) {
        const norm::NormResult n = norm::kg_norm(s.E, p);
        t.rows.push_back({fmt(s.E), fmt(n.value), fmt(n.interior_part), fmt(n.tail_part),
                          fmt(n.zero_tolerance), norm::to_string(norm::classify_state(n))});
    }
    write_output(t, cfg);
    return 0;
}

int run_verify(const RunConfig& cfg) {
    Table t;
    t.columns = {"check", "max_deviation", "threshold", "status"};
    bool all_ok = true;
    const auto add = [&](const std::string& name, double dev, double thr) {
        const bool ok = dev <= thr;
        all_ok = all_ok && ok;
        t.rows.push_back({name, fmt(dev), fmt(thr), ok ? "ok" : "FAIL"});
        std::cout << name << ": max deviation " << fmt(dev) << " (threshold " << fmt(thr)
                  << ") " << (ok ? "ok" : "FAIL") << "\n";
    };

    const model::PotentialParams fig2(0.86, 3.0, 1.0, 1.0, 1.0);
    const model::PotentialParams fig3(-11.0, 8.0, 10.0, 0.6, 1.0);
    const oracle::IntegratorConfig icfg;

    // Eigenvalues: closed form vs shooting across both regimes.
    double dev_eig = 0.0;
    for (const auto& [base, Bs] :
         {std::make_pair(fig2, std::vector<double>{2.8, 3.0, 3.2, 3.4}),
          std::make_pair(fig3, std::vector<double>{7.6, 8.0, 8.5, 9.0, 9.35})}) {
        for (double B : Bs) {
            const model::PotentialParams p = base.with_B(B);
            const auto closed = eigensolve::scan_real_roots(p, 2000, -p.m, p.m, nullptr);
            const auto shot = oracle::shoot_bound_states(p, 2000, icfg);
            if (closed.size() != shot.size()) {
                dev_eig = 1.0;
                continue;
            }
            for (size_t i = 0; i < closed.size(); ++i)
                dev_eig = std::max(dev_eig, std::abs(closed[i] - shot[i]));
        }
    }
    add("eigenvalues_closed_vs_shooting", dev_eig, 1e-6);

    // Phase shifts: 200 draws over both continua and both regimes.
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double dev_phase = 0.0;
    for (int i = 0; i < 200; ++i) {
        const bool use_fig2 = (i % 2 == 0);
        const model::PotentialParams base = use_fig2 ? fig2 : fig3;
        const double B = use_fig2 ? 2.6 + 0.85 * u01(rng) : 7.5 + 1.7 * u01(rng);
        const model::PotentialParams p = base.with_B(B);
        const double mag = 1.05 + 0.55 * u01(rng);
        const double E = (i % 4 < 2) ? -mag : mag;
        const double d1 = scattering::phase_shift(E, p);
        const double d2 = oracle::shoot_phase_shift(E, p, icfg);
        dev_phase = std::max(dev_phase, std::abs(std::remainder(d1 - d2, 3.14159265358979323846)));
    }
    add("phase_shift_closed_vs_shooting", dev_phase, 1e-7);

    // Interior states: pointwise closed form vs RK integration.
    double dev_int = 0.0;
    for (int i = 0; i < 100; ++i) {
        const bool use_fig2 = (i % 2 == 0);
        const model::PotentialParams base = use_fig2 ? fig2 : fig3;
        const double B = use_fig2 ? 2.6 + 0.85 * u01(rng) : 7.5 + 1.7 * u01(rng);
        const model::PotentialParams p = base.with_B(B);
        const double E = -p.m + 2.0 * p.m * u01(rng);
        const double r = p.a * (0.1 + 0.9 * u01(rng));
        model::BoundaryData closed{};
        try {
            closed = model::interior_state(r, E, p);
        } catch (const DegenerateBasis&) {
            continue;
        }
        const model::BoundaryData from{Complex(0.0, 0.0), Complex(1.0, 0.0), 0.0};
        const model::BoundaryData rk = oracle::integrate_radial(Complex(E, 0.0), p, from, r, icfg);
        const double scale = std::max({std::abs(rk.u), std::abs(rk.du), 1e-12});
        dev_int = std::max(dev_int, std::abs(closed.u - rk.u) / scale);
        dev_int = std::max(dev_int, std::abs(closed.du - rk.du) / scale);
    }
    add("interior_state_closed_vs_rk", dev_int, 1e-8);

    if (!cfg.out.empty()) write_output(t, cfg);
    std::cout << (all_ok ? "verify: all checks passed\n" : "verify: FAILURES present\n");
    return all_ok ? 0 : 1;
}

void apply_preset(const std::string& preset, RunConfig& cfg, Sweep& bsw, Sweep& esw) {
    if (preset == "fig2") {
        cfg.D = 0.86;
        cfg.lambda = 1.0;
        cfg.a = 1.0;
        cfg.m = 1.0;
        cfg.B = 3.45;
        bsw = {2.54, 3.46, 200};
    } else if (preset == "fig3") {
        cfg.D = -11.0;
        cfg.lambda = 10.0;
        cfg.a = 0.6;
        cfg.m = 1.0;
        cfg.B = 9.2;
        bsw = {6.99, 9.40, 200};
    } else {
        throw CLI::ValidationError("--preset must be fig2 or fig3");
    }
    esw = {-1.35 * cfg.m, -1.0001 * cfg.m, 800};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bound states, critical points, phase shifts and resonances of a "
                 "scalar particle in a truncated tanh well"};
    app.allow_extras(false);

    RunConfig cfg;
    std::string preset, config_path, command_flag, positional_command;
    Sweep bsw{0, 0, 0}, esw{0, 0, 0};
    bool b_start_set = false, b_end_set = false, b_steps_set = false;
    bool e_start_set = false, e_end_set = false, e_steps_set = false;

    app.add_option("cmd", positional_command,
                   "spectrum|critical|phase|delay|resonance|norm|verify");
    app.add_option("--command", command_flag, "command (overrides the positional)");
    app.add_option("--preset", preset, "parameter preset: fig2 | fig3");
    app.add_option("--config", config_path, "JSON config file mirroring the flags");
    auto* oD = app.add_option("--D", cfg.D, "tanh strength D");
    auto* oB = app.add_option("--B", cfg.B, "depth offset B");
    auto* oL = app.add_option("--lambda", cfg.lambda, "tanh steepness");
    auto* oa = app.add_option("--a", cfg.a, "truncation radius");
    auto* om = app.add_option("--m", cfg.m, "mass");
    auto* obs = app.add_option("--B-start", bsw.start, "B sweep start");
    auto* obe = app.add_option("--B-end", bsw.end, "B sweep end");
    auto* obn = app.add_option("--B-steps", bsw.steps, "B sweep steps");
    auto* oes = app.add_option("--E-start", esw.start, "E sweep start");
    auto* oee = app.add_option("--E-end", esw.end, "E sweep end");
    auto* oen = app.add_option("--E-steps", esw.steps, "E sweep steps");
    app.add_option("--continuum", cfg.continuum, "negative | positive");
    app.add_option("--mode", cfg.mode, "critical mode: coalescence | embedding");
    app.add_option("--out", cfg.out, "output file (stdout when omitted)");
    app.add_option("--format", cfg.format, "csv | json");
    app.add_option("--grid-points", cfg.grid_points, "energy grid for root scans");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        // Precedence: preset < config file < explicit flags.
        if (!preset.empty()) apply_preset(preset, cfg, bsw, esw);
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) {
                std::cerr << "error: cannot read config file " << config_path << "\n";
                return 2;
            }
            nlohmann::json j;
            f >> j;
            if (j.contains("preset")) {
                apply_preset(j["preset"].get<std::string>(), cfg, bsw, esw);
            }
            if (j.contains("D")) cfg.D = j["D"].get<double>();
            if (j.contains("B")) cfg.B = j["B"].get<double>();
            if (j.contains("lambda")) cfg.lambda = j["lambda"].get<double>();
            if (j.contains("a")) cfg.a = j["a"].get<double>();
            if (j.contains("m")) cfg.m = j["m"].get<double>();
            if (j.contains("command")) cfg.command = j["command"].get<std::string>();
            if (j.contains("B_start")) bsw.start = j["B_start"].get<double>();
            if (j.contains("B_end")) bsw.end = j["B_end"].get<double>();
            if (j.contains("B_steps")) bsw.steps = j["B_steps"].get<int>();
            if (j.contains("E_start")) esw.start = j["E_start"].get<double>();
            if (j.contains("E_end")) esw.end = j["E_end"].get<double>();
            if (j.contains("E_steps")) esw.steps = j["E_steps"].get<int>();
            if (j.contains("continuum")) cfg.continuum = j["continuum"].get<std::string>();
            if (j.contains("mode")) cfg.mode = j["mode"].get<std::string>();
            if (j.contains("out")) cfg.out = j["out"].get<std::string>();
            if (j.contains("format")) cfg.format = j["format"].get<std::string>();
            if (j.contains("grid_points")) cfg.grid_points = j["grid_points"].get<int>();
        }
        // Explicit flags take precedence over config/preset values.
        if (oD->count()) cfg.D = oD->as<double>();
        if (oB->count()) cfg.B = oB->as<double>();
        if (oL->count()) cfg.lambda = oL->as<double>();
        if (oa->count()) cfg.a = oa->as<double>();
        if (om->count()) cfg.m = om->as<double>();
        b_start_set = obs->count() > 0;
        b_end_set = obe->count() > 0;
        b_steps_set = obn->count() > 0;
        e_start_set = oes->count() > 0;
        e_end_set = oee->count() > 0;
        e_steps_set = oen->count() > 0;
        if (b_start_set) bsw.start = obs->as<double>();
        if (b_end_set) bsw.end = obe->as<double>();
        if (b_steps_set) bsw.steps = obn->as<int>();
        if (e_start_set) esw.start = oes->as<double>();
        if (e_end_set) esw.end = oee->as<double>();
        if (e_steps_set) esw.steps = oen->as<int>();
        if (!command_flag.empty()) cfg.command = command_flag;
        else if (!positional_command.empty() && cfg.command.empty())
            cfg.command = positional_command;
        if (!positional_command.empty() && !command_flag.empty()) {
            std::cerr << "error: command given both positionally and via --command\n";
            return 2;
        }

        // Defaults for an absent E sweep: the continuum window adjacent to
        // the chosen edge.
        if (esw.steps == 0) {
            if (cfg.continuum == "positive")
                esw = {1.0001 * cfg.m, 1.35 * cfg.m, 800};
            else
                esw = {-1.35 * cfg.m, -1.0001 * cfg.m, 800};
        }

        // Validation (exit 2, nothing written).
        const std::vector<std::string> known = {"spectrum", "critical", "phase",  "delay",
                                                "resonance", "norm",     "verify"};
        if (std::find(known.begin(), known.end(), cfg.command) == known.end()) {
            std::cerr << "error: unknown or missing command\n";
            return 2;
        }
        if (cfg.continuum != "negative" && cfg.continuum != "positive") {
            std::cerr << "error: --continuum must be negative or positive\n";
            return 2;
        }
        if (cfg.format != "csv" && cfg.format != "json") {
            std::cerr << "error: --format must be csv or json\n";
            return 2;
        }
        const bool needs_b_sweep = cfg.command == "spectrum" || cfg.command == "critical";
        const bool needs_e_sweep =
            cfg.command == "phase" || cfg.command == "delay" || cfg.command == "resonance";
        if (needs_b_sweep) {
            if (bsw.steps == 0 && cfg.command == "critical") bsw.steps = 64;
            if (!(bsw.steps >= 2) || !(bsw.start < bsw.end)) {
                std::cerr << "error: " << cfg.command
                          << " needs a valid B sweep (--B-start < --B-end, --B-steps >= 2)\n";
                return 2;
            }
            cfg.b_sweep = bsw;
        }
        if (needs_e_sweep) {
            if (!(esw.steps >= 2) || !(esw.start < esw.end)) {
                std::cerr << "error: " << cfg.command
                          << " needs a valid E sweep (--E-start < --E-end, --E-steps >= 2)\n";
                return 2;
            }
            cfg.e_sweep = esw;
        }
        if (cfg.command == "critical" && cfg.mode != "coalescence" && cfg.mode != "embedding") {
            std::cerr << "error: critical needs --mode coalescence|embedding\n";
            return 2;
        }
        try {
            (void)params_of(cfg);
        } catch (const DomainError& e) {
            std::cerr << "error: invalid parameters: " << e.what() << "\n";
            return 2;
        }

        if (cfg.command == "spectrum") return run_spectrum(cfg);
        if (cfg.command == "critical") return run_critical(cfg);
        if (cfg.command == "phase" || cfg.command == "delay") return run_phase(cfg);
        if (cfg.command == "resonance") return run_resonance(cfg);
        if (cfg.command == "norm") return run_norm(cfg);
        return run_verify(cfg);
    } catch (const Error& e) {
        std::cerr << "computational failure: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: bad config file: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "computational failure: " << e.what() << "\n";
        return 1;
    }
}
