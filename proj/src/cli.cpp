#include "qd/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qd/barrier.hpp"
#include "qd/decoder.hpp"
#include "qd/defects.hpp"
#include "qd/errors.hpp"
#include "qd/flow.hpp"
#include "qd/lattice.hpp"
#include "qd/masses.hpp"
#include "qd/multiset.hpp"
#include "qd/pauli.hpp"
#include "qd/thermal.hpp"

namespace qd {
namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw validation_error("cannot read file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& body) {
    std::string text = std::string("# qdtool ") + kToolVersion + "\n" + body;
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw validation_error("cannot write file '" + path + "'");
    out << text;
}

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

MassTable load_masses(const std::string& path, int d, int n_sites) {
    if (path.empty()) return uniform_masses(d, n_sites, 1.0);
    MassTable m = masses_from_json(read_file(path), n_sites);
    if (m.d != d)
        throw validation_error("mass table dimension does not match the lattice");
    return m;
}

PauliError load_error(const std::string& text, const std::string& file) {
    if (text.empty() == file.empty())
        throw validation_error("give exactly one of --error and --error-file");
    return parse_pauli(text.empty() ? read_file(file) : text);
}

std::vector<int> parse_int_csv(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stoi(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw validation_error("bad integer list '" + s + "'");
        }
    }
    if (out.empty())
        throw validation_error("empty integer list");
    return out;
}

std::vector<double> parse_double_csv(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw validation_error("bad number list '" + s + "'");
        }
    }
    if (out.empty())
        throw validation_error("empty number list");
    return out;
}

json ditvec_json(const DitVector& v) {
    return json(std::vector<int>(v.raw().begin(), v.raw().end()));
}

json syndrome_json(const Syndrome& s) {
    return json{{"a", ditvec_json(s.a)}, {"b", ditvec_json(s.b)}};
}

json cycle_json(const Cycle& c) {
    return json{{"weight", c.weight}, {"wind_x", c.wind_x}, {"wind_y", c.wind_y},
                {"sites", c.sites},   {"qudits", c.qudits}, {"dirs", c.dirs}};
}

json sector_json(const Decomposition& dec) {
    json cycles = json::array();
    for (const auto& c : dec.cycles) cycles.push_back(cycle_json(c));
    json harmonic = json::array();
    for (const auto& c : dec.harmonic) harmonic.push_back(cycle_json(c));
    json trees = json::array();
    for (const auto& t : dec.trees) {
        json simple = json::array();
        for (const auto& st : prune_tree(t, dec.d)) {
            json strings = json::array();
            for (const auto& s : st.strings)
                strings.push_back(json{{"leaf", s.leaf},
                                       {"charge", s.charge},
                                       {"sites", s.sites},
                                       {"qudits", s.qudits},
                                       {"dirs", s.dirs}});
            simple.push_back(json{
                {"root", st.root}, {"root_charge", st.root_charge}, {"strings", strings}});
        }
        trees.push_back(simple);
    }
    return json{{"cycles", cycles}, {"harmonic", harmonic}, {"simple_trees", trees}};
}

struct LatticeArgs {
    int lx = 0, ly = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--lx", lx, "torus width")->required();
        cmd->add_option("--ly", ly, "torus height")->required();
    }
};

int cmd_barrier(const LatticeArgs& la, const std::string& err_text, const std::string& err_file,
                const std::string& masses_path, const std::string& defects_path,
                bool with_profile, int brute_cap, const std::string& out_path) {
    PauliError p = load_error(err_text, err_file);
    TorusLattice lat = build_lattice(la.lx, la.ly, p.d());
    if (static_cast<int>(p.n_qudits()) != lat.n_qudits())
        throw validation_error("error length does not match the lattice");
    MassTable m = load_masses(masses_path, p.d(), lat.n_vertices());

    json out{{"d", p.d()}, {"lx", la.lx}, {"ly", la.ly}};
    MassTable effective = m;
    if (!defects_path.empty()) {
        DefectConfig cfg = defects_from_json(read_file(defects_path));
        if (cfg.d != p.d())
            throw validation_error("defect configuration dimension does not match the error");
        effective = twisted_masses(m, compile_defects(cfg, lat));
        out["twisted"] = true;
    }
    LocalErrorsPath path = schedule_path(p, lat, effective);
    double barrier = 0.0;
    for (double e : path.profile) barrier = std::max(barrier, e);

    out["j_max"] = effective.j_max();
    out["barrier"] = barrier;
    out["barrier_bound"] = 2.0 * effective.j_max();
    out["n_steps"] = path.steps.size();
    PathLengthStats ls = path_length_stats(p, lat, effective);
    out["path_length"] = ls.length;
    out["length_bound"] = ls.bound;
    if (with_profile) out["profile"] = path.profile;
    if (brute_cap > 0) out["brute_barrier"] = brute_force_barrier(p, lat, effective, brute_cap);
    write_output(out_path, out.dump(2) + "\n");
    return 0;
}

int cmd_decompose(const LatticeArgs& la, const std::string& err_text, const std::string& err_file,
                  bool raw, const std::string& out_path) {
    PauliError p = load_error(err_text, err_file);
    TorusLattice lat = build_lattice(la.lx, la.ly, p.d());
    if (static_cast<int>(p.n_qudits()) != lat.n_qudits())
        throw validation_error("error length does not match the lattice");
    auto [fz, fx] = error_to_flows(p, lat);
    Decomposition dz = decompose(fz, lat);
    Decomposition dx = decompose(fx, lat);
    if (!raw) {
        dz = merge_loops(dz, lat);
        dx = merge_loops(dx, lat);
    }
    json out{{"d", p.d()},          {"lx", la.lx},          {"ly", la.ly},
             {"merged", !raw},      {"z", sector_json(dz)}, {"x", sector_json(dx)}};
    write_output(out_path, out.dump(2) + "\n");
    return 0;
}

int cmd_multiset(int d, const std::string& elements, bool extremal, const std::string& out_path) {
    if (elements.empty() == !extremal)
        throw validation_error("give exactly one of --elements and --extremal");
    json out{{"d", d}};
    if (extremal) {
        ExtremalReport r = verify_extremal_theorems(d);
        out["max_cardinality"] = r.max_cardinality;
        out["max_sum"] = r.max_sum;
        out["cardinality_witness"] = r.cardinality_witness;
        out["sum_witness"] = r.sum_witness;
        out["multisets_scanned"] = r.multisets_scanned;
        out["cardinality_bound_ok"] = r.cardinality_bound_ok;
        out["sum_bound_ok"] = r.sum_bound_ok;
        out["all_cardinality_d_have_zero_sum"] = r.all_card_d_have_zero_sum;
    } else {
        Multiset f(d, parse_int_csv(elements));
        out["elements"] = f.elements();
        out["cardinality"] = f.cardinality();
        out["mod_sum"] = f.mod_sum();
        out["zero_sum_free"] = is_zero_sum_free(f);
        std::vector<int> sp;
        std::vector<bool> mask = spectrum(f);
        for (int r = 0; r < d; ++r)
            if (mask[r]) sp.push_back(r);
        out["spectrum"] = sp;
        auto witness = find_zero_sum_subset(f);
        out["min_zero_sum_subset"] = witness ? json(witness->elements()) : json(nullptr);
    }
    write_output(out_path, out.dump(2) + "\n");
    return 0;
}

int cmd_defects(const LatticeArgs& la, const std::string& config_path, int brown_variant,
                const std::string& err_text, const std::string& err_file, bool emit_config,
                const std::string& out_path) {
    if (config_path.empty() == (brown_variant < 0))
        throw validation_error("give exactly one of --config and --brown");
    DefectConfig cfg = config_path.empty() ? make_brown_config(la.lx, la.ly, brown_variant)
                                           : defects_from_json(read_file(config_path));
    TorusLattice lat = build_lattice(la.lx, la.ly, cfg.d);

    ConsistencyReport report = validate_consistency(cfg, lat);
    json out{{"d", cfg.d},
             {"lx", la.lx},
             {"ly", la.ly},
             {"consistent", report.ok},
             {"violations", report.violations}};
    if (emit_config) out["config"] = json::parse(defects_to_json(cfg));
    if (report.ok) {
        CompiledDefects cd = compile_defects(cfg, lat);
        out["mult_z"] = cd.mult_z;
        out["mult_x"] = cd.mult_x;
        out["label_z"] = cd.label_z;
        out["label_x"] = cd.label_x;
        if (!err_text.empty() || !err_file.empty()) {
            PauliError p = load_error(err_text, err_file);
            if (p.d() != cfg.d || static_cast<int>(p.n_qudits()) != lat.n_qudits())
                throw validation_error("error does not match the lattice and defect dimension");
            auto [local, global] = syndrome_with_defects(p, cd, lat);
            out["syndrome_free"] = syndrome_json(lat.syndrome(p));
            out["syndrome_local"] = syndrome_json(local);
            out["syndrome_global"] = syndrome_json(global);
            MassTable m = uniform_masses(cfg.d, lat.n_vertices(), 1.0);
            out["barrier"] = barrier_with_defects(p, cfg, lat, m);
        }
    }
    write_output(out_path, out.dump(2) + "\n");
    if (!report.ok)
        throw validation_error("inconsistent defect configuration");
    return 0;
}

struct SimArgs {
    int d = 2;
    double beta = 1.0;
    std::string model = "metropolis";
    int n_traj = 200;
    uint64_t seed = 1;
    double max_time = 0.0;
    int grid = 256;
    std::string decoder = "greedy";
    std::string masses_path;
    int threads = 0;
};

int cmd_simulate(const LatticeArgs& la, const SimArgs& sa, const std::string& out_path) {
    TorusLattice lat = build_lattice(la.lx, la.ly, sa.d);
    MassTable m = load_masses(sa.masses_path, sa.d, lat.n_vertices());
    RateModel rm{rate_kind_from_name(sa.model), sa.beta};
    auto dec = make_decoder(sa.decoder, lat);
    MemoryStats stats = memory_time_estimate(lat, m, rm, *dec, sa.n_traj, sa.seed, sa.max_time,
                                             sa.grid, sa.threads);
    json out{{"d", sa.d},
             {"lx", la.lx},
             {"ly", la.ly},
             {"beta", sa.beta},
             {"model", sa.model},
             {"decoder", sa.decoder},
             {"seed", sa.seed},
             {"max_time", sa.max_time},
             {"grid_points", sa.grid},
             {"n_traj", sa.n_traj},
             {"n_failed", stats.n_failed},
             {"median_t_fail", stats.median},
             {"q25", stats.q25},
             {"q75", stats.q75},
             {"fail_times", stats.fail_times}};
    write_output(out_path, out.dump(2) + "\n");
    return 0;
}

int cmd_gap(const LatticeArgs& la, int d, double beta, const std::string& model,
            const std::string& masses_path, const std::string& out_path) {
    TorusLattice lat = build_lattice(la.lx, la.ly, d);
    MassTable m = load_masses(masses_path, d, lat.n_vertices());
    RateModel rm{rate_kind_from_name(model), beta};
    GapResult g = exact_chain_gap(lat, m, rm);
    json out{{"d", d},
             {"lx", la.lx},
             {"ly", la.ly},
             {"beta", beta},
             {"model", model},
             {"gap", g.gap},
             {"stationarity_residual", g.stationarity_residual},
             {"gibbs_deviation", g.gibbs_deviation},
             {"dim", g.dim},
             {"n_sectors", g.n_sectors}};
    write_output(out_path, out.dump(2) + "\n");
    return 0;
}

int cmd_bound(const LatticeArgs& la, int d, double beta, const std::string& model,
              const std::string& masses_path, const std::string& out_path) {
    TorusLattice lat = build_lattice(la.lx, la.ly, d);
    MassTable m = load_masses(masses_path, d, lat.n_vertices());
    RateModel rm{rate_kind_from_name(model), beta};
    ArrheniusBound b = arrhenius_bound(lat, m, rm);
    json out{{"d", d},
             {"lx", la.lx},
             {"ly", la.ly},
             {"beta", beta},
             {"model", model},
             {"mu_hat", b.mu_hat},
             {"eps_hat", b.eps_hat},
             {"gamma_star", b.gamma_star},
             {"tau", b.tau},
             {"prefactor", b.prefactor},
             {"bound", b.value}};
    write_output(out_path, out.dump(2) + "\n");
    return 0;
}

int cmd_sweep(const LatticeArgs& la, const SimArgs& sa, const std::string& betas_csv,
              const std::string& max_times_csv, const std::string& out_path) {
    std::vector<double> betas = parse_double_csv(betas_csv);
    std::vector<double> max_times(betas.size(), sa.max_time);
    if (!max_times_csv.empty()) {
        max_times = parse_double_csv(max_times_csv);
        if (max_times.size() != betas.size())
            throw validation_error("--max-times must list one value per beta");
    }
    TorusLattice lat = build_lattice(la.lx, la.ly, sa.d);
    MassTable m = load_masses(sa.masses_path, sa.d, lat.n_vertices());
    auto dec = make_decoder(sa.decoder, lat);

    std::string body = "beta,median_t_fail,q25,q75,n_traj,bound_value\n";
    for (std::size_t i = 0; i < betas.size(); ++i) {
        RateModel rm{rate_kind_from_name(sa.model), betas[i]};
        MemoryStats stats = memory_time_estimate(lat, m, rm, *dec, sa.n_traj, sa.seed,
                                                 max_times[i], sa.grid, sa.threads);
        ArrheniusBound b = arrhenius_bound(lat, m, rm);
        body += fmt_double(betas[i]) + "," + fmt_double(stats.median) + "," +
                fmt_double(stats.q25) + "," + fmt_double(stats.q75) + "," +
                std::to_string(sa.n_traj) + "," + fmt_double(b.value) + "\n";
    }
    write_output(out_path, body);
    return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Abelian quantum double toolbox: energy barriers, flow decompositions,"
                 " defect lines and thermal memory simulation on the torus"};
    app.require_subcommand(1);
    int rc = 0;

    LatticeArgs bar_lat;
    std::string bar_err, bar_err_file, bar_masses, bar_defects, bar_out;
    bool bar_profile = false;
    int bar_brute_cap = 0;
    auto* barrier = app.add_subcommand("barrier", "scheduled path and its energy barrier");
    bar_lat.attach(barrier);
    barrier->add_option("--error", bar_err, "error text d=..;Z=..;X=..");
    barrier->add_option("--error-file", bar_err_file, "file with the error text");
    barrier->add_option("--masses", bar_masses, "mass table JSON file");
    barrier->add_option("--defects", bar_defects, "defect configuration JSON file");
    barrier->add_flag("--profile", bar_profile, "include the full energy profile");
    barrier->add_option("--brute-cap", bar_brute_cap,
                        "also run the exact bottleneck search on at most this many qudits");
    barrier->add_option("-o,--output", bar_out, "output file (default stdout)");
    barrier->callback([&] {
        rc = cmd_barrier(bar_lat, bar_err, bar_err_file, bar_masses, bar_defects, bar_profile,
                         bar_brute_cap, bar_out);
    });

    LatticeArgs dec_lat;
    std::string dec_err, dec_err_file, dec_out;
    bool dec_raw = false;
    auto* decompose_cmd = app.add_subcommand("decompose", "cycle / tree flow decomposition");
    dec_lat.attach(decompose_cmd);
    decompose_cmd->add_option("--error", dec_err, "error text d=..;Z=..;X=..");
    decompose_cmd->add_option("--error-file", dec_err_file, "file with the error text");
    decompose_cmd->add_flag("--raw", dec_raw, "skip the loop merging pass");
    decompose_cmd->add_option("-o,--output", dec_out, "output file (default stdout)");
    decompose_cmd->callback([&] { rc = cmd_decompose(dec_lat, dec_err, dec_err_file, dec_raw, dec_out); });

    int ms_d = 0;
    std::string ms_elements, ms_out;
    bool ms_extremal = false;
    auto* multiset_cmd = app.add_subcommand("multiset", "zero-sum structure of residue multisets");
    multiset_cmd->add_option("-d,--d", ms_d, "modulus")->required();
    multiset_cmd->add_option("--elements", ms_elements, "comma separated residues");
    multiset_cmd->add_flag("--extremal", ms_extremal, "scan all multisets up to cardinality d");
    multiset_cmd->add_option("-o,--output", ms_out, "output file (default stdout)");
    multiset_cmd->callback([&] { rc = cmd_multiset(ms_d, ms_elements, ms_extremal, ms_out); });

    LatticeArgs def_lat;
    std::string def_config, def_err, def_err_file, def_out;
    int def_brown = -1;
    bool def_emit = false;
    auto* defects_cmd = app.add_subcommand("defects", "validate and apply defect line configurations");
    def_lat.attach(defects_cmd);
    defects_cmd->add_option("--config", def_config, "defect configuration JSON file");
    defects_cmd->add_option("--brown", def_brown, "built-in Z5 configuration variant (0 or 1)");
    defects_cmd->add_option("--error", def_err, "error text to transform");
    defects_cmd->add_option("--error-file", def_err_file, "file with the error text");
    defects_cmd->add_flag("--emit-config", def_emit, "include the configuration JSON");
    defects_cmd->add_option("-o,--output", def_out, "output file (default stdout)");
    defects_cmd->callback([&] {
        rc = cmd_defects(def_lat, def_config, def_brown, def_err, def_err_file, def_emit, def_out);
    });

    LatticeArgs sim_lat;
    SimArgs sim;
    std::string sim_out;
    auto* simulate_cmd = app.add_subcommand("simulate", "kinetic Monte Carlo memory time estimate");
    sim_lat.attach(simulate_cmd);
    simulate_cmd->add_option("-d,--d", sim.d, "qudit dimension")->required();
    simulate_cmd->add_option("--beta", sim.beta, "inverse temperature")->required();
    simulate_cmd->add_option("--model", sim.model, "metropolis or glauber");
    simulate_cmd->add_option("--n-traj", sim.n_traj, "number of trajectories");
    simulate_cmd->add_option("--seed", sim.seed, "RNG seed");
    simulate_cmd->add_option("--max-time", sim.max_time, "censoring time")->required();
    simulate_cmd->add_option("--grid", sim.grid, "decode grid points");
    simulate_cmd->add_option("--decoder", sim.decoder, "greedy or brute");
    simulate_cmd->add_option("--masses", sim.masses_path, "mass table JSON file");
    simulate_cmd->add_option("--threads", sim.threads, "worker threads (default QD_THREADS)");
    simulate_cmd->add_option("-o,--output", sim_out, "output file (default stdout)");
    simulate_cmd->callback([&] { rc = cmd_simulate(sim_lat, sim, sim_out); });

    LatticeArgs gap_lat;
    int gap_d = 2;
    double gap_beta = 1.0;
    std::string gap_model = "metropolis", gap_masses, gap_out;
    auto* gap_cmd = app.add_subcommand("gap", "exact spectral gap of the dissipative chain");
    gap_lat.attach(gap_cmd);
    gap_cmd->add_option("-d,--d", gap_d, "qudit dimension")->required();
    gap_cmd->add_option("--beta", gap_beta, "inverse temperature")->required();
    gap_cmd->add_option("--model", gap_model, "metropolis or glauber");
    gap_cmd->add_option("--masses", gap_masses, "mass table JSON file");
    gap_cmd->add_option("-o,--output", gap_out, "output file (default stdout)");
    gap_cmd->callback([&] { rc = cmd_gap(gap_lat, gap_d, gap_beta, gap_model, gap_masses, gap_out); });

    LatticeArgs bnd_lat;
    int bnd_d = 2;
    double bnd_beta = 1.0;
    std::string bnd_model = "metropolis", bnd_masses, bnd_out;
    auto* bound_cmd = app.add_subcommand("bound", "Arrhenius style relaxation time bound");
    bnd_lat.attach(bound_cmd);
    bound_cmd->add_option("-d,--d", bnd_d, "qudit dimension")->required();
    bound_cmd->add_option("--beta", bnd_beta, "inverse temperature")->required();
    bound_cmd->add_option("--model", bnd_model, "metropolis or glauber");
    bound_cmd->add_option("--masses", bnd_masses, "mass table JSON file");
    bound_cmd->add_option("-o,--output", bnd_out, "output file (default stdout)");
    bound_cmd->callback([&] { rc = cmd_bound(bnd_lat, bnd_d, bnd_beta, bnd_model, bnd_masses, bnd_out); });

    LatticeArgs sw_lat;
    SimArgs sw;
    std::string sw_betas, sw_max_times, sw_out;
    auto* sweep_cmd = app.add_subcommand("sweep", "memory time vs bound across temperatures (CSV)");
    sw_lat.attach(sweep_cmd);
    sweep_cmd->add_option("-d,--d", sw.d, "qudit dimension")->required();
    sweep_cmd->add_option("--betas", sw_betas, "comma separated inverse temperatures")->required();
    sweep_cmd->add_option("--model", sw.model, "metropolis or glauber");
    sweep_cmd->add_option("--n-traj", sw.n_traj, "trajectories per temperature");
    sweep_cmd->add_option("--seed", sw.seed, "RNG seed");
    sweep_cmd->add_option("--max-time", sw.max_time, "censoring time")->required();
    sweep_cmd->add_option("--max-times", sw_max_times, "per-beta censoring times");
    sweep_cmd->add_option("--grid", sw.grid, "decode grid points");
    sweep_cmd->add_option("--decoder", sw.decoder, "greedy or brute");
    sweep_cmd->add_option("--masses", sw.masses_path, "mass table JSON file");
    sweep_cmd->add_option("--threads", sw.threads, "worker threads (default QD_THREADS)");
    sweep_cmd->add_option("-o,--output", sw_out, "output file (default summary.csv)");
    sweep_cmd->callback([&] {
        rc = cmd_sweep(sw_lat, sw, sw_betas, sw_max_times,
                       sw_out.empty() ? std::string("summary.csv") : sw_out);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int cli_rc = app.exit(e);
        return cli_rc == 0 ? 0 : 64;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const size_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return rc;
}

}  // namespace qd
