#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "owcpark/config.hpp"
#include "owcpark/control.hpp"
#include "owcpark/io.hpp"
#include "owcpark/layout.hpp"

namespace owc::cli {

constexpr const char* version = "0.1.0";

struct Args {
    std::filesystem::path config;
    std::filesystem::path out = ".";
    std::vector<std::uint64_t> seeds;
    std::string model = "linear";
};

ModelKind model_kind(const std::string& name) {
    if (name == "linear") return ModelKind::linear;
    if (name == "nonlinear") return ModelKind::nonlinear;
    throw ConfigError("model must be linear or nonlinear");
}

MonochromaticWave config_wave(const Config& cfg) {
    if (cfg.has("wave.tp"))
        throw ConfigError("peak period T_p does not determine the energy flux; provide wave.te");
    const SeaState sea(cfg.get_double("wave.hs"), cfg.get_double("wave.te"));
    return equivalent_monochromatic(sea, cfg.get_double("wave.direction", 0.0));
}

DuctGeometry config_duct(const Config& cfg) {
    const std::string kind = cfg.get_string("device.kind", "constant");
    if (kind == "constant") {
        const double draft = cfg.get_double("device.draft");
        return DuctGeometry::uniform_column(cfg.get_double("device.radius"), draft,
                                            cfg.get_double("device.freeboard", 2.0),
                                            cfg.get_double("device.turbine_z", -0.6 * draft));
    }
    if (kind == "profile") {
        std::vector<std::pair<double, double>> pts = cfg.get_points("device.breakpoints");
        return DuctGeometry(std::move(pts), cfg.get_double("device.turbine_z"));
    }
    throw ConfigError("device.kind must be constant or profile");
}

TurbineSpec config_turbine(const Config& cfg) {
    return TurbineSpec::make(cfg.get_double("turbine.tip_radius"),
                             cfg.get_double("turbine.hub_radius"),
                             cfg.get_double("turbine.chord"), cfg.get_int("turbine.blades"),
                             cfg.get_double("turbine.duct_radius"),
                             cfg.get_double("turbine.omega_min", 2.0),
                             cfg.get_double("turbine.omega_max", 80.0));
}

Device config_device(const Config& cfg) {
    return Device{config_duct(cfg), config_turbine(cfg),
                  load_turbine_curves(cfg.get_path("turbine.curves"),
                                      cfg.get_double("turbine.fit_tol", 1e-3)),
                  load_cavitation_table(cfg.get_path("turbine.cavitation"))};
}

void write_run_meta(const Args& args, const Config& cfg, const std::string& command) {
    nlohmann::json j;
    j["command"] = command;
    j["version"] = version;
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(cfg.content_hash()));
    j["config_hash"] = hash;
    j["seeds"] = args.seeds;
    j["model"] = args.model;
    std::ofstream out(args.out / "run_meta.json");
    out << j.dump(1) << "\n";
}

double pick_omega_t(const Config& cfg, const Device& dev, const HydroCoefficients& hydro,
                    const PhysicalConstants& pc) {
    if (cfg.has("sim.omega_t")) return cfg.get_double("sim.omega_t");
    const SeaState sea(cfg.get_double("wave.hs"), cfg.get_double("wave.te"));
    return optimize_rotation_speed(sea, dev, hydro, ModelKind::linear, pc).omega_t;
}

int cmd_device_sim(const Args& args) {
    const Config cfg = Config::load(args.config);
    const PhysicalConstants pc;
    const Device dev = config_device(cfg);
    const auto hydro = load_hydro_coefficients(cfg.get_path("hydro.file"));
    const MonochromaticWave wave = config_wave(cfg);
    const double omega_t = pick_omega_t(cfg, dev, hydro, pc);

    const auto ts = integrate_nonlinear(dev, hydro, wave, omega_t,
                                        cfg.get_int("sim.periods", 16),
                                        cfg.get_int("sim.samples_per_period", 256), pc);
    std::filesystem::create_directories(args.out);
    write_time_series(args.out / "series.csv", ts);

    // positive-power episodes in the trailing period
    const int spp = cfg.get_int("sim.samples_per_period", 256);
    const int last = static_cast<int>(ts.t.size()) - 1;
    int episodes = 0;
    for (int i = last - spp + 1; i <= last; ++i)
        if (ts.power(i - 1) <= 0 && ts.power(i) > 0) ++episodes;

    nlohmann::json summary;
    summary["omega_t"] = omega_t;
    summary["mean_power"] = ts.mean_power;
    summary["mean_hydraulic_power"] = ts.mean_hydraulic_power;
    summary["zeta_min"] = ts.zeta_min;
    summary["zeta_max"] = ts.zeta_max;
    summary["p_min"] = ts.pmin_min;
    summary["power_maxima_per_period"] = episodes;
    summary["flags"] = flags_to_string(ts.flags);
    std::ofstream(args.out / "summary.json") << summary.dump(1) << "\n";
    write_run_meta(args, cfg, "device-sim");
    return 0;
}

void write_matrix_files(const std::filesystem::path& out_dir, const std::string& model,
                        const PowerMatrix& pm) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < pm.hs.size(); ++i) {
        for (std::size_t j = 0; j < pm.te.size(); ++j) {
            const auto& c = pm.at(i, j);
            rows.push_back({pm.hs[i], pm.te[j], c.omega_t, c.power, c.hydraulic_power, c.zeta_min,
                            c.zeta_max, c.p_min, c.cwr,
                            static_cast<double>(static_cast<std::uint32_t>(c.flags))});
        }
    }
    write_csv(out_dir / ("power_matrix_" + model + ".csv"),
              {"flags bitmask: 1 cavitation, 2 uncovered, 4 overflow, 8 clamped, 16 validity, 32 solver"},
              {"Hs", "Te", "omega_t", "P", "Phyd", "zeta_min", "zeta_max", "p_min", "CWR", "flags"},
              rows);

    // heatmap plot data: one row per Hs, one power column per Te
    std::vector<std::string> header{"Hs"};
    for (double te : pm.te) header.push_back("P_Te" + format_full(te));
    std::vector<std::vector<double>> grid;
    for (std::size_t i = 0; i < pm.hs.size(); ++i) {
        std::vector<double> row{pm.hs[i]};
        for (std::size_t j = 0; j < pm.te.size(); ++j) row.push_back(pm.at(i, j).power);
        grid.push_back(row);
    }
    write_csv(out_dir / ("heatmap_" + model + ".csv"), {}, header, grid);
}

int cmd_power_matrix(const Args& args) {
    const Config cfg = Config::load(args.config);
    const PhysicalConstants pc;
    const Device dev = config_device(cfg);
    const auto hydro = load_hydro_coefficients(cfg.get_path("hydro.file"));
    const auto hs = cfg.get_grid("matrix.hs");
    const auto te = cfg.get_grid("matrix.te");

    std::filesystem::create_directories(args.out);
    const std::vector<std::string> models =
        args.model == "both" ? std::vector<std::string>{"linear", "nonlinear"}
                             : std::vector<std::string>{args.model};
    for (const auto& m : models) {
        const PowerMatrix pm = build_power_matrix(hs, te, dev, hydro, model_kind(m), pc);
        for (const auto& err : pm.errors)
            if (!err.empty()) std::cerr << "power-matrix cell failure: " << err << "\n";
        write_matrix_files(args.out, m, pm);
    }
    write_run_meta(args, cfg, "power-matrix");
    return 0;
}

int cmd_dim_sweep(const Args& args) {
    const Config cfg = Config::load(args.config);
    const PhysicalConstants pc;
    DimensionStudyConfig dims;
    dims.radius = cfg.get_grid("sweep.radius");
    dims.draft = cfg.get_grid("sweep.draft");
    dims.base_turbine = config_turbine(cfg);
    dims.base_radius = cfg.get_double("device.radius");
    const auto curves = load_turbine_curves(cfg.get_path("turbine.curves"),
                                            cfg.get_double("turbine.fit_tol", 1e-3));
    const auto cav = load_cavitation_table(cfg.get_path("turbine.cavitation"));
    const auto scatter = load_scatter_diagram(cfg.get_path("sweep.scatter"));

    std::filesystem::create_directories(args.out);
    for (const bool constrained : {false, true}) {
        dims.constrained = constrained;
        const auto res = dimension_sweep(dims, scatter, curves, cav, pc);
        std::vector<std::vector<double>> rows;
        for (Eigen::Index i = 0; i < res.annual.rows(); ++i)
            for (Eigen::Index j = 0; j < res.annual.cols(); ++j)
                rows.push_back({res.radius[static_cast<std::size_t>(i)],
                                res.draft[static_cast<std::size_t>(j)], res.annual(i, j),
                                res.linear_density(i, j), res.surface_density(i, j),
                                static_cast<double>(static_cast<std::uint32_t>(
                                    res.flags[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]))});
        write_csv(args.out / (constrained ? "sweep_constrained.csv" : "sweep_unconstrained.csv"),
                  {}, {"r", "d", "annualP", "linear_density", "surface_density", "flags"}, rows);
    }
    write_run_meta(args, cfg, "dim-sweep");
    return 0;
}

struct ParkSetup {
    MonochromaticWave wave;
    double omega_t = 0.0;
    Vec p_coeffs;
    std::vector<Vec2> pile_positions;
    LayoutDomain domain;
    ParkLayoutProblem problem;

    ParkSetup(const MonochromaticWave& w, LayoutDomain dom) : wave(w), domain(std::move(dom)) {}
};

ParkSetup make_park_setup(const Config& cfg, const PhysicalConstants& pc) {
    const Device dev = config_device(cfg);
    const auto hydro = load_hydro_coefficients(cfg.get_path("hydro.file"));
    const MonochromaticWave wave = config_wave(cfg);
    const double omega = wave.omega();
    const double omega_t = pick_omega_t(cfg, dev, hydro, pc);
    const int order = cfg.get_int("park.order", 6);
    const double k = dispersion_wavenumber(omega, wave.depth, pc);
    const double d_min = cfg.get_double("park.d_min", 1.6);

    const BodyHydro body = BodyHydro::synthetic_device(
        order, dev.duct.max_radius(), k, dev.duct.surface_section(),
        dev.duct.column_inertia(0.0), linear_damping_lambda(omega_t, dev.turbine, dev.curves),
        omega, hydro.added_mass(omega), hydro.damping(omega), hydro.excitation(omega, 1.0), pc);

    std::vector<Vec2> piles;
    BodyHydro pile_body;
    LayoutDomain domain = make_triangle(cfg.get_double("park.edge", 50.0), d_min);
    if (cfg.has("park.piles") && cfg.get_string("park.piles") != "none") {
        for (const auto& [x, y] : cfg.get_points("park.piles")) piles.emplace_back(x, y);
        const double pile_radius = cfg.get_double("park.pile_radius", 5.0);
        pile_body = make_pile(order, pile_radius, k, pc);
        domain = build_truncated_triangle(
            piles, pile_radius, cfg.get_double("park.device_radius", dev.duct.max_radius()),
            d_min);
    }

    ParkSetup setup(wave, std::move(domain));
    setup.omega_t = omega_t;
    setup.p_coeffs =
        mean_power_coefficients(dev.turbine, dev.curves, omega_t, dev.duct.surface_section());
    setup.pile_positions = piles;
    setup.problem.omega = omega;
    setup.problem.p_coeffs = setup.p_coeffs;
    setup.problem.build = [body, pile_body, piles, wave, pc](const Mat2X& pos) {
        ParkProblem p{{}, {}, wave, pc};
        for (Eigen::Index i = 0; i < pos.cols(); ++i) {
            p.positions.push_back(pos.col(i));
            p.bodies.push_back(body);
        }
        for (const auto& x : piles) {
            p.positions.push_back(x);
            p.bodies.push_back(pile_body);
        }
        return p;
    };
    return setup;
}

LayoutRecord make_record(const ParkSetup& setup, const Config& cfg, std::uint64_t seed,
                         const Mat2X& positions, const OptimizerTrace& trace) {
    const ParkProblem p = setup.problem.build(positions);
    const ParkState state = solve_park(p);
    const ParkPower power = park_power(state, p, setup.p_coeffs, setup.problem.omega);
    LayoutRecord rec;
    rec.seed = seed;
    rec.domain_vertices = setup.domain.vertices();
    rec.d_min = setup.domain.min_distance();
    rec.positions = positions;
    rec.per_device_power = power.per_device.head(positions.cols());
    rec.total_power = power.total;
    rec.omega_t = setup.omega_t;
    rec.hs = cfg.get_double("wave.hs");
    rec.te = cfg.get_double("wave.te");
    rec.direction = cfg.get_double("wave.direction", 0.0);
    rec.trace = trace;
    return rec;
}

void write_histogram(const std::filesystem::path& path, const Vec& values, double lo, double hi,
                     int bins) {
    std::vector<std::vector<double>> rows;
    const double width = (hi - lo) / bins;
    for (int b = 0; b < bins; ++b) {
        int count = 0;
        for (Eigen::Index i = 0; i < values.size(); ++i) {
            const double v = values(i);
            const bool in =
                v >= lo + b * width && (b + 1 == bins ? v <= hi : v < lo + (b + 1) * width);
            if (in) ++count;
        }
        rows.push_back({lo + b * width, lo + (b + 1) * width, static_cast<double>(count)});
    }
    write_csv(path, {}, {"bin_lo", "bin_hi", "count"}, rows);
}

int cmd_park_opt(Args args) {
    const Config cfg = Config::load(args.config);
    const PhysicalConstants pc;
    const ParkSetup setup = make_park_setup(cfg, pc);
    const int n_dev = cfg.get_int("park.devices");

    if (args.seeds.empty()) {
        const int n = cfg.get_int("park.randoms", 10);
        for (int s = 1; s <= n; ++s) args.seeds.push_back(static_cast<std::uint64_t>(s));
    }

    std::filesystem::create_directories(args.out);

    std::vector<std::pair<std::uint64_t, Mat2X>> randoms;
    std::vector<std::vector<double>> random_rows;
    double best_cost = std::numeric_limits<double>::infinity();
    double worst_cost = -std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0, worst_idx = 0;
    for (std::size_t i = 0; i < args.seeds.size(); ++i) {
        const Mat2X x = sample_random_layout(setup.domain, n_dev, args.seeds[i]);
        const double cost = setup.problem.cost(x);
        randoms.emplace_back(args.seeds[i], x);
        random_rows.push_back({static_cast<double>(args.seeds[i]), -cost});
        if (cost < best_cost) { best_cost = cost; best_idx = i; }
        if (cost > worst_cost) { worst_cost = cost; worst_idx = i; }
    }
    write_csv(args.out / "randoms.csv", {}, {"seed", "total_power"}, random_rows);

    OptimizerConfig ocfg;
    ocfg.step = cfg.get_double("opt.step", 0.0);
    ocfg.armijo = cfg.get_double("opt.armijo", 1e-4);
    ocfg.shrink = cfg.get_double("opt.shrink", 0.5);
    ocfg.tol = cfg.get_double("opt.tol", 1e-3);
    ocfg.maxit = cfg.get_int("opt.maxit", 200);
    const auto result =
        optimize_layout(randoms[best_idx].second, setup.problem, setup.domain, ocfg);

    save_layout_record(
        args.out / "layout_worst.json",
        make_record(setup, cfg, randoms[worst_idx].first, randoms[worst_idx].second, {}));
    save_layout_record(
        args.out / "layout_best.json",
        make_record(setup, cfg, randoms[best_idx].first, randoms[best_idx].second, {}));
    const LayoutRecord opt_rec =
        make_record(setup, cfg, randoms[best_idx].first, result.positions, result.trace);
    save_layout_record(args.out / "layout_optimized.json", opt_rec);

    // optimized park in the plain layout format, piles included
    std::vector<ParkLayoutEntry> entries;
    for (Eigen::Index i = 0; i < result.positions.cols(); ++i)
        entries.push_back({result.positions(0, i), result.positions(1, i), false});
    for (const auto& p : setup.pile_positions) entries.push_back({p.x(), p.y(), true});
    save_park_layout(args.out / "park_optimized.json", entries);

    std::vector<std::vector<double>> trace_rows;
    for (std::size_t k = 1; k < result.trace.cost.size(); ++k)
        trace_rows.push_back({static_cast<double>(k), result.trace.cost[k],
                              result.trace.grad_norm[k - 1], result.trace.step_scale[k - 1],
                              static_cast<double>(result.trace.backtracks[k - 1]),
                              static_cast<double>(result.trace.overlap_shrinks[k - 1])});
    write_csv(args.out / "trace.csv", {},
              {"iter", "cost", "grad_norm", "step_scale", "backtracks", "overlap_shrinks"},
              trace_rows);

    // per-device histograms with shared bins covering all three layouts
    const LayoutRecord worst_rec = load_layout_record(args.out / "layout_worst.json");
    const LayoutRecord best_rec = load_layout_record(args.out / "layout_best.json");
    double lo = opt_rec.per_device_power.minCoeff();
    double hi = opt_rec.per_device_power.maxCoeff();
    lo = std::min({lo, worst_rec.per_device_power.minCoeff(),
                   best_rec.per_device_power.minCoeff()});
    hi = std::max({hi, worst_rec.per_device_power.maxCoeff(),
                   best_rec.per_device_power.maxCoeff()});
    write_histogram(args.out / "hist_worst.csv", worst_rec.per_device_power, lo, hi, 12);
    write_histogram(args.out / "hist_best.csv", best_rec.per_device_power, lo, hi, 12);
    write_histogram(args.out / "hist_optimized.csv", opt_rec.per_device_power, lo, hi, 12);

    write_run_meta(args, cfg, "park-opt");
    std::cout << "best random " << -best_cost << " W, optimized " << -result.cost << " W\n";
    return 0;
}

int cmd_park_verify(const Args& args) {
    const Config cfg = Config::load(args.config);
    const PhysicalConstants pc;
    const Device dev = config_device(cfg);

    std::filesystem::create_directories(args.out);
    std::vector<std::filesystem::path> layout_paths;
    std::istringstream is(cfg.get_string("verify.layouts", ""));
    std::string item;
    while (std::getline(is, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        const auto e = item.find_last_not_of(" \t");
        std::filesystem::path p = item.substr(b, e - b + 1);
        layout_paths.push_back(p.is_absolute() ? p : cfg.directory() / p);
    }

    const int periods = cfg.get_int("verify.periods", 8);
    std::vector<std::vector<double>> rows;
    double base_linear = 0.0, base_nonlinear = 0.0;
    int index = 0;
    for (const auto& path : layout_paths) {
        const LayoutRecord rec = load_layout_record(path);
        // same park construction as park-opt, at the recorded positions
        const ParkSetup setup = make_park_setup(cfg, pc);
        const ParkProblem problem = setup.problem.build(rec.positions);
        const ParkState state = solve_park(problem);
        const double linear_total =
            park_power(state, problem, setup.p_coeffs, setup.problem.omega).total;

        InteractionMatrices im;
        if (cfg.has("verify.interaction_file"))
            im = load_interaction_matrices(cfg.get_path("verify.interaction_file"));
        else
            im = extract_interaction(problem);
        const auto tv = timedomain_verify(im, dev, setup.wave, setup.omega_t, periods);

        if (index == 0) {
            base_linear = linear_total;
            base_nonlinear = tv.total;
        }
        rows.push_back({static_cast<double>(index), linear_total, tv.total,
                        tv.total / linear_total, linear_total - base_linear,
                        tv.total - base_nonlinear});
        ++index;
    }
    write_csv(args.out / "verify.csv", {},
              {"layout", "linear_P", "nonlinear_P", "ratio", "linear_gain", "nonlinear_gain"},
              rows);
    write_run_meta(args, cfg, "park-verify");
    return 0;
}

int dispatch(const std::string& command, const Args& args) {
    if (command == "device-sim") return cmd_device_sim(args);
    if (command == "power-matrix") return cmd_power_matrix(args);
    if (command == "dim-sweep") return cmd_dim_sweep(args);
    if (command == "park-opt") return cmd_park_opt(args);
    if (command == "park-verify") return cmd_park_verify(args);
    throw ConfigError("unknown command " + command);
}

} // namespace owc::cli

int main(int argc, char** argv) {
    CLI::App app{"OWC wave-energy converter park modeling and layout optimization"};
    app.require_subcommand(1);

    owc::cli::Args args;
    std::string seed_list;
    for (const char* name : {"device-sim", "power-matrix", "dim-sweep", "park-opt", "park-verify"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", args.config, "configuration file")->required();
        sub->add_option("--out", args.out, "output directory");
        sub->add_option("--seed", seed_list, "comma-separated seed list");
        sub->add_option("--model", args.model, "linear | nonlinear | both");
    }

    CLI11_PARSE(app, argc, argv);

    if (!seed_list.empty()) {
        std::istringstream is(seed_list);
        std::string item;
        while (std::getline(is, item, ',')) {
            try {
                args.seeds.push_back(std::stoull(item));
            } catch (const std::exception&) {
                std::cerr << "error: bad seed '" << item << "'\n";
                return 2;
            }
        }
    }

    try {
        return owc::cli::dispatch(app.get_subcommands().front()->get_name(), args);
    } catch (const owc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const owc::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
