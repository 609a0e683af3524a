// Command-line front end: persistence diagrams of point clouds, bottleneck
// distances, privatized diagrams, sensitivity checks, and simulation sweeps.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dptda/experiments.hpp"
#include "dptda/io.hpp"
#include "dptda/mechanism.hpp"
#include "dptda/metric.hpp"
#include "dptda/pipeline.hpp"
#include "dptda/sensitivity.hpp"

namespace {

using namespace dptda;

struct DiagramArgs {
    std::string input, out;
    std::string pipeline = "dtm";
    std::string convention = "radius";
    double p = 1.0;
    double m = 0.2;
    std::size_t grid = 0;
    double max_scale = 3.0;
    int ell = 1;
    std::optional<double> diam;
};

int cmd_diagram(const DiagramArgs& args) {
    const PointCloud cloud = read_points_csv(args.input);
    if (args.pipeline == "rips") {
        const double scale_factor = args.convention == "diameter" ? 2.0 : 1.0;
        RipsPipelineOptions options;
        options.max_scale = args.max_scale / scale_factor;
        options.ell = args.ell;
        PipelineOutput out = rips_pipeline(cloud, options);
        if (scale_factor != 1.0) {
            for (auto& diagram : out.diagrams.diagrams)
                for (auto& pair : diagram.pairs) {
                    pair.birth *= scale_factor;
                    if (!pair.essential()) pair.death *= scale_factor;
                }
            out.cap *= scale_factor;
        }
        write_diagram_json(args.out, out.diagrams, out.cap);
    } else if (args.pipeline == "dtm") {
        DtmPipelineOptions options;
        options.dtm = DtmParams{args.m, args.p};
        options.ell = args.ell;
        options.grid_points = args.grid;
        const PipelineOutput out = dtm_pipeline(cloud, options);
        write_diagram_json(args.out, out.diagrams, out.cap);
    } else {
        throw std::invalid_argument("unknown pipeline '" + args.pipeline + "'");
    }
    return 0;
}

struct BottleneckArgs {
    std::string a, b;
    bool keep_essential = false;
};

int cmd_bottleneck(const BottleneckArgs& args) {
    auto [ta, cap_a] = read_diagram_json(args.a);
    auto [tb, cap_b] = read_diagram_json(args.b);
    const double cap = std::max(cap_a, cap_b);
    if (!args.keep_essential) {
        ta = drop_h0_essential(ta);
        tb = drop_h0_essential(tb);
    }
    std::vector<double> per_dim;
    const double total = tuple_bottleneck(ta, tb, cap, per_dim);
    nlohmann::ordered_json doc;
    doc["per_dim"] = per_dim;
    doc["total"] = total;
    std::cout << doc.dump(2) << '\n';
    return 0;
}

struct PrivatizeArgs {
    std::string input, out, trace;
    double epsilon = 1.0;
    double m = 0.2;
    double p = 1.0;
    std::size_t big_m = 5;
    int ell = 1;
    std::size_t iters = 10000;
    double sigma = 0.0;
    std::uint64_t seed = 1;
    std::size_t grid = 0;
    std::size_t snap_grid = 0;
    bool keep_essential = false;
    std::optional<double> diam;
    std::optional<double> delta_override;
};

int cmd_privatize(const PrivatizeArgs& args) {
    if (!(args.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    const PointCloud cloud = read_points_csv(args.input);

    DtmPipelineOptions pipeline;
    pipeline.dtm = DtmParams{args.m, args.p};
    pipeline.ell = args.ell;
    pipeline.grid_points = args.grid;
    const PipelineOutput target = dtm_pipeline(cloud, pipeline);

    PrivacyParams params;
    params.epsilon = args.epsilon;
    params.m = args.m;
    params.n = cloud.size();
    params.max_points = args.big_m;
    params.ell = args.ell;
    params.diam_e = args.diam ? *args.diam : diameter(cloud);
    params.delta_override = args.delta_override;

    MechanismOptions options;
    options.snap_grid = args.snap_grid;
    options.keep_essential = args.keep_essential;

    const double sigma = args.sigma > 0.0 ? args.sigma : params.diam_e / 50.0;
    Rng rng(args.seed);
    auto [final_state, trace] =
        privatize(target.diagrams, params, args.iters, sigma, target.cap, rng, options);

    write_diagram_json(args.out, final_state, target.cap);
    if (!args.trace.empty()) write_trace_csv(args.trace, trace);

    nlohmann::ordered_json doc;
    doc["delta"] = params.delta();
    doc["sigma"] = sigma;
    doc["cap"] = target.cap;
    doc["final_utility"] = trace.rows.back().utility;
    doc["final_db_per_dim"] = trace.rows.back().db_per_dim;
    std::cout << doc.dump(2) << '\n';
    return 0;
}

struct SensitivityArgs {
    std::string construction = "prop5";
    std::size_t n = 100;
    double m = 0.2;
    double p = 1.0;
    std::size_t trials = 20;
    std::size_t k_hamming = 1;
    double diam = 1.0;
    std::uint64_t seed = 1;
    std::size_t empirical_trials = 0;
};

// Bottleneck distance between the diagrams of an adjacent pair under the
// matching pipeline, dim-0 essentials dropped from both sides.
double pair_distance(const AdjacentPair& pair, bool dtm_route, double m, double p,
                     double diam_e) {
    DiagramTuple da, db;
    if (dtm_route) {
        DtmPipelineOptions options;
        options.dtm = DtmParams{m, p};
        options.ell = 0;
        options.grid = construction_grid(diam_e);
        da = dtm_pipeline(pair.d, options).diagrams;
        db = dtm_pipeline(pair.d_prime, options).diagrams;
    } else {
        RipsPipelineOptions options;
        options.ell = 0;
        da = rips_pipeline(pair.d, options).diagrams;
        db = rips_pipeline(pair.d_prime, options).diagrams;
    }
    return tuple_bottleneck(drop_h0_essential(da), drop_h0_essential(db), kInfiniteDeath);
}

void print_check(const std::string& name, double observed, const std::string& relation,
                 double bound, bool pass) {
    nlohmann::ordered_json doc;
    doc["construction"] = name;
    doc["observed_db"] = observed;
    doc["relation"] = relation;
    doc["bound"] = bound;
    doc["result"] = pass ? "PASS" : "FAIL";
    std::cout << doc.dump(2) << '\n';
}

// Random-replacement lab on the construction's base cloud; for the DTM route
// the observed max must respect the diam E / (m^(1/p) n^(1/p)) bound.
int run_empirical(const SensitivityArgs& args, const PointCloud& base, bool dtm_route) {
    LabPipeline pipeline;
    pipeline.kind = dtm_route ? LabPipeline::Kind::dtm : LabPipeline::Kind::rips_h0;
    pipeline.dtm = DtmParams{args.m, args.p};
    pipeline.ell = dtm_route ? 1 : 0;
    Rng rng(Rng::mix(args.seed, 0xE311));
    const BaseSensitivityResult lab =
        empirical_base_sensitivity(base, args.empirical_trials, pipeline, rng);
    if (!dtm_route) {
        print_check("empirical-rips", lab.max_db, "<=", lab.diam_e, lab.max_db <= lab.diam_e);
        return lab.max_db <= lab.diam_e ? 0 : 1;
    }
    const double bound = lab.diam_e / (std::pow(args.m, 1.0 / args.p) *
                                       std::pow(static_cast<double>(base.size()), 1.0 / args.p));
    const bool pass = lab.max_db <= bound + 1e-9;
    print_check("empirical-dtm", lab.max_db, "<=", bound, pass);
    return pass ? 0 : 1;
}

int cmd_sensitivity(const SensitivityArgs& args) {
    constexpr double kTol = 1e-9;
    if (args.construction == "thm2") {
        const AdjacentPair pair = make_two_mass_pair(args.n, args.diam);
        const double db = pair_distance(pair, false, args.m, args.p, args.diam);
        const double bound = args.diam / 4.0;
        const bool pass = db >= bound - kTol;
        print_check("thm2", db, ">=", bound, pass);
        if (args.empirical_trials > 0) {
            const int code = run_empirical(args, pair.d, false);
            if (code != 0) return code;
        }
        return pass ? 0 : 1;
    }
    if (args.construction == "prop5") {
        const AdjacentPair pair = make_prop5_pair(args.n, args.m, args.diam);
        const double db = pair_distance(pair, true, args.m, 1.0, args.diam);
        const std::size_t k = DtmParams{args.m, 1.0}.k_for(args.n);
        const double bound = args.diam / (2.0 * static_cast<double>(k));
        const bool pass = std::abs(db - bound) <= kTol;
        print_check("prop5", db, "==", bound, pass);
        if (args.empirical_trials > 0) {
            const int code = run_empirical(args, pair.d, true);
            if (code != 0) return code;
        }
        return pass ? 0 : 1;
    }
    if (args.construction == "group") {
        const std::size_t k = DtmParams{args.m, 1.0}.k_for(args.n);
        if (args.k_hamming > k / 2 || args.k_hamming + k > args.n / 2)
            throw std::invalid_argument(
                "group: exact regime needs K <= k/2 and K <= n/2 - k");
        const AdjacentPair pair =
            make_group_pair(args.n, args.k_hamming, args.m, args.diam);
        const double db = pair_distance(pair, true, args.m, 1.0, args.diam);
        const double bound = static_cast<double>(args.k_hamming) /
                             static_cast<double>(k) * args.diam / 2.0;
        const bool pass = std::abs(db - bound) <= kTol;
        print_check("group", db, "==", bound, pass);
        return pass ? 0 : 1;
    }
    if (args.construction == "lemma1") {
        bool all_pass = true;
        for (std::size_t trial = 0; trial < std::max<std::size_t>(1, args.trials); ++trial) {
            Rng rng = Rng::stream(args.seed, trial);
            PointCloud cloud = generate_two_clusters(args.n > 2 ? args.n - 1 : 2, 1.0,
                                                     0.02, rng);
            cloud.push_back(cloud.point(0));  // duplicate donates its slot
            const AdjacentPair pair = make_lemma1_perturbation(cloud);

            RipsPipelineOptions rips;
            rips.ell = 0;
            const Diagram base =
                drop_h0_essential(rips_pipeline(pair.d, rips).diagrams.diagrams[0]);
            std::vector<double> deaths;
            for (const auto& p : base.pairs)
                if (!p.essential()) deaths.push_back(p.death);
            std::sort(deaths.begin(), deaths.end());
            deaths.erase(std::unique(deaths.begin(), deaths.end()), deaths.end());
            const double d_max = deaths.back();
            const double gap =
                deaths.size() >= 2 ? d_max - deaths[deaths.size() - 2] : d_max;
            const double bound = std::min(gap, d_max / 2.0);
            const double db = pair_distance(pair, false, args.m, args.p, args.diam);
            const bool pass = db >= bound - kTol;
            all_pass = all_pass && pass;
            print_check("lemma1[" + std::to_string(trial) + "]", db, ">=", bound, pass);
        }
        return all_pass ? 0 : 1;
    }
    throw std::invalid_argument("unknown construction '" + args.construction + "'");
}

struct SimulateArgs {
    std::string sweep = "epsilon";
    std::vector<double> values;
    std::size_t reps = 50;
    std::string out, svg;
    std::string dataset = "two-circle";
    double epsilon = 1.0;
    std::size_t n = 4000;
    double m = 0.2;
    std::size_t big_m = 5;
    int ell = 1;
    std::size_t iters = 2000;
    double sigma = 0.0;
    std::size_t grid = 0;
    std::uint64_t seed = 1;
};

int cmd_simulate(const SimulateArgs& args) {
    ExperimentConfig config;
    config.dataset = args.dataset;
    config.axis = args.sweep == "n" ? SweepAxis::n : SweepAxis::epsilon;
    config.values = args.values;
    config.replications = args.reps;
    config.epsilon = args.epsilon;
    config.n = args.n;
    config.m = args.m;
    config.max_points = args.big_m;
    config.ell = args.ell;
    config.iterations = args.iters;
    config.sigma = args.sigma;
    config.grid_points = args.grid;
    config.seed = args.seed;

    const SweepResult result = run_sweep(config);
    write_sweep_csv(args.out, result, args.sweep);
    if (!args.svg.empty()) write_sweep_svg(args.svg, result, args.sweep);

    nlohmann::ordered_json doc;
    doc["slope"] = result.log_log_slope;
    doc["summary"] = nlohmann::ordered_json::array();
    for (const auto& s : result.summary) {
        nlohmann::ordered_json row;
        row["value"] = s.axis_value;
        row["q025"] = s.q025;
        row["median"] = s.median;
        row["q975"] = s.q975;
        doc["summary"].push_back(row);
    }
    std::cout << doc.dump(2) << '\n';
    return 0;
}

struct WalkerArgs {
    std::string input, out, trace;
    std::size_t synthetic = 0;
    double epsilon = 1.0;
    double m = 0.05;
    std::size_t big_m = 5;
    std::size_t iters = 50000;
    double sigma = 0.0;
    std::size_t grid = 32;
    std::size_t subsample = 0;
    std::uint64_t seed = 1;
};

int cmd_walker(const WalkerArgs& args) {
    WalkerConfig config;
    config.epsilon = args.epsilon;
    config.m = args.m;
    config.max_points = args.big_m;
    config.iterations = args.iters;
    config.sigma = args.sigma;
    config.grid_points = args.grid;
    config.subsample = args.subsample;
    config.seed = args.seed;

    WalkerResult result;
    if (!args.input.empty()) {
        result = run_walker(args.input, config);
    } else if (args.synthetic > 0) {
        Rng rng(Rng::mix(args.seed, 0x77a1));
        result = run_walker(generate_corridor_walk(args.synthetic, rng), config);
    } else {
        throw std::invalid_argument("walker: provide --input or --synthetic N");
    }

    if (!args.out.empty()) write_diagram_json(args.out, result.private_tuple, result.cap);
    if (!args.trace.empty()) write_trace_csv(args.trace, result.trace);

    nlohmann::ordered_json doc;
    doc["final_db_per_dim"] = result.final_db;
    doc["cap"] = result.cap;
    std::cout << doc.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Differentially private persistence diagrams via DTM filtrations"};
    app.require_subcommand(1);

    DiagramArgs diagram_args;
    auto* diagram = app.add_subcommand("diagram", "Compute a persistence diagram");
    diagram->add_option("--input", diagram_args.input, "Point cloud CSV")->required();
    diagram->add_option("--pipeline", diagram_args.pipeline, "rips or dtm")
        ->check(CLI::IsMember({"rips", "dtm"}));
    diagram->add_option("--p", diagram_args.p, "DTM exponent")->check(CLI::IsMember({1.0, 2.0}));
    diagram->add_option("--m", diagram_args.m, "DTM resolution in (0,1)");
    diagram->add_option("--grid", diagram_args.grid, "Grid points per axis");
    diagram->add_option("--max-scale", diagram_args.max_scale, "Rips filtration cap");
    diagram->add_option("--ell", diagram_args.ell, "Max homology dimension");
    diagram->add_option("--scale-convention", diagram_args.convention,
                        "Rips scale convention: radius (default) or diameter")
        ->check(CLI::IsMember({"radius", "diameter"}));
    diagram->add_option("--out", diagram_args.out, "Output JSON")->required();

    BottleneckArgs bottleneck_args;
    auto* bn = app.add_subcommand("bottleneck", "Bottleneck distance between diagram files");
    bn->add_option("--a", bottleneck_args.a, "First diagram JSON")->required();
    bn->add_option("--b", bottleneck_args.b, "Second diagram JSON")->required();
    bn->add_flag("--keep-essential", bottleneck_args.keep_essential,
                 "Keep essential classes (capped) instead of dropping the dim-0 one");

    PrivatizeArgs privatize_args;
    auto* priv = app.add_subcommand("privatize", "Release a private diagram tuple");
    priv->add_option("--input", privatize_args.input, "Point cloud CSV")->required();
    priv->add_option("--epsilon", privatize_args.epsilon, "Privacy budget")->required();
    priv->add_option("--m", privatize_args.m, "DTM resolution");
    priv->add_option("--p", privatize_args.p, "DTM exponent (mechanism default 1)");
    priv->add_option("--big-m", privatize_args.big_m, "Max points per diagram (M)");
    priv->add_option("--ell", privatize_args.ell, "Max homology dimension");
    priv->add_option("--iters", privatize_args.iters, "MH iterations");
    priv->add_option("--sigma", privatize_args.sigma, "Proposal stddev (default diam/50)");
    priv->add_option("--seed", privatize_args.seed, "RNG seed");
    priv->add_option("--grid", privatize_args.grid, "Grid points per axis");
    priv->add_option("--snap-grid", privatize_args.snap_grid,
                     "Discretize the triangle to ~N points (theory mode)");
    priv->add_flag("--keep-essential", privatize_args.keep_essential,
                   "Keep the dim-0 essential class inside the utility");
    double diam_opt = 0.0, delta_opt = 0.0;
    priv->add_option("--diam", diam_opt,
                     "Public a-priori bound on diam E. The default uses the private "
                     "data's own diameter, which itself leaks; supply a public bound "
                     "when one is known.");
    priv->add_option("--delta-override", delta_opt, "Literal utility sensitivity Delta");
    priv->add_option("--trace", privatize_args.trace, "Trace CSV path");
    priv->add_option("--out", privatize_args.out, "Output private diagram JSON")->required();

    SensitivityArgs sens_args;
    auto* sens = app.add_subcommand("sensitivity-check",
                                    "Certify base-sensitivity constructions against bounds");
    sens->add_option("--construction", sens_args.construction, "thm2|prop5|lemma1|group")
        ->check(CLI::IsMember({"thm2", "prop5", "lemma1", "group"}));
    sens->add_option("--n", sens_args.n, "Sample size");
    sens->add_option("--m", sens_args.m, "DTM resolution");
    sens->add_option("--p", sens_args.p, "DTM exponent");
    sens->add_option("--trials", sens_args.trials, "Random clouds for lemma1");
    sens->add_option("--k-hamming", sens_args.k_hamming, "Group size K for group pairs");
    sens->add_option("--diam", sens_args.diam, "Ambient diameter");
    sens->add_option("--seed", sens_args.seed, "RNG seed");
    sens->add_option("--empirical-trials", sens_args.empirical_trials,
                     "Also run random-replacement base-sensitivity trials");

    SimulateArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "Replication sweeps over epsilon or n");
    sim->add_option("--sweep", sim_args.sweep, "epsilon or n")
        ->check(CLI::IsMember({"epsilon", "n"}));
    sim->add_option("--values", sim_args.values, "Axis values (ascending)")
        ->required()
        ->delimiter(',');
    sim->add_option("--reps", sim_args.reps, "Replicates per value");
    sim->add_option("--dataset", sim_args.dataset, "two-circle or csv:<path>");
    sim->add_option("--epsilon", sim_args.epsilon, "Fixed epsilon for n sweeps");
    sim->add_option("--n", sim_args.n, "Fixed n for epsilon sweeps");
    sim->add_option("--m", sim_args.m, "DTM resolution");
    sim->add_option("--big-m", sim_args.big_m, "Max points per diagram (M)");
    sim->add_option("--ell", sim_args.ell, "Max homology dimension");
    sim->add_option("--iters", sim_args.iters, "MH iterations per chain");
    sim->add_option("--sigma", sim_args.sigma, "Proposal stddev (0 = scale-aware)");
    sim->add_option("--grid", sim_args.grid, "Grid points per axis");
    sim->add_option("--seed", sim_args.seed, "RNG seed");
    sim->add_option("--svg", sim_args.svg, "Quantile-band SVG path");
    sim->add_option("--out", sim_args.out, "Results CSV")->required();

    WalkerArgs walker_args;
    auto* walker = app.add_subcommand("walker", "Full pipeline on trajectory data");
    walker->add_option("--input", walker_args.input, "3-column CSV of locations");
    walker->add_option("--synthetic", walker_args.synthetic,
                       "Generate a synthetic corridor walk of N points instead");
    walker->add_option("--epsilon", walker_args.epsilon, "Privacy budget");
    walker->add_option("--m", walker_args.m, "DTM resolution");
    walker->add_option("--big-m", walker_args.big_m, "Max points per diagram (M)");
    walker->add_option("--iters", walker_args.iters, "MH iterations");
    walker->add_option("--sigma", walker_args.sigma, "Proposal stddev (0 = scale-aware)");
    walker->add_option("--grid", walker_args.grid, "Grid points per axis");
    walker->add_option("--subsample", walker_args.subsample, "Subsample to N points");
    walker->add_option("--seed", walker_args.seed, "RNG seed");
    walker->add_option("--out", walker_args.out, "Private diagram JSON");
    walker->add_option("--trace", walker_args.trace, "Trace CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*diagram) return cmd_diagram(diagram_args);
        if (*bn) return cmd_bottleneck(bottleneck_args);
        if (*priv) {
            if (priv->count("--diam")) privatize_args.diam = diam_opt;
            if (priv->count("--delta-override")) privatize_args.delta_override = delta_opt;
            return cmd_privatize(privatize_args);
        }
        if (*sens) return cmd_sensitivity(sens_args);
        if (*sim) return cmd_simulate(sim_args);
        if (*walker) return cmd_walker(walker_args);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
