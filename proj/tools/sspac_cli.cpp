// sspac: command-line front end for the SSP planning toolkit.
//
// Exit codes: 0 success, 1 algorithmic error (or a failed verification), 2 invalid input.

#include "sspac/confidence.hpp"
#include "sspac/error.hpp"
#include "sspac/evi.hpp"
#include "sspac/experiment.hpp"
#include "sspac/generators.hpp"
#include "sspac/io.hpp"
#include "sspac/oracle.hpp"
#include "sspac/pac.hpp"
#include "sspac/sampler.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

namespace {

using namespace sspac;

constexpr int kExitAlgorithm = 1;
constexpr int kExitInput = 2;

struct PacFlags {
    std::string mdp;
    double eps = 0.1;
    double delta = 0.1;
    double alpha = 0.1;
    double theta = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::size_t max_doublings = 64;
    std::string out;
    std::string samples_out;
    std::optional<std::size_t> reps;

    PacConfig config() const {
        PacConfig cfg;
        cfg.epsilon = eps;
        cfg.delta = delta;
        cfg.alpha = alpha;
        cfg.theta = theta;
        cfg.threads = threads;
        cfg.max_doublings = max_doublings;
        return cfg;
    }
};

void add_pac_flags(CLI::App* cmd, PacFlags& f, bool with_theta) {
    cmd->add_option("--mdp", f.mdp, "MDP JSON file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--eps", f.eps, "Accuracy epsilon in (0,1]")->capture_default_str();
    cmd->add_option("--delta", f.delta, "Confidence delta in (0,1)")->capture_default_str();
    cmd->add_option("--alpha", f.alpha, "Allocation constant")->capture_default_str();
    cmd->add_option("--seed", f.seed, "Generative model seed")->capture_default_str();
    cmd->add_option("--threads", f.threads, "Sample collection threads")->capture_default_str();
    cmd->add_option("--max-doublings", f.max_doublings, "Doubling cap")->capture_default_str();
    cmd->add_option("--out", f.out, "Write the run log JSON here");
    cmd->add_option("--samples-out", f.samples_out, "Write the final sample counts JSON here");
    cmd->add_option("--reps", f.reps, "Replicate over seeds seed..seed+reps-1; --out becomes the JSON/CSV stem");
    if (with_theta)
        cmd->add_option("--theta", f.theta, "Restriction slack theta >= 1")->required();
}

void emit(const json& j, const std::string& path) {
    const std::string text = j.dump(1) + "\n";
    if (path.empty())
        std::cout << text;
    else
        write_text_file(path, text);
}

void finish_pac(const PacFlags& f, const GenerativeModel& gen, const json& log) {
    json j = log;
    j["total_calls"] = gen.total_calls();
    emit(j, f.out);
    if (!f.samples_out.empty())
        write_text_file(f.samples_out, empirical_to_json(gen.samples()).dump() + "\n");
}

// Several seeds at once go through the experiment runner so the outputs match `run`.
bool run_replicated(const PacFlags& f, Algorithm algorithm) {
    if (!f.reps)
        return false;
    ExperimentConfig cfg;
    cfg.environment.family = "file";
    cfg.environment.path = f.mdp;
    cfg.algorithm = algorithm;
    cfg.pac = f.config();
    cfg.replications = *f.reps;
    cfg.seed = f.seed;
    cfg.output = f.out;
    const ExperimentResult res = run_experiment(cfg);
    std::cout << "success rate " << res.success_rate << " over " << res.rows.size() << " replications\n";
    return true;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty())
            out.push_back(std::stod(item));
    return out;
}

std::string pass_fail(bool ok) { return ok ? "PASS" : "FAIL"; }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"PAC planning toolkit for stochastic shortest path problems"};
    app.require_subcommand(1);

    // gen
    EnvironmentSpec env;
    std::string gen_out;
    auto* gen_cmd = app.add_subcommand("gen", "Generate an MDP JSON file");
    gen_cmd->add_option("--family", env.family, "random | chain | gridworld")->capture_default_str();
    gen_cmd->add_option("--states", env.states, "random: number of non-goal states")->capture_default_str();
    gen_cmd->add_option("--actions", env.actions, "random: number of actions")->capture_default_str();
    gen_cmd->add_option("--support", env.support, "random: successors per row")->capture_default_str();
    gen_cmd->add_option("--cmin", env.c_min, "random: minimum cost")->capture_default_str();
    gen_cmd->add_option("--seed", env.seed, "random: seed")->capture_default_str();
    gen_cmd->add_option("--length", env.length, "chain: number of states")->capture_default_str();
    gen_cmd->add_option("--slip", env.slip, "chain/gridworld: slip probability")->capture_default_str();
    gen_cmd->add_option("--cost", env.cost, "chain: per-step cost")->capture_default_str();
    gen_cmd->add_option("--width", env.width, "gridworld: width")->capture_default_str();
    gen_cmd->add_option("--height", env.height, "gridworld: height")->capture_default_str();
    gen_cmd->add_option("--out", gen_out, "Output file (stdout if omitted)");

    // solve-exact
    std::string exact_mdp, exact_out;
    auto* exact_cmd = app.add_subcommand("solve-exact", "Exact optimal values, policy and model scalars");
    exact_cmd->add_option("--mdp", exact_mdp, "MDP JSON file")->required()->check(CLI::ExistingFile);
    exact_cmd->add_option("--out", exact_out, "Output file (stdout if omitted)");

    PacFlags positive, restricted, diameter;
    auto* positive_cmd = app.add_subcommand("pac-positive", "PAC planner for strictly positive costs");
    add_pac_flags(positive_cmd, positive, false);
    auto* restricted_cmd = app.add_subcommand("pac-restricted", "PAC planner over the theta-restricted set");
    add_pac_flags(restricted_cmd, restricted, true);
    auto* diameter_cmd = app.add_subcommand("estimate-diameter", "Optimistic upper bound on the SSP diameter");
    add_pac_flags(diameter_cmd, diameter, false);

    // verify
    std::string verify_mdp, verify_policy;
    double verify_eps = 0.1;
    std::optional<double> verify_theta;
    std::uint64_t certify_n = 0;
    double certify_delta = 0.1;
    std::uint64_t certify_seed = 0;
    auto* verify_cmd = app.add_subcommand("verify", "Check a policy against the (restricted) optimum");
    verify_cmd->add_option("--mdp", verify_mdp, "MDP JSON file")->required()->check(CLI::ExistingFile);
    verify_cmd->add_option("--policy", verify_policy, "Policy JSON file ({\"policy\": [...]})")
        ->required()
        ->check(CLI::ExistingFile);
    verify_cmd->add_option("--eps", verify_eps, "Accuracy epsilon")->capture_default_str();
    verify_cmd->add_option("--theta", verify_theta, "Compare against the theta-restricted optimum");
    verify_cmd->add_option("--certify-n", certify_n, "Also run EVI on N samples per pair and check its certificates");
    verify_cmd->add_option("--delta", certify_delta, "Confidence for --certify-n")->capture_default_str();
    verify_cmd->add_option("--seed", certify_seed, "Seed for --certify-n")->capture_default_str();

    // bench
    BenchGrid grid;
    std::string bench_mdp, bench_eps = "0.4,0.2,0.1", bench_cmins, bench_out;
    auto* bench_cmd = app.add_subcommand("bench", "Generator calls of pac-positive over an (eps, c_min) grid");
    bench_cmd->add_option("--mdp", bench_mdp, "MDP JSON file (instead of a generated family)");
    bench_cmd->add_option("--family", grid.environment.family, "chain | random")->capture_default_str();
    bench_cmd->add_option("--length", grid.environment.length, "chain length")->capture_default_str();
    bench_cmd->add_option("--slip", grid.environment.slip, "chain slip")->capture_default_str();
    bench_cmd->add_option("--states", grid.environment.states, "random: states")->capture_default_str();
    bench_cmd->add_option("--actions", grid.environment.actions, "random: actions")->capture_default_str();
    bench_cmd->add_option("--support", grid.environment.support, "random: support")->capture_default_str();
    bench_cmd->add_option("--env-seed", grid.environment.seed, "random: model seed")->capture_default_str();
    bench_cmd->add_option("--eps-grid", bench_eps, "Comma-separated epsilons")->capture_default_str();
    bench_cmd->add_option("--cmin-grid", bench_cmins, "Comma-separated cost floors");
    bench_cmd->add_option("--delta", grid.pac.delta, "Confidence delta")->capture_default_str();
    bench_cmd->add_option("--alpha", grid.pac.alpha, "Allocation constant")->capture_default_str();
    bench_cmd->add_option("--seed", grid.seed, "Generative model seed")->capture_default_str();
    bench_cmd->add_option("--threads", grid.pac.threads, "Sample collection threads")->capture_default_str();
    bench_cmd->add_option("--out", bench_out, "CSV output (stdout if omitted)");

    // run
    std::string run_config;
    ExperimentConfig run_overrides;
    std::optional<std::uint64_t> run_reps, run_seed;
    std::optional<std::string> run_out;
    auto* run_cmd = app.add_subcommand("run", "Run an experiment from a JSON config");
    run_cmd->add_option("--config", run_config, "Experiment config JSON")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--reps", run_reps, "Override the replication count");
    run_cmd->add_option("--seed", run_seed, "Override the base seed");
    run_cmd->add_option("--out", run_out, "Override the output stem");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (*gen_cmd) {
            const SspMdp mdp = make_environment(env);
            emit(mdp_to_json(mdp), gen_out);
        } else if (*exact_cmd) {
            const SspMdp mdp = load_mdp(exact_mdp);
            const ViResult vi = value_iteration(mdp);
            const ModelScalars sc = model_scalars(mdp);
            json j = {{"value", vi.value},
                      {"policy", vi.policy.action},
                      {"iterations", vi.iterations},
                      {"c_min", sc.c_min},
                      {"gamma", sc.gamma_support},
                      {"b_star", sc.b_star ? json(*sc.b_star) : json(nullptr)},
                      {"diameter", sc.diameter},
                      {"per_state_diameter", sc.per_state_diameter}};
            emit(j, exact_out);
        } else if (*positive_cmd) {
            if (run_replicated(positive, Algorithm::PacPositive))
                return 0;
            const SspMdp mdp = load_mdp(positive.mdp);
            GenerativeModel gen(mdp, positive.seed);
            const PacResult res = solve_positive(gen, mdp.costs(), positive.config());
            finish_pac(positive, gen, run_log_to_json(res.log));
        } else if (*restricted_cmd) {
            if (run_replicated(restricted, Algorithm::PacRestricted))
                return 0;
            const SspMdp mdp = load_mdp(restricted.mdp);
            GenerativeModel gen(mdp, restricted.seed);
            const PacResult res = solve_restricted(gen, mdp.costs(), restricted.config());
            finish_pac(restricted, gen, run_log_to_json(res.log));
        } else if (*diameter_cmd) {
            if (run_replicated(diameter, Algorithm::EstimateDiameter))
                return 0;
            const SspMdp mdp = load_mdp(diameter.mdp);
            GenerativeModel gen(mdp, diameter.seed);
            const DiameterEstimate est = estimate_diameter(gen, diameter.config());
            finish_pac(diameter, gen, run_log_to_json(est.log));
        } else if (*verify_cmd) {
            const SspMdp mdp = load_mdp(verify_mdp);
            const Policy pi = policy_from_json(read_json_file(verify_policy));
            if (pi.size() != mdp.num_states())
                throw ShapeMismatch("policy length differs from the model's state count");
            bool ok = policy_is_proper(mdp, pi);
            std::cout << "proper: " << pass_fail(ok) << "\n";
            if (ok) {
                const ValueVector v = policy_value(mdp, pi);
                ValueVector target;
                std::string label;
                if (verify_theta) {
                    target = oracle::enumerate_restricted_optimum(mdp, *verify_theta).v_theta_star;
                    label = "||V^pi - V_theta*||_inf";
                } else {
                    target = value_iteration(mdp).value;
                    label = "||V^pi - V*||_inf";
                }
                const double err = sup_distance(v, target);
                const bool within = err <= verify_eps;
                ok = ok && within;
                std::cout << label << " = " << err << " (eps " << verify_eps << "): " << pass_fail(within) << "\n";
            }
            if (certify_n > 0) {
                GenerativeModel gen(mdp, certify_seed);
                gen.collect_until(certify_n);
                const ConfidenceRadii radii(gen.samples(), certify_delta);
                const double c_min = mdp.costs().min();
                if (!(c_min > 0.0))
                    throw MinCostZero("EVI certificates need c_min > 0");
                const EviOutput out = evi(gen.samples(), radii, mdp.costs(), c_min * verify_eps / 6.0);
                const OptimismCertificate cert = check_optimism_certificate(out, mdp.costs());
                std::cout << "evi v~ <= V~^pi~: " << pass_fail(cert.lower_holds) << "\n";
                if (cert.upper_applies)
                    std::cout << "evi V~^pi~ <= (1 + 2 mu/c_min) v~: " << pass_fail(cert.upper_holds) << "\n";
                ok = ok && cert.ok();
            }
            return ok ? 0 : kExitAlgorithm;
        } else if (*bench_cmd) {
            if (!bench_mdp.empty()) {
                grid.environment.family = "file";
                grid.environment.path = bench_mdp;
            }
            grid.epsilons = parse_list(bench_eps);
            grid.c_mins = parse_list(bench_cmins);
            const auto rows = bench_scaling(grid);
            const std::string csv = bench_to_csv(rows);
            if (bench_out.empty())
                std::cout << csv;
            else
                write_text_file(bench_out, csv);
            if (grid.c_mins.size() <= 1 && rows.size() >= 2) {
                std::vector<double> xs, ys;
                for (const auto& r : rows) {
                    xs.push_back(r.epsilon);
                    ys.push_back(static_cast<double>(r.calls));
                }
                std::cerr << "log-log slope of calls vs epsilon: " << loglog_slope(xs, ys) << "\n";
            }
        } else if (*run_cmd) {
            ExperimentConfig cfg = config_from_json(read_json_file(run_config));
            if (run_reps)
                cfg.replications = *run_reps;
            if (run_seed)
                cfg.seed = *run_seed;
            if (run_out)
                cfg.output = *run_out;
            const ExperimentResult res = run_experiment(cfg);
            std::cout << "success rate " << res.success_rate << " over " << res.rows.size() << " replications\n";
        }
    } catch (const InputError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInput;
    } catch (const AlgorithmError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAlgorithm;
    } catch (const std::exception& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInput;
    }
    return 0;
}
