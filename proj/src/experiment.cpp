#include "sspac/experiment.hpp"

#include "sspac/error.hpp"
#include "sspac/generators.hpp"
#include "sspac/oracle.hpp"
#include "sspac/parallel.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace sspac {

namespace {

std::string format_double(double x) {
    std::ostringstream out;
    out.precision(17);
    out << x;
    return out.str();
}

json env_to_json(const EnvironmentSpec& e) {
    return {{"family", e.family}, {"states", e.states}, {"actions", e.actions}, {"support", e.support},
            {"c_min", e.c_min},   {"seed", e.seed},     {"length", e.length},   {"slip", e.slip},
            {"cost", e.cost},     {"width", e.width},   {"height", e.height},   {"path", e.path}};
}

EnvironmentSpec env_from_json(const json& j) {
    EnvironmentSpec e;
    e.family = j.value("family", e.family);
    e.states = j.value("states", e.states);
    e.actions = j.value("actions", e.actions);
    e.support = j.value("support", e.support);
    e.c_min = j.value("c_min", e.c_min);
    e.seed = j.value("seed", e.seed);
    e.length = j.value("length", e.length);
    e.slip = j.value("slip", e.slip);
    e.cost = j.value("cost", e.cost);
    e.width = j.value("width", e.width);
    e.height = j.value("height", e.height);
    e.path = j.value("path", e.path);
    return e;
}

// JSON has no infinity; an absent or null theta means unrestricted.
json theta_to_json(double theta) { return std::isfinite(theta) ? json(theta) : json(nullptr); }

double theta_from_json(const json& j) {
    if (!j.contains("theta") || j["theta"].is_null())
        return std::numeric_limits<double>::infinity();
    return j["theta"].get<double>();
}

struct Reference {
    ValueVector target;
    double diameter = 0.0;
};

Reference reference_for(const SspMdp& mdp, const ExperimentConfig& cfg) {
    Reference ref;
    switch (cfg.algorithm) {
    case Algorithm::Exact:
    case Algorithm::PacPositive:
        ref.target = value_iteration(mdp).value;
        break;
    case Algorithm::PacRestricted:
        ref.target = oracle::enumerate_restricted_optimum(mdp, cfg.pac.theta).v_theta_star;
        break;
    case Algorithm::EstimateDiameter:
        ref.diameter = ssp_diameter(mdp).diameter;
        ref.target = {ref.diameter};
        break;
    }
    return ref;
}

ReplicationRow score_policy(const SspMdp& mdp, const Policy& pi, const ValueVector& target, double eps) {
    ReplicationRow row;
    if (!policy_is_proper(mdp, pi)) {
        row.sup_error = std::numeric_limits<double>::infinity();
        return row;
    }
    row.sup_error = sup_distance(policy_value(mdp, pi), target);
    row.success = row.sup_error <= eps;
    return row;
}

ReplicationRow run_one(const SspMdp& mdp, const ExperimentConfig& cfg, const Reference& ref, std::uint64_t seed,
                       std::vector<PacRunLog>& logs) {
    ReplicationRow row;
    switch (cfg.algorithm) {
    case Algorithm::Exact: {
        const ViResult vi = value_iteration(mdp);
        row = score_policy(mdp, vi.policy, ref.target, cfg.pac.epsilon);
        break;
    }
    case Algorithm::PacPositive:
    case Algorithm::PacRestricted: {
        GenerativeModel gen(mdp, seed);
        PacResult res = cfg.algorithm == Algorithm::PacPositive ? solve_positive(gen, mdp.costs(), cfg.pac)
                                                                : solve_restricted(gen, mdp.costs(), cfg.pac);
        row = score_policy(mdp, res.policy, ref.target, cfg.pac.epsilon);
        row.calls = gen.total_calls();
        row.delta_terminal = res.log.final_delta;
        row.d_hat = res.log.d_hat;
        logs.push_back(std::move(res.log));
        break;
    }
    case Algorithm::EstimateDiameter: {
        GenerativeModel gen(mdp, seed);
        DiameterEstimate est = estimate_diameter(gen, cfg.pac);
        const double eps = cfg.pac.epsilon;
        const double upper = (1.0 + 2.0 * eps * (1.0 + eps)) * (1.0 + eps) * ref.diameter;
        row.calls = gen.total_calls();
        row.sup_error = std::abs(est.d_hat - ref.diameter);
        row.success = ref.diameter <= est.d_hat && est.d_hat <= upper;
        row.delta_terminal = est.log.final_delta;
        row.d_hat = est.d_hat;
        logs.push_back(std::move(est.log));
        break;
    }
    }
    row.seed = seed;
    return row;
}

} // namespace

SspMdp make_environment(const EnvironmentSpec& spec) {
    if (spec.family == "random")
        return gen_random_ssp(spec.states, spec.actions, spec.support, spec.c_min, spec.seed);
    if (spec.family == "chain")
        return gen_chain(spec.length, spec.slip, spec.cost);
    if (spec.family == "gridworld")
        return gen_gridworld(spec.width, spec.height, spec.slip);
    if (spec.family == "file")
        return load_mdp(spec.path);
    throw InvalidArgs("unknown environment family '" + spec.family + "'");
}

std::string to_string(Algorithm a) {
    switch (a) {
    case Algorithm::Exact:
        return "exact";
    case Algorithm::PacPositive:
        return "pac-positive";
    case Algorithm::PacRestricted:
        return "pac-restricted";
    case Algorithm::EstimateDiameter:
        return "estimate-diameter";
    }
    return "unknown";
}

Algorithm algorithm_from_string(const std::string& name) {
    for (Algorithm a : {Algorithm::Exact, Algorithm::PacPositive, Algorithm::PacRestricted,
                        Algorithm::EstimateDiameter})
        if (to_string(a) == name)
            return a;
    throw InvalidArgs("unknown algorithm '" + name + "'");
}

json config_to_json(const ExperimentConfig& cfg) {
    return {{"environment", env_to_json(cfg.environment)},
            {"algorithm", to_string(cfg.algorithm)},
            {"pac",
             {{"epsilon", cfg.pac.epsilon},
              {"delta", cfg.pac.delta},
              {"alpha", cfg.pac.alpha},
              {"theta", theta_to_json(cfg.pac.theta)},
              {"max_doublings", cfg.pac.max_doublings},
              {"threads", cfg.pac.threads}}},
            {"replications", cfg.replications},
            {"seed", cfg.seed},
            {"output", cfg.output}};
}

ExperimentConfig config_from_json(const json& j) {
    try {
        ExperimentConfig cfg;
        if (j.contains("environment"))
            cfg.environment = env_from_json(j.at("environment"));
        cfg.algorithm = algorithm_from_string(j.value("algorithm", to_string(cfg.algorithm)));
        if (j.contains("pac")) {
            const json& p = j.at("pac");
            cfg.pac.epsilon = p.value("epsilon", cfg.pac.epsilon);
            cfg.pac.delta = p.value("delta", cfg.pac.delta);
            cfg.pac.alpha = p.value("alpha", cfg.pac.alpha);
            cfg.pac.theta = theta_from_json(p);
            cfg.pac.max_doublings = p.value("max_doublings", cfg.pac.max_doublings);
            cfg.pac.threads = p.value("threads", cfg.pac.threads);
        }
        cfg.replications = j.value("replications", cfg.replications);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.output = j.value("output", cfg.output);
        return cfg;
    } catch (const json::exception& e) {
        throw InvalidArgs(std::string("malformed experiment config: ") + e.what());
    }
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.pac.validate();
    const SspMdp mdp = make_environment(cfg.environment);
    ExperimentResult result;
    if (cfg.replications > 0) {
        const Reference ref = reference_for(mdp, cfg);
        result.target = ref.target;
        // Replications fan out over cfg.pac.threads workers; each collects single-threaded.
        ExperimentConfig inner = cfg;
        inner.pac.threads = 1;
        const std::size_t n = cfg.replications;
        result.rows.resize(n);
        std::vector<std::vector<PacRunLog>> logs(n);
        std::vector<std::string> failures(n);
        std::vector<char> input_failure(n, 0);
        parallel_for(n, cfg.pac.threads, [&](std::size_t r) {
            const std::uint64_t seed = cfg.seed + r;
            try {
                result.rows[r] = run_one(mdp, inner, ref, seed, logs[r]);
            } catch (const InputError& e) {
                failures[r] = "seed " + std::to_string(seed) + ": " + e.what();
                input_failure[r] = 1;
            } catch (const AlgorithmError& e) {
                failures[r] = "seed " + std::to_string(seed) + ": " + e.what();
            }
        });
        for (std::size_t r = 0; r < n; ++r) {
            if (failures[r].empty())
                continue;
            if (input_failure[r])
                throw InputError(failures[r]);
            throw AlgorithmError(failures[r]);
        }
        std::size_t ok = 0;
        for (std::size_t r = 0; r < n; ++r) {
            ok += result.rows[r].success ? 1 : 0;
            for (auto& log : logs[r])
                result.logs.push_back(std::move(log));
        }
        result.success_rate = static_cast<double>(ok) / static_cast<double>(n);
    }
    if (!cfg.output.empty()) {
        write_text_file(cfg.output + ".json", result_to_json(cfg, result).dump(1) + "\n");
        write_text_file(cfg.output + ".csv", rows_to_csv(result.rows));
    }
    return result;
}

std::string rows_to_csv(const std::vector<ReplicationRow>& rows) {
    std::string out = std::string(kCsvHeader) + "\n";
    for (const auto& r : rows) {
        out += std::to_string(r.seed) + "," + std::to_string(r.calls) + "," + format_double(r.sup_error) + "," +
               (r.success ? "1" : "0") + "," + format_double(r.delta_terminal) + "," +
               (r.d_hat ? format_double(*r.d_hat) : "") + "\n";
    }
    return out;
}

json result_to_json(const ExperimentConfig& cfg, const ExperimentResult& result) {
    json runs = json::array();
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const auto& r = result.rows[i];
        json entry = {{"seed", r.seed},
                      {"calls", r.calls},
                      {"sup_error", std::isfinite(r.sup_error) ? json(r.sup_error) : json(nullptr)},
                      {"success", r.success},
                      {"delta_terminal", r.delta_terminal}};
        if (i < result.logs.size())
            entry["log"] = run_log_to_json(result.logs[i]);
        runs.push_back(std::move(entry));
    }
    return {{"config", config_to_json(cfg)},
            {"target", result.target},
            {"success_rate", result.success_rate},
            {"runs", std::move(runs)}};
}

std::vector<BenchRow> bench_scaling(const BenchGrid& grid) {
    std::vector<double> floors = grid.c_mins;
    if (floors.empty())
        floors.push_back(std::numeric_limits<double>::quiet_NaN());
    std::vector<BenchRow> rows;
    for (double c_min : floors) {
        EnvironmentSpec env = grid.environment;
        if (!std::isnan(c_min)) {
            if (env.family == "chain")
                env.cost = c_min;
            else if (env.family == "random")
                env.c_min = c_min;
            else
                throw InvalidArgs("c_min grids need the chain or random family");
        }
        const SspMdp mdp = make_environment(env);
        for (double eps : grid.epsilons) {
            PacConfig cfg = grid.pac;
            cfg.epsilon = eps;
            GenerativeModel gen(mdp, grid.seed);
            const PacResult res = solve_positive(gen, mdp.costs(), cfg);
            rows.push_back({eps, mdp.costs().min(), grid.seed, gen.total_calls(), res.log.final_delta});
        }
    }
    return rows;
}

std::string bench_to_csv(const std::vector<BenchRow>& rows) {
    std::string out = std::string(kBenchCsvHeader) + "\n";
    for (const auto& r : rows)
        out += format_double(r.epsilon) + "," + format_double(r.c_min) + "," + std::to_string(r.seed) + "," +
               std::to_string(r.calls) + "," + format_double(r.final_delta) + "\n";
    return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw InvalidArgs("slope fit needs at least two paired points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0 && y[i] > 0.0))
            throw InvalidArgs("log-log fit needs positive values");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0)
        throw InvalidArgs("slope fit needs distinct x values");
    return (n * sxy - sx * sy) / denom;
}

} // namespace sspac
