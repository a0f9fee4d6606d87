#include "sspac/pac.hpp"

#include "sspac/confidence.hpp"
#include "sspac/error.hpp"
#include "sspac/evi.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sspac {

namespace {

PacRound record_round(double scale, const GenerativeModel& gen, const EviOutput& out) {
    PacRound round;
    round.scale = scale;
    round.target_n = gen.samples().min_n();
    round.calls = gen.total_calls();
    round.evi_iterations = out.iterations;
    round.v_norm = sup_norm(out.v_tilde);
    round.mu_vi = out.vi_precision;
    round.v_tilde = out.v_tilde;
    round.policy = out.pi_tilde;
    return round;
}

std::uint64_t to_count(double x) {
    if (!(x < 1.8e19))
        throw AlgorithmError("sample target overflows a 64-bit counter");
    return static_cast<std::uint64_t>(std::ceil(x));
}

// Smallest n > current with certified row bound <= limit, holding p_hat fixed.
std::uint64_t predicted_count(std::span<const double> p_hat, std::uint64_t current, std::size_t S, std::size_t A,
                              double delta, double limit) {
    const auto bound_at = [&](std::uint64_t n) {
        double sum = 0.0;
        for (double p : p_hat)
            sum += bernstein_radius(p, n, S, A, delta);
        return sum;
    };
    std::uint64_t lo = std::max<std::uint64_t>(current, 1);
    std::uint64_t hi = lo + 1;
    while (bound_at(hi) > limit) {
        lo = hi;
        if (hi > (std::uint64_t{1} << 62))
            throw AlgorithmError("certified accuracy target needs more than 2^62 samples");
        hi *= 2;
    }
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        (bound_at(mid) > limit ? lo : hi) = mid;
    }
    return hi;
}

// Collects until every pair's certified L1 bound is at most `limit`. The required count is
// predicted from the current frequencies, collected, and re-checked.
void collect_certified(GenerativeModel& gen, double delta, double limit, unsigned threads) {
    const std::size_t S = gen.num_states();
    const std::size_t A = gen.num_actions();
    if (gen.samples().min_n() == 0)
        gen.collect_until(1, threads);
    std::vector<std::uint64_t> targets(S * A);
    for (;;) {
        bool done = true;
        const EmpiricalModel& e = gen.samples();
        for (std::size_t s = 0; s < S; ++s) {
            for (std::size_t a = 0; a < A; ++a) {
                std::uint64_t& t = targets[s * A + a];
                t = e.n(s, a);
                if (certified_row_bound(e, s, a, delta) > limit) {
                    t = predicted_count(e.p_hat(s, a), e.n(s, a), S, A, delta, limit);
                    done = false;
                }
            }
        }
        if (done)
            return;
        gen.collect_until(targets, threads);
    }
}

} // namespace

void PacConfig::validate() const {
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw InvalidArgs("epsilon must lie in (0,1]");
    if (!(delta > 0.0 && delta < 1.0))
        throw InvalidArgs("delta must lie in (0,1)");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw InvalidArgs("alpha must be positive");
    if (!(theta >= 1.0))
        throw InvalidArgs("theta must be at least 1");
    if (max_doublings == 0)
        throw InvalidArgs("max_doublings must be positive");
}

std::uint64_t allocation(double x, double y, const PacConfig& cfg, std::size_t num_states, std::size_t num_actions,
                         std::size_t gamma_hat) {
    if (!(x > 0.0) || !(y > 0.0))
        throw InvalidArgs("allocation needs positive X and y");
    const double eps = cfg.epsilon;
    const double delta = cfg.delta;
    const double S = static_cast<double>(num_states);
    const double SA = S * static_cast<double>(num_actions);
    const double G = static_cast<double>(std::max<std::size_t>(gamma_hat, 1));
    const double log_eps = std::log(x * SA / (y * eps * delta));
    const double log_plain = std::log(x * SA / (y * delta));
    const double value = cfg.alpha * (x * x * x * G / (y * eps * eps) * log_eps + x * x * S / (y * eps) * log_eps +
                                      x * x * G / (y * y) * log_plain * log_plain);
    return to_count(value);
}

PacResult search(GenerativeModel& gen, const CostMatrix& cost, const PacConfig& cfg) {
    cfg.validate();
    const std::size_t S = gen.num_states();
    const std::size_t A = gen.num_actions();
    if (cost.num_states() != S || cost.num_actions() != A)
        throw ShapeMismatch("cost matrix does not match the generative model");
    const double iota = cost.min();
    if (!(iota > 0.0))
        throw InvalidArgs("SEARCH needs a strictly positive cost function");

    PacResult result;
    result.log.iota = iota;
    double delta_guess = 0.5;
    for (std::size_t round = 0;; ++round) {
        if (round == cfg.max_doublings)
            throw DoublingCapExceeded("SEARCH reached " + std::to_string(cfg.max_doublings) + " doublings");
        delta_guess *= 2.0;

        // The allocation depends on the empirical support, which can grow as samples arrive;
        // re-evaluate until it settles (at most S+1 times) and keep the largest target.
        std::size_t gamma_hat = std::max<std::size_t>(1, empirical_gamma(gen.samples()));
        std::uint64_t target = allocation(delta_guess, iota, cfg, S, A, gamma_hat);
        for (std::size_t k = 0; k <= S + 1; ++k) {
            gen.collect_until(target, cfg.threads);
            const std::size_t updated = std::max<std::size_t>(1, empirical_gamma(gen.samples()));
            if (updated <= gamma_hat)
                break;
            gamma_hat = updated;
            target = std::max(target, allocation(delta_guess, iota, cfg, S, A, gamma_hat));
        }

        const double mu_vi = iota * cfg.epsilon / (6.0 * delta_guess);
        const ConfidenceRadii radii(gen.samples(), cfg.delta);
        EviOutput out = evi(gen.samples(), radii, cost, mu_vi);
        PacRound rec = record_round(delta_guess, gen, out);
        rec.target_n = target;
        result.log.rounds.push_back(std::move(rec));

        if (sup_norm(out.v_tilde) <= delta_guess) {
            result.policy = out.pi_tilde;
            result.log.policy = result.policy;
            result.log.final_delta = delta_guess;
            result.log.total_calls = gen.total_calls();
            return result;
        }
    }
}

PacResult solve_positive(GenerativeModel& gen, const CostMatrix& cost, const PacConfig& cfg) {
    if (!(cost.min() > 0.0))
        throw MinCostZero("minimum cost is zero; use the restricted planner");
    return search(gen, cost, cfg);
}

DiameterEstimate estimate_diameter(GenerativeModel& gen, const PacConfig& cfg) {
    cfg.validate();
    const std::size_t S = gen.num_states();
    const std::size_t A = gen.num_actions();
    const CostMatrix unit(S, A, 1.0);
    const double eps = cfg.epsilon;

    DiameterEstimate result;
    result.log.iota = 1.0;
    double width = 0.5;
    double v_norm = 1.0;
    double eta = 0.0;
    std::size_t round = 0;
    while (v_norm > width) {
        if (round++ == cfg.max_doublings)
            throw DoublingCapExceeded("diameter estimate reached " + std::to_string(cfg.max_doublings) +
                                      " doublings");
        width *= 2.0;
        eta = eps / width;
        collect_certified(gen, cfg.delta, eta / 2.0, cfg.threads);
        const ConfidenceRadii radii(gen.samples(), cfg.delta);
        EviOutput out = evi(gen.samples(), radii, unit, eps / 2.0);
        v_norm = sup_norm(out.v_tilde);
        PacRound rec = record_round(width, gen, out);
        rec.eta = eta;
        result.log.rounds.push_back(std::move(rec));
        result.log.policy = out.pi_tilde;
    }
    result.d_hat = (1.0 + 2.0 * eta * (1.0 + eps) * v_norm) * (1.0 + eps) * v_norm;
    result.log.final_delta = width;
    result.log.d_hat = result.d_hat;
    result.log.total_calls = gen.total_calls();
    return result;
}

PacResult solve_restricted(GenerativeModel& gen, const CostMatrix& cost, const PacConfig& cfg) {
    cfg.validate();
    if (!std::isfinite(cfg.theta))
        throw InvalidArgs("the restricted planner needs a finite theta");

    PacConfig diameter_cfg = cfg;
    diameter_cfg.delta = cfg.delta / 2.0;
    DiameterEstimate diameter = estimate_diameter(gen, diameter_cfg);

    const double nu = cfg.epsilon / (2.0 * cfg.theta * diameter.d_hat);
    CostMatrix perturbed = cost;
    for (std::size_t s = 0; s < cost.num_states(); ++s)
        for (std::size_t a = 0; a < cost.num_actions(); ++a)
            perturbed(s, a) = std::max(cost(s, a), nu);

    PacConfig search_cfg = cfg;
    search_cfg.epsilon = cfg.epsilon / 2.0;
    search_cfg.delta = cfg.delta / 2.0;
    gen.start_new_sample_set();
    PacResult result = search(gen, perturbed, search_cfg);
    result.log.diameter_rounds = std::move(diameter.log.rounds);
    result.log.d_hat = diameter.d_hat;
    result.log.nu = nu;
    return result;
}

json run_log_to_json(const PacRunLog& log) {
    const auto rounds_to_json = [](const std::vector<PacRound>& rounds) {
        json arr = json::array();
        for (const PacRound& r : rounds) {
            json j = {{"scale", r.scale},         {"target_n", r.target_n},
                      {"calls", r.calls},         {"evi_iterations", r.evi_iterations},
                      {"v_norm", r.v_norm},       {"mu_vi", r.mu_vi},
                      {"v_tilde", r.v_tilde},     {"policy", r.policy.action}};
            if (r.eta)
                j["eta"] = *r.eta;
            arr.push_back(std::move(j));
        }
        return arr;
    };
    json j = {{"rounds", rounds_to_json(log.rounds)},
              {"policy", log.policy.action},
              {"final_delta", log.final_delta},
              {"iota", log.iota},
              {"total_calls", log.total_calls}};
    if (!log.diameter_rounds.empty())
        j["diameter_rounds"] = rounds_to_json(log.diameter_rounds);
    j["d_hat"] = log.d_hat ? json(*log.d_hat) : json(nullptr);
    j["nu"] = log.nu ? json(*log.nu) : json(nullptr);
    return j;
}

} // namespace sspac
