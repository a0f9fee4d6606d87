#include "sspac/io.hpp"

#include "sspac/error.hpp"

#include <fstream>
#include <sstream>

namespace sspac {

json mdp_to_json(const SspMdp& mdp) {
    const std::size_t S = mdp.num_states();
    const std::size_t A = mdp.num_actions();
    json cost = json::array();
    json trans = json::array();
    for (std::size_t s = 0; s < S; ++s) {
        json cost_row = json::array();
        json trans_state = json::array();
        for (std::size_t a = 0; a < A; ++a) {
            cost_row.push_back(mdp.cost(s, a));
            auto row = mdp.row(s, a);
            trans_state.push_back(std::vector<double>(row.begin(), row.end()));
        }
        cost.push_back(std::move(cost_row));
        trans.push_back(std::move(trans_state));
    }
    return {{"S", S}, {"A", A}, {"cost", std::move(cost)}, {"trans", std::move(trans)}};
}

SspMdp mdp_from_json(const json& j) {
    try {
        const auto S = j.at("S").get<std::size_t>();
        const auto A = j.at("A").get<std::size_t>();
        const json& cost = j.at("cost");
        const json& trans = j.at("trans");
        if (cost.size() != S || trans.size() != S)
            throw ShapeMismatch("cost/trans must have S rows");
        std::vector<double> cost_values;
        std::vector<double> trans_values;
        cost_values.reserve(S * A);
        trans_values.reserve(S * A * (S + 1));
        for (std::size_t s = 0; s < S; ++s) {
            if (cost[s].size() != A || trans[s].size() != A)
                throw ShapeMismatch("cost/trans rows must have A entries");
            for (std::size_t a = 0; a < A; ++a) {
                cost_values.push_back(cost[s][a].get<double>());
                const json& row = trans[s][a];
                if (row.size() != S + 1)
                    throw ShapeMismatch("transition rows must have S+1 entries (goal last)");
                for (const auto& p : row)
                    trans_values.push_back(p.get<double>());
            }
        }
        return SspMdp(CostMatrix(S, A, std::move(cost_values)),
                      TransitionTensor(S, A, std::move(trans_values)));
    } catch (const json::exception& e) {
        throw InvalidArgs(std::string("malformed MDP JSON: ") + e.what());
    }
}

json policy_to_json(const Policy& pi) { return {{"policy", pi.action}}; }

Policy policy_from_json(const json& j) {
    try {
        return Policy{j.at("policy").get<std::vector<std::size_t>>()};
    } catch (const json::exception& e) {
        throw InvalidArgs(std::string("malformed policy JSON: ") + e.what());
    }
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw InvalidArgs("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidArgs(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InvalidArgs("cannot write " + path.string());
    out << text;
}

SspMdp load_mdp(const std::filesystem::path& path) { return mdp_from_json(read_json_file(path)); }

void save_mdp(const std::filesystem::path& path, const SspMdp& mdp) {
    write_text_file(path, mdp_to_json(mdp).dump(1) + "\n");
}

} // namespace sspac
