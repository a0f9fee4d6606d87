#pragma once

#include "sspac/mdp.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace sspac {

using json = nlohmann::json;

// MDP file format: {"S": int, "A": int, "cost": [[...]], "trans": [[[...]]]},
// where every trans[s][a] has S+1 entries with the goal last.
json mdp_to_json(const SspMdp& mdp);
SspMdp mdp_from_json(const json& j);

// Policy file format: {"policy": [a_0, ..., a_{S-1}]}.
json policy_to_json(const Policy& pi);
Policy policy_from_json(const json& j);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

SspMdp load_mdp(const std::filesystem::path& path);
void save_mdp(const std::filesystem::path& path, const SspMdp& mdp);

} // namespace sspac
