#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "coinlab/truth_table.hpp"
#include <json.hpp>

namespace coinlab {

/// Layered width-w read-once branching program; layer i reads x_{i+1}.
/// States are 1-based, matching the file format.
struct RobpProgram {
  // Per layer, per state s (index s-1): {target on x=+1, target on x=-1}.
  using Layer = std::vector<std::array<int, 2>>;

  int width = 2;
  int start_state = 1;
  std::vector<int> accept_states;
  std::vector<Layer> layers;

  int length() const { return static_cast<int>(layers.size()); }
  // Throws std::invalid_argument on any out-of-range state or malformed layer.
  void validate() const;
};

int eval_robp(const RobpProgram& p, std::span<const int> x);
TruthTable robp_to_table(const RobpProgram& p);

// Uniform random transitions, start state and accept set.
RobpProgram random_robp(int n, int width, std::uint64_t seed);
// Width-2 program whose state tracks the running parity.
RobpProgram parity_robp(int n);

RobpProgram robp_from_json(const nlohmann::json& j);
nlohmann::json robp_to_json(const RobpProgram& p);
RobpProgram read_robp_file(const std::filesystem::path& path);

}  // namespace coinlab
