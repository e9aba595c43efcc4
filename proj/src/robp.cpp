#include "coinlab/robp.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "coinlab/random.hpp"

namespace coinlab {

namespace {

void check_state(int state, int width, const char* what) {
  if (state < 1 || state > width) {
    throw std::invalid_argument(std::string(what) + " state " + std::to_string(state) +
                                " outside [1, " + std::to_string(width) + "]");
  }
}

}  // namespace

void RobpProgram::validate() const {
  if (width < 2) throw std::invalid_argument("ROBP width must be at least 2");
  check_state(start_state, width, "start");
  for (int a : accept_states) check_state(a, width, "accept");
  for (const Layer& layer : layers) {
    if (static_cast<int>(layer.size()) != width) {
      throw std::invalid_argument("ROBP layer must list one transition pair per state");
    }
    for (const auto& [on_plus, on_minus] : layer) {
      check_state(on_plus, width, "transition");
      check_state(on_minus, width, "transition");
    }
  }
}

int eval_robp(const RobpProgram& p, std::span<const int> x) {
  if (static_cast<int>(x.size()) != p.length()) {
    throw std::invalid_argument("input length does not match number of ROBP layers");
  }
  int state = p.start_state;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& pair = p.layers[i][static_cast<std::size_t>(state - 1)];
    state = x[i] == 1 ? pair[0] : pair[1];
  }
  return std::ranges::find(p.accept_states, state) != p.accept_states.end() ? 1 : -1;
}

TruthTable robp_to_table(const RobpProgram& p) {
  p.validate();
  check_arity(p.length());
  if (p.width > 255) throw std::invalid_argument("ROBP width above 255 not supported");
  // Prefix DP: after layer i, state[m] is the state reached on the low i+1
  // bits of m. Extending by one bit doubles the table.
  std::vector<std::uint8_t> state{static_cast<std::uint8_t>(p.start_state)};
  for (int i = 0; i < p.length(); ++i) {
    const auto& layer = p.layers[static_cast<std::size_t>(i)];
    const std::size_t half = state.size();
    std::vector<std::uint8_t> next(half * 2);
    for (std::size_t m = 0; m < half; ++m) {
      const auto& pair = layer[state[m] - 1U];
      next[m] = static_cast<std::uint8_t>(pair[0]);         // x_{i+1} = +1
      next[m + half] = static_cast<std::uint8_t>(pair[1]);  // x_{i+1} = -1
    }
    state = std::move(next);
  }
  std::vector<bool> accepting(static_cast<std::size_t>(p.width) + 1, false);
  for (int a : p.accept_states) accepting[static_cast<std::size_t>(a)] = true;
  std::vector<double> values(state.size());
  for (std::size_t m = 0; m < values.size(); ++m) values[m] = accepting[state[m]] ? 1.0 : -1.0;
  return TruthTable::boolean(p.length(), std::move(values));
}

RobpProgram random_robp(int n, int width, std::uint64_t seed) {
  check_arity(n);
  if (width < 2 || width > 255) throw std::invalid_argument("ROBP width must lie in [2, 255]");
  rng::CounterStream draw(seed, rng::Stream::robp);
  RobpProgram p;
  p.width = width;
  const auto w = static_cast<std::uint64_t>(width);
  p.start_state = 1 + static_cast<int>(draw.below(w));
  for (int s = 1; s <= width; ++s) {
    if (draw.next_u64() >> 63) p.accept_states.push_back(s);
  }
  p.layers.resize(static_cast<std::size_t>(n));
  for (auto& layer : p.layers) {
    layer.resize(static_cast<std::size_t>(width));
    for (auto& pair : layer) {
      pair[0] = 1 + static_cast<int>(draw.below(w));
      pair[1] = 1 + static_cast<int>(draw.below(w));
    }
  }
  return p;
}

RobpProgram parity_robp(int n) {
  RobpProgram p;
  p.width = 2;
  p.start_state = 1;
  p.accept_states = {1};
  // State 1 = even number of -1s so far.
  p.layers.assign(static_cast<std::size_t>(n), RobpProgram::Layer{{1, 2}, {2, 1}});
  return p;
}

RobpProgram robp_from_json(const nlohmann::json& j) {
  RobpProgram p;
  try {
    p.width = j.at("width").get<int>();
    p.start_state = j.at("start").get<int>();
    p.accept_states = j.at("accept").get<std::vector<int>>();
    for (const auto& layer : j.at("layers")) {
      RobpProgram::Layer parsed;
      for (const auto& pair : layer) {
        if (!pair.is_array() || pair.size() != 2) {
          throw std::invalid_argument("ROBP transition must be a [plus, minus] pair");
        }
        parsed.push_back({pair[0].get<int>(), pair[1].get<int>()});
      }
      p.layers.push_back(std::move(parsed));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed ROBP description: ") + e.what());
  }
  p.validate();
  return p;
}

nlohmann::json robp_to_json(const RobpProgram& p) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : p.layers) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [on_plus, on_minus] : layer) pairs.push_back({on_plus, on_minus});
    layers.push_back(std::move(pairs));
  }
  return {{"width", p.width}, {"start", p.start_state}, {"accept", p.accept_states}, {"layers", layers}};
}

RobpProgram read_robp_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open ROBP file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("ROBP file " + path.string() + ": " + e.what());
  }
  return robp_from_json(j);
}

}  // namespace coinlab
