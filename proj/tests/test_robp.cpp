#include <doctest.h>

#include <vector>

#include "coinlab/robp.hpp"
#include "coinlab/truth_table.hpp"
#include "oracles.hpp"

using namespace coinlab;

namespace {

// Two-state parity: state 1 = even number of -1s so far.
RobpProgram parity2() {
  RobpProgram p;
  p.width = 2;
  p.start_state = 1;
  p.accept_states = {1};
  p.layers.assign(2, {{1, 2}, {2, 1}});
  return p;
}

}  // namespace

TEST_CASE("evaluation examples") {
  const RobpProgram p = parity2();
  CHECK(eval_robp(p, std::vector<int>{1, -1}) == -1);
  CHECK(eval_robp(p, std::vector<int>{-1, -1}) == 1);

  RobpProgram all = p;
  all.accept_states = {1, 2};
  RobpProgram none = p;
  none.accept_states = {};
  for (const auto& x : oracle::cube(2)) {
    CHECK(eval_robp(all, x) == 1);
    CHECK(eval_robp(none, x) == -1);
  }
}

TEST_CASE("tables") {
  CHECK(robp_to_table(parity2()) == build_parity(2));

  RobpProgram dict;
  dict.width = 2;
  dict.start_state = 1;
  dict.accept_states = {1};
  dict.layers = {{{1, 2}, {1, 2}}};
  CHECK(robp_to_table(dict) == build_dictator(1, 1));

  const TruthTable r = robp_to_table(random_robp(8, 3, 11));
  CHECK(r.size() == 256);
  CHECK(r.is_boolean());
  CHECK(robp_to_table(random_robp(8, 3, 11)) == r);
  for (int n : {1, 5, 9}) CHECK(robp_to_table(parity_robp(n)) == build_parity(n));
}

TEST_CASE("table conversion agrees with step-by-step evaluation") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RobpProgram p = random_robp(6, 4, seed);
    const TruthTable t = robp_to_table(p);
    for (const auto& x : oracle::cube(6)) CHECK(t.at(x) == eval_robp(p, x));
  }
}

TEST_CASE("validation and json") {
  RobpProgram bad = parity2();
  bad.layers[0][0] = {3, 1};
  CHECK_THROWS(bad.validate());
  RobpProgram bad_start = parity2();
  bad_start.start_state = 0;
  CHECK_THROWS(bad_start.validate());
  RobpProgram bad_accept = parity2();
  bad_accept.accept_states = {5};
  CHECK_THROWS(bad_accept.validate());
  RobpProgram short_layer = parity2();
  short_layer.layers[1].pop_back();
  CHECK_THROWS(short_layer.validate());
  CHECK_THROWS(eval_robp(parity2(), std::vector<int>{1}));

  const RobpProgram p = random_robp(5, 3, 2);
  const RobpProgram back = robp_from_json(robp_to_json(p));
  CHECK(robp_to_table(back) == robp_to_table(p));
  CHECK_THROWS(robp_from_json(nlohmann::json::parse(R"({"width": 2})")));
  CHECK_THROWS(robp_from_json(nlohmann::json::parse(R"({"width":2,"start":1,"accept":[1],"layers":[[[1]]]})")));
}
