#include <algorithm>

#include "cubekb/solvers.hpp"
#include "test_util.hpp"

using namespace cubekb;

TEST_CASE("solved input gives an empty solution") {
  CHECK(solve_two_phase(CubieState::solved()).solution.empty());
  CHECK(solve_kb(CubieState::solved()).solution.empty());
  CHECK(solve_layer_by_layer(CubieState::solved()).solution.empty());
  CHECK(solve_optimal_shallow(CubieState::solved(), 3)->solution.empty());
}

TEST_CASE("single move is undone in one move") {
  const CubieState c = apply_sequence(CubieState::solved(), parse_moves("R1"));
  CHECK(to_string(solve_kb(c, SolveBudget::exhaustive()).solution) == "R3");
  CHECK(to_string(solve_optimal_shallow(c, 2)->solution) == "R3");
}

TEST_CASE("shallow optimal oracle") {
  CHECK(solve_optimal_shallow(apply_sequence(CubieState::solved(), parse_moves("R1 U1")), 4)->solution.size() == 2);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const int depth = 1 + static_cast<int>(s % 5);
    const MoveSequence q = random_scramble(depth, s);
    const CubieState c = apply_sequence(CubieState::solved(), q);
    const auto r = solve_optimal_shallow(c, depth);
    REQUIRE(r.has_value());
    CHECK(r->solution.size() <= q.size());
    CHECK(verify_solution(c, r->solution));
  }
  CHECK_FALSE(solve_optimal_shallow(testutil::scrambled(30, 1), 3).has_value());
}

TEST_CASE("two-phase and KB solutions verify within the ceiling") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const CubieState c = testutil::scrambled(40, 500 + s);
    const SolveResult tp = solve_two_phase(c);
    CHECK(verify_solution(c, tp.solution));
    CHECK(tp.solution.size() <= 23);
    CHECK(tp.backend == "two-phase");
    CHECK(static_cast<int>(tp.solution.size()) <= tp.phase1_length + tp.phase2_length);
  }
  const CubieState c = testutil::scrambled(40, 7);
  SolveBudget b = SolveBudget::kb_default();
  b.max_phase1_candidates = 2000;
  const SolveResult kb = solve_kb(c, b);
  CHECK(verify_solution(c, kb.solution));
  CHECK(kb.solution.size() <= solve_two_phase(c).solution.size());
  CHECK(kb.backend == "kb");
}

TEST_CASE("budget monotonicity") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const CubieState c = testutil::scrambled(40, 900 + s);
    std::size_t prev = 99;
    for (std::int64_t cand : {1, 10, 100, 1000}) {
      std::size_t len = 99;
      try {
        len = solve_kb(c, SolveBudget{23, 1, cand, 600'000}).solution.size();
      } catch (const Error& e) {
        CHECK(e.code() == Errc::TimeBudgetExhausted);
      }
      CHECK(len <= prev);
      prev = len;
    }
    CHECK(prev <= 23);
  }
}

TEST_CASE("budget and input errors") {
  CHECK_ERRC(solve_two_phase(CubieState::solved(), SolveBudget{0, 0, 1, 1}), Errc::InvalidBudget);
  CHECK_ERRC(solve_two_phase(CubieState::solved(), SolveBudget{23, 21, 0, 1}), Errc::InvalidBudget);
  CHECK_ERRC(solve_two_phase(CubieState::solved(), SolveBudget{23, 21, 10, 0}), Errc::InvalidBudget);
  CubieState bad = CubieState::solved();
  bad.co[0] = 1;
  CHECK_ERRC(solve_kb(bad), Errc::Unsolvable);
  CHECK_ERRC(solve_layer_by_layer(bad), Errc::Unsolvable);
  // A phase-1 depth that cannot be reached in time.
  CHECK_ERRC(solve_two_phase(testutil::scrambled(40, 3), SolveBudget{12, 12, 1, 1'000}), Errc::TimeBudgetExhausted);
}

TEST_CASE("layer-by-layer baseline") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const CubieState c = testutil::scrambled(s % 2 ? 40 : 7, 300 + s);
    const SolveResult r = solve_layer_by_layer(c);
    CHECK(verify_solution(c, r.solution));
    CHECK(r.backend == "layer-by-layer");
  }
}

TEST_CASE("verify_solution") {
  CHECK(verify_solution(CubieState::solved(), {}));
  const MoveSequence q = random_scramble(25, 12);
  const CubieState c = apply_sequence(CubieState::solved(), q);
  CHECK(verify_solution(c, invert_sequence(q)));
  MoveSequence wrong = invert_sequence(q);
  wrong[5].turns = static_cast<std::uint8_t>(wrong[5].turns % 3 + 1);
  CHECK_FALSE(is_solved(apply_sequence(c, wrong)));
  CHECK_FALSE(verify_solution(c, wrong));
}
