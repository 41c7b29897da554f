#include "cubekb/plan.hpp"
#include "cubekb/solvers.hpp"
#include "test_util.hpp"

using namespace cubekb;

namespace {

PrimitiveCommand to_layer(Face f) { return {CommandKind::MoveToLayer, f, Direction::Clockwise, 0}; }
PrimitiveCommand rotate(Face f, Direction d, int q) { return {CommandKind::RotateAtLayer, f, d, q}; }
PrimitiveCommand home() { return {}; }

}  // namespace

TEST_CASE("decompose") {
  const auto s = decompose(parse_moves("B1 U2 F2 L1 D1 R3"));
  CHECK(to_string(s) == "B1 U2 F2 L1 D1 R3");
  CHECK(decompose({}).empty());
  const auto r = decompose(parse_moves("R3"));
  REQUIRE(r.size() == 1);
  CHECK(r[0] == Move{Face::R, 3});
}

TEST_CASE("expand_subtask normalization") {
  using A = std::array<PrimitiveCommand, 3>;
  CHECK(expand_subtask({Face::R, 3}) == A{to_layer(Face::R), rotate(Face::R, Direction::CounterClockwise, 1), home()});
  CHECK(expand_subtask({Face::U, 2}) == A{to_layer(Face::U), rotate(Face::U, Direction::Clockwise, 2), home()});
  CHECK(expand_subtask({Face::F, 1}) == A{to_layer(Face::F), rotate(Face::F, Direction::Clockwise, 1), home()});
}

TEST_CASE("compile R3 yields the three command strings") {
  const Plan p = compile_plan(parse_moves("R3"));
  REQUIRE(p.commands.size() == 3);
  CHECK(command_text(p.commands[0]) == "move gripper to right layer");
  CHECK(command_text(p.commands[1]) == "rotate gripper at right layer counter-clockwise by 1*90 degrees");
  CHECK(command_text(p.commands[2]) == "move to initial pose");
  CHECK(plan_text(p) ==
        "move gripper to right layer\n"
        "rotate gripper at right layer counter-clockwise by 1*90 degrees\n"
        "move to initial pose\n");
  CHECK(compile_plan({}).commands.empty());
  CHECK(plan_semantics(Plan{}).empty());
}

TEST_CASE("round trip and rotation magnitude") {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const MoveSequence q = random_scramble(static_cast<int>(s % 30), s);
    const Plan p = compile_plan(q);
    REQUIRE(p.commands.size() == 3 * q.size());
    REQUIRE(p.subtask_boundaries.size() == q.size());
    REQUIRE(plan_semantics(p) == q);
    for (const PrimitiveCommand& c : p.commands) {
      if (c.kind == CommandKind::RotateAtLayer) {
        CHECK(c.quarter_turns >= 1);
        CHECK(c.quarter_turns <= 2);
        if (c.direction == Direction::CounterClockwise) CHECK(c.quarter_turns == 1);
      }
    }
  }
}

TEST_CASE("compiled solution restores the cube") {
  const CubieState c = testutil::scrambled(40, 8);
  const MoveSequence sol = solve_two_phase(c).solution;
  const Plan p = compile_plan(sol);
  CHECK(p.commands.size() == 3 * sol.size());
  CHECK(is_solved(apply_sequence(c, plan_semantics(p))));
}

TEST_CASE("malformed plans") {
  CHECK_ERRC(plan_semantics(Plan{{to_layer(Face::R)}, {0}}), Errc::MalformedPlan);
  CHECK_ERRC(plan_semantics(Plan{{to_layer(Face::R), rotate(Face::U, Direction::Clockwise, 1), home()}, {0}}),
             Errc::MalformedPlan);
  CHECK_ERRC(plan_semantics(Plan{{to_layer(Face::R), rotate(Face::R, Direction::Clockwise, 3), home()}, {0}}),
             Errc::MalformedPlan);
  CHECK_ERRC(plan_semantics(Plan{{home()}, {0}}), Errc::MalformedPlan);
}
