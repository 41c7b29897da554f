#include "cubekb/plan.hpp"

#include "cubekb/error.hpp"

namespace cubekb {

std::vector<Subtask> decompose(const MoveSequence& s) { return {s.begin(), s.end()}; }

std::array<PrimitiveCommand, 3> expand_subtask(const Subtask& t) {
  PrimitiveCommand rotate{CommandKind::RotateAtLayer, t.face, Direction::Clockwise, t.turns};
  if (t.turns == 3) {
    rotate.direction = Direction::CounterClockwise;
    rotate.quarter_turns = 1;
  }
  return {PrimitiveCommand{CommandKind::MoveToLayer, t.face, Direction::Clockwise, 0}, rotate,
          PrimitiveCommand{}};
}

Plan compile_plan(const MoveSequence& s) {
  Plan p;
  p.commands.reserve(3 * s.size());
  p.subtask_boundaries.reserve(s.size());
  for (const Subtask& t : decompose(s)) {
    p.subtask_boundaries.push_back(p.commands.size());
    for (const PrimitiveCommand& c : expand_subtask(t)) p.commands.push_back(c);
  }
  return p;
}

MoveSequence plan_semantics(const Plan& p) {
  auto fail = [](std::size_t at, const std::string& why) {
    throw Error(Errc::MalformedPlan, "command " + std::to_string(at) + ": " + why);
  };
  if (p.commands.size() % 3 != 0) fail(p.commands.size(), "dangling commands after last triple");
  const std::size_t n = p.commands.size() / 3;
  if (p.subtask_boundaries.size() != n) fail(0, "boundary count does not match triples");
  MoveSequence out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t b = 3 * i;
    if (p.subtask_boundaries[i] != b) fail(b, "boundary does not start a triple");
    const PrimitiveCommand& go = p.commands[b];
    const PrimitiveCommand& rot = p.commands[b + 1];
    const PrimitiveCommand& home = p.commands[b + 2];
    if (go.kind != CommandKind::MoveToLayer) fail(b, "expected move-to-layer");
    if (rot.kind != CommandKind::RotateAtLayer) fail(b + 1, "expected rotate-at-layer");
    if (home.kind != CommandKind::MoveToInitialPose) fail(b + 2, "expected move-to-initial-pose");
    if (rot.layer != go.layer) fail(b + 1, "rotation layer differs from approach layer");
    int turns = 0;
    if (rot.direction == Direction::Clockwise && (rot.quarter_turns == 1 || rot.quarter_turns == 2)) {
      turns = rot.quarter_turns;
    } else if (rot.direction == Direction::CounterClockwise && rot.quarter_turns == 1) {
      turns = 3;
    } else {
      fail(b + 1, "unsupported rotation");
    }
    out.push_back(Move{rot.layer, static_cast<std::uint8_t>(turns)});
  }
  return out;
}

std::string_view command_kind_name(CommandKind k) noexcept {
  switch (k) {
    case CommandKind::MoveToLayer: return "MoveToLayer";
    case CommandKind::RotateAtLayer: return "RotateAtLayer";
    case CommandKind::MoveToInitialPose: return "MoveToInitialPose";
  }
  return "";
}

std::string_view direction_name(Direction d) noexcept {
  return d == Direction::Clockwise ? "clockwise" : "counter-clockwise";
}

std::string command_text(const PrimitiveCommand& c) {
  const std::string layer(face_name(c.layer));
  switch (c.kind) {
    case CommandKind::MoveToLayer:
      return "move gripper to " + layer + " layer";
    case CommandKind::RotateAtLayer:
      return "rotate gripper at " + layer + " layer " + std::string(direction_name(c.direction)) +
             " by " + std::to_string(c.quarter_turns) + "*90 degrees";
    case CommandKind::MoveToInitialPose:
      return "move to initial pose";
  }
  return "";
}

std::string plan_text(const Plan& p) {
  std::string out;
  for (const PrimitiveCommand& c : p.commands) {
    out += command_text(c);
    out += '\n';
  }
  return out;
}

}  // namespace cubekb
