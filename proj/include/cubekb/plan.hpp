#pragma once

#include <array>
#include <string>
#include <vector>

#include "cubekb/cube.hpp"

namespace cubekb {

// One face turn of the restoration sequence.
using Subtask = Move;

enum class CommandKind { MoveToLayer, RotateAtLayer, MoveToInitialPose };
enum class Direction { Clockwise, CounterClockwise };

struct PrimitiveCommand {
  CommandKind kind = CommandKind::MoveToInitialPose;
  Face layer = Face::U;                     // MoveToLayer, RotateAtLayer
  Direction direction = Direction::Clockwise;  // RotateAtLayer
  int quarter_turns = 0;                    // RotateAtLayer: 1 or 2

  friend bool operator==(const PrimitiveCommand&, const PrimitiveCommand&) = default;
};

struct Plan {
  std::vector<PrimitiveCommand> commands;
  std::vector<std::size_t> subtask_boundaries;  // start index of each triple

  friend bool operator==(const Plan&, const Plan&) = default;
};

std::vector<Subtask> decompose(const MoveSequence& s);

// turns 1 -> clockwise x1, 2 -> clockwise x2, 3 -> counter-clockwise x1.
std::array<PrimitiveCommand, 3> expand_subtask(const Subtask& t);

Plan compile_plan(const MoveSequence& s);

// Inverse of compile_plan. Throws Error(MalformedPlan).
MoveSequence plan_semantics(const Plan& p);

// "move gripper to right layer", "rotate gripper at right layer
// counter-clockwise by 1*90 degrees", "move to initial pose".
std::string command_text(const PrimitiveCommand& c);
// One command per line, LF terminated.
std::string plan_text(const Plan& p);

std::string_view command_kind_name(CommandKind k) noexcept;
std::string_view direction_name(Direction d) noexcept;

}  // namespace cubekb
