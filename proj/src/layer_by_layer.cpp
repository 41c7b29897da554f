// Layer-by-layer baseline: D-face cross, four first-two-layer pairs, then the
// last layer in four macro stages (edge orientation, corner orientation,
// corner permutation, edge permutation).
//
// The first two layers use IDA* over face turns with small exact pattern
// databases (cross edges; each corner/edge pair), solving the pairs in slot
// order FR, FL, BL, BR. Each last-layer stage repeats one macro, interleaved
// with U setup turns, until its goal holds:
//
//   edge orientation    F1 R1 U1 R3 U3 F3
//   corner orientation  R1 U1 R3 U1 R1 U2 R3
//   corner permutation  R3 F1 R3 B2 R1 F3 R3 B2 R2
//   edge permutation    R1 U3 R1 U1 R1 U1 R1 U3 R3 U3 R2

#include <array>
#include <chrono>
#include <vector>

#include "cubekb/solvers.hpp"

namespace cubekb {

namespace {

using Clock = std::chrono::steady_clock;

// Slot state of a single piece: position * orientations + orientation.
struct PieceMoves {
  std::array<std::array<std::uint8_t, 24>, kNumMoves> edge{};
  std::array<std::array<std::uint8_t, 24>, kNumMoves> corner{};
};

const PieceMoves& piece_moves() {
  static const PieceMoves pm = [] {
    PieceMoves t;
    const auto& cubes = move_cubes();
    for (int m = 0; m < kNumMoves; ++m) {
      const CubieState& mc = cubes[m];
      for (int i = 0; i < 12; ++i) {
        for (int o = 0; o < 2; ++o) {
          t.edge[m][mc.ep[i] * 2 + o] = static_cast<std::uint8_t>(i * 2 + (o + mc.eo[i]) % 2);
        }
      }
      for (int i = 0; i < 8; ++i) {
        for (int o = 0; o < 3; ++o) {
          t.corner[m][mc.cp[i] * 3 + o] = static_cast<std::uint8_t>(i * 3 + (o + mc.co[i]) % 3);
        }
      }
    }
    return t;
  }();
  return pm;
}

// Tracked first-two-layer pieces: edges DR DF DL DB FR FL BL BR and corners
// DFR DLF DBL DRB. Slot k of each pair is (corner DFR+k, edge FR+k).
struct F2lState {
  std::array<std::uint8_t, 8> edge{};
  std::array<std::uint8_t, 4> corner{};

  static F2lState from(const CubieState& c) {
    F2lState s;
    for (int i = 0; i < 12; ++i) {
      if (c.ep[i] >= DR) s.edge[c.ep[i] - DR] = static_cast<std::uint8_t>(i * 2 + c.eo[i]);
    }
    for (int i = 0; i < 8; ++i) {
      if (c.cp[i] >= DFR) s.corner[c.cp[i] - DFR] = static_cast<std::uint8_t>(i * 3 + c.co[i]);
    }
    return s;
  }

  F2lState moved(int m, const PieceMoves& pm) const noexcept {
    F2lState s;
    for (int k = 0; k < 8; ++k) s.edge[k] = pm.edge[m][edge[k]];
    for (int k = 0; k < 4; ++k) s.corner[k] = pm.corner[m][corner[k]];
    return s;
  }

  int cross_index() const noexcept {
    return ((edge[0] * 24 + edge[1]) * 24 + edge[2]) * 24 + edge[3];
  }
  int pair_index(int slot) const noexcept { return corner[slot] * 24 + edge[4 + slot]; }
  bool cross_solved() const noexcept {
    for (int k = 0; k < 4; ++k) {
      if (edge[k] != (DR + k) * 2) return false;
    }
    return true;
  }
  bool pair_solved(int slot) const noexcept {
    return corner[slot] == (DFR + slot) * 3 && edge[4 + slot] == (FR + slot) * 2;
  }
};

struct Databases {
  std::vector<std::uint8_t> cross;                   // 24^4
  std::array<std::vector<std::uint8_t>, 4> pair;     // 24 * 24 per slot
};

template <typename Index, typename Step>
std::vector<std::uint8_t> bfs(std::size_t size, const F2lState& goal, Index index, Step step) {
  std::vector<std::uint8_t> dist(size, 0xff);
  std::vector<F2lState> frontier{goal};
  std::vector<F2lState> next;
  dist[index(goal)] = 0;
  for (std::uint8_t d = 1; !frontier.empty(); ++d) {
    next.clear();
    for (const F2lState& s : frontier) {
      for (int m = 0; m < kNumMoves; ++m) {
        const F2lState n = step(s, m);
        auto& slot = dist[index(n)];
        if (slot == 0xff) {
          slot = d;
          next.push_back(n);
        }
      }
    }
    frontier.swap(next);
  }
  return dist;
}

const Databases& databases() {
  static const Databases db = [] {
    const auto& pm = piece_moves();
    const F2lState goal = F2lState::from(CubieState::solved());
    Databases d;
    d.cross = bfs(
        331776, goal, [](const F2lState& s) { return s.cross_index(); },
        [&](const F2lState& s, int m) {
          F2lState n = s;
          for (int k = 0; k < 4; ++k) n.edge[k] = pm.edge[m][s.edge[k]];
          return n;
        });
    for (int slot = 0; slot < 4; ++slot) {
      d.pair[slot] = bfs(
          576, goal, [slot](const F2lState& s) { return s.pair_index(slot); },
          [&, slot](const F2lState& s, int m) {
            F2lState n = s;
            n.corner[slot] = pm.corner[m][s.corner[slot]];
            n.edge[4 + slot] = pm.edge[m][s.edge[4 + slot]];
            return n;
          });
    }
    return d;
  }();
  return db;
}

constexpr bool allowed_after(int face, int last) noexcept {
  return face != last && !(last >= 3 && face == last - 3);
}

class F2lSearch {
 public:
  explicit F2lSearch(std::uint64_t& nodes) : pm_(piece_moves()), db_(databases()), nodes_(nodes) {}

  // Shortest sequence solving the cross plus every slot in `slots`.
  bool solve(const F2lState& start, unsigned slots, int depth, MoveSequence& out) {
    slots_ = slots;
    if (bound(start) > depth) return false;
    if (!dfs(start, depth, -1, 0)) return false;
    out.assign(path_.begin(), path_.begin() + depth);
    return true;
  }

 private:
  int bound(const F2lState& s) const noexcept {
    int h = db_.cross[static_cast<std::size_t>(s.cross_index())];
    for (int k = 0; k < 4; ++k) {
      if (slots_ & (1u << k)) {
        const int p = db_.pair[k][static_cast<std::size_t>(s.pair_index(k))];
        if (p > h) h = p;
      }
    }
    return h;
  }

  bool dfs(const F2lState& s, int togo, int last, int ply) {
    if (togo == 0) return bound(s) == 0;
    for (int m = 0; m < kNumMoves; ++m) {
      const int face = m / 3;
      if (!allowed_after(face, last)) continue;
      const F2lState n = s.moved(m, pm_);
      if (bound(n) > togo - 1) continue;
      ++nodes_;
      path_[ply] = Move::from_index(m);
      if (dfs(n, togo - 1, face, ply + 1)) return true;
    }
    return false;
  }

  const PieceMoves& pm_;
  const Databases& db_;
  std::uint64_t& nodes_;
  unsigned slots_ = 0;
  std::array<Move, 32> path_{};
};

// Last-layer stage: shortest combination (in macro count) of the stage
// macros and U setup turns reaching the goal.
struct Macro {
  MoveSequence moves;
  bool is_setup = false;
};

std::vector<Macro> alphabet(std::initializer_list<const char*> macros, bool with_inverses) {
  std::vector<Macro> out{{parse_moves("U1"), true}, {parse_moves("U2"), true},
                         {parse_moves("U3"), true}};
  for (const char* text : macros) {
    out.push_back({parse_moves(text), false});
    if (with_inverses) out.push_back({invert_sequence(parse_moves(text)), false});
  }
  return out;
}

template <typename Goal>
bool macro_dfs(const CubieState& s, const std::vector<Macro>& items, int togo, int last,
               std::vector<int>& path, Goal goal, std::uint64_t& nodes) {
  if (togo == 0) return goal(s);
  for (int i = 0; i < static_cast<int>(items.size()); ++i) {
    if (last >= 0 && items[i].is_setup && items[last].is_setup) continue;
    ++nodes;
    path.push_back(i);
    if (macro_dfs(apply_sequence(s, items[i].moves), items, togo - 1, i, path, goal, nodes)) {
      return true;
    }
    path.pop_back();
  }
  return false;
}

template <typename Goal>
void macro_stage(CubieState& s, MoveSequence& solution, const std::vector<Macro>& items, Goal goal,
                 std::uint64_t& nodes, const char* stage) {
  std::vector<int> path;
  for (int depth = 0; depth <= 9; ++depth) {
    path.clear();
    if (macro_dfs(s, items, depth, -1, path, goal, nodes)) {
      for (int i : path) {
        solution.insert(solution.end(), items[i].moves.begin(), items[i].moves.end());
        s = apply_sequence(s, items[i].moves);
      }
      return;
    }
  }
  throw Error(Errc::Unsolvable, std::string("last-layer stage failed: ") + stage);
}

bool first_two_layers_solved(const CubieState& c) noexcept {
  for (int i = DFR; i <= DRB; ++i) {
    if (c.cp[i] != i || c.co[i] != 0) return false;
  }
  for (int i = DR; i <= BR; ++i) {
    if (c.ep[i] != i || c.eo[i] != 0) return false;
  }
  return true;
}

}  // namespace

SolveResult solve_layer_by_layer(const CubieState& state) {
  require_valid(state);
  const auto begin = Clock::now();
  SolveResult r;
  r.backend = "layer-by-layer";
  std::uint64_t nodes = 0;
  CubieState s = state;
  MoveSequence solution;

  // Cross, then the pairs in fixed slot order FR, FL, BL, BR.
  F2lSearch f2l(nodes);
  unsigned done = 0;
  for (int round = 0; round <= 4; ++round) {
    const F2lState start = F2lState::from(s);
    if (round > 0) done |= 1u << (round - 1);
    bool found = false;
    MoveSequence step;
    for (int depth = 0; depth <= 20 && !found; ++depth) {
      found = f2l.solve(start, done, depth, step);
    }
    if (!found) throw Error(Errc::Unsolvable, "first-two-layers stage failed");
    solution.insert(solution.end(), step.begin(), step.end());
    s = apply_sequence(s, step);
  }

  static const auto eo_items = alphabet({"F1 R1 U1 R3 U3 F3"}, false);
  static const auto co_items = alphabet({"R1 U1 R3 U1 R1 U2 R3"}, false);
  static const auto cp_items = alphabet({"R3 F1 R3 B2 R1 F3 R3 B2 R2"}, false);
  static const auto ep_items = alphabet({"R1 U3 R1 U1 R1 U1 R1 U3 R3 U3 R2"}, false);

  auto edges_oriented = [](const CubieState& c) {
    return first_two_layers_solved(c) && c.eo[UR] == 0 && c.eo[UF] == 0 && c.eo[UL] == 0 &&
           c.eo[UB] == 0;
  };
  auto oriented = [&](const CubieState& c) {
    return edges_oriented(c) && c.co[URF] == 0 && c.co[UFL] == 0 && c.co[ULB] == 0 &&
           c.co[UBR] == 0;
  };
  auto corners_placed = [&](const CubieState& c) {
    return oriented(c) && c.cp[URF] == URF && c.cp[UFL] == UFL && c.cp[ULB] == ULB &&
           c.cp[UBR] == UBR;
  };

  macro_stage(s, solution, eo_items, edges_oriented, nodes, "edge orientation");
  macro_stage(s, solution, co_items, oriented, nodes, "corner orientation");
  macro_stage(s, solution, cp_items, corners_placed, nodes, "corner permutation");
  macro_stage(s, solution, ep_items, is_solved, nodes, "edge permutation");

  r.solution = simplify(solution);
  r.phase1_length = static_cast<int>(r.solution.size());
  r.nodes_expanded = nodes;
  r.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - begin).count();
  if (!verify_solution(state, r.solution)) {
    throw Error(Errc::Unsolvable, "layer-by-layer produced an unverified sequence");
  }
  return r;
}

}  // namespace cubekb
