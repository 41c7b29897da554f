#include <algorithm>
#include <array>
#include <chrono>

#include "cubekb/solvers.hpp"

namespace cubekb {

void SolveBudget::check() const {
  if (max_total_length <= 0 || target_length <= 0 || max_phase1_candidates <= 0 ||
      time_cap_ms <= 0) {
    throw Error(Errc::InvalidBudget, "budget fields must be positive");
  }
  if (target_length > max_total_length) {
    throw Error(Errc::InvalidBudget, "target_length exceeds max_total_length");
  }
}

bool verify_solution(const CubieState& state, const MoveSequence& s) noexcept {
  return is_solved(apply_sequence(state, s));
}

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kMaxDepth = 32;
constexpr int kNoFace = -1;

// Quarter turns of R, F, L, B: the only moves that can end phase 1 without the
// last move being absorbable into phase 2.
constexpr bool ends_phase1(int m) noexcept {
  const int face = m / 3;
  const int turns = m % 3 + 1;
  return turns != 2 && face != face_index(Face::U) && face != face_index(Face::D);
}

// Canonical order: never the same face twice in a row, and for opposite faces
// only U-D, R-L, F-B order.
constexpr bool allowed_after(int face, int last) noexcept {
  return face != last && !(last >= 3 && face == last - 3);
}

class TwoPhaseSearch {
 public:
  TwoPhaseSearch(const TwoPhaseTables& t, const CubieState& start, const SolveBudget& budget)
      : t_(t), start_(start), budget_(budget), begin_(Clock::now()),
        deadline_(begin_ + std::chrono::milliseconds(budget.time_cap_ms)) {}

  SolveResult run(const char* backend) {
    best_ = budget_.max_total_length + 1;
    const Phase1Coord c = encode_phase1(start_);
    const int h = t_.phase1_bound(c.twist, c.flip, c.slice);
    for (int depth = h; depth < best_ && depth <= budget_.max_total_length && !stop_; ++depth) {
      phase1_depth_ = depth;
      phase1(c.twist, c.flip, c.slice, corner_perm_coord(start_), depth, kNoFace, 0);
    }
    SolveResult r;
    r.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - begin_).count();
    r.nodes_expanded = nodes_;
    r.phase1_candidates = candidates_;
    r.backend = backend;
    if (best_ > budget_.max_total_length) {
      throw Error(Errc::TimeBudgetExhausted,
                  "no solution within " + std::to_string(budget_.max_total_length) +
                      " moves under the search budget");
    }
    r.solution = best_solution_;
    r.phase1_length = best_phase1_;
    r.phase2_length = best_ - best_phase1_;
    return r;
  }

 private:
  bool tick() {
    ++nodes_;
    if ((nodes_ & 0xfff) == 0 && Clock::now() >= deadline_) stop_ = true;
    return stop_;
  }

  void phase1(int twist, int flip, int slice, int corners, int togo, int last, int ply) {
    if (togo == 0) {
      if (twist == 0 && flip == 0 && slice == 0 && (ply == 0 || ends_phase1(path1_[ply - 1]))) {
        on_phase1_solution(ply, last);
      }
      return;
    }
    for (int m = 0; m < kNumMoves && !stop_; ++m) {
      const int face = m / 3;
      if (!allowed_after(face, last)) continue;
      if (togo == 1 && !ends_phase1(m)) continue;
      const int nt = t_.move1.twist.at(twist, m);
      const int ns = t_.move1.slice.at(slice, m);
      if (t_.prune1.twist_slice.at(nt, ns) >= togo) continue;
      const int nf = t_.move1.flip.at(flip, m);
      if (t_.prune1.flip_slice.at(nf, ns) >= togo) continue;
      if (t_.prune1.twist_flip.at(nt, nf) >= togo) continue;
      // Any completion of this path is at least as long as the corner bound.
      const int nc = t_.corners.corner_perm.at(corners, m);
      if (ply + 1 + t_.corners.distance.at(nc, 0) >= best_) continue;
      if (tick()) return;
      path1_[ply] = m;
      phase1(nt, nf, ns, nc, togo - 1, face, ply + 1);
    }
  }

  void on_phase1_solution(int ply, int last_face) {
    ++candidates_;
    CubieState s = start_;
    for (int i = 0; i < ply; ++i) s = apply_move(s, Move::from_index(path1_[i]));
    const Phase2Coord c = encode_phase2(s);
    const int allowance = best_ - 1 - ply;
    const int h = t_.phase2_bound(c.corner_perm, c.ud_edge_perm, c.slice_perm);
    for (int depth = h; depth <= allowance && !stop_; ++depth) {
      if (phase2(c.corner_perm, c.ud_edge_perm, c.slice_perm, depth, last_face, 0, true)) {
        best_ = ply + depth;
        best_phase1_ = ply;
        best_solution_.clear();
        for (int i = 0; i < ply; ++i) best_solution_.push_back(Move::from_index(path1_[i]));
        for (int i = 0; i < depth; ++i) best_solution_.push_back(Move::from_index(path2_[i]));
        if (best_ <= budget_.target_length) stop_ = true;
        break;
      }
    }
    if (candidates_ >= budget_.max_phase1_candidates) stop_ = true;
  }

  bool phase2(int cp, int ep, int sp, int togo, int last, int ply, bool first) {
    if (togo == 0) return cp == 0 && ep == 0 && sp == 0;
    for (int k = 0; k < kPhase2MoveCount && !stop_; ++k) {
      const int m = kPhase2Moves[k];
      const int face = m / 3;
      // Across the phase boundary only a same-face repeat is redundant.
      if (first ? face == last : !allowed_after(face, last)) continue;
      const int ncp = t_.move2.corner_perm.at(cp, k);
      const int nep = t_.move2.ud_edge_perm.at(ep, k);
      const int nsp = t_.move2.slice_perm.at(sp, k);
      if (t_.phase2_bound(ncp, nep, nsp) > togo - 1) continue;
      if (tick()) return false;
      path2_[ply] = m;
      if (phase2(ncp, nep, nsp, togo - 1, face, ply + 1, false)) return true;
    }
    return false;
  }

  const TwoPhaseTables& t_;
  CubieState start_;
  SolveBudget budget_;
  Clock::time_point begin_;
  Clock::time_point deadline_;

  std::array<int, kMaxDepth> path1_{};
  std::array<int, kMaxDepth> path2_{};
  int phase1_depth_ = 0;
  int best_ = 0;
  int best_phase1_ = 0;
  MoveSequence best_solution_;
  std::uint64_t nodes_ = 0;
  std::int64_t candidates_ = 0;
  bool stop_ = false;
};

SolveResult run_search(const CubieState& state, const SolveBudget& budget,
                       const TwoPhaseTables& tables, const char* backend) {
  budget.check();
  require_valid(state);
  return TwoPhaseSearch(tables, state, budget).run(backend);
}

}  // namespace

SolveResult solve_two_phase(const CubieState& state, const SolveBudget& budget,
                            const TwoPhaseTables& tables) {
  return run_search(state, budget, tables, "two-phase");
}

SolveResult solve_kb(const CubieState& state, const SolveBudget& budget,
                     const TwoPhaseTables& tables) {
  return run_search(state, budget, tables, "kb");
}

std::optional<SolveResult> solve_optimal_shallow(const CubieState& state, int max_depth) {
  require_valid(state);
  max_depth = std::clamp(max_depth, 0, 7);
  const auto begin = Clock::now();
  const auto& cubes = move_cubes();
  std::array<int, 8> path{};
  std::uint64_t nodes = 0;

  auto dfs = [&](auto&& self, const CubieState& s, int togo, int last, int ply) -> bool {
    if (togo == 0) return is_solved(s);
    for (int m = 0; m < kNumMoves; ++m) {
      const int face = m / 3;
      if (!allowed_after(face, last)) continue;
      ++nodes;
      path[ply] = m;
      if (self(self, multiply(s, cubes[m]), togo - 1, face, ply + 1)) return true;
    }
    return false;
  };

  for (int depth = 0; depth <= max_depth; ++depth) {
    if (dfs(dfs, state, depth, kNoFace, 0)) {
      SolveResult r;
      for (int i = 0; i < depth; ++i) r.solution.push_back(Move::from_index(path[i]));
      r.phase1_length = depth;
      r.nodes_expanded = nodes;
      r.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - begin).count();
      r.backend = "optimal-shallow";
      return r;
    }
  }
  return std::nullopt;
}

}  // namespace cubekb
