#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cubekb/coords.hpp"
#include "cubekb/cube.hpp"

namespace cubekb {

struct SolveBudget {
  int max_total_length = 23;
  // The search returns as soon as it holds a solution this short.
  int target_length = 21;
  std::int64_t max_phase1_candidates = 50;
  std::int64_t time_cap_ms = 1000;

  // Throws Error(InvalidBudget).
  void check() const;

  static SolveBudget two_phase_default() noexcept { return {}; }
  // Extended exploration used by the Knowledge Base backend.
  static SolveBudget kb_default() noexcept { return {23, 18, 100'000, 15'000}; }
  // Runs until the shortest solution reachable by the two-phase enumeration
  // is proven; only practical for shallow states.
  static SolveBudget exhaustive() noexcept { return {23, 1, INT64_C(1) << 40, INT64_C(1) << 40}; }
};

struct SolveResult {
  MoveSequence solution;
  int phase1_length = 0;
  int phase2_length = 0;
  std::uint64_t nodes_expanded = 0;
  std::int64_t phase1_candidates = 0;
  double elapsed_ms = 0.0;
  std::string backend;
};

// Two-phase search. Phase 1 is iterative deepening over depth into G1; each
// phase-1 path is completed by an optimal phase-2 search limited to
// (best total - phase-1 length - 1), so every accepted solution is strictly
// shorter than the previous one. Moves expand in the order U,R,F,D,L,B x 1,2,3.
// Throws Error(Unsolvable) or Error(TimeBudgetExhausted).
SolveResult solve_two_phase(const CubieState& state,
                            const SolveBudget& budget = SolveBudget::two_phase_default(),
                            const TwoPhaseTables& tables = shared_tables());

// Same engine with the extended Knowledge Base budget.
SolveResult solve_kb(const CubieState& state, const SolveBudget& budget = SolveBudget::kb_default(),
                     const TwoPhaseTables& tables = shared_tables());

// Staged macro solver standing in for human-style CFOP. Throws Error(Unsolvable).
SolveResult solve_layer_by_layer(const CubieState& state);

// Exact shortest solution by iterative deepening with full expansion, or
// nullopt when none exists within max_depth (clamped to 7).
std::optional<SolveResult> solve_optimal_shallow(const CubieState& state, int max_depth);

bool verify_solution(const CubieState& state, const MoveSequence& s) noexcept;

}  // namespace cubekb
