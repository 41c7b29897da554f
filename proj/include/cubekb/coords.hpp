#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cubekb/cube.hpp"

namespace cubekb {

inline constexpr int kTwistCount = 2187;       // 3^7
inline constexpr int kFlipCount = 2048;        // 2^11
inline constexpr int kSliceCount = 495;        // C(12,4)
inline constexpr int kCornerPermCount = 40320; // 8!
inline constexpr int kUdEdgePermCount = 40320; // 8!
inline constexpr int kSlicePermCount = 24;     // 4!
inline constexpr int kPhase2MoveCount = 10;

// Phase-2 moves as indices into the 18-move list: U1 U2 U3 R2 F2 D1 D2 D3 L2 B2.
inline constexpr std::array<int, kPhase2MoveCount> kPhase2Moves{0, 1, 2, 4, 7, 9, 10, 11, 13, 16};

// All three zero iff the state lies in G1 = <U, D, R2, L2, F2, B2>.
struct Phase1Coord {
  std::uint16_t twist = 0;
  std::uint16_t flip = 0;
  std::uint16_t slice = 0;
  friend bool operator==(const Phase1Coord&, const Phase1Coord&) = default;
};

struct Phase2Coord {
  std::uint16_t corner_perm = 0;
  std::uint16_t ud_edge_perm = 0;
  std::uint8_t slice_perm = 0;
  friend bool operator==(const Phase2Coord&, const Phase2Coord&) = default;
};

int twist_coord(const CubieState& c) noexcept;
int flip_coord(const CubieState& c) noexcept;
int slice_coord(const CubieState& c) noexcept;
int corner_perm_coord(const CubieState& c) noexcept;
// Only meaningful when edges 0..7 occupy slots 0..7.
int ud_edge_perm_coord(const CubieState& c) noexcept;
int slice_perm_coord(const CubieState& c) noexcept;

// Representative states for a coordinate value; the untouched parts are solved.
CubieState decode_twist(int v) noexcept;
CubieState decode_flip(int v) noexcept;
CubieState decode_slice(int v) noexcept;
CubieState decode_corner_perm(int v) noexcept;
CubieState decode_ud_edge_perm(int v) noexcept;
CubieState decode_slice_perm(int v) noexcept;

Phase1Coord encode_phase1(const CubieState& state) noexcept;
// Throws Error(NotInSubgroup) unless encode_phase1(state) is all zero.
Phase2Coord encode_phase2(const CubieState& state);
bool in_g1(const CubieState& state) noexcept;

// Dense (coordinate, move) -> coordinate table.
struct MoveTable {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint16_t> data;

  int at(int coord, int move) const noexcept {
    return data[static_cast<std::size_t>(coord) * static_cast<std::size_t>(cols) +
                static_cast<std::size_t>(move)];
  }
  friend bool operator==(const MoveTable&, const MoveTable&) = default;
};

// Lower bound on moves to the phase goal for a pair of coordinates,
// indexed by first * cols + second.
struct PruneTable {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> data;

  int at(int first, int second) const noexcept {
    return data[static_cast<std::size_t>(first) * static_cast<std::size_t>(cols) +
                static_cast<std::size_t>(second)];
  }
  friend bool operator==(const PruneTable&, const PruneTable&) = default;
};

struct Phase1MoveTables {
  MoveTable twist;  // 2187 x 18
  MoveTable flip;   // 2048 x 18
  MoveTable slice;  // 495 x 18
};

struct Phase2MoveTables {
  MoveTable corner_perm;   // 40320 x 10
  MoveTable ud_edge_perm;  // 40320 x 10
  MoveTable slice_perm;    // 24 x 10
};

struct Phase1PruneTables {
  PruneTable twist_slice;  // 2187 x 495
  PruneTable flip_slice;   // 2048 x 495
  PruneTable twist_flip;   // 2187 x 2048
};

struct Phase2PruneTables {
  PruneTable corner_slice;  // 40320 x 24
  PruneTable edge_slice;    // 40320 x 24
};

Phase1MoveTables build_phase1_move_tables();
Phase2MoveTables build_phase2_move_tables();
Phase1PruneTables build_phase1_prune_tables(const Phase1MoveTables& moves);
Phase2PruneTables build_phase2_prune_tables(const Phase2MoveTables& moves);

// Whole-group lower bound from the corner permutation alone, tracked during
// phase 1 to cut paths that cannot beat the best total.
struct CornerBoundTables {
  MoveTable corner_perm;  // 40320 x 18
  PruneTable distance;    // 40320 x 1
};

CornerBoundTables build_corner_bound_tables();

struct TwoPhaseTables {
  Phase1MoveTables move1;
  Phase2MoveTables move2;
  Phase1PruneTables prune1;
  Phase2PruneTables prune2;
  CornerBoundTables corners;

  int phase1_bound(int twist, int flip, int slice) const noexcept {
    const int a = prune1.twist_slice.at(twist, slice);
    const int b = prune1.flip_slice.at(flip, slice);
    const int c = prune1.twist_flip.at(twist, flip);
    const int ab = a > b ? a : b;
    return ab > c ? ab : c;
  }
  int phase2_bound(int corner_perm, int ud_edge_perm, int slice_perm) const noexcept {
    const int a = prune2.corner_slice.at(corner_perm, slice_perm);
    const int b = prune2.edge_slice.at(ud_edge_perm, slice_perm);
    return a > b ? a : b;
  }
};

// Cache file layout (all little-endian):
//   magic "CKBT" | u32 format version | u32 phase | u32 table id |
//   u32 rows | u32 cols | u32 element bytes | u64 FNV-1a checksum of payload |
//   payload (rows * cols elements)
inline constexpr std::uint32_t kTableFormatVersion = 1;

std::string serialize_table(const MoveTable& t, std::uint32_t phase, std::uint32_t table_id);
std::string serialize_table(const PruneTable& t, std::uint32_t phase, std::uint32_t table_id);
// Throw Error(CorruptFile) on any header, size or checksum mismatch.
MoveTable deserialize_move_table(const std::string& bytes, std::uint32_t phase,
                                 std::uint32_t table_id, int rows, int cols);
PruneTable deserialize_prune_table(const std::string& bytes, std::uint32_t phase,
                                   std::uint32_t table_id, int rows, int cols);

std::uint64_t fnv1a64(const void* data, std::size_t size) noexcept;

// $RUBIK_KB_CACHE, else $XDG_CACHE_HOME/cubekb, else $HOME/.cache/cubekb.
std::filesystem::path cache_directory();

// Builds every table from scratch (no disk access).
TwoPhaseTables build_all_tables();
// Loads from the cache directory, rebuilding and rewriting any missing or
// stale file. Failure to write the cache is not an error.
TwoPhaseTables load_or_build_tables(const std::filesystem::path& dir);
// Process-wide immutable instance, initialized once on first use.
const TwoPhaseTables& shared_tables();

}  // namespace cubekb
