#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cubekb/error.hpp"

namespace cubekb {

// Face labels in descriptor order. Colors are bound to faces:
// U yellow, R green, F red, D white, L blue, B orange.
enum class Face : std::uint8_t { U = 0, R, F, D, L, B };

inline constexpr std::array<Face, 6> kFaces{Face::U, Face::R, Face::F,
                                            Face::D, Face::L, Face::B};

char face_letter(Face f) noexcept;
std::optional<Face> face_from_letter(char c) noexcept;
std::string_view face_color(Face f) noexcept;
// Lower-case layer name used in natural-language plan text ("right").
std::string_view face_name(Face f) noexcept;
constexpr int face_index(Face f) noexcept { return static_cast<int>(f); }
constexpr Face opposite(Face f) noexcept { return static_cast<Face>((face_index(f) + 3) % 6); }

// A clockwise face turn of 90 * turns degrees, turns in {1, 2, 3}.
struct Move {
  Face face = Face::U;
  std::uint8_t turns = 1;

  // Dense index in the fixed expansion order U1 U2 U3 R1 ... B3.
  constexpr int index() const noexcept { return face_index(face) * 3 + turns - 1; }
  static constexpr Move from_index(int i) noexcept {
    return Move{static_cast<Face>(i / 3), static_cast<std::uint8_t>(i % 3 + 1)};
  }
  constexpr Move inverse() const noexcept {
    return Move{face, static_cast<std::uint8_t>(4 - turns)};
  }
  friend constexpr bool operator==(const Move&, const Move&) = default;
};

inline constexpr int kNumMoves = 18;

using MoveSequence = std::vector<Move>;

// Parses "B1 U2 F2 L1 D1 R3". Throws Error(BadToken).
MoveSequence parse_moves(std::string_view text);
std::string to_string(const MoveSequence& s);
std::string to_string(Move m);
MoveSequence invert_sequence(const MoveSequence& s);

// Facelet positions: faces U,R,F,D,L,B, nine stickers each, row-major.
// U is viewed with B at the top, D with F at the top, the side faces
// upright with U at the top. Centers sit at 4, 13, 22, 31, 40, 49.
struct FaceletState {
  std::array<Face, 54> stickers{};

  static FaceletState solved() noexcept;
  std::string to_string() const;
  friend bool operator==(const FaceletState&, const FaceletState&) = default;
};

// Throws Error with WrongLength, InvalidCharacter, CountViolation or
// CenterViolation.
FaceletState parse_facelets(std::string_view text);

// Corner slots URF UFL ULB UBR DFR DLF DBL DRB; edge slots UR UF UL UB DR DF
// DL DB FR FL BL BR. cp[i] is the corner occupying slot i, co[i] its twist.
struct CubieState {
  std::array<std::uint8_t, 8> cp{0, 1, 2, 3, 4, 5, 6, 7};
  std::array<std::uint8_t, 8> co{};
  std::array<std::uint8_t, 12> ep{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  std::array<std::uint8_t, 12> eo{};

  static constexpr CubieState solved() noexcept { return CubieState{}; }
  friend bool operator==(const CubieState&, const CubieState&) = default;
};

enum Corner : std::uint8_t { URF, UFL, ULB, UBR, DFR, DLF, DBL, DRB };
enum Edge : std::uint8_t { UR, UF, UL, UB, DR, DF, DL, DB, FR, FL, BL, BR };

// Sticker positions of each corner/edge slot, U/D sticker first for corners
// and clockwise after that.
extern const std::array<std::array<std::uint8_t, 3>, 8> kCornerFacelet;
extern const std::array<std::array<std::uint8_t, 2>, 12> kEdgeFacelet;
extern const std::array<std::array<Face, 3>, 8> kCornerColor;
extern const std::array<std::array<Face, 2>, 12> kEdgeColor;

// Group product a*b: apply a, then b.
CubieState multiply(const CubieState& a, const CubieState& b) noexcept;
CubieState inverse(const CubieState& c) noexcept;

// The cubie state of a single clockwise quarter turn of each face.
const CubieState& basic_move(Face f) noexcept;
// The cubie state of each of the 18 moves, by Move::index().
const std::array<CubieState, kNumMoves>& move_cubes() noexcept;

CubieState apply_move(const CubieState& state, Move m) noexcept;
CubieState apply_sequence(const CubieState& state, const MoveSequence& s) noexcept;

// Throws Error(UnrecognizedCubie) when a sticker tuple is no physical piece or
// a piece appears twice.
CubieState facelets_to_cubies(const FaceletState& f);
FaceletState cubies_to_facelets(const CubieState& c) noexcept;

bool corner_parity_odd(const CubieState& c) noexcept;
bool edge_parity_odd(const CubieState& c) noexcept;

// nullopt when the state is reachable from solved; otherwise the first
// violated invariant (TwistViolation, FlipViolation, ParityViolation).
std::optional<Errc> validate(const CubieState& state) noexcept;
// Throws Error(Unsolvable) carrying the violation name.
void require_valid(const CubieState& state);

bool is_solved(const CubieState& state) noexcept;

// n moves, no two consecutive on the same face, deterministic in seed.
MoveSequence random_scramble(int n, std::uint64_t seed);

// Merges consecutive same-face turns ("R1 R2" -> "R3", "R2 R2" -> nothing).
MoveSequence simplify(const MoveSequence& s);

}  // namespace cubekb
