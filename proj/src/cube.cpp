#include "cubekb/cube.hpp"

#include <algorithm>
#include <cctype>

#include "cubekb/rng.hpp"

namespace cubekb {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::WrongLength: return "WrongLength";
    case Errc::InvalidCharacter: return "InvalidCharacter";
    case Errc::CountViolation: return "CountViolation";
    case Errc::CenterViolation: return "CenterViolation";
    case Errc::UnrecognizedCubie: return "UnrecognizedCubie";
    case Errc::BadToken: return "BadToken";
    case Errc::TwistViolation: return "TwistViolation";
    case Errc::FlipViolation: return "FlipViolation";
    case Errc::ParityViolation: return "ParityViolation";
    case Errc::NotInSubgroup: return "NotInSubgroup";
    case Errc::Unsolvable: return "Unsolvable";
    case Errc::TimeBudgetExhausted: return "TimeBudgetExhausted";
    case Errc::InvalidBudget: return "InvalidBudget";
    case Errc::NotASolution: return "NotASolution";
    case Errc::EmptySample: return "EmptySample";
    case Errc::IOFailure: return "IOFailure";
    case Errc::MalformedPlan: return "MalformedPlan";
    case Errc::NoTargetVoxel: return "NoTargetVoxel";
    case Errc::GeometryMismatch: return "GeometryMismatch";
    case Errc::NoProgress: return "NoProgress";
    case Errc::OutOfBounds: return "OutOfBounds";
    case Errc::NonMonotonicTime: return "NonMonotonicTime";
    case Errc::InfeasibleTiming: return "InfeasibleTiming";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::LayerUnreachable: return "LayerUnreachable";
    case Errc::ParseError: return "ParseError";
    case Errc::CorruptFile: return "CorruptFile";
  }
  return "Unknown";
}

char face_letter(Face f) noexcept { return "URFDLB"[face_index(f)]; }

std::optional<Face> face_from_letter(char c) noexcept {
  switch (c) {
    case 'U': return Face::U;
    case 'R': return Face::R;
    case 'F': return Face::F;
    case 'D': return Face::D;
    case 'L': return Face::L;
    case 'B': return Face::B;
    default: return std::nullopt;
  }
}

std::string_view face_color(Face f) noexcept {
  static constexpr std::array<std::string_view, 6> names{"yellow", "green", "red",
                                                          "white",  "blue",  "orange"};
  return names[face_index(f)];
}

std::string_view face_name(Face f) noexcept {
  static constexpr std::array<std::string_view, 6> names{"upper", "right", "front",
                                                          "down",  "left",  "back"};
  return names[face_index(f)];
}

// ---------------------------------------------------------------------------
// Move text

MoveSequence parse_moves(std::string_view text) {
  MoveSequence out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    const std::string_view tok = text.substr(i, j - i);
    const auto face = tok.size() == 2 ? face_from_letter(tok[0]) : std::nullopt;
    if (!face || tok[1] < '1' || tok[1] > '3') {
      throw Error(Errc::BadToken, "bad move token '" + std::string(tok) + "'");
    }
    out.push_back(Move{*face, static_cast<std::uint8_t>(tok[1] - '0')});
    i = j;
  }
  return out;
}

std::string to_string(Move m) {
  return std::string{face_letter(m.face), static_cast<char>('0' + m.turns)};
}

std::string to_string(const MoveSequence& s) {
  std::string out;
  for (const Move& m : s) {
    if (!out.empty()) out += ' ';
    out += to_string(m);
  }
  return out;
}

MoveSequence invert_sequence(const MoveSequence& s) {
  MoveSequence out;
  out.reserve(s.size());
  for (auto it = s.rbegin(); it != s.rend(); ++it) out.push_back(it->inverse());
  return out;
}

MoveSequence simplify(const MoveSequence& s) {
  MoveSequence out;
  auto merge_into = [&](std::size_t pos, Move m) {
    const int t = (out[pos].turns + m.turns) % 4;
    if (t == 0) {
      out.erase(out.begin() + static_cast<std::ptrdiff_t>(pos));
    } else {
      out[pos].turns = static_cast<std::uint8_t>(t);
    }
  };
  for (const Move& m : s) {
    const std::size_t n = out.size();
    if (n >= 1 && out[n - 1].face == m.face) {
      merge_into(n - 1, m);
    } else if (n >= 2 && out[n - 1].face == opposite(m.face) && out[n - 2].face == m.face) {
      merge_into(n - 2, m);
    } else {
      out.push_back(m);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Facelets

const std::array<std::array<std::uint8_t, 3>, 8> kCornerFacelet{{
    {8, 9, 20},    // URF
    {6, 18, 38},   // UFL
    {0, 36, 47},   // ULB
    {2, 45, 11},   // UBR
    {29, 26, 15},  // DFR
    {27, 44, 24},  // DLF
    {33, 53, 42},  // DBL
    {35, 17, 51},  // DRB
}};

const std::array<std::array<std::uint8_t, 2>, 12> kEdgeFacelet{{
    {5, 10},   // UR
    {7, 19},   // UF
    {3, 37},   // UL
    {1, 46},   // UB
    {32, 16},  // DR
    {28, 25},  // DF
    {30, 43},  // DL
    {34, 52},  // DB
    {23, 12},  // FR
    {21, 41},  // FL
    {50, 39},  // BL
    {48, 14},  // BR
}};

const std::array<std::array<Face, 3>, 8> kCornerColor{{
    {Face::U, Face::R, Face::F},
    {Face::U, Face::F, Face::L},
    {Face::U, Face::L, Face::B},
    {Face::U, Face::B, Face::R},
    {Face::D, Face::F, Face::R},
    {Face::D, Face::L, Face::F},
    {Face::D, Face::B, Face::L},
    {Face::D, Face::R, Face::B},
}};

const std::array<std::array<Face, 2>, 12> kEdgeColor{{
    {Face::U, Face::R},
    {Face::U, Face::F},
    {Face::U, Face::L},
    {Face::U, Face::B},
    {Face::D, Face::R},
    {Face::D, Face::F},
    {Face::D, Face::L},
    {Face::D, Face::B},
    {Face::F, Face::R},
    {Face::F, Face::L},
    {Face::B, Face::L},
    {Face::B, Face::R},
}};

FaceletState FaceletState::solved() noexcept {
  FaceletState f;
  for (int i = 0; i < 54; ++i) f.stickers[i] = static_cast<Face>(i / 9);
  return f;
}

std::string FaceletState::to_string() const {
  std::string s(54, ' ');
  for (int i = 0; i < 54; ++i) s[i] = face_letter(stickers[i]);
  return s;
}

FaceletState parse_facelets(std::string_view text) {
  if (text.size() != 54) {
    throw Error(Errc::WrongLength,
                "descriptor has " + std::to_string(text.size()) + " characters, expected 54");
  }
  FaceletState f;
  std::array<int, 6> counts{};
  for (int i = 0; i < 54; ++i) {
    const auto face = face_from_letter(text[i]);
    if (!face) {
      throw Error(Errc::InvalidCharacter,
                  "character '" + std::string(1, text[i]) + "' at index " + std::to_string(i));
    }
    f.stickers[i] = *face;
    ++counts[face_index(*face)];
  }
  for (Face face : kFaces) {
    if (counts[face_index(face)] != 9) {
      throw Error(Errc::CountViolation, std::string(1, face_letter(face)) + " appears " +
                                            std::to_string(counts[face_index(face)]) + " times");
    }
  }
  for (Face face : kFaces) {
    if (f.stickers[9 * face_index(face) + 4] != face) {
      throw Error(Errc::CenterViolation,
                  "center of face " + std::string(1, face_letter(face)) + " is wrong");
    }
  }
  return f;
}

CubieState facelets_to_cubies(const FaceletState& f) {
  CubieState c;
  std::array<bool, 8> seen_corner{};
  for (int i = 0; i < 8; ++i) {
    int ori = 0;
    while (ori < 3 && f.stickers[kCornerFacelet[i][ori]] != Face::U &&
           f.stickers[kCornerFacelet[i][ori]] != Face::D) {
      ++ori;
    }
    if (ori == 3) {
      throw Error(Errc::UnrecognizedCubie,
                  "corner slot " + std::to_string(i) + " has no U/D sticker");
    }
    const Face c1 = f.stickers[kCornerFacelet[i][(ori + 1) % 3]];
    const Face c2 = f.stickers[kCornerFacelet[i][(ori + 2) % 3]];
    const Face c0 = f.stickers[kCornerFacelet[i][ori]];
    int j = 0;
    while (j < 8 && !(kCornerColor[j][0] == c0 && kCornerColor[j][1] == c1 &&
                      kCornerColor[j][2] == c2)) {
      ++j;
    }
    if (j == 8 || seen_corner[j]) {
      throw Error(Errc::UnrecognizedCubie,
                  "corner slot " + std::to_string(i) + " holds no distinct physical corner");
    }
    seen_corner[j] = true;
    c.cp[i] = static_cast<std::uint8_t>(j);
    c.co[i] = static_cast<std::uint8_t>(ori);
  }
  std::array<bool, 12> seen_edge{};
  for (int i = 0; i < 12; ++i) {
    const Face a = f.stickers[kEdgeFacelet[i][0]];
    const Face b = f.stickers[kEdgeFacelet[i][1]];
    int found = -1;
    for (int j = 0; j < 12 && found < 0; ++j) {
      if (kEdgeColor[j][0] == a && kEdgeColor[j][1] == b) {
        found = j;
        c.eo[i] = 0;
      } else if (kEdgeColor[j][0] == b && kEdgeColor[j][1] == a) {
        found = j;
        c.eo[i] = 1;
      }
    }
    if (found < 0 || seen_edge[found]) {
      throw Error(Errc::UnrecognizedCubie,
                  "edge slot " + std::to_string(i) + " holds no distinct physical edge");
    }
    seen_edge[found] = true;
    c.ep[i] = static_cast<std::uint8_t>(found);
  }
  return c;
}

FaceletState cubies_to_facelets(const CubieState& c) noexcept {
  FaceletState f = FaceletState::solved();
  for (int i = 0; i < 8; ++i) {
    for (int k = 0; k < 3; ++k) {
      f.stickers[kCornerFacelet[i][(k + c.co[i]) % 3]] = kCornerColor[c.cp[i]][k];
    }
  }
  for (int i = 0; i < 12; ++i) {
    for (int k = 0; k < 2; ++k) {
      f.stickers[kEdgeFacelet[i][(k + c.eo[i]) % 2]] = kEdgeColor[c.ep[i]][k];
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Group operations

CubieState multiply(const CubieState& a, const CubieState& b) noexcept {
  CubieState r;
  for (int i = 0; i < 8; ++i) {
    r.cp[i] = a.cp[b.cp[i]];
    r.co[i] = static_cast<std::uint8_t>((a.co[b.cp[i]] + b.co[i]) % 3);
  }
  for (int i = 0; i < 12; ++i) {
    r.ep[i] = a.ep[b.ep[i]];
    r.eo[i] = static_cast<std::uint8_t>((a.eo[b.ep[i]] + b.eo[i]) % 2);
  }
  return r;
}

CubieState inverse(const CubieState& c) noexcept {
  CubieState r;
  for (int i = 0; i < 8; ++i) r.cp[c.cp[i]] = static_cast<std::uint8_t>(i);
  for (int i = 0; i < 8; ++i) r.co[i] = static_cast<std::uint8_t>((3 - c.co[r.cp[i]]) % 3);
  for (int i = 0; i < 12; ++i) r.ep[c.ep[i]] = static_cast<std::uint8_t>(i);
  for (int i = 0; i < 12; ++i) r.eo[i] = c.eo[r.ep[i]];
  return r;
}

namespace {

// Clockwise quarter turns in "replaced by" form.
const std::array<CubieState, 6> kBasicMoves{{
    // U
    {{UBR, URF, UFL, ULB, DFR, DLF, DBL, DRB},
     {0, 0, 0, 0, 0, 0, 0, 0},
     {UB, UR, UF, UL, DR, DF, DL, DB, FR, FL, BL, BR},
     {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    // R
    {{DFR, UFL, ULB, URF, DRB, DLF, DBL, UBR},
     {2, 0, 0, 1, 1, 0, 0, 2},
     {FR, UF, UL, UB, BR, DF, DL, DB, DR, FL, BL, UR},
     {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    // F
    {{UFL, DLF, ULB, UBR, URF, DFR, DBL, DRB},
     {1, 2, 0, 0, 2, 1, 0, 0},
     {UR, FL, UL, UB, DR, FR, DL, DB, UF, DF, BL, BR},
     {0, 1, 0, 0, 0, 1, 0, 0, 1, 1, 0, 0}},
    // D
    {{URF, UFL, ULB, UBR, DLF, DBL, DRB, DFR},
     {0, 0, 0, 0, 0, 0, 0, 0},
     {UR, UF, UL, UB, DF, DL, DB, DR, FR, FL, BL, BR},
     {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    // L
    {{URF, ULB, DBL, UBR, DFR, UFL, DLF, DRB},
     {0, 1, 2, 0, 0, 2, 1, 0},
     {UR, UF, BL, UB, DR, DF, FL, DB, FR, UL, DL, BR},
     {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    // B
    {{URF, UFL, UBR, DRB, DFR, DLF, ULB, DBL},
     {0, 0, 1, 2, 0, 0, 2, 1},
     {UR, UF, UL, BR, DR, DF, DL, BL, FR, FL, UB, DB},
     {0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 1}},
}};

std::array<CubieState, kNumMoves> build_move_cubes() {
  std::array<CubieState, kNumMoves> out;
  for (int f = 0; f < 6; ++f) {
    CubieState c = CubieState::solved();
    for (int t = 0; t < 3; ++t) {
      c = multiply(c, kBasicMoves[f]);
      out[f * 3 + t] = c;
    }
  }
  return out;
}

int permutation_parity(const std::uint8_t* p, int n) noexcept {
  int inversions = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) inversions += p[i] > p[j];
  }
  return inversions & 1;
}

}  // namespace

const CubieState& basic_move(Face f) noexcept { return kBasicMoves[face_index(f)]; }

const std::array<CubieState, kNumMoves>& move_cubes() noexcept {
  static const std::array<CubieState, kNumMoves> cubes = build_move_cubes();
  return cubes;
}

CubieState apply_move(const CubieState& state, Move m) noexcept {
  return multiply(state, move_cubes()[m.index()]);
}

CubieState apply_sequence(const CubieState& state, const MoveSequence& s) noexcept {
  CubieState c = state;
  for (const Move& m : s) c = apply_move(c, m);
  return c;
}

bool corner_parity_odd(const CubieState& c) noexcept {
  return permutation_parity(c.cp.data(), 8) != 0;
}

bool edge_parity_odd(const CubieState& c) noexcept {
  return permutation_parity(c.ep.data(), 12) != 0;
}

std::optional<Errc> validate(const CubieState& state) noexcept {
  std::array<bool, 8> cseen{};
  for (auto p : state.cp) {
    if (p >= 8 || cseen[p]) return Errc::UnrecognizedCubie;
    cseen[p] = true;
  }
  std::array<bool, 12> eseen{};
  for (auto p : state.ep) {
    if (p >= 12 || eseen[p]) return Errc::UnrecognizedCubie;
    eseen[p] = true;
  }
  int twist = 0;
  for (auto o : state.co) {
    if (o > 2) return Errc::TwistViolation;
    twist += o;
  }
  if (twist % 3 != 0) return Errc::TwistViolation;
  int flip = 0;
  for (auto o : state.eo) {
    if (o > 1) return Errc::FlipViolation;
    flip += o;
  }
  if (flip % 2 != 0) return Errc::FlipViolation;
  if (corner_parity_odd(state) != edge_parity_odd(state)) return Errc::ParityViolation;
  return std::nullopt;
}

void require_valid(const CubieState& state) {
  if (const auto err = validate(state)) {
    throw Error(Errc::Unsolvable, "state fails validation: " + std::string(errc_name(*err)));
  }
}

bool is_solved(const CubieState& state) noexcept { return state == CubieState::solved(); }

MoveSequence random_scramble(int n, std::uint64_t seed) {
  MoveSequence out;
  if (n <= 0) return out;
  out.reserve(static_cast<std::size_t>(n));
  Rng rng(seed);
  int last = -1;
  for (int i = 0; i < n; ++i) {
    int face = static_cast<int>(rng.below(last < 0 ? 6 : 5));
    if (last >= 0 && face >= last) ++face;
    const auto turns = static_cast<std::uint8_t>(rng.below(3) + 1);
    out.push_back(Move{static_cast<Face>(face), turns});
    last = face;
  }
  return out;
}

}  // namespace cubekb
