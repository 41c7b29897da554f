#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <string>

#include "cubekb/cube.hpp"
#include "test_util.hpp"

using namespace cubekb;

namespace {

const std::string kSolved = "UUUUUUUUURRRRRRRRRFFFFFFFFFDDDDDDDDDLLLLLLLLLBBBBBBBBB";

// Hand-listed sticker permutation of R1: after the move, position i holds
// the sticker previously at src[i].
std::array<int, 54> r1_source() {
  std::array<int, 54> src{};
  std::iota(src.begin(), src.end(), 0);
  auto set = [&](std::initializer_list<std::pair<int, int>> pairs) {
    for (auto [to, from] : pairs) src[to] = from;
  };
  // R face turns clockwise in place.
  set({{9, 15}, {10, 12}, {11, 9}, {12, 16}, {14, 10}, {15, 17}, {16, 14}, {17, 11}});
  // U right column <- F right column.
  set({{2, 20}, {5, 23}, {8, 26}});
  // F right column <- D right column.
  set({{20, 29}, {23, 32}, {26, 35}});
  // D right column <- B left column.
  set({{29, 51}, {32, 48}, {35, 45}});
  // B left column <- U right column.
  set({{45, 8}, {48, 5}, {51, 2}});
  return src;
}

std::string permute(const std::string& s, const std::array<int, 54>& src) {
  std::string out(54, '?');
  for (int i = 0; i < 54; ++i) out[i] = s[src[i]];
  return out;
}

std::string facelets(const CubieState& c) { return cubies_to_facelets(c).to_string(); }

int perm_parity(const std::uint8_t* p, int n) {
  int inv = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) inv += p[i] > p[j];
  return inv & 1;
}

}  // namespace

TEST_CASE("parse_facelets examples") {
  CHECK(facelets_to_cubies(parse_facelets(kSolved)) == CubieState::solved());
  CHECK_ERRC(parse_facelets(kSolved.substr(0, 53)), Errc::WrongLength);
  std::string bad = kSolved;
  bad[0] = 'R';
  CHECK_ERRC(parse_facelets(bad), Errc::CountViolation);
  bad = kSolved;
  bad[3] = 'X';
  CHECK_ERRC(parse_facelets(bad), Errc::InvalidCharacter);
  // Swap a U center with an R sticker: counts hold, centers do not.
  bad = kSolved;
  std::swap(bad[4], bad[9]);
  CHECK_ERRC(parse_facelets(bad), Errc::CenterViolation);
}

TEST_CASE("R1 matches the hand-listed sticker cycle") {
  const auto src = r1_source();
  CHECK(permute(kSolved, src) == "UUFUUFUUFRRRRRRRRRFFDFFDFFDDDBDDBDDBLLLLLLLLLUBBUBBUBB");
  const Move r1{Face::R, 1};
  CHECK(facelets(apply_move(CubieState::solved(), r1)) == permute(kSolved, src));
  // The oracle must agree on arbitrary states too.
  for (std::uint64_t s = 0; s < 200; ++s) {
    const CubieState c = testutil::scrambled(25, s);
    CHECK(facelets(apply_move(c, r1)) == permute(facelets(c), src));
  }
  // Cubie view: the right-layer 4-cycles.
  const CubieState r = apply_move(CubieState::solved(), r1);
  CHECK(r.cp == std::array<std::uint8_t, 8>{DFR, UFL, ULB, URF, DRB, DLF, DBL, UBR});
  CHECK(r.co == std::array<std::uint8_t, 8>{2, 0, 0, 1, 1, 0, 0, 2});
  CHECK(r.ep == std::array<std::uint8_t, 12>{FR, UF, UL, UB, BR, DF, DL, DB, DR, FL, BL, UR});
  CHECK(r.eo == std::array<std::uint8_t, 12>{});
}

TEST_CASE("F1 puts L labels on the bottom row of U") {
  const std::string f = facelets(apply_move(CubieState::solved(), Move{Face::F, 1}));
  CHECK(f == "UUUUUULLLURRURRURRFFFFFFFFFRRRDDDDDDLLDLLDLLDBBBBBBBBB");
  CHECK(f.substr(6, 3) == "LLL");
}

TEST_CASE("facelets_to_cubies rejects impossible pieces") {
  // Flipped UF edge: legal pieces, illegal orientation sum.
  std::string bad = kSolved;
  std::swap(bad[7], bad[19]);
  CHECK(validate(facelets_to_cubies(parse_facelets(bad))) == Errc::FlipViolation);
  bad = kSolved;
  // UF edge showing U twice; counts stay balanced.
  bad[19] = 'U';
  bad[1] = 'F';
  CHECK_ERRC(facelets_to_cubies(parse_facelets(bad)), Errc::UnrecognizedCubie);
}

TEST_CASE("representation bijection over 10,000 random states") {
  for (std::uint64_t s = 0; s < 10000; ++s) {
    const CubieState c = testutil::scrambled(30, s);
    const FaceletState f = cubies_to_facelets(c);
    REQUIRE(facelets_to_cubies(f) == c);
    REQUIRE(parse_facelets(f.to_string()) == f);
  }
  CHECK(facelets(CubieState::solved()) == kSolved);
}

TEST_CASE("move algebra") {
  for (std::uint64_t s = 0; s < 300; ++s) {
    const CubieState c = testutil::scrambled(20, s);
    for (int i = 0; i < kNumMoves; ++i) {
      const Move m = Move::from_index(i);
      CHECK(apply_move(apply_move(c, m), m.inverse()) == c);
      CubieState q = c;
      for (int k = 0; k < 4; ++k) q = apply_move(q, Move{m.face, 1});
      CHECK(q == c);
      const CubieState n = apply_move(c, m);
      CHECK(validate(n) == std::nullopt);
      int sc = 0, se = 0;
      for (auto v : n.co) sc += v;
      for (auto v : n.eo) se += v;
      CHECK(sc % 3 == 0);
      CHECK(se % 2 == 0);
      CHECK(perm_parity(n.cp.data(), 8) == perm_parity(n.ep.data(), 12));
    }
  }
}

TEST_CASE("each face turn moves 20 stickers and fixes the centers") {
  for (int i = 0; i < kNumMoves; ++i) {
    const std::string f = facelets(apply_move(CubieState::solved(), Move::from_index(i)));
    const CubieState c = testutil::scrambled(40, 99);
    const std::string a = facelets(c), b = facelets(apply_move(c, Move::from_index(i)));
    for (int k : {4, 13, 22, 31, 40, 49}) CHECK(f[k] == kSolved[k]);
    int changed = 0;
    for (int k = 0; k < 54; ++k) changed += a[k] != b[k];
    CHECK(changed <= 20);
  }
  // Exact count on the index permutation oracle.
  const auto src = r1_source();
  int moved = 0;
  for (int i = 0; i < 54; ++i) moved += src[i] != i;
  CHECK(moved == 20);
}

TEST_CASE("apply_sequence group laws") {
  CHECK(apply_sequence(CubieState::solved(), {}) == CubieState::solved());
  CHECK(is_solved(apply_sequence(CubieState::solved(), parse_moves("R1 R1 R2"))));
  for (std::uint64_t s = 0; s < 200; ++s) {
    const MoveSequence a = random_scramble(15, s), b = random_scramble(12, s + 1000);
    const CubieState c = testutil::scrambled(10, s + 5000);
    MoveSequence ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    CHECK(apply_sequence(c, ab) == apply_sequence(apply_sequence(c, a), b));
    CHECK(apply_sequence(apply_sequence(c, a), invert_sequence(a)) == c);
    CHECK(apply_sequence(apply_sequence(c, invert_sequence(a)), a) == c);
    CHECK(multiply(c, inverse(c)) == CubieState::solved());
  }
}

TEST_CASE("invert_sequence") {
  CHECK(to_string(invert_sequence(parse_moves("R1 U2"))) == "U2 R3");
  CHECK(invert_sequence({}).empty());
  const MoveSequence s = random_scramble(30, 4);
  CHECK(invert_sequence(invert_sequence(s)) == s);
}

TEST_CASE("parse_moves") {
  const MoveSequence s = parse_moves("B1 U2 F2 L1 D1 R3");
  REQUIRE(s.size() == 6);
  const std::array<Face, 6> faces{Face::B, Face::U, Face::F, Face::L, Face::D, Face::R};
  const std::array<int, 6> turns{1, 2, 2, 1, 1, 3};
  for (int i = 0; i < 6; ++i) {
    CHECK(s[i].face == faces[i]);
    CHECK(s[i].turns == turns[i]);
  }
  CHECK(parse_moves("").empty());
  CHECK_ERRC(parse_moves("R0"), Errc::BadToken);
  CHECK_ERRC(parse_moves("X1"), Errc::BadToken);
  for (std::uint64_t k = 0; k < 100; ++k) {
    const MoveSequence r = random_scramble(25, k);
    CHECK(parse_moves(to_string(r)) == r);
  }
}

TEST_CASE("random_scramble") {
  CHECK(random_scramble(0, 1).empty());
  CHECK(random_scramble(40, 77) == random_scramble(40, 77));
  CHECK(random_scramble(40, 77) != random_scramble(40, 78));
  for (std::uint64_t k = 0; k < 100; ++k) {
    const MoveSequence s = random_scramble(40, k);
    REQUIRE(s.size() == 40);
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i].face != s[i - 1].face);
  }
}

TEST_CASE("validate") {
  CHECK(validate(CubieState::solved()) == std::nullopt);
  CubieState c = CubieState::solved();
  c.co[0] = 1;
  CHECK(validate(c) == Errc::TwistViolation);
  c = CubieState::solved();
  c.eo[3] = 1;
  CHECK(validate(c) == Errc::FlipViolation);
  c = CubieState::solved();
  std::swap(c.cp[0], c.cp[1]);
  CHECK(validate(c) == Errc::ParityViolation);
  CHECK_ERRC(require_valid(c), Errc::Unsolvable);
}

TEST_CASE("is_solved") {
  CHECK(is_solved(CubieState::solved()));
  for (int i = 0; i < kNumMoves; ++i) CHECK_FALSE(is_solved(apply_move(CubieState::solved(), Move::from_index(i))));
  const MoveSequence s = random_scramble(20, 3);
  CHECK(is_solved(apply_sequence(apply_sequence(CubieState::solved(), s), invert_sequence(s))));
}

TEST_CASE("simplify merges and cancels same-face runs") {
  CHECK(simplify(parse_moves("R1 R1")) == parse_moves("R2"));
  CHECK(simplify(parse_moves("R1 R3")).empty());
  CHECK(simplify(parse_moves("U1 R2 R2 U3")).empty());
  for (std::uint64_t k = 0; k < 100; ++k) {
    MoveSequence s = random_scramble(10, k);
    s.push_back(s.back());
    const MoveSequence t = simplify(s);
    CHECK(t.size() <= s.size());
    CHECK(apply_sequence(CubieState::solved(), t) == apply_sequence(CubieState::solved(), s));
  }
}
