#include "cubekb/coords.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>

namespace cubekb {

namespace {

template <std::size_t N>
int lehmer_encode(const std::uint8_t* p) noexcept {
  int idx = 0;
  for (std::size_t i = 0; i < N; ++i) {
    int smaller = 0;
    for (std::size_t j = i + 1; j < N; ++j) smaller += p[j] < p[i];
    idx = idx * static_cast<int>(N - i) + smaller;
  }
  return idx;
}

template <std::size_t N>
std::array<std::uint8_t, N> lehmer_decode(int idx) noexcept {
  std::array<int, N> digits{};
  for (std::size_t k = N; k-- > 0;) {
    const int radix = static_cast<int>(N - k);
    digits[k] = idx % radix;
    idx /= radix;
  }
  std::array<std::uint8_t, N> out{};
  std::array<bool, N> used{};
  for (std::size_t i = 0; i < N; ++i) {
    int remaining = digits[i];
    for (std::size_t v = 0; v < N; ++v) {
      if (used[v]) continue;
      if (remaining-- == 0) {
        out[i] = static_cast<std::uint8_t>(v);
        used[v] = true;
        break;
      }
    }
  }
  return out;
}

constexpr int binomial(int n, int k) noexcept {
  if (k < 0 || k > n) return 0;
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

bool is_slice_edge(std::uint8_t e) noexcept { return e >= FR; }

// Slice coordinate from a 12-bit occupancy mask (bit j set = slot j holds a
// slice edge). Scanning from BR downward keeps the solved mask at 0.
int slice_from_mask(unsigned mask) noexcept {
  int a = 0;
  int x = 0;
  for (int j = 11; j >= 0; --j) {
    if (mask & (1u << j)) {
      a += binomial(11 - j, x + 1);
      ++x;
    }
  }
  return a;
}

const std::array<unsigned, kSliceCount>& slice_masks() noexcept {
  static const std::array<unsigned, kSliceCount> masks = [] {
    std::array<unsigned, kSliceCount> m{};
    for (unsigned mask = 0; mask < 4096; ++mask) {
      if (__builtin_popcount(mask) == 4) m[slice_from_mask(mask)] = mask;
    }
    return m;
  }();
  return masks;
}

}  // namespace

int twist_coord(const CubieState& c) noexcept {
  int v = 0;
  for (int i = 0; i < 7; ++i) v = v * 3 + c.co[i];
  return v;
}

int flip_coord(const CubieState& c) noexcept {
  int v = 0;
  for (int i = 0; i < 11; ++i) v = v * 2 + c.eo[i];
  return v;
}

int slice_coord(const CubieState& c) noexcept {
  unsigned mask = 0;
  for (int j = 0; j < 12; ++j) {
    if (is_slice_edge(c.ep[j])) mask |= 1u << j;
  }
  return slice_from_mask(mask);
}

int corner_perm_coord(const CubieState& c) noexcept { return lehmer_encode<8>(c.cp.data()); }

int ud_edge_perm_coord(const CubieState& c) noexcept { return lehmer_encode<8>(c.ep.data()); }

int slice_perm_coord(const CubieState& c) noexcept {
  std::array<std::uint8_t, 4> p{};
  for (int i = 0; i < 4; ++i) p[i] = static_cast<std::uint8_t>(c.ep[8 + i] - 8);
  return lehmer_encode<4>(p.data());
}

CubieState decode_twist(int v) noexcept {
  CubieState c;
  int sum = 0;
  for (int i = 6; i >= 0; --i) {
    c.co[i] = static_cast<std::uint8_t>(v % 3);
    sum += c.co[i];
    v /= 3;
  }
  c.co[7] = static_cast<std::uint8_t>((3 - sum % 3) % 3);
  return c;
}

CubieState decode_flip(int v) noexcept {
  CubieState c;
  int sum = 0;
  for (int i = 10; i >= 0; --i) {
    c.eo[i] = static_cast<std::uint8_t>(v % 2);
    sum += c.eo[i];
    v /= 2;
  }
  c.eo[11] = static_cast<std::uint8_t>(sum % 2);
  return c;
}

CubieState decode_slice(int v) noexcept {
  CubieState c;
  const unsigned mask = slice_masks()[v];
  std::uint8_t next_slice = FR;
  std::uint8_t next_other = UR;
  for (int j = 0; j < 12; ++j) {
    c.ep[j] = (mask & (1u << j)) ? next_slice++ : next_other++;
  }
  return c;
}

CubieState decode_corner_perm(int v) noexcept {
  CubieState c;
  c.cp = lehmer_decode<8>(v);
  return c;
}

CubieState decode_ud_edge_perm(int v) noexcept {
  CubieState c;
  const auto p = lehmer_decode<8>(v);
  for (int i = 0; i < 8; ++i) c.ep[i] = p[i];
  return c;
}

CubieState decode_slice_perm(int v) noexcept {
  CubieState c;
  const auto p = lehmer_decode<4>(v);
  for (int i = 0; i < 4; ++i) c.ep[8 + i] = static_cast<std::uint8_t>(p[i] + 8);
  return c;
}

Phase1Coord encode_phase1(const CubieState& state) noexcept {
  return Phase1Coord{static_cast<std::uint16_t>(twist_coord(state)),
                     static_cast<std::uint16_t>(flip_coord(state)),
                     static_cast<std::uint16_t>(slice_coord(state))};
}

bool in_g1(const CubieState& state) noexcept { return encode_phase1(state) == Phase1Coord{}; }

Phase2Coord encode_phase2(const CubieState& state) {
  if (!in_g1(state)) throw Error(Errc::NotInSubgroup, "state is outside G1");
  return Phase2Coord{static_cast<std::uint16_t>(corner_perm_coord(state)),
                     static_cast<std::uint16_t>(ud_edge_perm_coord(state)),
                     static_cast<std::uint8_t>(slice_perm_coord(state))};
}

// ---------------------------------------------------------------------------
// Table construction

namespace {

template <typename Decode, typename Encode, std::size_t M>
MoveTable make_move_table(int rows, const std::array<int, M>& moves, Decode decode,
                          Encode encode) {
  MoveTable t;
  t.rows = rows;
  t.cols = static_cast<int>(M);
  t.data.resize(static_cast<std::size_t>(rows) * M);
  const auto& cubes = move_cubes();
  for (int c = 0; c < rows; ++c) {
    const CubieState s = decode(c);
    for (std::size_t m = 0; m < M; ++m) {
      t.data[static_cast<std::size_t>(c) * M + m] =
          static_cast<std::uint16_t>(encode(multiply(s, cubes[moves[m]])));
    }
  }
  return t;
}

constexpr std::array<int, kNumMoves> all_moves() {
  std::array<int, kNumMoves> m{};
  for (int i = 0; i < kNumMoves; ++i) m[i] = i;
  return m;
}

// Breadth-first distances from (0,0) over the product of two move tables that
// share the same move columns.
PruneTable bfs_prune(const MoveTable& first, const MoveTable& second) {
  PruneTable p;
  p.rows = first.rows;
  p.cols = second.rows;
  const std::size_t n = static_cast<std::size_t>(p.rows) * static_cast<std::size_t>(p.cols);
  p.data.assign(n, 0xff);
  std::vector<std::uint32_t> frontier{0};
  std::vector<std::uint32_t> next;
  p.data[0] = 0;
  std::uint8_t depth = 0;
  while (!frontier.empty()) {
    next.clear();
    ++depth;
    for (std::uint32_t idx : frontier) {
      const int a = static_cast<int>(idx / static_cast<std::uint32_t>(p.cols));
      const int b = static_cast<int>(idx % static_cast<std::uint32_t>(p.cols));
      for (int m = 0; m < first.cols; ++m) {
        const std::uint32_t j =
            static_cast<std::uint32_t>(first.at(a, m)) * static_cast<std::uint32_t>(p.cols) +
            static_cast<std::uint32_t>(second.at(b, m));
        if (p.data[j] == 0xff) {
          p.data[j] = depth;
          next.push_back(j);
        }
      }
    }
    frontier.swap(next);
  }
  return p;
}

}  // namespace

Phase1MoveTables build_phase1_move_tables() {
  constexpr auto moves = all_moves();
  return Phase1MoveTables{
      make_move_table(kTwistCount, moves, decode_twist, twist_coord),
      make_move_table(kFlipCount, moves, decode_flip, flip_coord),
      make_move_table(kSliceCount, moves, decode_slice, slice_coord),
  };
}

Phase2MoveTables build_phase2_move_tables() {
  return Phase2MoveTables{
      make_move_table(kCornerPermCount, kPhase2Moves, decode_corner_perm, corner_perm_coord),
      make_move_table(kUdEdgePermCount, kPhase2Moves, decode_ud_edge_perm, ud_edge_perm_coord),
      make_move_table(kSlicePermCount, kPhase2Moves, decode_slice_perm, slice_perm_coord),
  };
}

Phase1PruneTables build_phase1_prune_tables(const Phase1MoveTables& moves) {
  return Phase1PruneTables{bfs_prune(moves.twist, moves.slice), bfs_prune(moves.flip, moves.slice),
                           bfs_prune(moves.twist, moves.flip)};
}

Phase2PruneTables build_phase2_prune_tables(const Phase2MoveTables& moves) {
  return Phase2PruneTables{bfs_prune(moves.corner_perm, moves.slice_perm),
                           bfs_prune(moves.ud_edge_perm, moves.slice_perm)};
}

CornerBoundTables build_corner_bound_tables() {
  CornerBoundTables c;
  c.corner_perm = make_move_table(kCornerPermCount, all_moves(), decode_corner_perm, corner_perm_coord);
  c.distance = bfs_prune(c.corner_perm, MoveTable{1, kNumMoves, std::vector<std::uint16_t>(kNumMoves, 0)});
  return c;
}

TwoPhaseTables build_all_tables() {
  TwoPhaseTables t;
  t.move1 = build_phase1_move_tables();
  t.move2 = build_phase2_move_tables();
  t.prune1 = build_phase1_prune_tables(t.move1);
  t.prune2 = build_phase2_prune_tables(t.move2);
  t.corners = build_corner_bound_tables();
  return t;
}

// ---------------------------------------------------------------------------
// Serialization

std::uint64_t fnv1a64(const void* data, std::size_t size) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

constexpr char kMagic[4] = {'C', 'K', 'B', 'T'};
constexpr std::size_t kHeaderSize = 4 + 6 * 4 + 8;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_le(const std::string& in, std::size_t pos, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  }
  return v;
}

template <typename T>
std::string serialize_dense(const std::vector<T>& data, int rows, int cols, std::uint32_t phase,
                            std::uint32_t table_id) {
  std::string payload;
  payload.reserve(data.size() * sizeof(T));
  for (T v : data) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      payload.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff));
    }
  }
  std::string out(kMagic, 4);
  put_u32(out, kTableFormatVersion);
  put_u32(out, phase);
  put_u32(out, table_id);
  put_u32(out, static_cast<std::uint32_t>(rows));
  put_u32(out, static_cast<std::uint32_t>(cols));
  put_u32(out, sizeof(T));
  put_u64(out, fnv1a64(payload.data(), payload.size()));
  out += payload;
  return out;
}

template <typename T>
std::vector<T> deserialize_dense(const std::string& in, std::uint32_t phase,
                                 std::uint32_t table_id, int rows, int cols) {
  auto fail = [](const std::string& why) { throw Error(Errc::CorruptFile, why); };
  if (in.size() < kHeaderSize || std::memcmp(in.data(), kMagic, 4) != 0) fail("bad magic");
  if (get_le(in, 4, 4) != kTableFormatVersion) fail("format version mismatch");
  if (get_le(in, 8, 4) != phase || get_le(in, 12, 4) != table_id) fail("table id mismatch");
  if (get_le(in, 16, 4) != static_cast<std::uint64_t>(rows) ||
      get_le(in, 20, 4) != static_cast<std::uint64_t>(cols) || get_le(in, 24, 4) != sizeof(T)) {
    fail("dimension mismatch");
  }
  const std::size_t count = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  if (in.size() != kHeaderSize + count * sizeof(T)) fail("payload size mismatch");
  if (get_le(in, 28, 8) != fnv1a64(in.data() + kHeaderSize, in.size() - kHeaderSize)) {
    fail("checksum mismatch");
  }
  std::vector<T> data(count);
  for (std::size_t i = 0; i < count; ++i) {
    data[i] = static_cast<T>(get_le(in, kHeaderSize + i * sizeof(T), sizeof(T)));
  }
  return data;
}

}  // namespace

std::string serialize_table(const MoveTable& t, std::uint32_t phase, std::uint32_t table_id) {
  return serialize_dense(t.data, t.rows, t.cols, phase, table_id);
}

std::string serialize_table(const PruneTable& t, std::uint32_t phase, std::uint32_t table_id) {
  return serialize_dense(t.data, t.rows, t.cols, phase, table_id);
}

MoveTable deserialize_move_table(const std::string& bytes, std::uint32_t phase,
                                 std::uint32_t table_id, int rows, int cols) {
  return MoveTable{rows, cols, deserialize_dense<std::uint16_t>(bytes, phase, table_id, rows, cols)};
}

PruneTable deserialize_prune_table(const std::string& bytes, std::uint32_t phase,
                                   std::uint32_t table_id, int rows, int cols) {
  return PruneTable{rows, cols, deserialize_dense<std::uint8_t>(bytes, phase, table_id, rows, cols)};
}

// ---------------------------------------------------------------------------
// Disk cache

std::filesystem::path cache_directory() {
  if (const char* env = std::getenv("RUBIK_KB_CACHE"); env && *env) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
    return std::filesystem::path(xdg) / "cubekb";
  }
  if (const char* home = std::getenv("HOME"); home && *home) {
    return std::filesystem::path(home) / ".cache" / "cubekb";
  }
  return std::filesystem::temp_directory_path() / "cubekb";
}

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return {};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& p, const std::string& bytes) {
  std::error_code ec;
  std::filesystem::create_directories(p.parent_path(), ec);
  const auto tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return;
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) return;
  }
  std::filesystem::rename(tmp, p, ec);
}

template <typename Table, typename Build, typename Load>
Table cached(const std::filesystem::path& dir, const char* name, std::uint32_t phase,
             std::uint32_t id, int rows, int cols, Build build, Load load) {
  const auto path = dir / name;
  const std::string bytes = read_file(path);
  if (!bytes.empty()) {
    try {
      return load(bytes, phase, id, rows, cols);
    } catch (const Error&) {
      // stale or damaged; rebuild below
    }
  }
  Table t = build();
  write_file_atomic(path, serialize_table(t, phase, id));
  return t;
}

}  // namespace

TwoPhaseTables load_or_build_tables(const std::filesystem::path& dir) {
  TwoPhaseTables t;
  std::optional<Phase1MoveTables> m1;
  std::optional<Phase2MoveTables> m2;
  auto move1 = [&]() -> const Phase1MoveTables& {
    if (!m1) m1 = build_phase1_move_tables();
    return *m1;
  };
  auto move2 = [&]() -> const Phase2MoveTables& {
    if (!m2) m2 = build_phase2_move_tables();
    return *m2;
  };
  std::optional<Phase1PruneTables> p1;
  std::optional<Phase2PruneTables> p2;
  auto prune1 = [&]() -> const Phase1PruneTables& {
    if (!p1) p1 = build_phase1_prune_tables(t.move1);
    return *p1;
  };
  auto prune2 = [&]() -> const Phase2PruneTables& {
    if (!p2) p2 = build_phase2_prune_tables(t.move2);
    return *p2;
  };
  const auto lm = deserialize_move_table;
  const auto lp = deserialize_prune_table;
  t.move1.twist = cached<MoveTable>(dir, "p1_twist.move", 1, 0, kTwistCount, kNumMoves,
                                    [&] { return move1().twist; }, lm);
  t.move1.flip = cached<MoveTable>(dir, "p1_flip.move", 1, 1, kFlipCount, kNumMoves,
                                   [&] { return move1().flip; }, lm);
  t.move1.slice = cached<MoveTable>(dir, "p1_slice.move", 1, 2, kSliceCount, kNumMoves,
                                    [&] { return move1().slice; }, lm);
  t.move2.corner_perm =
      cached<MoveTable>(dir, "p2_corner_perm.move", 2, 0, kCornerPermCount, kPhase2MoveCount,
                        [&] { return move2().corner_perm; }, lm);
  t.move2.ud_edge_perm =
      cached<MoveTable>(dir, "p2_ud_edge_perm.move", 2, 1, kUdEdgePermCount, kPhase2MoveCount,
                        [&] { return move2().ud_edge_perm; }, lm);
  t.move2.slice_perm =
      cached<MoveTable>(dir, "p2_slice_perm.move", 2, 2, kSlicePermCount, kPhase2MoveCount,
                        [&] { return move2().slice_perm; }, lm);
  t.prune1.twist_slice = cached<PruneTable>(
      dir, "p1_twist_slice.prune", 1, 16, kTwistCount, kSliceCount,
      [&] { return prune1().twist_slice; }, lp);
  t.prune1.flip_slice = cached<PruneTable>(
      dir, "p1_flip_slice.prune", 1, 17, kFlipCount, kSliceCount,
      [&] { return prune1().flip_slice; }, lp);
  t.prune1.twist_flip = cached<PruneTable>(
      dir, "p1_twist_flip.prune", 1, 18, kTwistCount, kFlipCount,
      [&] { return prune1().twist_flip; }, lp);
  t.prune2.corner_slice = cached<PruneTable>(
      dir, "p2_corner_slice.prune", 2, 16, kCornerPermCount, kSlicePermCount,
      [&] { return prune2().corner_slice; }, lp);
  t.prune2.edge_slice = cached<PruneTable>(
      dir, "p2_edge_slice.prune", 2, 17, kUdEdgePermCount, kSlicePermCount,
      [&] { return prune2().edge_slice; }, lp);
  std::optional<CornerBoundTables> cb;
  auto corners = [&]() -> const CornerBoundTables& {
    if (!cb) cb = build_corner_bound_tables();
    return *cb;
  };
  t.corners.corner_perm =
      cached<MoveTable>(dir, "full_corner_perm.move", 0, 0, kCornerPermCount, kNumMoves,
                        [&] { return corners().corner_perm; }, lm);
  t.corners.distance = cached<PruneTable>(dir, "full_corner_perm.prune", 0, 16, kCornerPermCount,
                                          1, [&] { return corners().distance; }, lp);
  return t;
}

const TwoPhaseTables& shared_tables() {
  static const TwoPhaseTables tables = load_or_build_tables(cache_directory());
  return tables;
}

}  // namespace cubekb
