#include "cubekb/scene.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cubekb/error.hpp"
#include "cubekb/rng.hpp"

namespace cubekb {

Vec3 face_normal(Face f) noexcept {
  switch (f) {
    case Face::U: return {0, 0, 1};
    case Face::R: return {1, 0, 0};
    case Face::F: return {0, -1, 0};
    case Face::D: return {0, 0, -1};
    case Face::L: return {-1, 0, 0};
    case Face::B: return {0, 1, 0};
  }
  return {};
}

GridGeometry default_grid() noexcept { return GridGeometry{64, 64, 64, 0.01, {0, 0, 0}}; }

Scene build_scene(int scramble_depth, std::uint64_t seed) {
  Scene s;
  s.cube = apply_sequence(CubieState::solved(), random_scramble(scramble_depth, seed));
  s.grid = default_grid();
  s.cube_center = s.grid.origin + Vec3{s.grid.w * s.grid.resolution / 2, s.grid.h * s.grid.resolution / 2,
                                       s.grid.d * s.grid.resolution / 2};
  return s;
}

std::string observe_cube(const Scene& scene, double sticker_noise, std::uint64_t seed) {
  FaceletState f = cubies_to_facelets(scene.cube);
  if (sticker_noise > 0.0) {
    Rng rng(seed);
    for (std::size_t i = 0; i < 54; ++i) {
      if (i % 9 == 4) continue;
      if (!rng.bernoulli(sticker_noise)) continue;
      const int current = face_index(f.stickers[i]);
      const int shift = 1 + static_cast<int>(rng.below(5));
      f.stickers[i] = static_cast<Face>((current + shift) % 6);
    }
  }
  return f.to_string();
}

Vec3 face_center(const Scene& scene, Face f) noexcept {
  return scene.cube_center + face_normal(f) * (scene.cube_edge / 2);
}

MapSet build_subtask_maps(const Scene& scene, const Subtask& t) {
  const GridGeometry& g = scene.grid;
  const Vec3 n = face_normal(t.face);
  const Vec3 fc = face_center(scene, t.face);
  if (!g.locate(fc)) throw Error(Errc::LayerUnreachable, "face center outside grid");
  const double half = scene.cube_edge / 2;
  const double layer = scene.cube_edge / 3;

  MapSet m;
  m.interact = VoxelGrid(g);
  m.ignore = VoxelGrid(g);
  m.rotation.assign(g.size(), Quat{});
  m.gripper.assign(g.size(), Gripper::Open);
  bool any = false;
  for (int k = 0; k < g.d; ++k) {
    for (int j = 0; j < g.h; ++j) {
      for (int i = 0; i < g.w; ++i) {
        const std::size_t idx = g.index(i, j, k);
        const Vec3 c = g.center(i, j, k);
        const Vec3 rel = c - fc;
        const double along = dot(rel, n);
        const Vec3 lateral = rel - n * along;
        const double lat = std::max({std::abs(lateral.x), std::abs(lateral.y), std::abs(lateral.z)});
        if (along >= g.resolution && along <= half && lat <= scene.cube_edge / 4) {
          m.interact.values[idx] = 1.0;
          m.gripper[idx] = Gripper::Close;
          any = true;
        }
        const Vec3 body = c - scene.cube_center;
        const bool in_cube = std::abs(body.x) <= half && std::abs(body.y) <= half && std::abs(body.z) <= half;
        const bool in_layer = dot(body, n) >= half - layer;
        if ((in_cube && !in_layer) || k < scene.table_layers) m.ignore.values[idx] = 1.0;
        m.rotation[idx] = along == 0.0 && lat == 0.0 ? look_along(n * -1.0) : look_along(fc - c);
      }
    }
  }
  if (!any) throw Error(Errc::LayerUnreachable, "approach region lies outside the grid");
  return m;
}

SubtaskMotion plan_subtask(const Scene& scene, const Subtask& t, const KinematicLimits& limits) {
  const MapSet maps = build_subtask_maps(scene, t);
  const GridGeometry& g = scene.grid;
  SubtaskMotion out;
  out.start = face_center(scene, t.face) + face_normal(t.face) * kStandoff;
  if (!g.locate(out.start)) throw Error(Errc::LayerUnreachable, "standoff point outside grid");
  Vec3 sum;
  int count = 0;
  for (int k = 0; k < g.d; ++k) {
    for (int j = 0; j < g.h; ++j) {
      for (int i = 0; i < g.w; ++i) {
        if (maps.interact.at(i, j, k) > 0.0) {
          sum = sum + g.center(i, j, k);
          ++count;
        }
      }
    }
  }
  out.target = sum * (1.0 / count);
  out.path = plan_path(maps, out.start, out.target, limits, kSmoothingSigma);
  return out;
}

// ---------------------------------------------------------------------------
// Pipeline Monte-Carlo

void StageModel::check() const {
  for (double p : {p_kb, p_llm, p_exe, sticker_noise}) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::InvalidArgument, "probabilities must lie in [0, 1]");
  }
  for (const auto* split : {&kb_split, &llm_split, &exe_split}) {
    double total = 0.0;
    for (double w : *split) {
      if (w < 0.0) throw Error(Errc::InvalidArgument, "split weights must be non-negative");
      total += w;
    }
    if (!(total > 0.0)) throw Error(Errc::InvalidArgument, "split weights must not all be zero");
  }
  if (kb_split.size() != 2 || llm_split.size() != 2 || exe_split.size() != 3) {
    throw Error(Errc::InvalidArgument, "split sizes must be 2, 2 and 3");
  }
}

std::string_view failure_category_name(FailureCategory c) noexcept {
  switch (c) {
    case FailureCategory::None: return "none";
    case FailureCategory::KB: return "KB";
    case FailureCategory::LLM: return "LLM";
    case FailureCategory::EXE: return "EXE";
  }
  return "";
}

namespace {

constexpr std::array<const char*, 2> kKbSub{"color recognition", "timeout"};
constexpr std::array<const char*, 2> kLlmSub{"annotation", "code generation"};
constexpr std::array<const char*, 3> kExeSub{"localization", "motion", "initial state"};

std::size_t weighted_pick(Rng& rng, const std::vector<double>& w) {
  double total = 0.0;
  for (double x : w) total += x;
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (u < w[i]) return i;
    u -= w[i];
  }
  return w.size() - 1;
}

double corruption_probability(double noise) { return 1.0 - std::pow(1.0 - noise, 48); }

// Pool entry: a scrambled cube and its KB outcome (nullopt on genuine failure).
struct Solved {
  CubieState cube;
  std::optional<int> length;
};

// The scramble itself is a solution of `depth` moves, so searching stops
// only once the KB result is at least that short.
Solved solve_entry(const CubieState& cube, int depth, SolveBudget budget) {
  budget.target_length = std::min(budget.target_length, std::max(depth, 1));
  try {
    return {cube, static_cast<int>(solve_kb(cube, budget).solution.size())};
  } catch (const Error& e) {
    if (e.code() != Errc::TimeBudgetExhausted) throw;
    return {cube, std::nullopt};
  }
}

// genuine_rate: probability of a genuine KB failure for this depth, used to
// size the injected top-up.
TrialRecord evaluate(int depth, const StageModel& model, const Solved& entry, double genuine_rate,
                     Rng& rng) {
  TrialRecord r;
  r.depth = depth;

  bool corrupted = false;
  if (model.sticker_noise > 0.0) {
    Scene scene;
    scene.cube = entry.cube;
    const std::string seen = observe_cube(scene, model.sticker_noise, rng.next());
    corrupted = seen != cubies_to_facelets(entry.cube).to_string();
  }
  if (corrupted || !entry.length) {
    r.genuine_kb_failure = true;
    r.failure = FailureCategory::KB;
    r.subcategory = corrupted ? kKbSub[0] : kKbSub[1];
    return r;
  }
  const double target_fail = 1.0 - model.p_kb;
  const double top_up =
      genuine_rate >= target_fail ? 0.0 : (target_fail - genuine_rate) / (1.0 - genuine_rate);
  if (rng.bernoulli(top_up)) {
    r.failure = FailureCategory::KB;
    r.subcategory = kKbSub[weighted_pick(rng, model.kb_split)];
    return r;
  }
  r.kb_ok = true;
  r.kb_length = entry.length;

  r.llm_ok = rng.bernoulli(model.p_llm);
  if (!*r.llm_ok) {
    r.failure = FailureCategory::LLM;
    r.subcategory = kLlmSub[weighted_pick(rng, model.llm_split)];
    return r;
  }
  r.exe_ok = rng.bernoulli(model.p_exe);
  if (!*r.exe_ok) {
    r.failure = FailureCategory::EXE;
    r.subcategory = kExeSub[weighted_pick(rng, model.exe_split)];
  }
  return r;
}

void count(StageCounts& c, bool ok) {
  ++c.attempted;
  if (ok) ++c.succeeded;
}

void accumulate(PipelineStats& s, DepthStats& d, const TrialRecord& r) {
  ++s.n;
  ++d.trials;
  count(s.kb, r.kb_ok);
  count(d.kb, r.kb_ok);
  if (r.genuine_kb_failure) ++d.genuine_kb_failures;
  if (r.kb_length) ++d.length_histogram[*r.kb_length];
  if (r.llm_ok) {
    count(s.llm, *r.llm_ok);
    count(d.llm, *r.llm_ok);
  }
  if (r.exe_ok) {
    count(s.exe, *r.exe_ok);
    count(d.exe, *r.exe_ok);
  }
  if (r.failure == FailureCategory::None) {
    ++s.successes;
    ++d.successes;
  } else {
    ++s.failures[r.failure];
    ++s.subcategories[std::string(failure_category_name(r.failure)) + "/" + r.subcategory];
  }
}

}  // namespace

TrialRecord run_trial(int depth, const StageModel& model, const SolveBudget& budget,
                      std::uint64_t seed) {
  model.check();
  budget.check();
  const CubieState cube = apply_sequence(CubieState::solved(), random_scramble(depth, derive_seed(seed, 0)));
  Rng rng(derive_seed(seed, 1));
  return evaluate(depth, model, solve_entry(cube, depth, budget), corruption_probability(model.sticker_noise), rng);
}

void CampaignConfig::check() const {
  if (depths.empty()) throw Error(Errc::InvalidArgument, "no depths");
  for (int d : depths) {
    if (d < 0) throw Error(Errc::InvalidArgument, "negative depth");
  }
  if (trials < 1) throw Error(Errc::InvalidArgument, "trials must be at least 1");
  if (pool_size < 1) throw Error(Errc::InvalidArgument, "pool_size must be at least 1");
  model.check();
  budget.check();
}

double PipelineStats::failure_share(FailureCategory c) const noexcept {
  const auto f = failure_count();
  if (f == 0) return 0.0;
  const auto it = failures.find(c);
  return it == failures.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(f);
}

PipelineStats run_campaign(const CampaignConfig& config, std::uint64_t seed) {
  config.check();
  const std::size_t nd = config.depths.size();
  std::vector<std::vector<Solved>> pools(nd);
  std::vector<double> genuine(nd);
  std::map<int, std::size_t> pool_of_depth;
  PipelineStats stats;
  stats.per_depth.resize(nd);
  for (std::size_t i = 0; i < nd; ++i) {
    const int depth = config.depths[i];
    stats.per_depth[i].depth = depth;
    // Repeated depths share one pool.
    if (auto it = pool_of_depth.find(depth); it != pool_of_depth.end()) {
      pools[i] = pools[it->second];
      genuine[i] = genuine[it->second];
      continue;
    }
    pool_of_depth[depth] = i;
    const std::uint64_t depth_seed = derive_seed(seed, (std::uint64_t{1} << 32) + static_cast<std::uint64_t>(depth));
    int failed = 0;
    for (int j = 0; j < config.pool_size; ++j) {
      const CubieState cube = apply_sequence(
          CubieState::solved(), random_scramble(depth, derive_seed(depth_seed, static_cast<std::uint64_t>(j))));
      pools[i].push_back(solve_entry(cube, depth, config.budget));
      if (!pools[i].back().length) ++failed;
    }
    const double pool_fail = static_cast<double>(failed) / config.pool_size;
    genuine[i] = 1.0 - (1.0 - pool_fail) * (1.0 - corruption_probability(config.model.sticker_noise));
  }
  for (std::int64_t t = 0; t < config.trials; ++t) {
    const std::size_t di = static_cast<std::size_t>(t % static_cast<std::int64_t>(nd));
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const Solved& entry = pools[di][rng.below(pools[di].size())];
    const TrialRecord r = evaluate(config.depths[di], config.model, entry, genuine[di], rng);
    accumulate(stats, stats.per_depth[di], r);
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Config and reports

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& v, int lineno) {
  std::vector<double> out;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const std::string t = trim(item);
      out.push_back(std::stod(t, &used));
      if (used != t.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": bad number '" + item + "'");
    }
  }
  if (out.empty()) throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": empty list");
  return out;
}

double parse_one(const std::string& v, int lineno) {
  const auto l = parse_list(v, lineno);
  if (l.size() != 1) throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": expected one value");
  return l[0];
}

std::int64_t parse_int(const std::string& v, int lineno) {
  const double d = parse_one(v, lineno);
  if (d != std::floor(d)) throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": expected integer");
  return static_cast<std::int64_t>(d);
}

}  // namespace

CampaignConfig parse_campaign_config(const std::string& text) {
  CampaignConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "depths") {
      c.depths.clear();
      for (double d : parse_list(value, lineno)) {
        if (d != std::floor(d)) throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": depth must be an integer");
        c.depths.push_back(static_cast<int>(d));
      }
    } else if (key == "trials") {
      c.trials = parse_int(value, lineno);
    } else if (key == "pool_size") {
      c.pool_size = static_cast<int>(parse_int(value, lineno));
    } else if (key == "p_kb") {
      c.model.p_kb = parse_one(value, lineno);
    } else if (key == "p_llm") {
      c.model.p_llm = parse_one(value, lineno);
    } else if (key == "p_exe") {
      c.model.p_exe = parse_one(value, lineno);
    } else if (key == "noise") {
      c.model.sticker_noise = parse_one(value, lineno);
    } else if (key == "kb_split") {
      c.model.kb_split = parse_list(value, lineno);
    } else if (key == "llm_split") {
      c.model.llm_split = parse_list(value, lineno);
    } else if (key == "exe_split") {
      c.model.exe_split = parse_list(value, lineno);
    } else if (key == "max_total_length") {
      c.budget.max_total_length = static_cast<int>(parse_int(value, lineno));
    } else if (key == "target_length") {
      c.budget.target_length = static_cast<int>(parse_int(value, lineno));
    } else if (key == "max_phase1_candidates") {
      c.budget.max_phase1_candidates = parse_int(value, lineno);
    } else if (key == "time_cap_ms") {
      c.budget.time_cap_ms = parse_int(value, lineno);
    } else {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  try {
    c.check();
  } catch (const Error& e) {
    throw Error(Errc::ParseError, e.what());
  }
  return c;
}

namespace {

void csv_row(std::string& out, const std::string& label, std::int64_t trials, double kb, double llm,
             double exe, double overall, const std::map<int, std::int64_t>& hist) {
  int modal = 0;
  std::int64_t modal_count = 0, total = 0;
  std::string h;
  for (const auto& [len, cnt] : hist) {
    total += cnt;
    if (cnt > modal_count) {
      modal_count = cnt;
      modal = len;
    }
    if (!h.empty()) h += ';';
    h += std::to_string(len) + ":" + std::to_string(cnt);
  }
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%lld,%.6f,%.6f,%.6f,%.6f,%d,%.6f,", label.c_str(),
                static_cast<long long>(trials), kb, llm, exe, overall, modal,
                total ? static_cast<double>(modal_count) / static_cast<double>(total) : 0.0);
  out += buf;
  out += h;
  out += '\n';
}

}  // namespace

std::string pipeline_csv(const PipelineStats& s) {
  std::string out = "depth,trials,kb_rate,llm_rate,exe_rate,overall,modal_length,modal_share,histogram\n";
  std::map<int, std::int64_t> all;
  for (const DepthStats& d : s.per_depth) {
    for (const auto& [len, cnt] : d.length_histogram) all[len] += cnt;
    csv_row(out, std::to_string(d.depth), d.trials, d.kb.rate(), d.llm.rate(), d.exe.rate(),
            d.trials ? static_cast<double>(d.successes) / static_cast<double>(d.trials) : 0.0,
            d.length_histogram);
  }
  csv_row(out, "all", s.n, s.kb.rate(), s.llm.rate(), s.exe.rate(), s.overall(), all);
  return out;
}

}  // namespace cubekb
