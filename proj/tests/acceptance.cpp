// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Usage: cubekb_acceptance <path-to-cubekb-cli> [criteria...]

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cubekb/cube.hpp"
#include "cubekb/error.hpp"
#include "cubekb/metrics.hpp"
#include "cubekb/motion.hpp"
#include "cubekb/plan.hpp"
#include "cubekb/rng.hpp"
#include "cubekb/scene.hpp"
#include "cubekb/solvers.hpp"

namespace fs = std::filesystem;
using namespace cubekb;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

CubieState scrambled(int depth, std::uint64_t seed) {
  return apply_sequence(CubieState::solved(), random_scramble(depth, seed));
}

// ---------------------------------------------------------------------------
// Criteria 1, 2, 6 share the same 30 depth-40 scrambles.

struct TableTwo {
  std::vector<CubieState> cubes;
  std::vector<MoveSequence> kb, tp, lbl;
};

const TableTwo& table_two() {
  static const TableTwo t = [] {
    TableTwo r;
    for (std::uint64_t i = 0; i < 30; ++i) {
      const CubieState c = scrambled(40, derive_seed(1, i));
      r.cubes.push_back(c);
      r.kb.push_back(solve_kb(c).solution);
      r.tp.push_back(solve_two_phase(c).solution);
      r.lbl.push_back(solve_layer_by_layer(c).solution);
    }
    return r;
  }();
  return t;
}

StepStats lengths(const std::vector<MoveSequence>& v) {
  std::vector<int> n;
  for (const auto& s : v) n.push_back(static_cast<int>(s.size()));
  return step_stats(n);
}

Outcome criterion1() {
  const TableTwo& t = table_two();
  for (std::size_t i = 0; i < t.cubes.size(); ++i) {
    if (!verify_solution(t.cubes[i], t.kb[i]) || !verify_solution(t.cubes[i], t.tp[i]) ||
        !verify_solution(t.cubes[i], t.lbl[i]))
      return {false, "unverified solution on scramble " + std::to_string(i)};
  }
  const StepStats kb = lengths(t.kb), tp = lengths(t.tp), lbl = lengths(t.lbl);
  const bool ok = kb.avg >= 17 && kb.avg <= 20 && kb.max <= 23 && tp.avg <= 22 && lbl.avg >= 50 && lbl.avg <= 110;
  return {ok, "KB " + std::to_string(kb.min) + "/" + std::to_string(kb.max) + "/" + fmt("%.2f", kb.avg) +
                  ", two-phase " + std::to_string(tp.min) + "/" + std::to_string(tp.max) + "/" +
                  fmt("%.2f", tp.avg) + ", layer-by-layer " + std::to_string(lbl.min) + "/" +
                  std::to_string(lbl.max) + "/" + fmt("%.2f", lbl.avg) + " (min/max/avg)"};
}

Outcome criterion2() {
  const TableTwo& t = table_two();
  const double kb = lengths(t.kb).avg;
  const double r_lbl = reduction(lengths(t.lbl).avg, kb), r_tp = reduction(lengths(t.tp).avg, kb);
  return {r_lbl >= 70 && r_tp >= 5 && r_tp <= 25,
          "reduction vs layer-by-layer " + fmt("%.1f%%", r_lbl) + ", vs two-phase " + fmt("%.1f%%", r_tp)};
}

Outcome criterion3() {
  int checked = 0, bad = 0, errors = 0;
  for (int depth : {5, 10, 20, 40}) {
    for (std::uint64_t i = 0; i < 250; ++i) {
      const CubieState c = scrambled(depth, derive_seed(3000 + depth, i));
      try {
        bad += !verify_solution(c, solve_two_phase(c).solution);
        bad += !verify_solution(c, solve_layer_by_layer(c).solution);
        checked += 2;
        if (depth == 5) {
          const auto o = solve_optimal_shallow(c, 5);
          bad += !o || !verify_solution(c, o->solution);
          ++checked;
        }
      } catch (const Error& e) {
        ++errors;
      }
    }
  }
  // KB solutions produced for criteria 1 and 4 count too.
  const TableTwo& t = table_two();
  for (std::size_t i = 0; i < t.cubes.size(); ++i, ++checked) bad += !verify_solution(t.cubes[i], t.kb[i]);
  return {bad == 0 && errors == 0, std::to_string(checked) + " solutions over 1000 scrambles, " +
                                       std::to_string(bad) + " unverified, " + std::to_string(errors) + " errors"};
}

Outcome criterion4() {
  int mismatches = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const int depth = 1 + static_cast<int>(i % 5);
    const CubieState c = scrambled(depth, derive_seed(4000, i));
    const SolveResult kb = solve_kb(c, SolveBudget::exhaustive());
    const auto opt = solve_optimal_shallow(c, depth);
    if (!opt || !verify_solution(c, kb.solution) || kb.solution.size() != opt->solution.size()) ++mismatches;
  }
  return {mismatches == 0, "200 scrambles of depth 1-5, " + std::to_string(mismatches) + " length mismatches"};
}

int parity(const std::uint8_t* p, int n) {
  int inv = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) inv += p[i] > p[j];
  return inv & 1;
}

Outcome criterion5() {
  int failures = 0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const MoveSequence q = random_scramble(1 + static_cast<int>(i % 40), derive_seed(5000, i));
    const CubieState c = apply_sequence(CubieState::solved(), q);
    failures += facelets_to_cubies(parse_facelets(cubies_to_facelets(c).to_string())) != c;
    failures += !is_solved(apply_sequence(c, invert_sequence(q)));
    for (int m = 0; m < kNumMoves; ++m) {
      const CubieState n = apply_move(c, Move::from_index(m));
      int co = 0, eo = 0;
      for (auto v : n.co) co += v;
      for (auto v : n.eo) eo += v;
      failures += co % 3 != 0 || eo % 2 != 0 || parity(n.cp.data(), 8) != parity(n.ep.data(), 12);
    }
  }
  return {failures == 0, "10,000 states x 18 moves, " + std::to_string(failures) + " violations"};
}

Outcome criterion6() {
  const TableTwo& t = table_two();
  std::size_t longest = 0;
  int bad = 0;
  for (std::size_t i = 0; i < t.cubes.size(); ++i) {
    const Trace tr = trace_restoration(t.cubes[i], t.kb[i]);
    longest = std::max(longest, tr.size());
    for (double r : tr.back().rate) bad += r != 1.0;
    bad += tr.size() > 21;
  }
  return {bad == 0, "30 KB traces, longest " + std::to_string(longest) + " records, " + std::to_string(bad) +
                        " violations"};
}

Outcome criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  const CampaignConfig config;
  const PipelineStats s = run_campaign(config, 1);
  const double secs = seconds_since(t0);
  const double kb = s.failure_share(FailureCategory::KB), llm = s.failure_share(FailureCategory::LLM),
               exe = s.failure_share(FailureCategory::EXE);
  const bool ok = s.n == 100000 && std::abs(s.overall() - 0.790) <= 0.010 && std::abs(kb - 0.476) <= 0.03 &&
                  std::abs(llm - 0.310) <= 0.03 && std::abs(exe - 0.214) <= 0.03 && secs < 300;
  return {ok, std::to_string(s.n) + " trials, overall " + fmt("%.4f", s.overall()) + ", shares (" +
                  fmt("%.3f", kb) + ", " + fmt("%.3f", llm) + ", " + fmt("%.3f", exe) + "), " + fmt("%.1f s", secs)};
}

Outcome criterion8() {
  const Plan p = compile_plan(parse_moves("R3"));
  const std::vector<std::string> want{"move gripper to right layer",
                                      "rotate gripper at right layer counter-clockwise by 1*90 degrees",
                                      "move to initial pose"};
  bool ok = p.commands.size() == 3;
  for (std::size_t i = 0; ok && i < 3; ++i) ok = command_text(p.commands[i]) == want[i];
  int bad = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const MoveSequence q = random_scramble(static_cast<int>(i % 41), derive_seed(8000, i));
    bad += plan_semantics(compile_plan(q)) != q;
  }
  return {ok && bad == 0, std::string("R3 strings ") + (ok ? "exact" : "WRONG") + ", " + std::to_string(bad) +
                              " round-trip failures over 1000 sequences"};
}

VoxelGrid brute_edt(const VoxelGrid& in) {
  const GridGeometry& g = in.geometry;
  std::vector<Vec3> targets;
  for (int k = 0; k < g.d; ++k)
    for (int j = 0; j < g.h; ++j)
      for (int i = 0; i < g.w; ++i)
        if (in.at(i, j, k) > 0) targets.push_back(g.center(i, j, k));
  VoxelGrid out(g);
  for (int k = 0; k < g.d; ++k)
    for (int j = 0; j < g.h; ++j)
      for (int i = 0; i < g.w; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (const Vec3& t : targets) best = std::min(best, distance(g.center(i, j, k), t));
        out.at(i, j, k) = best;
      }
  return out;
}

Outcome criterion9() {
  std::ostringstream detail;
  bool ok = true;

  // EDT exactness on 32^3.
  double worst = 0;
  for (std::uint64_t trial = 0; trial < 3; ++trial) {
    Rng rng(derive_seed(9000, trial));
    const GridGeometry g{32, 32, 32, 0.01, Vec3{}};
    VoxelGrid in(g);
    const int n = 1 + static_cast<int>(rng.below(12));
    for (int k = 0; k < n; ++k) in.values[rng.below(g.size())] = 1.0;
    const VoxelGrid a = euclidean_distance_transform(in), b = brute_edt(in);
    for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
  }
  ok = ok && worst <= 1e-9;
  detail << "EDT max error " << worst;

  // Unobstructed paths.
  const KinematicLimits limits;
  double ratio = 0;
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    Rng rng(derive_seed(9100, trial));
    const GridGeometry g{40, 40, 40, 0.01, Vec3{}};
    MapSet maps{VoxelGrid(g), VoxelGrid(g), std::vector<Quat>(g.size()), std::vector<Gripper>(g.size())};
    auto cell = [&] { return static_cast<int>(rng.below(40)); };
    const int ti = cell(), tj = cell(), tk = cell();
    maps.interact.at(ti, tj, tk) = 1;
    const Vec3 start = g.center(cell(), cell(), cell()), target = g.center(ti, tj, tk);
    if (distance(start, target) < 0.05) continue;
    const PlannedPath p = plan_path(maps, start, target, limits, 0.01);
    ratio = std::max(ratio, p.costs.f_c / distance(start, target));
  }
  ok = ok && ratio <= 1.2;
  detail << ", unobstructed F_c/straight max " << fmt("%.3f", ratio);

  // Seeded scene suite: random subtask, cube placement and standoff side.
  int passed = 0;
  for (std::uint64_t sc = 0; sc < 50; ++sc) {
    Rng rng(derive_seed(9200, sc));
    Scene scene = build_scene(static_cast<int>(rng.below(41)), derive_seed(9300, sc));
    scene.cube_center = scene.cube_center + Vec3{(rng.uniform() - 0.5) * 0.08, (rng.uniform() - 0.5) * 0.08,
                                                 (rng.uniform() - 0.5) * 0.08};
    const Move m = Move::from_index(static_cast<int>(rng.below(kNumMoves)));
    try {
      const SubtaskMotion mo = plan_subtask(scene, m, limits);
      const MapSet maps = build_subtask_maps(scene, m);
      const VoxelGrid ig = normalize(gaussian_smooth(maps.ignore, kSmoothingSigma));
      bool clean = check_constraints(mo.path.trajectory, limits).empty();
      for (const Waypoint& w : mo.path.trajectory) clean = clean && ig.sample(w.p) <= kObstacleThreshold;
      passed += clean;
    } catch (const Error& e) {
      detail << " [scenario " << sc << ": " << e.what() << "]";
    }
  }
  ok = ok && passed == 50;
  detail << ", scene suite " << passed << "/50 clean";
  return {ok, detail.str()};
}

// ---------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& cmd) {
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  r.status = pclose(p);
  return r;
}

// Every file under dir, keyed by relative path.
std::vector<std::pair<std::string, std::string>> snapshot(const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files.emplace_back(fs::relative(e.path(), dir).string(), slurp(e.path()));
  std::sort(files.begin(), files.end());
  return files;
}

Outcome criterion10(const std::string& cli) {
  if (cli.empty() || !fs::exists(cli)) return {false, "CLI binary not found: " + cli};
  const fs::path root = fs::temp_directory_path() / "cubekb_repro";
  fs::remove_all(root);
  fs::create_directories(root);
  {
    std::ofstream cfg(root / "campaign.cfg");
    cfg << "depths=10,20\ntrials=5000\npool_size=2\n";
  }
  const std::vector<std::string> commands{
      "--seed 7 scramble -n 40",
      "--seed 7 --json scramble -n 25",
      "--seed 7 solve --depth 30 --backend two-phase",
      "--seed 7 --json solve --depth 40 --backend kb",
      "--seed 7 solve --depth 40 --backend lbl",
      "--seed 7 trace --depth 40 --runs 3 --backend two-phase --out {dir}/trace.csv --aggregate {dir}/agg.csv",
      "--seed 7 plan \"B1 U2 F2 L1 D1 R3\" --out {dir}/plan.json --text {dir}/plan.txt --scene {dir}/scene",
      "--seed 7 compare --n 2 --depth 40 --csv {dir}/compare.csv",
      "--seed 7 --json pipeline --config " + (root / "campaign.cfg").string() +
          " --out-json {dir}/stats.json --out-csv {dir}/stats.csv",
  };
  int mismatched = 0, failed = 0;
  std::string first_bad;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::array<std::vector<std::pair<std::string, std::string>>, 2> files;
    std::array<Run, 2> runs;
    for (int k = 0; k < 2; ++k) {
      const fs::path dir = root / ("cmd" + std::to_string(i)) / std::to_string(k);
      fs::create_directories(dir);
      std::string c = commands[i];
      for (std::size_t at; (at = c.find("{dir}")) != std::string::npos;) c.replace(at, 5, dir.string());
      runs[k] = run("\"" + cli + "\" " + c + " 2>/dev/null");
      std::string& out = runs[k].out;
      for (std::size_t at; (at = out.find(dir.string())) != std::string::npos;) out.replace(at, dir.string().size(), "{dir}");
      files[k] = snapshot(dir);
    }
    if (runs[0].status != 0 || runs[1].status != 0) {
      ++failed;
      if (first_bad.empty()) first_bad = commands[i];
    } else if (runs[0].out != runs[1].out || files[0] != files[1] || runs[0].out.empty()) {
      ++mismatched;
      if (first_bad.empty()) first_bad = commands[i];
    }
  }
  fs::remove_all(root);
  std::string detail = std::to_string(commands.size()) + " seeded commands run twice, " +
                       std::to_string(mismatched) + " differing, " + std::to_string(failed) + " failing";
  if (!first_bad.empty()) detail += " (first: " + first_bad + ")";
  return {mismatched == 0 && failed == 0, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  std::set<int> only;
  for (int i = 2; i < argc; ++i) only.insert(std::atoi(argv[i]));

  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, [&] { return criterion10(cli); }},
  };
  int failures = 0;
  for (const auto& [id, fn] : criteria) {
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s criterion %2d: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
