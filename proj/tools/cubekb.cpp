// cubekb command-line tool.
//
// Exit codes: 0 ok, 2 parse, 3 validation, 4 timeout, 5 planning, 6 I/O.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
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

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
using namespace cubekb;

namespace {

int exit_code(Errc c) {
  switch (c) {
    case Errc::WrongLength:
    case Errc::InvalidCharacter:
    case Errc::CountViolation:
    case Errc::CenterViolation:
    case Errc::BadToken:
    case Errc::ParseError:
      return 2;
    case Errc::TimeBudgetExhausted:
      return 4;
    case Errc::MalformedPlan:
    case Errc::NoTargetVoxel:
    case Errc::GeometryMismatch:
    case Errc::NoProgress:
    case Errc::OutOfBounds:
    case Errc::NonMonotonicTime:
    case Errc::InfeasibleTiming:
    case Errc::LayerUnreachable:
      return 5;
    case Errc::IOFailure:
    case Errc::CorruptFile:
      return 6;
    default:
      return 3;
  }
}

struct Globals {
  std::uint64_t seed = 1;
  bool json = false;
};

struct CubeInput {
  std::string descriptor;
  std::string moves;
  int depth = -1;
  bool given = false;
};

// Resolves the cube from a descriptor, a move sequence applied to the solved
// cube, or a seeded scramble of the given depth.
CubieState resolve_cube(const CubeInput& in, const Globals& g) {
  if (!in.descriptor.empty()) return facelets_to_cubies(parse_facelets(in.descriptor));
  if (!in.moves.empty()) return apply_sequence(CubieState::solved(), parse_moves(in.moves));
  if (in.depth >= 0) return apply_sequence(CubieState::solved(), random_scramble(in.depth, g.seed));
  throw Error(Errc::ParseError, "give a descriptor, --moves or --depth");
}

void add_cube_options(CLI::App* cmd, CubeInput& in) {
  cmd->add_option("descriptor", in.descriptor, "54-character facelet descriptor");
  cmd->add_option("--moves", in.moves, "move sequence applied to the solved cube");
  cmd->add_option("--depth", in.depth, "seeded random scramble of this many moves");
}

struct BudgetFlags {
  std::optional<int> max_length, target;
  std::optional<std::int64_t> candidates, time_cap_ms;

  SolveBudget apply(SolveBudget b) const {
    if (max_length) b.max_total_length = *max_length;
    if (target) b.target_length = *target;
    if (candidates) b.max_phase1_candidates = *candidates;
    if (time_cap_ms) b.time_cap_ms = *time_cap_ms;
    return b;
  }
};

void add_budget_options(CLI::App* cmd, BudgetFlags& b) {
  cmd->add_option("--max-length", b.max_length, "budget: max_total_length");
  cmd->add_option("--target", b.target, "budget: target_length");
  cmd->add_option("--candidates", b.candidates, "budget: max_phase1_candidates");
  cmd->add_option("--time-cap-ms", b.time_cap_ms, "budget: time cap in milliseconds");
}

SolveResult run_backend(const std::string& backend, const CubieState& c, const BudgetFlags& b) {
  if (backend == "kb") return solve_kb(c, b.apply(SolveBudget::kb_default()));
  if (backend == "two-phase") return solve_two_phase(c, b.apply(SolveBudget::two_phase_default()));
  if (backend == "lbl") return solve_layer_by_layer(c);
  if (backend == "optimal") {
    auto r = solve_optimal_shallow(c, 7);
    if (!r) throw Error(Errc::TimeBudgetExhausted, "no solution within 7 moves");
    return *r;
  }
  throw Error(Errc::ParseError, "unknown backend '" + backend + "'");
}

void emit(const Globals& g, const json& j, const std::string& human) {
  if (g.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << human;
  }
}

std::string pad(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

std::string fixed(double v, int prec) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

void write_file(const std::string& path, const std::string& text) { write_text_file(path, text); }

// ---------------------------------------------------------------------------

int cmd_scramble(const Globals& g, int depth) {
  const MoveSequence s = random_scramble(depth, g.seed);
  const std::string d = cubies_to_facelets(apply_sequence(CubieState::solved(), s)).to_string();
  json j{{"seed", g.seed}, {"depth", depth}, {"scramble", to_string(s)}, {"descriptor", d}};
  emit(g, j, "scramble:   " + to_string(s) + "\ndescriptor: " + d + "\n");
  return 0;
}

int cmd_solve(const Globals& g, const CubeInput& in, const std::string& backend, const BudgetFlags& b,
              bool timing) {
  const CubieState c = resolve_cube(in, g);
  const SolveResult r = run_backend(backend, c, b);
  json j{{"backend", r.backend},
         {"solution", to_string(r.solution)},
         {"length", r.solution.size()},
         {"phase1_length", r.phase1_length},
         {"phase2_length", r.phase2_length},
         {"nodes_expanded", r.nodes_expanded},
         {"phase1_candidates", r.phase1_candidates},
         {"verified", verify_solution(c, r.solution)}};
  std::string human = "backend:  " + r.backend + "\nsolution: " + to_string(r.solution) +
                      "\nlength:   " + std::to_string(r.solution.size()) + "\n";
  if (timing) {
    j["elapsed_ms"] = r.elapsed_ms;
    human += "elapsed:  " + fixed(r.elapsed_ms, 1) + " ms\n";
  }
  emit(g, j, human);
  return 0;
}

int cmd_compare(const Globals& g, int n, int depth, const std::string& csv_path) {
  if (n < 1) throw Error(Errc::InvalidArgument, "--n must be at least 1");
  std::vector<int> lbl, tp, kb;
  std::string per = "index,scramble_seed,lbl,two_phase,kb\n";
  for (int i = 0; i < n; ++i) {
    const std::uint64_t s = derive_seed(g.seed, static_cast<std::uint64_t>(i));
    const CubieState c = apply_sequence(CubieState::solved(), random_scramble(depth, s));
    lbl.push_back(static_cast<int>(solve_layer_by_layer(c).solution.size()));
    tp.push_back(static_cast<int>(solve_two_phase(c).solution.size()));
    kb.push_back(static_cast<int>(solve_kb(c).solution.size()));
    per += std::to_string(i) + "," + std::to_string(s) + "," + std::to_string(lbl.back()) + "," +
           std::to_string(tp.back()) + "," + std::to_string(kb.back()) + "\n";
  }
  if (!csv_path.empty()) write_file(csv_path, per);
  const StepStats k = step_stats(kb);
  struct Row {
    std::string method;
    StepStats s;
    bool reported;
  };
  // DeepCubeA is not run here; its row repeats the published figures.
  const std::vector<Row> rows{{"layer-by-layer", step_stats(lbl), false},
                              {"DeepCubeA (reported)", StepStats{21, 33, 28.0, 30}, true},
                              {"two-phase", step_stats(tp), false},
                              {"knowledge-base", k, false}};
  json j{{"seed", g.seed}, {"n", n}, {"depth", depth}, {"rows", json::array()}};
  std::string human = pad("method", 22) + pad("min", 6) + pad("max", 6) + pad("avg", 8) + "reduction\n";
  for (const Row& r : rows) {
    const bool is_kb = r.method == "knowledge-base";
    const double red = reduction(r.s.avg, k.avg);
    json row{{"method", r.method}, {"reported", r.reported}, {"min", r.s.min}, {"max", r.s.max},
             {"avg", r.s.avg}};
    row["reduction_percent"] = is_kb ? json(nullptr) : json(std::round(red * 10) / 10);
    j["rows"].push_back(row);
    human += pad(r.method, 22) + pad(std::to_string(r.s.min), 6) + pad(std::to_string(r.s.max), 6) +
             pad(fixed(r.s.avg, 2), 8) + (is_kb ? "-" : fixed(red, 1) + "%") + "\n";
  }
  emit(g, j, human);
  return 0;
}

int cmd_trace(const Globals& g, const CubeInput& in, const std::string& backend, int runs,
              const std::string& out, const std::string& aggregate) {
  std::vector<LabeledTrace> traces;
  if (runs > 1) {
    if (in.depth < 0) throw Error(Errc::ParseError, "--runs needs --depth");
    for (int i = 0; i < runs; ++i) {
      const CubieState c = apply_sequence(
          CubieState::solved(), random_scramble(in.depth, derive_seed(g.seed, static_cast<std::uint64_t>(i))));
      traces.push_back({"run" + std::to_string(i), trace_restoration(c, run_backend(backend, c, {}).solution)});
    }
  } else {
    const CubieState c = resolve_cube(in, g);
    traces.push_back({"run0", trace_restoration(c, run_backend(backend, c, {}).solution)});
  }
  const std::string csv = trace_csv(traces);
  if (!aggregate.empty()) write_file(aggregate, aggregate_trace_csv(traces));
  if (!out.empty()) {
    write_file(out, csv);
    json j{{"seed", g.seed}, {"runs", traces.size()}, {"csv", out}};
    std::string human = "wrote " + out + "\n";
    emit(g, j, human);
  } else if (g.json) {
    json j{{"seed", g.seed}, {"csv", csv}};
    emit(g, j, "");
  } else {
    std::cout << csv;
  }
  return 0;
}

json trajectory_json(const Trajectory& t) {
  json arr = json::array();
  for (const Waypoint& w : t) {
    arr.push_back({{"p", {w.p.x, w.p.y, w.p.z}},
                   {"quat", {w.orientation.w, w.orientation.x, w.orientation.y, w.orientation.z}},
                   {"gripper", w.gripper == Gripper::Close ? "close" : "open"},
                   {"t", w.t}});
  }
  return arr;
}

json plan_json(const Plan& p) {
  json cmds = json::array();
  for (const PrimitiveCommand& c : p.commands) {
    json o{{"kind", command_kind_name(c.kind)}};
    if (c.kind != CommandKind::MoveToInitialPose) o["layer"] = std::string(1, face_letter(c.layer));
    if (c.kind == CommandKind::RotateAtLayer) {
      o["direction"] = direction_name(c.direction);
      o["quarter_turns"] = c.quarter_turns;
    }
    cmds.push_back(o);
  }
  return {{"commands", cmds}, {"subtask_boundaries", p.subtask_boundaries}};
}

int cmd_plan(const Globals& g, const std::string& moves_text, const std::string& descriptor,
             const std::string& out, const std::string& text_out, const std::string& scene_dir) {
  MoveSequence s;
  std::optional<CubieState> start;
  if (!descriptor.empty()) {
    start = facelets_to_cubies(parse_facelets(descriptor));
    s = solve_kb(*start).solution;
  } else {
    s = parse_moves(moves_text);
  }
  const Plan p = compile_plan(s);
  if (!(plan_semantics(p) == s)) throw Error(Errc::MalformedPlan, "plan does not reproduce its sequence");
  const json pj = plan_json(p);
  if (!out.empty()) write_file(out, pj.dump(2) + "\n");
  if (!text_out.empty()) write_file(text_out, plan_text(p));

  json j{{"sequence", to_string(s)}, {"plan", pj}};
  std::string human = plan_text(p);
  if (!scene_dir.empty()) {
    fs::create_directories(scene_dir);
    Scene scene = build_scene(0, g.seed);
    if (start) scene.cube = *start;
    const KinematicLimits limits;
    json files = json::array();
    for (std::size_t i = 0; i < s.size(); ++i) {
      SubtaskMotion m;
      try {
        m = plan_subtask(scene, s[i], limits);
      } catch (const Error& e) {
        throw Error(e.code(), "subtask " + std::to_string(i) + " (" + to_string(s[i]) + "): " + e.what());
      }
      const auto violations = check_constraints(m.path.trajectory, limits);
      char name[32];
      std::snprintf(name, sizeof name, "traj_%03zu.json", i);
      const fs::path path = fs::path(scene_dir) / name;
      write_file(path.string(), trajectory_json(m.path.trajectory).dump(2) + "\n");
      files.push_back({{"subtask", i},
                       {"move", to_string(s[i])},
                       {"file", name},
                       {"waypoints", m.path.trajectory.size()},
                       {"f_e", m.path.costs.f_e},
                       {"f_c", m.path.costs.f_c},
                       {"constraints_ok", violations.empty()}});
      human += std::string(name) + ": " + std::to_string(m.path.trajectory.size()) + " waypoints, F_c " +
               fixed(m.path.costs.f_c, 4) + " m, constraints " + (violations.empty() ? "ok" : "VIOLATED") + "\n";
      scene.cube = apply_move(scene.cube, s[i]);
    }
    j["trajectories"] = files;
  }
  emit(g, j, human);
  return 0;
}

json stats_json(const PipelineStats& s, const CampaignConfig& c, std::uint64_t seed) {
  auto stage = [](const StageCounts& k) {
    return json{{"attempted", k.attempted}, {"succeeded", k.succeeded}, {"rate", k.rate()}};
  };
  json j{{"seed", seed},
         {"trials", s.n},
         {"pool_size", c.pool_size},
         {"stage_model", {{"p_kb", c.model.p_kb}, {"p_llm", c.model.p_llm}, {"p_exe", c.model.p_exe},
                          {"noise", c.model.sticker_noise}}},
         {"kb", stage(s.kb)},
         {"llm", stage(s.llm)},
         {"exe", stage(s.exe)},
         {"overall", s.overall()},
         {"failures", s.failure_count()}};
  json shares = json::object();
  for (FailureCategory f : {FailureCategory::KB, FailureCategory::LLM, FailureCategory::EXE}) {
    shares[std::string(failure_category_name(f))] = s.failure_share(f);
  }
  j["failure_shares"] = shares;
  json subs = json::object();
  for (const auto& [k, v] : s.subcategories) subs[k] = v;
  j["subcategories"] = subs;
  json depths = json::array();
  for (const DepthStats& d : s.per_depth) {
    json hist = json::object();
    for (const auto& [len, cnt] : d.length_histogram) hist[std::to_string(len)] = cnt;
    depths.push_back({{"depth", d.depth},
                      {"trials", d.trials},
                      {"kb", stage(d.kb)},
                      {"llm", stage(d.llm)},
                      {"exe", stage(d.exe)},
                      {"successes", d.successes},
                      {"genuine_kb_failures", d.genuine_kb_failures},
                      {"length_histogram", hist}});
  }
  j["per_depth"] = depths;
  return j;
}

int cmd_pipeline(const Globals& g, const std::string& config_path, std::optional<std::int64_t> trials,
                 const std::string& out_json, const std::string& out_csv) {
  CampaignConfig c;
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    if (!f) throw Error(Errc::IOFailure, "cannot read " + config_path);
    std::stringstream ss;
    ss << f.rdbuf();
    c = parse_campaign_config(ss.str());
  }
  if (trials) c.trials = *trials;
  const PipelineStats s = run_campaign(c, g.seed);
  const json j = stats_json(s, c, g.seed);
  const std::string csv = pipeline_csv(s);
  if (!out_json.empty()) write_file(out_json, j.dump(2) + "\n");
  if (!out_csv.empty()) write_file(out_csv, csv);
  std::string human = pad("depth", 7) + pad("trials", 9) + pad("KB", 9) + pad("LLM", 9) + pad("EXE", 9) +
                      pad("overall", 9) + "modal length\n";
  auto line = [&](const std::string& label, std::int64_t n, const StageCounts& kb, const StageCounts& llm,
                  const StageCounts& exe, double overall, const std::map<int, std::int64_t>& hist) {
    int modal = 0;
    std::int64_t best = 0, total = 0;
    for (const auto& [len, cnt] : hist) {
      total += cnt;
      if (cnt > best) best = cnt, modal = len;
    }
    human += pad(label, 7) + pad(std::to_string(n), 9) + pad(fixed(100 * kb.rate(), 2) + "%", 9) +
             pad(fixed(100 * llm.rate(), 2) + "%", 9) + pad(fixed(100 * exe.rate(), 2) + "%", 9) +
             pad(fixed(100 * overall, 2) + "%", 9) +
             (total ? fixed(100.0 * best / total, 0) + "% (" + std::to_string(modal) + "s)" : "-") + "\n";
  };
  std::map<int, std::int64_t> all;
  for (const DepthStats& d : s.per_depth) {
    for (const auto& [len, cnt] : d.length_histogram) all[len] += cnt;
    line(std::to_string(d.depth), d.trials, d.kb, d.llm, d.exe,
         d.trials ? static_cast<double>(d.successes) / d.trials : 0.0, d.length_histogram);
  }
  line("all", s.n, s.kb, s.llm, s.exe, s.overall(), all);
  human += "failure shares: KB " + fixed(s.failure_share(FailureCategory::KB), 3) + ", LLM " +
           fixed(s.failure_share(FailureCategory::LLM), 3) + ", EXE " +
           fixed(s.failure_share(FailureCategory::EXE), 3) + "\n";
  emit(g, j, human);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cubekb: cube solving, plan compilation, motion planning and pipeline statistics"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "seed for every randomized step")->capture_default_str();
  app.add_flag("--json", g.json, "machine-readable JSON output");

  int scramble_depth = 40;
  auto* scramble = app.add_subcommand("scramble", "seeded random scramble and its descriptor");
  scramble->add_option("-n,--depth", scramble_depth, "number of moves")->capture_default_str();

  CubeInput solve_in;
  std::string solve_backend = "kb";
  BudgetFlags solve_budget;
  bool timing = false;
  auto* solve = app.add_subcommand("solve", "solve a cube");
  add_cube_options(solve, solve_in);
  solve->add_option("--backend", solve_backend, "kb | two-phase | lbl | optimal")->capture_default_str();
  add_budget_options(solve, solve_budget);
  solve->add_flag("--timing", timing, "include wall-clock time (not reproducible)");

  int compare_n = 30, compare_depth = 40;
  std::string compare_csv;
  auto* compare = app.add_subcommand("compare", "layer-by-layer vs two-phase vs knowledge-base");
  compare->add_option("--n", compare_n, "number of scrambles")->capture_default_str();
  compare->add_option("--depth", compare_depth, "scramble depth")->capture_default_str();
  compare->add_option("--csv", compare_csv, "per-scramble lengths CSV");

  CubeInput trace_in;
  std::string trace_backend = "kb", trace_out, trace_agg;
  int trace_runs = 1;
  auto* trace = app.add_subcommand("trace", "per-step face color-correspondence CSV");
  add_cube_options(trace, trace_in);
  trace->add_option("--backend", trace_backend, "kb | two-phase | lbl | optimal")->capture_default_str();
  trace->add_option("--runs", trace_runs, "number of seeded scrambles (needs --depth)")->capture_default_str();
  trace->add_option("--out", trace_out, "CSV output path (default stdout)");
  trace->add_option("--aggregate", trace_agg, "across-run aggregate CSV path");

  std::string plan_moves, plan_descriptor, plan_out, plan_text_out, plan_scene;
  auto* plan = app.add_subcommand("plan", "compile a move sequence into robot primitives");
  plan->add_option("moves", plan_moves, "move sequence, e.g. \"R3\"");
  plan->add_option("--descriptor", plan_descriptor, "solve this cube with the knowledge base first");
  plan->add_option("--out", plan_out, "plan JSON path");
  plan->add_option("--text", plan_text_out, "natural-language sidecar path");
  plan->add_option("--scene", plan_scene, "directory for per-subtask trajectory JSON");

  std::string pipe_config, pipe_json, pipe_csv;
  std::optional<std::int64_t> pipe_trials;
  auto* pipeline = app.add_subcommand("pipeline", "Monte-Carlo closed-loop campaign");
  pipeline->add_option("--config", pipe_config, "key=value campaign config");
  pipeline->add_option("--trials", pipe_trials, "override the trial count");
  pipeline->add_option("--out-json", pipe_json, "statistics JSON path");
  pipeline->add_option("--out-csv", pipe_csv, "per-depth CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*scramble) return cmd_scramble(g, scramble_depth);
    if (*solve) return cmd_solve(g, solve_in, solve_backend, solve_budget, timing);
    if (*compare) return cmd_compare(g, compare_n, compare_depth, compare_csv);
    if (*trace) return cmd_trace(g, trace_in, trace_backend, trace_runs, trace_out, trace_agg);
    if (*plan) return cmd_plan(g, plan_moves, plan_descriptor, plan_out, plan_text_out, plan_scene);
    if (*pipeline) return cmd_pipeline(g, pipe_config, pipe_trials, pipe_json, pipe_csv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 6;
  }
  return 0;
}
