#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cubekb/cube.hpp"
#include "cubekb/motion.hpp"
#include "cubekb/plan.hpp"
#include "cubekb/solvers.hpp"

namespace cubekb {

// World frame: +x toward R, -x toward L, +z toward U, -z toward D, -y toward F,
// +y toward B. The cube is axis aligned.
Vec3 face_normal(Face f) noexcept;

struct Scene {
  CubieState cube;
  Vec3 cube_center;
  double cube_edge = 0.056;
  GridGeometry grid;
  int table_layers = 1;  // bottom voxel layers occupied by the table
};

// 64^3 grid at 1 cm, cube centered.
GridGeometry default_grid() noexcept;
Scene build_scene(int scramble_depth, std::uint64_t seed);

// Descriptor with each non-center sticker replaced, with probability noise,
// by a uniformly chosen different label.
std::string observe_cube(const Scene& scene, double sticker_noise, std::uint64_t seed);

Vec3 face_center(const Scene& scene, Face f) noexcept;

// Interact: a box in front of the face, normal offset in [res, edge/2] and
// lateral offset up to edge/4. Ignore: the cube body minus the gripped layer,
// plus the table. Rotation: tool +z pointing at the face center. Gripper:
// closed inside the interact box. Throws Error(LayerUnreachable).
MapSet build_subtask_maps(const Scene& scene, const Subtask& t);

struct SubtaskMotion {
  Vec3 start;   // standoff point along the face normal
  Vec3 target;  // centroid of the interact box
  PlannedPath path;
};

inline constexpr double kStandoff = 0.15;
inline constexpr double kSmoothingSigma = 0.01;

// Throws Error(LayerUnreachable) or any motion-planner error.
SubtaskMotion plan_subtask(const Scene& scene, const Subtask& t, const KinematicLimits& limits);

struct StageModel {
  double p_kb = 0.90;
  double p_llm = 0.9276;
  double p_exe = 0.9461;
  double sticker_noise = 0.0;
  // Conditional sub-category weights inside each failure category.
  std::vector<double> kb_split{1.0, 1.0};          // color recognition, timeout
  std::vector<double> llm_split{1.0, 1.0};         // annotation, code generation
  std::vector<double> exe_split{1.0, 1.0, 1.0};    // localization, motion, initial state

  // Throws Error(InvalidArgument).
  void check() const;
};

enum class FailureCategory { None, KB, LLM, EXE };
std::string_view failure_category_name(FailureCategory c) noexcept;

struct TrialRecord {
  int depth = 0;
  std::optional<int> kb_length;  // set when the KB stage succeeded
  bool kb_ok = false;
  std::optional<bool> llm_ok;    // unset when not reached
  std::optional<bool> exe_ok;
  bool genuine_kb_failure = false;
  FailureCategory failure = FailureCategory::None;
  std::string subcategory;
};

// Standalone trial: scramble from seed, real KB solve, Bernoulli stages. The
// injected KB failure rate tops the genuine rate up to 1 - p_kb.
TrialRecord run_trial(int depth, const StageModel& model, const SolveBudget& budget,
                      std::uint64_t seed);

struct CampaignConfig {
  std::vector<int> depths{10, 20, 30, 40};
  std::int64_t trials = 100'000;  // total, assigned round-robin over depths
  int pool_size = 20;             // distinct scrambles per depth, solved once
  StageModel model;
  SolveBudget budget = SolveBudget::kb_default();

  void check() const;
};

// key=value lines, '#' comments. Keys: depths, trials, pool_size, p_kb, p_llm,
// p_exe, noise, kb_split, llm_split, exe_split, max_total_length,
// target_length, max_phase1_candidates, time_cap_ms. Throws Error(ParseError).
CampaignConfig parse_campaign_config(const std::string& text);

struct StageCounts {
  std::int64_t attempted = 0;
  std::int64_t succeeded = 0;
  double rate() const noexcept {
    return attempted ? static_cast<double>(succeeded) / static_cast<double>(attempted) : 0.0;
  }
};

struct DepthStats {
  int depth = 0;
  std::int64_t trials = 0;
  StageCounts kb, llm, exe;
  std::int64_t successes = 0;
  std::int64_t genuine_kb_failures = 0;
  std::map<int, std::int64_t> length_histogram;  // KB-stage successes only
};

struct PipelineStats {
  std::int64_t n = 0;
  StageCounts kb, llm, exe;
  std::int64_t successes = 0;
  std::map<FailureCategory, std::int64_t> failures;
  std::map<std::string, std::int64_t> subcategories;
  std::vector<DepthStats> per_depth;

  double overall() const noexcept {
    return n ? static_cast<double>(successes) / static_cast<double>(n) : 0.0;
  }
  std::int64_t failure_count() const noexcept { return n - successes; }
  double failure_share(FailureCategory c) const noexcept;
};

// Trial i uses depth depths[i % len] and seed derive_seed(seed, i); pool
// scramble j at depth d uses derive_seed(derive_seed(seed, 2^32 + d), j).
PipelineStats run_campaign(const CampaignConfig& config, std::uint64_t seed);

// Columns: depth,trials,kb_rate,llm_rate,exe_rate,overall,modal_length,
// modal_share,histogram (histogram as "length:count" pairs joined by ';').
// A final row labelled "all" aggregates every depth.
std::string pipeline_csv(const PipelineStats& s);

}  // namespace cubekb
