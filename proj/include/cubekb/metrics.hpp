#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cubekb/cube.hpp"

namespace cubekb {

// Fraction of the face's nine stickers that match its center.
double face_match_rate(const FaceletState& state, Face face) noexcept;

struct TraceRecord {
  int step = 0;
  std::array<double, 6> rate{};  // U R F D L B
  double avg = 0.0;
  double min = 0.0;
  double max = 0.0;
};

using Trace = std::vector<TraceRecord>;

TraceRecord trace_record(const CubieState& state, int step);

// One record per prefix length 0..len(s). Throws Error(NotASolution).
Trace trace_restoration(const CubieState& start, const MoveSequence& s);

struct StepStats {
  int min = 0;
  int max = 0;
  double avg = 0.0;
  std::size_t n = 0;
};

// Throws Error(EmptySample).
StepStats step_stats(std::span<const int> lengths);

// Percent improvement of avg_kb over avg_baseline. Throws Error(InvalidArgument)
// unless avg_baseline > 0.
double reduction(double avg_baseline, double avg_kb);

struct LabeledTrace {
  std::string run_id;
  Trace trace;
};

// Header: run_id,step,rate_U,rate_R,rate_F,rate_D,rate_L,rate_B,avg,min,max
std::string trace_csv(const std::vector<LabeledTrace>& traces);
// Throws Error(ParseError).
std::vector<LabeledTrace> parse_trace_csv(const std::string& text);

// Per-step statistics across runs. Runs that already finished count as
// fully restored. Header: step,runs,avg,face_min,face_max,run_min,run_max
// where face_min/face_max are the extreme single-face rates of any run and
// run_min/run_max the extreme per-run averages.
std::string aggregate_trace_csv(const std::vector<LabeledTrace>& traces);

// Throws Error(IOFailure).
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace cubekb
