#include "cubekb/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cubekb/error.hpp"

namespace cubekb {

double face_match_rate(const FaceletState& state, Face face) noexcept {
  const int base = face_index(face) * 9;
  const Face center = state.stickers[static_cast<std::size_t>(base + 4)];
  int match = 0;
  for (int i = 0; i < 9; ++i) {
    if (state.stickers[static_cast<std::size_t>(base + i)] == center) ++match;
  }
  return match / 9.0;
}

TraceRecord trace_record(const CubieState& state, int step) {
  const FaceletState f = cubies_to_facelets(state);
  TraceRecord r;
  r.step = step;
  // Integer counts keep avg exactly between min and max.
  int matched = 0;
  for (Face face : kFaces) {
    const double v = face_match_rate(f, face);
    r.rate[static_cast<std::size_t>(face_index(face))] = v;
    matched += static_cast<int>(v * 9.0 + 0.5);
  }
  r.avg = matched / 54.0;
  r.min = *std::min_element(r.rate.begin(), r.rate.end());
  r.max = *std::max_element(r.rate.begin(), r.rate.end());
  return r;
}

Trace trace_restoration(const CubieState& start, const MoveSequence& s) {
  Trace t;
  t.reserve(s.size() + 1);
  CubieState c = start;
  t.push_back(trace_record(c, 0));
  for (std::size_t i = 0; i < s.size(); ++i) {
    c = apply_move(c, s[i]);
    t.push_back(trace_record(c, static_cast<int>(i + 1)));
  }
  if (!is_solved(c)) throw Error(Errc::NotASolution, "sequence does not restore the cube");
  return t;
}

StepStats step_stats(std::span<const int> lengths) {
  if (lengths.empty()) throw Error(Errc::EmptySample, "no lengths");
  StepStats s;
  s.n = lengths.size();
  s.min = *std::min_element(lengths.begin(), lengths.end());
  s.max = *std::max_element(lengths.begin(), lengths.end());
  long long sum = 0;
  for (int v : lengths) sum += v;
  s.avg = static_cast<double>(sum) / static_cast<double>(s.n);
  return s;
}

double reduction(double avg_baseline, double avg_kb) {
  if (!(avg_baseline > 0.0)) throw Error(Errc::InvalidArgument, "baseline average must be positive");
  return 100.0 * (avg_baseline - avg_kb) / avg_baseline;
}

namespace {

void append_fixed(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  out += buf;
}

}  // namespace

std::string trace_csv(const std::vector<LabeledTrace>& traces) {
  std::string out = "run_id,step,rate_U,rate_R,rate_F,rate_D,rate_L,rate_B,avg,min,max\n";
  for (const LabeledTrace& lt : traces) {
    for (const TraceRecord& r : lt.trace) {
      out += lt.run_id;
      out += ',';
      out += std::to_string(r.step);
      for (double v : r.rate) {
        out += ',';
        append_fixed(out, v);
      }
      for (double v : {r.avg, r.min, r.max}) {
        out += ',';
        append_fixed(out, v);
      }
      out += '\n';
    }
  }
  return out;
}

std::vector<LabeledTrace> parse_trace_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("run_id,step,", 0) != 0) {
    throw Error(Errc::ParseError, "missing trace header");
  }
  std::vector<LabeledTrace> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 11) {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": expected 11 fields");
    }
    TraceRecord r;
    try {
      r.step = std::stoi(cells[1]);
      for (std::size_t i = 0; i < 6; ++i) r.rate[i] = std::stod(cells[2 + i]);
      r.avg = std::stod(cells[8]);
      r.min = std::stod(cells[9]);
      r.max = std::stod(cells[10]);
    } catch (const std::exception&) {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": bad number");
    }
    if (out.empty() || out.back().run_id != cells[0]) out.push_back({cells[0], {}});
    out.back().trace.push_back(r);
  }
  return out;
}

std::string aggregate_trace_csv(const std::vector<LabeledTrace>& traces) {
  std::string out = "step,runs,avg,face_min,face_max,run_min,run_max\n";
  std::size_t longest = 0;
  for (const auto& lt : traces) longest = std::max(longest, lt.trace.size());
  for (std::size_t step = 0; step < longest; ++step) {
    double sum = 0.0, face_min = 1.0, face_max = 0.0, run_min = 1.0, run_max = 0.0;
    std::size_t runs = 0;
    for (const auto& lt : traces) {
      if (lt.trace.empty()) continue;
      const TraceRecord& r = lt.trace[std::min(step, lt.trace.size() - 1)];
      ++runs;
      sum += r.avg;
      face_min = std::min(face_min, r.min);
      face_max = std::max(face_max, r.max);
      run_min = std::min(run_min, r.avg);
      run_max = std::max(run_max, r.avg);
    }
    out += std::to_string(step);
    out += ',';
    out += std::to_string(runs);
    for (double v : {sum / static_cast<double>(runs), face_min, face_max, run_min, run_max}) {
      out += ',';
      append_fixed(out, v);
    }
    out += '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(Errc::IOFailure, "cannot open " + path.string());
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw Error(Errc::IOFailure, "cannot write " + path.string());
}

}  // namespace cubekb
