#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "cubekb/cube.hpp"
#include "cubekb/error.hpp"
#include "cubekb/metrics.hpp"
#include "cubekb/plan.hpp"
#include "cubekb/scene.hpp"
#include "cubekb/solvers.hpp"

namespace py = pybind11;
using namespace cubekb;

namespace {

CubieState cube_of(const std::string& descriptor) {
  const CubieState c = facelets_to_cubies(parse_facelets(descriptor));
  if (const auto err = validate(c)) throw Error(*err, "descriptor is not a reachable cube");
  return c;
}

std::string descriptor_of(const CubieState& c) { return cubies_to_facelets(c).to_string(); }

py::dict solve(const std::string& descriptor, const std::string& backend, std::optional<int> max_total_length,
               std::optional<int> target_length, std::optional<std::int64_t> max_phase1_candidates,
               std::optional<std::int64_t> time_cap_ms) {
  const CubieState c = cube_of(descriptor);
  SolveResult r;
  auto adjust = [&](SolveBudget b) {
    if (max_total_length) b.max_total_length = *max_total_length;
    if (target_length) b.target_length = *target_length;
    if (max_phase1_candidates) b.max_phase1_candidates = *max_phase1_candidates;
    if (time_cap_ms) b.time_cap_ms = *time_cap_ms;
    return b;
  };
  {
    py::gil_scoped_release release;
    if (backend == "kb") {
      r = solve_kb(c, adjust(SolveBudget::kb_default()));
    } else if (backend == "two-phase") {
      r = solve_two_phase(c, adjust(SolveBudget::two_phase_default()));
    } else if (backend == "lbl") {
      r = solve_layer_by_layer(c);
    } else if (backend == "optimal") {
      auto o = solve_optimal_shallow(c, 7);
      if (!o) throw Error(Errc::TimeBudgetExhausted, "no solution within 7 moves");
      r = *o;
    } else {
      throw Error(Errc::InvalidArgument, "unknown backend '" + backend + "'");
    }
  }
  py::dict d;
  d["backend"] = r.backend;
  d["solution"] = to_string(r.solution);
  d["length"] = r.solution.size();
  d["phase1_length"] = r.phase1_length;
  d["phase2_length"] = r.phase2_length;
  d["nodes_expanded"] = r.nodes_expanded;
  d["elapsed_ms"] = r.elapsed_ms;
  return d;
}

py::list trace(const std::string& descriptor, const std::string& moves) {
  py::list out;
  for (const TraceRecord& t : trace_restoration(cube_of(descriptor), parse_moves(moves))) {
    py::dict d;
    d["step"] = t.step;
    d["rates"] = std::vector<double>(std::begin(t.rate), std::end(t.rate));
    d["avg"] = t.avg;
    d["min"] = t.min;
    d["max"] = t.max;
    out.append(d);
  }
  return out;
}

py::list compile(const std::string& moves) {
  py::list out;
  for (const PrimitiveCommand& c : compile_plan(parse_moves(moves)).commands) {
    py::dict d;
    d["kind"] = std::string(command_kind_name(c.kind));
    d["text"] = command_text(c);
    if (c.kind != CommandKind::MoveToInitialPose) d["layer"] = std::string(1, face_letter(c.layer));
    if (c.kind == CommandKind::RotateAtLayer) {
      d["direction"] = std::string(direction_name(c.direction));
      d["quarter_turns"] = c.quarter_turns;
    }
    out.append(d);
  }
  return out;
}

py::dict subtask(const std::string& move, std::uint64_t seed) {
  const MoveSequence s = parse_moves(move);
  if (s.size() != 1) throw Error(Errc::InvalidArgument, "expected exactly one move");
  const Scene scene = build_scene(0, seed);
  const KinematicLimits limits;
  const SubtaskMotion m = plan_subtask(scene, s[0], limits);
  py::list wps;
  for (const Waypoint& w : m.path.trajectory) {
    py::dict d;
    d["p"] = py::make_tuple(w.p.x, w.p.y, w.p.z);
    d["quat"] = py::make_tuple(w.orientation.w, w.orientation.x, w.orientation.y, w.orientation.z);
    d["gripper"] = w.gripper == Gripper::Close ? "close" : "open";
    d["t"] = w.t;
    wps.append(d);
  }
  py::dict out;
  out["waypoints"] = wps;
  out["f_e"] = m.path.costs.f_e;
  out["f_c"] = m.path.costs.f_c;
  out["violations"] = check_constraints(m.path.trajectory, limits).size();
  return out;
}

py::dict campaign(std::int64_t trials, int pool_size, std::vector<int> depths, std::uint64_t seed) {
  CampaignConfig c;
  c.trials = trials;
  c.pool_size = pool_size;
  c.depths = std::move(depths);
  PipelineStats s;
  {
    py::gil_scoped_release release;
    s = run_campaign(c, seed);
  }
  py::dict d;
  d["trials"] = s.n;
  d["kb_rate"] = s.kb.rate();
  d["llm_rate"] = s.llm.rate();
  d["exe_rate"] = s.exe.rate();
  d["overall"] = s.overall();
  py::dict shares;
  for (FailureCategory f : {FailureCategory::KB, FailureCategory::LLM, FailureCategory::EXE}) {
    shares[py::str(std::string(failure_category_name(f)))] = s.failure_share(f);
  }
  d["failure_shares"] = shares;
  d["csv"] = pipeline_csv(s);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "cubekb native core";

  static py::exception<Error> error_type(m, "CubekbError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("code") = std::string(errc_name(e.code()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  m.def("solved", [] { return FaceletState::solved().to_string(); }, "Descriptor of the solved cube.");
  m.def(
      "scramble",
      [](int depth, std::uint64_t seed) { return to_string(random_scramble(depth, seed)); },
      py::arg("depth"), py::arg("seed"), "Seeded random scramble as a move string.");
  m.def(
      "apply",
      [](const std::string& moves, std::optional<std::string> descriptor) {
        const CubieState start = descriptor ? cube_of(*descriptor) : CubieState::solved();
        return descriptor_of(apply_sequence(start, parse_moves(moves)));
      },
      py::arg("moves"), py::arg("descriptor") = py::none(), "Apply moves to a descriptor (solved by default).");
  m.def(
      "validate", [](const std::string& descriptor) { cube_of(descriptor); }, py::arg("descriptor"),
      "Raise CubekbError unless the descriptor is a reachable cube.");
  m.def("solve", &solve, py::arg("descriptor"), py::arg("backend") = "kb", py::arg("max_total_length") = py::none(),
        py::arg("target_length") = py::none(), py::arg("max_phase1_candidates") = py::none(),
        py::arg("time_cap_ms") = py::none(), "Solve with backend kb, two-phase, lbl or optimal.");
  m.def(
      "verify",
      [](const std::string& descriptor, const std::string& moves) {
        return verify_solution(cube_of(descriptor), parse_moves(moves));
      },
      py::arg("descriptor"), py::arg("moves"));
  m.def("trace", &trace, py::arg("descriptor"), py::arg("moves"),
        "Per-step face color-correspondence records; raises unless the moves solve the cube.");
  m.def(
      "step_stats",
      [](const std::vector<int>& lengths) {
        const StepStats s = step_stats(lengths);
        return py::make_tuple(s.min, s.max, s.avg);
      },
      py::arg("lengths"), "(min, max, avg).");
  m.def("reduction", &reduction, py::arg("baseline_avg"), py::arg("kb_avg"), "Percentage reduction.");
  m.def("compile_plan", &compile, py::arg("moves"));
  m.def(
      "plan_text", [](const std::string& moves) { return plan_text(compile_plan(parse_moves(moves))); },
      py::arg("moves"));
  m.def("plan_subtask", &subtask, py::arg("move"), py::arg("seed") = 1,
        "Plan the gripper approach for one move in the default scene.");
  m.def("campaign", &campaign, py::arg("trials"), py::arg("pool_size") = 20,
        py::arg("depths") = std::vector<int>{10, 20, 30, 40}, py::arg("seed") = 1);
}
