#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "memsim/action.hpp"
#include "memsim/bank_io.hpp"
#include "memsim/cli.hpp"
#include "memsim/error.hpp"
#include "memsim/memory.hpp"
#include "memsim/metrics.hpp"
#include "memsim/scene_io.hpp"
#include "memsim/sim.hpp"
#include "memsim/sim_io.hpp"
#include "memsim/trajectory_io.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

using namespace memsim;

// Structured values cross the boundary as JSON text; the Python layer decodes them.
json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
}

Config config_of(const std::string& text) { return config_from_json(parse(text)); }

CameraModel camera_of(double fx, double fy, double cx, double cy, const Eigen::Matrix4d& pose) {
  CameraModel c{fx, fy, cx, cy, pose};
  c.check();
  return c;
}

std::string validate_json(const std::string& scene, const std::string& trajectory, int start_room) {
  const Scene s = scene_from_json(parse(scene));
  return report_to_json(validate(s, trajectory_from_json(parse(trajectory)), start_room)).dump();
}

std::string score_json(const std::string& scene, const std::string& gold, const std::string& pred,
                       int start_room) {
  const TaskScore s = score(scene_from_json(parse(scene)), trajectory_from_json(parse(gold)),
                            trajectory_from_json(parse(pred)), start_room);
  return json{{"sr", s.sr},
              {"sub_sr", s.sub_sr},
              {"achieved", s.achieved},
              {"total_subgoals", s.total_subgoals},
              {"trajectory_valid", s.trajectory_valid},
              {"final_state_matches", s.final_state_matches}}
      .dump();
}

std::vector<py::tuple> aggregate_rows(const std::vector<int>& sr, const std::vector<double>& sub_sr,
                                      const std::vector<std::string>& tiers) {
  if (sr.size() != sub_sr.size()) throw InputError("aggregate: sr and sub_sr lengths differ");
  std::vector<TaskScore> scores(sr.size());
  for (std::size_t i = 0; i < sr.size(); ++i) {
    scores[i].sr = sr[i];
    scores[i].sub_sr = sub_sr[i];
  }
  std::vector<Tier> t;
  for (const auto& name : tiers) t.push_back(tier_from_string(name));
  std::vector<py::tuple> rows;
  for (const auto& r : aggregate(scores, t).rows) {
    rows.push_back(py::make_tuple(r.name, r.tasks, r.sr_percent, r.sub_sr_percent));
  }
  return rows;
}

py::tuple build_scene_json(const std::string& surfaces) {
  const SceneBuild b = build_scene(surfaces_from_json(parse(surfaces)));
  return py::make_tuple(scene_to_json(b.scene).dump(), b.discarded_rooms);
}

std::string commit_json(const std::string& bank, int room, std::int64_t t, const Matrix& working,
                        const std::string& params, const std::string& config) {
  const Config c = config_of(config);
  const MemoryBank b = bank.empty() ? MemoryBank{} : bank_from_json(parse(bank));
  return bank_to_text(commit(b, room, t, working, params_from_json(parse(params)), c.fusion));
}

py::tuple fuse_arrays(const Matrix& working, const std::string& bank, const std::string& params,
                      const std::string& config) {
  const Config c = config_of(config);
  const FusionResult r = fuse(working, bank_from_json(parse(bank)), params_from_json(parse(params)), c.fusion);
  return py::make_tuple(r.fused, r.attention, r.query);
}

py::tuple grad_check_random(const std::string& config, std::size_t entries, std::uint64_t seed, double step) {
  const Config c = config_of(config);
  const ProjectionParams p = ProjectionParams::random(c.fusion, seed, c.activation);
  SeededRng rng(seed + 1);
  const GradCheckResult g = grad_check(random_instance(c.fusion, entries, rng), p, c.fusion, step);
  return py::make_tuple(g.max_rel_error, g.worst_group, g.group_max_rel_error);
}

py::tuple run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = 0;
  {
    py::gil_scoped_release release;
    code = run_cli(args, out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_memsim, m) {
  m.doc() = "Native core of memsim.";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_RuntimeError);

  m.def("canonicalize", [](const std::string& line) { return serialize_step(parse_step(line)); },
        py::arg("line"));
  m.def("is_interaction", [](const std::string& line) { return is_interaction(parse_step(line)); },
        py::arg("line"));
  m.def("validate", &validate_json, py::arg("scene"), py::arg("trajectory"), py::arg("start_room"));
  m.def("score", &score_json, py::arg("scene"), py::arg("gold"), py::arg("pred"), py::arg("start_room"));
  m.def("aggregate", &aggregate_rows, py::arg("sr"), py::arg("sub_sr"), py::arg("tiers"));
  m.def("build_scene", &build_scene_json, py::arg("surfaces"));

  m.def("unproject",
        [](double fx, double fy, double cx, double cy, const Eigen::Matrix4d& pose, double u, double v, double depth) {
          const Vec3 p = unproject(camera_of(fx, fy, cx, cy, pose), u, v, depth);
          return py::make_tuple(p.x, p.y, p.z);
        },
        py::arg("fx"), py::arg("fy"), py::arg("cx"), py::arg("cy"), py::arg("pose"), py::arg("u"), py::arg("v"),
        py::arg("depth"));
  m.def("project",
        [](double fx, double fy, double cx, double cy, const Eigen::Matrix4d& pose, double x, double y, double z) {
          const PixelDepth p = project(camera_of(fx, fy, cx, cy, pose), Vec3{x, y, z});
          return py::make_tuple(p.u, p.v, p.depth);
        },
        py::arg("fx"), py::arg("fy"), py::arg("cx"), py::arg("cy"), py::arg("pose"), py::arg("x"), py::arg("y"),
        py::arg("z"));
  m.def("position_embed", &position_embed, py::arg("positions"), py::arg("dim"), py::arg("base") = 10000.0);
  m.def("time_embed", &time_embed, py::arg("t"), py::arg("dim"), py::arg("base") = 10000.0);
  m.def("farthest_point_sample", &farthest_point_sample, py::arg("points"), py::arg("target"),
        py::arg("start") = 0);

  m.def("default_config", [] { return config_to_json(Config{}).dump(); });
  m.def("random_params",
        [](const std::string& config) {
          const Config c = config_of(config);
          return params_to_text(ProjectionParams::random(c.fusion, c.seed, c.activation));
        },
        py::arg("config"));
  m.def("commit", &commit_json, py::arg("bank"), py::arg("room"), py::arg("t"), py::arg("working"),
        py::arg("params"), py::arg("config"));
  m.def("fuse", &fuse_arrays, py::arg("working"), py::arg("bank"), py::arg("params"), py::arg("config"));
  m.def("grad_check", &grad_check_random, py::arg("config"), py::arg("entries"), py::arg("seed"),
        py::arg("step") = 1e-5);
  m.def("run_cli", &run, py::arg("args"));
}
