#include "cubekb/motion.hpp"

#include <algorithm>
#include <cstring>
#include <limits>

#include "cubekb/coords.hpp"
#include "cubekb/error.hpp"

namespace cubekb {

Vec3 rotate(const Quat& q, Vec3 v) noexcept {
  const Vec3 r{q.x, q.y, q.z};
  auto cross = [](Vec3 a, Vec3 b) {
    return Vec3{a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
  };
  const Vec3 t = cross(r, v) * 2.0;
  return v + t * q.w + cross(r, t);
}

Quat look_along(Vec3 dir) noexcept {
  const double n = dir.norm();
  if (n == 0.0) return {};
  const Vec3 u = dir * (1.0 / n);
  if (u.z < -1.0 + 1e-12) return {0.0, 1.0, 0.0, 0.0};
  Quat q{1.0 + u.z, -u.y, u.x, 0.0};
  const double m = q.norm();
  return {q.w / m, q.x / m, q.y / m, q.z / m};
}

std::optional<std::array<int, 3>> GridGeometry::locate(Vec3 p) const noexcept {
  const Vec3 r = (p - origin) * (1.0 / resolution);
  const int i = static_cast<int>(std::floor(r.x));
  const int j = static_cast<int>(std::floor(r.y));
  const int k = static_cast<int>(std::floor(r.z));
  if (!contains(i, j, k)) return std::nullopt;
  return std::array<int, 3>{i, j, k};
}

void GridGeometry::check() const {
  if (w <= 0 || h <= 0 || d <= 0 || !(resolution > 0.0)) {
    throw Error(Errc::InvalidArgument, "grid dims and resolution must be positive");
  }
}

VoxelGrid::VoxelGrid(const GridGeometry& g, double fill) : geometry(g) {
  g.check();
  values.assign(g.size(), fill);
}

double VoxelGrid::sample(Vec3 p) const {
  const auto v = geometry.locate(p);
  if (!v) throw Error(Errc::OutOfBounds, "point outside grid");
  return at((*v)[0], (*v)[1], (*v)[2]);
}

void KinematicLimits::check() const {
  if (d_min < 0.0 || d_min > d_max || v_min < 0.0 || v_min > v_max || a_min < 0.0 ||
      a_min > a_max || !(d_max > 0.0) || !(v_max > 0.0) || !(a_max > 0.0)) {
    throw Error(Errc::InvalidArgument, "kinematic limits out of order");
  }
  if (q_min.size() != q_max.size()) {
    throw Error(Errc::InvalidArgument, "joint bound vectors differ in length");
  }
  for (std::size_t i = 0; i < q_min.size(); ++i) {
    if (q_min[i] > q_max[i]) throw Error(Errc::InvalidArgument, "joint bounds out of order");
  }
}

// ---------------------------------------------------------------------------
// Map preprocessing

namespace {

// Applies fn to every 1D line of the grid along axis (0 = x, 1 = y, 2 = z).
template <typename Fn>
void for_each_line(const GridGeometry& g, int axis, Fn fn) {
  const int n[3] = {g.w, g.h, g.d};
  const std::size_t stride[3] = {1, static_cast<std::size_t>(g.w),
                                 static_cast<std::size_t>(g.w) * static_cast<std::size_t>(g.h)};
  const int a = (axis + 1) % 3, b = (axis + 2) % 3;
  for (int u = 0; u < n[a]; ++u) {
    for (int v = 0; v < n[b]; ++v) {
      const std::size_t base = static_cast<std::size_t>(u) * stride[a] + static_cast<std::size_t>(v) * stride[b];
      fn(base, stride[axis], n[axis]);
    }
  }
}

// Felzenszwalb-Huttenlocher lower envelope of parabolas, unit spacing.
void squared_distance_1d(const std::vector<double>& f, std::vector<double>& out,
                         std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  constexpr double inf = std::numeric_limits<double>::infinity();
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == inf) continue;
    double s = -inf;
    while (k >= 0) {
      const int p = v[k];
      s = ((f[q] + q * q) - (f[p] + p * p)) / (2.0 * (q - p));
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = k == 0 ? -inf : s;
    z[k + 1] = inf;
  }
  if (k < 0) {
    std::fill(out.begin(), out.end(), inf);
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double dq = q - v[j];
    out[q] = dq * dq + f[v[j]];
  }
}

}  // namespace

VoxelGrid euclidean_distance_transform(const VoxelGrid& interact) {
  const GridGeometry& g = interact.geometry;
  VoxelGrid out(g);
  bool any = false;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const bool target = interact.values[i] > 0.0;
    any = any || target;
    out.values[i] = target ? 0.0 : std::numeric_limits<double>::infinity();
  }
  if (!any) throw Error(Errc::NoTargetVoxel, "interact map has no target voxel");
  const int longest = std::max({g.w, g.h, g.d});
  std::vector<double> f, r;
  std::vector<int> v(static_cast<std::size_t>(longest));
  std::vector<double> z(static_cast<std::size_t>(longest) + 1);
  for (int axis = 0; axis < 3; ++axis) {
    for_each_line(g, axis, [&](std::size_t base, std::size_t stride, int n) {
      f.resize(static_cast<std::size_t>(n));
      r.resize(static_cast<std::size_t>(n));
      for (int q = 0; q < n; ++q) f[q] = out.values[base + q * stride];
      squared_distance_1d(f, r, v, z);
      for (int q = 0; q < n; ++q) out.values[base + q * stride] = r[q];
    });
  }
  for (double& x : out.values) x = std::sqrt(x) * g.resolution;
  return out;
}

VoxelGrid gaussian_smooth(const VoxelGrid& ignore, double sigma) {
  if (!(sigma > 0.0)) throw Error(Errc::InvalidArgument, "sigma must be positive");
  const GridGeometry& g = ignore.geometry;
  const int radius = static_cast<int>(std::floor(3.0 * sigma / g.resolution));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  for (int i = -radius; i <= radius; ++i) {
    const double x = i * g.resolution;
    kernel[static_cast<std::size_t>(i + radius)] = std::exp(-x * x / (2.0 * sigma * sigma));
  }
  VoxelGrid cur = ignore;
  std::vector<double> line;
  for (int axis = 0; axis < 3; ++axis) {
    for_each_line(g, axis, [&](std::size_t base, std::size_t stride, int n) {
      line.resize(static_cast<std::size_t>(n));
      for (int q = 0; q < n; ++q) line[q] = cur.values[base + q * stride];
      for (int q = 0; q < n; ++q) {
        double acc = 0.0, weight = 0.0;
        const int lo = std::max(0, q - radius), hi = std::min(n - 1, q + radius);
        for (int s = lo; s <= hi; ++s) {
          const double kw = kernel[static_cast<std::size_t>(s - q + radius)];
          acc += kw * line[s];
          weight += kw;
        }
        cur.values[base + q * stride] = acc / weight;
      }
    });
  }
  return cur;
}

VoxelGrid normalize(const VoxelGrid& g) {
  VoxelGrid out = g;
  if (g.values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(g.values.begin(), g.values.end());
  const double a = *lo, span = *hi - *lo;
  for (double& x : out.values) x = span > 0.0 ? (x - a) / span : 0.0;
  return out;
}

VoxelGrid total_cost(const VoxelGrid& interact_n, const VoxelGrid& ignore_n) {
  if (!(interact_n.geometry == ignore_n.geometry) ||
      interact_n.values.size() != ignore_n.values.size()) {
    throw Error(Errc::GeometryMismatch, "interact and ignore grids differ in geometry");
  }
  VoxelGrid out(interact_n.geometry);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = (2.0 * interact_n.values[i] + ignore_n.values[i]) / 3.0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Search and annotation

Trajectory greedy_search(const VoxelGrid& cost, const VoxelGrid& ignore_n, Vec3 start, Vec3 target,
                         const KinematicLimits& limits) {
  limits.check();
  if (!(cost.geometry == ignore_n.geometry)) {
    throw Error(Errc::GeometryMismatch, "cost and ignore grids differ in geometry");
  }
  const GridGeometry& g = cost.geometry;
  if (!g.locate(start)) throw Error(Errc::OutOfBounds, "start outside grid");
  if (!g.locate(target)) throw Error(Errc::OutOfBounds, "target outside grid");
  if (ignore_n.sample(start) > kObstacleThreshold) {
    throw Error(Errc::InvalidArgument, "start lies in an obstacle voxel");
  }
  constexpr double kTiebreak = 1e-3;

  std::array<Vec3, 26> dirs{};
  int nd = 0;
  for (int dx = -1; dx <= 1; ++dx) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dz = -1; dz <= 1; ++dz) {
        if (dx == 0 && dy == 0 && dz == 0) continue;
        const Vec3 v{double(dx), double(dy), double(dz)};
        dirs[nd++] = v * (1.0 / v.norm());
      }
    }
  }
  std::vector<double> steps{limits.d_max};
  if (limits.d_min > 0.0 && limits.d_min < limits.d_max) steps.push_back(limits.d_min);

  Trajectory path{Waypoint{start, {}, Gripper::Open, 0.0}};
  Vec3 cur = start;
  const std::size_t cap = 1'000'000;
  while (distance(cur, target) > g.resolution) {
    const double here = cost.sample(cur) + kTiebreak * distance(cur, target);
    double best = here;
    double best_dist = std::numeric_limits<double>::infinity();
    std::optional<Vec3> pick;
    auto consider = [&](Vec3 c) {
      const auto v = g.locate(c);
      if (!v) return;
      if (ignore_n.at((*v)[0], (*v)[1], (*v)[2]) > kObstacleThreshold) return;
      const double dt = distance(c, target);
      const double score = cost.at((*v)[0], (*v)[1], (*v)[2]) + kTiebreak * dt;
      if (score < best || (pick && score == best && dt < best_dist)) {
        best = score;
        best_dist = dt;
        pick = c;
      }
    };
    const double remaining = distance(cur, target);
    const double direct = std::min(remaining, limits.d_max);
    if (direct >= limits.d_min) consider(cur + (target - cur) * (direct / remaining));
    for (double s : steps) {
      for (const Vec3& d : dirs) consider(cur + d * s);
    }
    if (!pick || !(best < here)) {
      throw Error(Errc::NoProgress, "greedy search stuck at (" + std::to_string(cur.x) + ", " +
                                        std::to_string(cur.y) + ", " + std::to_string(cur.z) + ")");
    }
    cur = *pick;
    path.push_back(Waypoint{cur, {}, Gripper::Open, 0.0});
    if (path.size() > cap) throw Error(Errc::NoProgress, "greedy search exceeded step cap");
  }
  return path;
}

void assign_timestamps(Trajectory& t, const KinematicLimits& limits) {
  limits.check();
  if (t.empty()) return;
  t[0].t = 0.0;
  if (t.size() == 1) return;
  double longest = 0.0, shortest = std::numeric_limits<double>::infinity();
  double dv_max = 0.0, dv_min = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < t.size(); ++j) {
    const double len = distance(t[j].p, t[j - 1].p);
    longest = std::max(longest, len);
    shortest = std::min(shortest, len);
    if (j >= 2) {
      // |v_j - v_{j-1}| * dt for a uniform step
      const double dd = ((t[j].p - t[j - 1].p) - (t[j - 1].p - t[j - 2].p)).norm();
      dv_max = std::max(dv_max, dd);
      dv_min = std::min(dv_min, dd);
    }
  }
  double dt = longest / limits.v_max;
  if (dv_max > 0.0) dt = std::max(dt, std::sqrt(dv_max / limits.a_max));
  if (!(dt > 0.0)) dt = 1.0;
  const bool speed_ok = shortest / dt >= limits.v_min * (1.0 - 1e-12);
  const bool accel_ok = t.size() < 3 || dv_min / (dt * dt) >= limits.a_min * (1.0 - 1e-12);
  if (!speed_ok || !accel_ok) {
    throw Error(Errc::InfeasibleTiming, "no uniform time step satisfies the velocity and acceleration bands");
  }
  for (std::size_t j = 1; j < t.size(); ++j) t[j].t = static_cast<double>(j) * dt;
}

namespace {

std::size_t voxel_of(const GridGeometry& g, Vec3 p) {
  const auto v = g.locate(p);
  if (!v) throw Error(Errc::OutOfBounds, "waypoint outside grid");
  return g.index((*v)[0], (*v)[1], (*v)[2]);
}

}  // namespace

void attach_rotation(Trajectory& t, const GridGeometry& g, const std::vector<Quat>& rotation) {
  for (Waypoint& w : t) w.orientation = rotation[voxel_of(g, w.p)];
}

void attach_gripper(Trajectory& t, const GridGeometry& g, const std::vector<Gripper>& gripper) {
  for (Waypoint& w : t) w.gripper = gripper[voxel_of(g, w.p)];
}

TrajectoryCosts evaluate_costs(const Trajectory& t, const VoxelGrid& m) {
  TrajectoryCosts c;
  for (std::size_t j = 0; j < t.size(); ++j) {
    c.f_e += m.sample(t[j].p);
    if (j > 0) c.f_c += distance(t[j].p, t[j - 1].p);
  }
  return c;
}

std::vector<Violation> check_constraints(const Trajectory& t, const KinematicLimits& limits) {
  for (std::size_t j = 1; j < t.size(); ++j) {
    if (!(t[j].t > t[j - 1].t)) {
      throw Error(Errc::NonMonotonicTime, "timestamps must strictly increase (segment " +
                                              std::to_string(j) + ")");
    }
  }
  constexpr double eps = 1e-9;
  std::vector<Violation> out;
  auto band = [&](int seg, const char* what, double value, double lo, double hi) {
    if (value < lo - eps || value > hi + eps) out.push_back({seg, what, value, lo, hi});
  };
  Vec3 prev_v;
  for (std::size_t j = 1; j < t.size(); ++j) {
    const int seg = static_cast<int>(j);
    const Vec3 dp = t[j].p - t[j - 1].p;
    const double dt = t[j].t - t[j - 1].t;
    const Vec3 v = dp * (1.0 / dt);
    band(seg, "spacing", dp.norm(), limits.d_min, limits.d_max);
    band(seg, "speed", v.norm(), limits.v_min, limits.v_max);
    if (j >= 2) band(seg, "acceleration", (v - prev_v).norm() / dt, limits.a_min, limits.a_max);
    prev_v = v;
  }
  return out;
}

std::vector<Violation> check_joint_bounds(const std::vector<std::vector<double>>& q,
                                          const KinematicLimits& limits) {
  std::vector<Violation> out;
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (q[j].size() != limits.q_min.size()) {
      throw Error(Errc::InvalidArgument, "joint sample has the wrong number of axes");
    }
    for (std::size_t a = 0; a < q[j].size(); ++a) {
      if (q[j][a] < limits.q_min[a] || q[j][a] > limits.q_max[a]) {
        out.push_back({static_cast<int>(j), "joint" + std::to_string(a), q[j][a], limits.q_min[a],
                       limits.q_max[a]});
      }
    }
  }
  return out;
}

PlannedPath plan_path(const MapSet& maps, Vec3 start, Vec3 target, const KinematicLimits& limits,
                      double sigma) {
  const GridGeometry& g = maps.geometry();
  if (!(maps.ignore.geometry == g) || maps.rotation.size() != g.size() ||
      maps.gripper.size() != g.size()) {
    throw Error(Errc::GeometryMismatch, "map set layers differ in geometry");
  }
  const VoxelGrid interact_n = normalize(euclidean_distance_transform(maps.interact));
  const VoxelGrid ignore_n = normalize(gaussian_smooth(maps.ignore, sigma));
  PlannedPath out;
  out.cost = total_cost(interact_n, ignore_n);
  out.trajectory = greedy_search(out.cost, ignore_n, start, target, limits);
  assign_timestamps(out.trajectory, limits);
  attach_rotation(out.trajectory, g, maps.rotation);
  attach_gripper(out.trajectory, g, maps.gripper);
  out.costs = evaluate_costs(out.trajectory, out.cost);
  return out;
}

// ---------------------------------------------------------------------------
// Grid files

namespace {

constexpr std::uint32_t kGridVersion = 1;

template <typename T>
void put(std::string& out, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  std::uint64_t bits = 0;
  std::memcpy(&bits, b, sizeof(T));
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

template <typename T>
T get(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw Error(Errc::CorruptFile, "grid file truncated");
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  }
  pos += sizeof(T);
  T v;
  std::memcpy(&v, &bits, sizeof(T));
  return v;
}

}  // namespace

std::string serialize_grid(const VoxelGrid& g) {
  std::string payload;
  payload.reserve(g.values.size() * 8);
  for (double x : g.values) put(payload, x);
  std::string out = "CKBG";
  put(out, kGridVersion);
  put(out, static_cast<std::int32_t>(g.geometry.w));
  put(out, static_cast<std::int32_t>(g.geometry.h));
  put(out, static_cast<std::int32_t>(g.geometry.d));
  put(out, g.geometry.resolution);
  put(out, g.geometry.origin.x);
  put(out, g.geometry.origin.y);
  put(out, g.geometry.origin.z);
  put(out, fnv1a64(payload.data(), payload.size()));
  return out + payload;
}

VoxelGrid deserialize_grid(const std::string& bytes) {
  if (bytes.size() < 4 || bytes.compare(0, 4, "CKBG") != 0) {
    throw Error(Errc::CorruptFile, "bad grid magic");
  }
  std::size_t pos = 4;
  if (get<std::uint32_t>(bytes, pos) != kGridVersion) throw Error(Errc::CorruptFile, "grid version");
  GridGeometry geo;
  geo.w = get<std::int32_t>(bytes, pos);
  geo.h = get<std::int32_t>(bytes, pos);
  geo.d = get<std::int32_t>(bytes, pos);
  geo.resolution = get<double>(bytes, pos);
  geo.origin.x = get<double>(bytes, pos);
  geo.origin.y = get<double>(bytes, pos);
  geo.origin.z = get<double>(bytes, pos);
  const auto checksum = get<std::uint64_t>(bytes, pos);
  if (geo.w <= 0 || geo.h <= 0 || geo.d <= 0 || !(geo.resolution > 0.0)) {
    throw Error(Errc::CorruptFile, "grid geometry invalid");
  }
  if (bytes.size() - pos != geo.size() * 8) throw Error(Errc::CorruptFile, "grid payload size");
  if (fnv1a64(bytes.data() + pos, bytes.size() - pos) != checksum) {
    throw Error(Errc::CorruptFile, "grid checksum mismatch");
  }
  VoxelGrid g(geo);
  for (double& x : g.values) x = get<double>(bytes, pos);
  return g;
}

}  // namespace cubekb
