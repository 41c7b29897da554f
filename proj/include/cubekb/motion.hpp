#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cubekb {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) noexcept { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) noexcept { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(Vec3 a, double s) noexcept { return {a.x * s, a.y * s, a.z * s}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
  double norm() const noexcept { return std::sqrt(x * x + y * y + z * z); }
};

inline double distance(Vec3 a, Vec3 b) noexcept { return (a - b).norm(); }
inline double dot(Vec3 a, Vec3 b) noexcept { return a.x * b.x + a.y * b.y + a.z * b.z; }

// Unit quaternion (w, x, y, z).
struct Quat {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;
  friend bool operator==(const Quat&, const Quat&) = default;
  double norm() const noexcept { return std::sqrt(w * w + x * x + y * y + z * z); }
};

Vec3 rotate(const Quat& q, Vec3 v) noexcept;
// Shortest rotation taking the tool axis +z onto dir (dir need not be unit).
Quat look_along(Vec3 dir) noexcept;

struct GridGeometry {
  int w = 0, h = 0, d = 0;
  double resolution = 0.01;
  Vec3 origin;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * static_cast<std::size_t>(d);
  }
  std::size_t index(int i, int j, int k) const noexcept {
    return (static_cast<std::size_t>(k) * static_cast<std::size_t>(h) + static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(w) +
           static_cast<std::size_t>(i);
  }
  bool contains(int i, int j, int k) const noexcept {
    return i >= 0 && j >= 0 && k >= 0 && i < w && j < h && k < d;
  }
  Vec3 center(int i, int j, int k) const noexcept {
    return origin + Vec3{(i + 0.5) * resolution, (j + 0.5) * resolution, (k + 0.5) * resolution};
  }
  std::optional<std::array<int, 3>> locate(Vec3 p) const noexcept;
  // Throws Error(InvalidArgument) unless dims and resolution are positive.
  void check() const;
  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

struct VoxelGrid {
  GridGeometry geometry;
  std::vector<double> values;

  VoxelGrid() = default;
  explicit VoxelGrid(const GridGeometry& g, double fill = 0.0);

  double& at(int i, int j, int k) noexcept { return values[geometry.index(i, j, k)]; }
  double at(int i, int j, int k) const noexcept { return values[geometry.index(i, j, k)]; }
  // Value of the voxel containing p. Throws Error(OutOfBounds).
  double sample(Vec3 p) const;
};

enum class Gripper : std::uint8_t { Open = 0, Close = 1 };

struct MapSet {
  VoxelGrid interact;             // > 0 marks target voxels
  VoxelGrid ignore;               // > 0 marks voxels to avoid
  std::vector<Quat> rotation;     // per voxel
  std::vector<Gripper> gripper;   // per voxel

  const GridGeometry& geometry() const noexcept { return interact.geometry; }
};

struct Waypoint {
  Vec3 p;
  Quat orientation;
  Gripper gripper = Gripper::Open;
  double t = 0.0;
};

using Trajectory = std::vector<Waypoint>;

struct KinematicLimits {
  double d_min = 0.002, d_max = 0.02;
  double v_min = 0.0, v_max = 0.25;
  double a_min = 0.0, a_max = 2.0;
  // Per-axis joint bounds; checked only by check_joint_bounds.
  std::vector<double> q_min, q_max;

  // Throws Error(InvalidArgument).
  void check() const;
};

inline constexpr double kObstacleThreshold = 0.5;

// Exact Euclidean distance (meters) from each voxel center to the nearest
// target voxel center. Throws Error(NoTargetVoxel).
VoxelGrid euclidean_distance_transform(const VoxelGrid& interact);

// Separable Gaussian, truncated at 3 sigma and renormalized at the borders.
// Throws Error(InvalidArgument) unless sigma > 0.
VoxelGrid gaussian_smooth(const VoxelGrid& ignore, double sigma);

// Affine rescale to [0, 1]; a constant field becomes all zero.
VoxelGrid normalize(const VoxelGrid& g);

// (2 * interact_n + ignore_n) / 3. Throws Error(GeometryMismatch).
VoxelGrid total_cost(const VoxelGrid& interact_n, const VoxelGrid& ignore_n);

// Greedy descent on cost + 1e-3 * distance-to-target. Candidates are the
// 26 neighbor directions at d_max and d_min plus a direct step toward the
// target; voxels with ignore_n above the obstacle threshold are never
// entered. Stops within one voxel of the target.
// Throws Error(OutOfBounds), Error(NoProgress) or Error(InvalidArgument).
Trajectory greedy_search(const VoxelGrid& cost, const VoxelGrid& ignore_n, Vec3 start, Vec3 target,
                         const KinematicLimits& limits);

// Uniform step dt: the smallest value keeping every segment under v_max and
// every acceleration under a_max. Throws Error(InfeasibleTiming) when the
// lower bands cannot then be met.
void assign_timestamps(Trajectory& t, const KinematicLimits& limits);

// Throws Error(OutOfBounds) for waypoints outside the grid.
void attach_rotation(Trajectory& t, const GridGeometry& g, const std::vector<Quat>& rotation);
void attach_gripper(Trajectory& t, const GridGeometry& g, const std::vector<Gripper>& gripper);

struct TrajectoryCosts {
  double f_e = 0.0;  // sum of map values at waypoints
  double f_c = 0.0;  // path length in meters
};

// Throws Error(OutOfBounds).
TrajectoryCosts evaluate_costs(const Trajectory& t, const VoxelGrid& m);

struct Violation {
  int segment = 0;  // 1-based: segment j joins waypoints j-1 and j
  std::string quantity;  // "spacing", "speed" or "acceleration"
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

// Empty result means every constraint holds. Throws Error(NonMonotonicTime).
std::vector<Violation> check_constraints(const Trajectory& t, const KinematicLimits& limits);

// Joint-space samples, one vector per waypoint.
std::vector<Violation> check_joint_bounds(const std::vector<std::vector<double>>& q,
                                          const KinematicLimits& limits);

struct PlannedPath {
  Trajectory trajectory;
  VoxelGrid cost;
  TrajectoryCosts costs;
};

// EDT + smoothing + normalization + total cost, then greedy search,
// timestamps and per-waypoint annotations.
PlannedPath plan_path(const MapSet& maps, Vec3 start, Vec3 target, const KinematicLimits& limits,
                      double sigma);

// Grid file: "CKBG" | u32 version | i32 w,h,d | f64 resolution | f64 origin[3] |
// u64 FNV-1a checksum of payload | f64 payload, all little-endian.
std::string serialize_grid(const VoxelGrid& g);
// Throws Error(CorruptFile).
VoxelGrid deserialize_grid(const std::string& bytes);

}  // namespace cubekb
