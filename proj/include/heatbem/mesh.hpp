#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace heatbem {

/// The two components {a} x (0,T) and {b} x (0,T) of the space-time boundary.
enum class Side { Left = 0, Right = 1 };

/// Outward normal: -1 at x = a, +1 at x = b.
constexpr double outward_normal(Side s) { return s == Side::Left ? -1.0 : 1.0; }

constexpr char side_tag(Side s) { return s == Side::Left ? 'L' : 'R'; }

struct BoundaryElement {
  Side side = Side::Left;
  double t_begin = 0.0;
  double t_end = 0.0;
  int index = 0;

  double size() const { return t_end - t_begin; }
  double midpoint() const { return 0.5 * (t_begin + t_end); }
  double normal() const { return outward_normal(side); }
  bool operator==(const BoundaryElement&) const = default;
};

/// Spatial interval (a, b); the boundary consists of the points a and b.
struct Interval {
  double a = 0.0;
  double b = 1.0;

  double position(Side s) const { return s == Side::Left ? a : b; }
  bool operator==(const Interval&) const = default;
};

/// Partition of both time lines into elements. Global numbering lists the
/// Left elements in increasing time, then the Right elements. Immutable.
class BoundaryMesh {
public:
  /// Per-side node lists 0 = n_0 < n_1 < ... < n_m = T. Throws ConfigError on
  /// gaps, overlaps or an endpoint mismatch.
  BoundaryMesh(double horizon, std::vector<double> left_nodes,
               std::vector<double> right_nodes, int level = 0, Interval interval = {});

  double horizon() const { return horizon_; }
  const Interval& interval() const { return interval_; }
  double position(Side s) const { return interval_.position(s); }
  int level() const { return level_; }
  int size() const { return static_cast<int>(elements_.size()); }
  int count(Side s) const;

  const BoundaryElement& element(int i) const { return elements_[static_cast<std::size_t>(i)]; }
  std::span<const BoundaryElement> elements() const { return elements_; }
  const std::vector<double>& nodes(Side s) const { return nodes_[static_cast<std::size_t>(s)]; }

  /// Global mesh size max h_l.
  double max_size() const;
  double min_size() const;

  bool operator==(const BoundaryMesh& other) const = default;

private:
  double horizon_;
  int level_;
  Interval interval_;
  std::array<std::vector<double>, 2> nodes_;
  std::vector<BoundaryElement> elements_;
};

/// 2^level equal elements per side, N = 2^(level+1).
BoundaryMesh uniform_mesh(double horizon, int level, Interval interval = {});

/// Bisects every element.
BoundaryMesh refine_uniform(const BoundaryMesh& m);

/// Maximum marking: bisects every element with indicator >= theta * max. If all
/// indicators vanish the largest element is bisected instead.
BoundaryMesh refine_adaptive(const BoundaryMesh& m, std::span<const double> indicators,
                             double theta);

/// Bisects the elements whose global indices are listed.
BoundaryMesh bisect(const BoundaryMesh& m, std::span<const int> marked);

/// Largest size ratio max(h_l/h_k, h_k/h_l) between neighbours on the same side;
/// 1 when no element has a neighbour.
double quasi_uniformity_constant(const BoundaryMesh& m);

/// One line per element: "<L|R> t_begin t_end" with 17 significant digits.
void write_mesh(std::ostream& out, const BoundaryMesh& m);
BoundaryMesh read_mesh(std::istream& in, double horizon, Interval interval = {});

} // namespace heatbem
