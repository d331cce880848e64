#include "heatbem/mesh.hpp"

#include "heatbem/types.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace heatbem {

namespace {

void check_nodes(const std::vector<double>& nodes, double horizon) {
  if (nodes.size() < 2)
    throw ConfigError("each side needs at least one element");
  if (nodes.front() != 0.0 || nodes.back() != horizon)
    throw ConfigError("side partition must start at 0 and end at T");
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    if (!(nodes[i + 1] > nodes[i]))
      throw ConfigError("side partition nodes must be strictly increasing");
}

std::vector<double> bisect_nodes(const std::vector<double>& nodes, const std::vector<char>& mark) {
  std::vector<double> out;
  out.reserve(nodes.size() * 2);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    out.push_back(nodes[i]);
    if (mark[i])
      out.push_back(0.5 * (nodes[i] + nodes[i + 1]));
  }
  out.push_back(nodes.back());
  return out;
}

} // namespace

BoundaryMesh::BoundaryMesh(double horizon, std::vector<double> left_nodes,
                           std::vector<double> right_nodes, int level, Interval interval)
    : horizon_(horizon), level_(level), interval_(interval), nodes_{std::move(left_nodes), std::move(right_nodes)} {
  if (!std::isfinite(horizon) || horizon <= 0.0)
    throw ConfigError("time horizon T must be positive");
  if (!(interval.a < interval.b) || !std::isfinite(interval.a) || !std::isfinite(interval.b))
    throw ConfigError("spatial interval requires a < b");
  int index = 0;
  for (Side side : {Side::Left, Side::Right}) {
    const auto& nodes = nodes_[static_cast<std::size_t>(side)];
    check_nodes(nodes, horizon);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
      elements_.push_back({side, nodes[i], nodes[i + 1], index++});
  }
}

int BoundaryMesh::count(Side s) const {
  return static_cast<int>(nodes(s).size()) - 1;
}

double BoundaryMesh::max_size() const {
  double h = 0.0;
  for (const auto& e : elements_)
    h = std::max(h, e.size());
  return h;
}

double BoundaryMesh::min_size() const {
  double h = horizon_;
  for (const auto& e : elements_)
    h = std::min(h, e.size());
  return h;
}

BoundaryMesh uniform_mesh(double horizon, int level, Interval interval) {
  if (level < 0 || level > 24)
    throw ConfigError("uniform mesh level must lie in [0, 24]");
  const int n = 1 << level;
  std::vector<double> nodes(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i)
    nodes[static_cast<std::size_t>(i)] = horizon * (static_cast<double>(i) / n);
  nodes.back() = horizon;
  return BoundaryMesh(horizon, nodes, nodes, level, interval);
}

BoundaryMesh refine_uniform(const BoundaryMesh& m) {
  std::vector<int> all(static_cast<std::size_t>(m.size()));
  for (int i = 0; i < m.size(); ++i)
    all[static_cast<std::size_t>(i)] = i;
  return bisect(m, all);
}

BoundaryMesh bisect(const BoundaryMesh& m, std::span<const int> marked) {
  std::vector<char> left(static_cast<std::size_t>(m.count(Side::Left)), 0);
  std::vector<char> right(static_cast<std::size_t>(m.count(Side::Right)), 0);
  const int n_left = m.count(Side::Left);
  for (int i : marked) {
    if (i < 0 || i >= m.size())
      throw ConfigError("marked element index out of range");
    if (i < n_left)
      left[static_cast<std::size_t>(i)] = 1;
    else
      right[static_cast<std::size_t>(i - n_left)] = 1;
  }
  return BoundaryMesh(m.horizon(), bisect_nodes(m.nodes(Side::Left), left),
                      bisect_nodes(m.nodes(Side::Right), right), m.level() + 1,
                      m.interval());
}

BoundaryMesh refine_adaptive(const BoundaryMesh& m, std::span<const double> indicators,
                             double theta) {
  if (static_cast<int>(indicators.size()) != m.size())
    throw ConfigError("one indicator per element required");
  if (!(theta > 0.0 && theta <= 1.0))
    throw ConfigError("marking parameter theta must lie in (0, 1]");
  double top = 0.0;
  for (double eta : indicators) {
    if (!(eta >= 0.0))
      throw ConfigError("indicators must be nonnegative");
    top = std::max(top, eta);
  }
  std::vector<int> marked;
  if (top == 0.0) {
    int largest = 0;
    for (int i = 1; i < m.size(); ++i)
      if (m.element(i).size() > m.element(largest).size())
        largest = i;
    marked.push_back(largest);
  } else {
    for (int i = 0; i < m.size(); ++i)
      if (indicators[static_cast<std::size_t>(i)] >= theta * top)
        marked.push_back(i);
  }
  return bisect(m, marked);
}

double quasi_uniformity_constant(const BoundaryMesh& m) {
  double c = 1.0;
  for (Side side : {Side::Left, Side::Right}) {
    const auto& nodes = m.nodes(side);
    for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
      const double h0 = nodes[i] - nodes[i - 1];
      const double h1 = nodes[i + 1] - nodes[i];
      c = std::max(c, std::max(h0 / h1, h1 / h0));
    }
  }
  return c;
}

void write_mesh(std::ostream& out, const BoundaryMesh& m) {
  const auto old = out.precision(17);
  for (const auto& e : m.elements())
    out << side_tag(e.side) << ' ' << e.t_begin << ' ' << e.t_end << '\n';
  out.precision(old);
}

BoundaryMesh read_mesh(std::istream& in, double horizon, Interval interval) {
  std::vector<double> left{0.0}, right{0.0};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.front() == '#')
      continue;
    std::istringstream ls(line);
    char tag = 0;
    double t0 = 0.0, t1 = 0.0;
    if (!(ls >> tag >> t0 >> t1) || (tag != 'L' && tag != 'R'))
      throw ConfigError("malformed mesh line " + std::to_string(lineno));
    auto& nodes = tag == 'L' ? left : right;
    if (t0 != nodes.back())
      throw ConfigError("mesh line " + std::to_string(lineno) + " leaves a gap or overlap");
    nodes.push_back(t1);
  }
  return BoundaryMesh(horizon, std::move(left), std::move(right), 0, interval);
}

} // namespace heatbem
