#pragma once

// Polygonal curves in R^d: basic measurements, arc-length subsampling, and
// seeded instance generators.
//
// A curve is a sequence of vertices; the curve itself is the polyline through
// them in order. All indices into curves are 0-based at this layer (the
// 1-based convention starts at the free-space matrix layer, where it mirrors
// matrix row/column indexing).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "fsprobe/errors.hpp"
#include "fsprobe/rng.hpp"

namespace fsprobe {

/// A point in R^d; coordinate count is the dimension.
using point = std::vector<double>;

/// A polygonal curve: at least one vertex, all of equal dimension.
struct curve {
  std::vector<point> pts;

  std::size_t size() const { return pts.size(); }
  int dim() const { return pts.empty() ? 0 : static_cast<int>(pts[0].size()); }
  const point& operator[](std::size_t i) const { return pts[i]; }
  point& operator[](std::size_t i) { return pts[i]; }
};

/// Euclidean distance. Every free-space membership test in the library goes
/// through this exact function so that oracle backends and reference
/// computations agree bit-for-bit.
inline double dist(const point& p, const point& q) {
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    double d = p[k] - q[k];
    s += d * d;
  }
  return std::sqrt(s);
}

/// Throws bad_param if the curve is empty or has mixed dimensions.
inline void validate(const curve& c) {
  if (c.pts.empty()) throw bad_param("curve: must have at least one vertex");
  for (const point& p : c.pts)
    if (p.size() != c.pts[0].size())
      throw bad_param("curve: mixed vertex dimensions");
}

/// Total arc length (sum of edge lengths); 0 for a single vertex.
inline double curve_length(const curve& c) {
  validate(c);
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) len += dist(c[i], c[i + 1]);
  return len;
}

/// (shortest edge, longest edge). Requires at least 2 vertices.
inline std::pair<double, double> edge_length_range(const curve& c) {
  validate(c);
  if (c.size() < 2) throw bad_param("edge_length_range: need >= 2 vertices");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    double e = dist(c[i], c[i + 1]);
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  return {lo, hi};
}

/// Straightness: the maximum, over vertex pairs i < j, of the arc length
/// between them divided by their straight-line distance. A curve is
/// kappa-straight iff this is <= kappa; a single segment gives exactly 1.
/// Throws coincident_vertices if two distinct vertices are at distance 0
/// (the ratio would be unbounded). Requires >= 2 vertices.
inline double straightness(const curve& c) {
  validate(c);
  if (c.size() < 2) throw bad_param("straightness: need >= 2 vertices");
  std::size_t n = c.size();
  // Prefix arc lengths.
  std::vector<double> arc(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) arc[i] = arc[i - 1] + dist(c[i - 1], c[i]);
  double kappa = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = dist(c[i], c[j]);
      if (d == 0.0)
        throw coincident_vertices("straightness: vertices " +
                                  std::to_string(i) + " and " +
                                  std::to_string(j) + " coincide");
      kappa = std::max(kappa, (arc[j] - arc[i]) / d);
    }
  return kappa;
}

/// Point on the polyline at arc length s in [0, length(c)].
inline point point_at_arclength(const curve& c, double s) {
  validate(c);
  if (s <= 0.0) return c[0];
  double walked = 0.0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    double e = dist(c[i], c[i + 1]);
    if (walked + e >= s && e > 0.0) {
      double f = (s - walked) / e;
      point out(c[i].size());
      for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = c[i][k] + f * (c[i + 1][k] - c[i][k]);
      return out;
    }
    walked += e;
  }
  return c[c.size() - 1];
}

/// Arc-length subsampling with step a: vertices at arc lengths
/// 0, a, 2a, ..., (m-1)*a with m = floor(length/a), plus the final endpoint
/// at arc length length(c). The result has exactly m edges; every gap is a
/// except the last, which lies in [a, 2a). Throws bad_step unless
/// 0 < a <= length(c).
inline curve subsample(const curve& c, double a) {
  double len = curve_length(c);
  if (!(a > 0.0) || a > len)
    throw bad_step("subsample: step must satisfy 0 < a <= curve length");
  long long m = static_cast<long long>(std::floor(len / a));
  curve out;
  out.pts.reserve(static_cast<std::size_t>(m) + 1);
  for (long long i = 0; i < m; ++i)
    out.pts.push_back(point_at_arclength(c, static_cast<double>(i) * a));
  out.pts.push_back(c[c.size() - 1]);
  return out;
}

/// Summary of the quantities the testers' preconditions talk about.
struct curve_stats {
  std::size_t vertices = 0;
  int dim = 0;
  double length = 0.0;
  double straightness = 0.0;
  double edge_min = 0.0;
  double edge_max = 0.0;
};

inline curve_stats stats(const curve& c) {
  curve_stats s;
  s.vertices = c.size();
  s.dim = c.dim();
  s.length = curve_length(c);
  if (c.size() >= 2) {
    s.straightness = straightness(c);
    auto [lo, hi] = edge_length_range(c);
    s.edge_min = lo;
    s.edge_max = hi;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Generators (all deterministic in the supplied rng).

namespace detail {

/// Unit vector, uniform on the sphere (Box-Muller on our portable stream).
inline std::vector<double> random_unit_vector(int dim, rng& rand) {
  std::vector<double> v(static_cast<std::size_t>(dim));
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (int k = 0; k < dim; ++k) {
      // Box-Muller; u1 in (0,1] to avoid log(0).
      double u1 = 1.0 - rand.uniform_real();
      double u2 = rand.uniform_real();
      double g = std::sqrt(-2.0 * std::log(u1)) *
                 std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
      v[static_cast<std::size_t>(k)] = g;
      norm2 += g * g;
    }
  } while (norm2 == 0.0);
  double inv = 1.0 / std::sqrt(norm2);
  for (double& x : v) x *= inv;
  return v;
}

}  // namespace detail

/// Nearly straight curve with n vertices in R^dim whose edge lengths are
/// uniform in [edge_min, edge_max] and whose heading turns by at most
/// max_turn radians per edge (small max_turn keeps straightness close to 1).
inline curve gen_straight_curve(std::size_t n, int dim, double edge_min,
                                double edge_max, double max_turn, rng& rand) {
  if (n < 1 || dim < 1 || !(edge_min > 0.0) || edge_max < edge_min ||
      max_turn < 0.0)
    throw bad_param("gen_straight_curve: bad parameters");
  curve c;
  c.pts.reserve(n);
  point p(static_cast<std::size_t>(dim), 0.0);
  c.pts.push_back(p);
  std::vector<double> dir(static_cast<std::size_t>(dim), 0.0);
  dir[0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    if (dim >= 2 && max_turn > 0.0) {
      // Rotate the heading by a random angle within +-max_turn towards a
      // random orthogonal direction.
      std::vector<double> r = detail::random_unit_vector(dim, rand);
      double proj = 0.0;
      for (int k = 0; k < dim; ++k)
        proj += r[static_cast<std::size_t>(k)] * dir[static_cast<std::size_t>(k)];
      double orth2 = 0.0;
      for (int k = 0; k < dim; ++k) {
        r[static_cast<std::size_t>(k)] -= proj * dir[static_cast<std::size_t>(k)];
        orth2 += r[static_cast<std::size_t>(k)] * r[static_cast<std::size_t>(k)];
      }
      if (orth2 > 0.0) {
        double angle = rand.uniform_real(-max_turn, max_turn);
        double ca = std::cos(angle), sa = std::sin(angle) / std::sqrt(orth2);
        for (int k = 0; k < dim; ++k)
          dir[static_cast<std::size_t>(k)] =
              ca * dir[static_cast<std::size_t>(k)] +
              sa * r[static_cast<std::size_t>(k)];
        double n2 = 0.0;
        for (double x : dir) n2 += x * x;
        double inv = 1.0 / std::sqrt(n2);
        for (double& x : dir) x *= inv;
      }
    }
    double step = rand.uniform_real(edge_min, edge_max);
    for (int k = 0; k < dim; ++k)
      p[static_cast<std::size_t>(k)] += step * dir[static_cast<std::size_t>(k)];
    c.pts.push_back(p);
  }
  return c;
}

/// Copy of c with every vertex displaced independently and uniformly within
/// the closed ball of radius r (so dist(c[i], out[i]) <= r for all i).
inline curve perturb_within(const curve& c, double r, rng& rand) {
  validate(c);
  if (r < 0.0) throw bad_param("perturb_within: radius must be >= 0");
  curve out = c;
  if (r == 0.0) return out;
  int dim = c.dim();
  for (point& p : out.pts) {
    std::vector<double> u = detail::random_unit_vector(dim, rand);
    // Radius with density proportional to volume: r * U^(1/dim).
    double rad = r * std::pow(rand.uniform_real(), 1.0 / dim);
    for (int k = 0; k < dim; ++k)
      p[static_cast<std::size_t>(k)] += rad * u[static_cast<std::size_t>(k)];
  }
  return out;
}

/// Upper bound on the diameter of c (bounding-box diagonal).
inline double diameter_bound(const curve& c) {
  validate(c);
  int dim = c.dim();
  double s = 0.0;
  for (int k = 0; k < dim; ++k) {
    double lo = c[0][static_cast<std::size_t>(k)], hi = lo;
    for (const point& p : c.pts) {
      lo = std::min(lo, p[static_cast<std::size_t>(k)]);
      hi = std::max(hi, p[static_cast<std::size_t>(k)]);
    }
    s += (hi - lo) * (hi - lo);
  }
  return std::sqrt(s);
}

/// Companion curve that is far from c at threshold delta: a contiguous
/// interior block of ceil(2*eps*n) vertices is translated far enough
/// (margin * delta beyond the diameter of c) that each moved vertex is at
/// distance > margin*delta from every vertex of c. Endpoints are never moved,
/// so the free-space corners stay zero. Callers still certify farness with
/// the reference minimum-cost coupling; this construction just makes it
/// overwhelmingly likely. Requires margin > 1 and n >= 3.
inline curve make_far_pair(const curve& c, double eps, double delta,
                           double margin, rng& rand) {
  validate(c);
  std::size_t n = c.size();
  if (n < 3) throw bad_param("make_far_pair: need >= 3 vertices");
  if (!(eps > 0.0) || !(delta > 0.0) || !(margin > 1.0))
    throw bad_param("make_far_pair: need eps > 0, delta > 0, margin > 1");
  std::size_t len = static_cast<std::size_t>(
      std::ceil(2.0 * eps * static_cast<double>(n)));
  len = std::max<std::size_t>(1, std::min(len, n - 2));
  std::size_t start = static_cast<std::size_t>(
      rand.uniform_int(1, static_cast<long long>(n - 1 - len)));
  double shift = diameter_bound(c) + margin * delta;
  std::vector<double> u = detail::random_unit_vector(c.dim(), rand);
  curve out = c;
  for (std::size_t j = start; j < start + len; ++j)
    for (int k = 0; k < c.dim(); ++k)
      out[j][static_cast<std::size_t>(k)] +=
          shift * u[static_cast<std::size_t>(k)];
  return out;
}

}  // namespace fsprobe
