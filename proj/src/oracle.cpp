#include "sdimlab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sdimlab {

namespace {

struct Component {
  long double lo;
  long double hi;
};

std::vector<Component> merged(const RealizedSet& set, double r) {
  if (!(r > 0.0)) throw std::domain_error("oracle: r must be positive");
  std::vector<long double> pts(set.endpoints.begin(), set.endpoints.end());
  std::sort(pts.begin(), pts.end());
  std::vector<Component> out;
  const long double rr = r;
  for (long double e : pts) {
    const long double lo = e - rr;
    const long double hi = e + rr;
    if (!out.empty() && lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, hi);
    } else {
      out.push_back({lo, hi});
    }
  }
  return out;
}

void check_raster_args(const RealizedSet& set, double r, double h) {
  if (!(r > 0.0) || !(h > 0.0)) throw std::domain_error("raster: r and h must be positive");
  if (h > r / 50.0) throw std::invalid_argument("raster: pitch must satisfy h <= r/50");
  if (set.gaps.size() > 10) throw std::invalid_argument("raster: at most 10 gaps");
}

// Distance from each sample column to the nearest endpoint.
std::vector<double> column_distances(const RealizedSet& set, const Grid2D& g) {
  std::vector<double> pts = set.endpoints;
  std::sort(pts.begin(), pts.end());
  std::vector<double> dx(static_cast<std::size_t>(g.nx));
  for (std::int64_t i = 0; i < g.nx; ++i) {
    const double x = g.x(i);
    const auto it = std::lower_bound(pts.begin(), pts.end(), x);
    double d = INFINITY;
    if (it != pts.end()) d = *it - x;
    if (it != pts.begin()) d = std::min(d, x - *(it - 1));
    dx[static_cast<std::size_t>(i)] = d;
  }
  return dx;
}

double row_distance(double y) { return std::max({0.0, -y, y - 1.0}); }

void fill_row(std::vector<double>& row, const std::vector<double>& dx, double dy, double r) {
  for (std::size_t i = 0; i < row.size(); ++i) row[i] = std::hypot(dx[i], dy) - r;
}

// Zero crossing on the edge between samples with values a and b, as a fraction.
double crossing(double a, double b) { return a / (a - b); }

double seg(double x1, double y1, double x2, double y2) { return std::hypot(x2 - x1, y2 - y1); }

// Contour length inside one unit cell with corners
// v0 = (0,0), v1 = (1,0), v2 = (1,1), v3 = (0,1); inside means phi <= 0.
double cell_length(double v0, double v1, double v2, double v3) {
  const int mask = (v0 <= 0) | ((v1 <= 0) << 1) | ((v2 <= 0) << 2) | ((v3 <= 0) << 3);
  if (mask == 0 || mask == 15) return 0.0;
  // edge points: bottom (0-1), right (1-2), top (3-2), left (0-3)
  const auto bottom = [&] { return std::pair{crossing(v0, v1), 0.0}; };
  const auto right = [&] { return std::pair{1.0, crossing(v1, v2)}; };
  const auto top = [&] { return std::pair{crossing(v3, v2), 1.0}; };
  const auto left = [&] { return std::pair{0.0, crossing(v0, v3)}; };
  const auto len = [](std::pair<double, double> p, std::pair<double, double> q) {
    return seg(p.first, p.second, q.first, q.second);
  };
  switch (mask) {
    case 1: case 14: return len(bottom(), left());
    case 2: case 13: return len(bottom(), right());
    case 4: case 11: return len(right(), top());
    case 8: case 7: return len(top(), left());
    case 3: case 12: return len(left(), right());
    case 6: case 9: return len(bottom(), top());
    case 5: case 10: {
      const bool center_inside = (v0 + v1 + v2 + v3) / 4.0 <= 0.0;
      // mask 5: corners 0 and 2 inside
      if ((mask == 5) == center_inside) {
        return len(bottom(), right()) + len(top(), left());
      }
      return len(bottom(), left()) + len(right(), top());
    }
    default: return 0.0;
  }
}

}  // namespace

double brute_parallel_measure(const RealizedSet& set, double r) {
  long double total = 0.0L;
  for (const auto& c : merged(set, r)) total += c.hi - c.lo;
  return static_cast<double>(total);
}

std::uint64_t brute_boundary_count(const RealizedSet& set, double r) {
  return 2 * static_cast<std::uint64_t>(merged(set, r).size());
}

Grid2D make_grid(const RealizedSet& set, double r, double h) {
  check_raster_args(set, r, h);
  Grid2D g;
  g.h = h;
  if (set.endpoints.empty()) return g;
  const auto [lo, hi] = std::minmax_element(set.endpoints.begin(), set.endpoints.end());
  const double margin = 3.0 * h;
  g.x0 = *lo - r - margin;
  g.y0 = -r - margin;
  g.nx = static_cast<std::int64_t>(std::ceil((*hi - *lo + 2.0 * (r + margin)) / h));
  g.ny = static_cast<std::int64_t>(std::ceil((1.0 + 2.0 * (r + margin)) / h));
  if (g.nx > kMaxGridSamples / std::max<std::int64_t>(g.ny, 1)) {
    throw std::length_error("raster: sample count exceeds the memory cap");
  }
  return g;
}

double raster_area_2d(const RealizedSet& set, double r, double h) {
  const Grid2D g = make_grid(set, r, h);
  if (g.nx == 0) return 0.0;
  const std::vector<double> dx = column_distances(set, g);
  std::vector<double> row(dx.size());
  std::int64_t count = 0;
  for (std::int64_t j = 0; j < g.ny; ++j) {
    fill_row(row, dx, row_distance(g.y(j)), r);
    for (double v : row) count += v <= 0.0;
  }
  return static_cast<double>(count) * h * h;
}

double marching_perimeter_2d(const RealizedSet& set, double r, double h) {
  const Grid2D g = make_grid(set, r, h);
  if (g.nx == 0) return 0.0;
  const std::vector<double> dx = column_distances(set, g);
  std::vector<double> below(dx.size()), above(dx.size());
  fill_row(below, dx, row_distance(g.y(0)), r);
  double total = 0.0;
  for (std::int64_t j = 1; j < g.ny; ++j) {
    fill_row(above, dx, row_distance(g.y(j)), r);
    for (std::size_t i = 0; i + 1 < dx.size(); ++i) {
      total += cell_length(below[i], below[i + 1], above[i + 1], above[i]);
    }
    std::swap(below, above);
  }
  return total * h;
}

void write_occupancy_pgm(const RealizedSet& set, double r, double h, const std::string& path) {
  const Grid2D g = make_grid(set, r, h);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "P5\n" << g.nx << ' ' << g.ny << "\n255\n";
  const std::vector<double> dx = column_distances(set, g);
  std::vector<double> row(dx.size());
  std::vector<unsigned char> bytes(dx.size());
  // top row first
  for (std::int64_t j = g.ny - 1; j >= 0; --j) {
    fill_row(row, dx, row_distance(g.y(j)), r);
    for (std::size_t i = 0; i < row.size(); ++i) bytes[i] = row[i] <= 0.0 ? 255 : 0;
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  }
}

double finite_diff(const std::function<double(double)>& f, double r, double step) {
  if (!(step > 0.0) || !(step < r / 10.0)) {
    throw std::invalid_argument("finite_diff: requires 0 < step < r/10");
  }
  const double a = f(r + step);
  const double b = f(r - step);
  if (!std::isfinite(a) || !std::isfinite(b)) throw std::domain_error("finite_diff: nonfinite sample");
  return (a - b) / (2.0 * step);
}

CheckedDerivative finite_diff_checked(const std::function<double(double)>& f, double r,
                                      double step, double jump_tol) {
  if (!(step > 0.0) || !(step < r / 10.0)) {
    throw std::invalid_argument("finite_diff: requires 0 < step < r/10");
  }
  const double a = f(r + step);
  const double c = f(r);
  const double b = f(r - step);
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) {
    throw std::domain_error("finite_diff: nonfinite sample");
  }
  CheckedDerivative out;
  out.central = (a - b) / (2.0 * step);
  out.forward = (a - c) / step;
  out.backward = (c - b) / step;
  const double scale = std::max({std::fabs(out.forward), std::fabs(out.backward), 1e-300});
  out.jump = std::fabs(out.forward - out.backward) > jump_tol * scale;
  return out;
}

}  // namespace sdimlab
