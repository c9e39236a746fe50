#include "fbp/whitney.hpp"

#include "fbp/errors.hpp"
#include "fbp/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace fbp {

std::size_t CompactMask::count() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](std::uint8_t c) { return c != 0; }));
}

void CompactMask::validate() const {
  if (K < 1 || K > 14) throw std::invalid_argument("mask: K must lie in [1, 14]");
  if (cells.size() != static_cast<std::size_t>(side()) * side())
    throw std::invalid_argument("mask: cell count does not match 4^K");
}

CompactMask CompactMask::empty(int K, const Point& x0) {
  CompactMask m{K, x0, {}};
  if (K < 1 || K > 14) throw std::invalid_argument("mask: K must lie in [1, 14]");
  m.cells.assign(static_cast<std::size_t>(m.side()) * m.side(), 0);
  return m;
}

CompactMask CompactMask::from_predicate(int K, const Point& x0, const std::function<bool(const Point&)>& in_set,
                                        int samples) {
  if (samples < 1) throw std::invalid_argument("mask: samples must be >= 1");
  CompactMask m = empty(K, x0);
  const int n = m.side();
  const double s = m.cell_size();
  parallel_for(n, [&](std::size_t jj) {
    const int j = static_cast<int>(jj);
    for (int i = 0; i < n; ++i) {
      bool hit = false;
      for (int b = 0; b < samples && !hit; ++b)
        for (int a = 0; a < samples && !hit; ++a)
          hit = in_set({x0.x() - 0.5 + (i + (a + 0.5) / samples) * s, x0.y() - 0.5 + (j + (b + 0.5) / samples) * s});
      m.cells[static_cast<std::size_t>(j) * n + i] = hit;
    }
  });
  return m;
}

CompactMask CompactMask::from_points(int K, const Point& x0, const std::vector<Point>& pts) {
  CompactMask m = empty(K, x0);
  const int n = m.side();
  for (const auto& p : pts) {
    const Point q = (p - x0 + Point(0.5, 0.5)) / m.cell_size();
    if (q.x() < 0.0 || q.y() < 0.0 || q.x() > n || q.y() > n) continue;
    const int i = std::min(static_cast<int>(q.x()), n - 1), j = std::min(static_cast<int>(q.y()), n - 1);
    m.cells[static_cast<std::size_t>(j) * n + i] = 1;
  }
  return m;
}

CompactMask CompactMask::from_field(int K, const Point& x0, const GridFunctiond& u, int samples) {
  const Grid& g = u.grid();
  if (g.dim != 2) throw std::invalid_argument("mask: 2D grid required");
  if (x0.x() - 0.5 < g.ox || x0.x() + 0.5 > g.x_max() || x0.y() - 0.5 < g.oy || x0.y() + 0.5 > g.y_max())
    throw std::out_of_range("mask: root square exits the grid");
  return from_predicate(K, x0, [&](const Point& p) { return bilinear_interpolate(u, p) <= 0.0; }, samples);
}

Point WhitneyDecomposition::corner(const WhitneyCube& q) const {
  return x0 - Point(0.5, 0.5) + side(q) * Point(q.i, q.j);
}

namespace {

// Squared distance transform of one line (Felzenszwalb-Huttenlocher lower envelope).
void edt_1d(const double* f, double* d, int n, std::vector<int>& v, std::vector<double>& z) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (!std::isfinite(f[q])) continue;
    while (k >= 0) {
      const double s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * (q - v[k]));
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = k == 0 ? -inf : ((f[q] + double(q) * q) - (f[v[k - 1]] + double(v[k - 1]) * v[k - 1])) / (2.0 * (q - v[k - 1]));
    z[k + 1] = inf;
  }
  if (k < 0) {
    std::fill(d, d + n, inf);
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    d[q] = (q - v[j]) * double(q - v[j]) + f[v[j]];
  }
}

}  // namespace

Eigen::ArrayXXd mask_distance(const CompactMask& E) {
  E.validate();
  const int n = E.side();
  constexpr double inf = std::numeric_limits<double>::infinity();
  // Gap between closed cells with index offset d is max(|d|-1, 0) per axis, which
  // is the center distance to the 3x3 dilation of E.
  Eigen::ArrayXXd f = Eigen::ArrayXXd::Constant(n, n, inf);  // (i, j)
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (!E(i, j)) continue;
      for (int b = std::max(j - 1, 0); b <= std::min(j + 1, n - 1); ++b)
        for (int a = std::max(i - 1, 0); a <= std::min(i + 1, n - 1); ++a) f(a, b) = 0.0;
    }
  Eigen::ArrayXXd tmp(n, n);
  parallel_for(n, [&](std::size_t j) {
    std::vector<int> v(n);
    std::vector<double> z(n + 1);
    edt_1d(f.col(j).data(), tmp.col(j).data(), n, v, z);
  });
  Eigen::ArrayXXd d(n, n);
  parallel_for(n, [&](std::size_t i) {
    std::vector<int> v(n);
    std::vector<double> z(n + 1), in(n), out(n);
    for (int j = 0; j < n; ++j) in[j] = tmp(i, j);
    edt_1d(in.data(), out.data(), n, v, z);
    for (int j = 0; j < n; ++j) d(i, j) = std::sqrt(out[j]) * E.cell_size();
  });
  return d;
}

WhitneyDecomposition decompose(const CompactMask& E) {
  E.validate();
  const std::size_t filled = E.count();
  if (filled == 0) throw std::invalid_argument("decompose: E is empty");
  if (filled == E.cells.size()) throw std::invalid_argument("decompose: E fills the root square");

  const int K = E.K;
  // Min-pyramid of the cell distances: pyramid[k](i, j) = dist of the level-k square to E.
  std::vector<Eigen::ArrayXXd> pyramid(K + 1);
  pyramid[K] = mask_distance(E);
  for (int k = K - 1; k >= 0; --k) {
    const int n = 1 << k;
    pyramid[k].resize(n, n);
    const auto& c = pyramid[k + 1];
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        pyramid[k](i, j) = std::min({c(2 * i, 2 * j), c(2 * i + 1, 2 * j), c(2 * i, 2 * j + 1), c(2 * i + 1, 2 * j + 1)});
  }

  struct Branch {
    std::vector<WhitneyCube> cubes;
    std::size_t residual = 0;
  };
  auto refine = [&](auto&& self, const WhitneyCube& q, Branch& out) -> void {
    const double dist = pyramid[q.level](q.i, q.j);
    const double diam = std::sqrt(2.0) * std::ldexp(1.0, -q.level);
    if (dist >= diam && dist <= 4.0 * diam) {
      out.cubes.push_back(q);
      return;
    }
    if (q.level == K) {
      if (!E(q.i, q.j)) ++out.residual;
      return;
    }
    for (int b = 0; b < 2; ++b)
      for (int a = 0; a < 2; ++a) self(self, {q.level + 1, 2 * q.i + a, 2 * q.j + b}, out);
  };

  // Level-2 squares are independent branches; cubes above them are handled serially.
  WhitneyDecomposition dec;
  dec.K = K;
  dec.x0 = E.x0;
  std::vector<WhitneyCube> roots;
  auto top = [&](auto&& self, const WhitneyCube& q) -> void {
    const double dist = pyramid[q.level](q.i, q.j);
    const double diam = std::sqrt(2.0) * std::ldexp(1.0, -q.level);
    if (dist >= diam && dist <= 4.0 * diam) {
      dec.cubes.push_back(q);
      return;
    }
    if (q.level == std::min(2, K)) {
      roots.push_back(q);
      return;
    }
    for (int b = 0; b < 2; ++b)
      for (int a = 0; a < 2; ++a) self(self, {q.level + 1, 2 * q.i + a, 2 * q.j + b});
  };
  top(top, {0, 0, 0});
  std::vector<Branch> branches(roots.size());
  parallel_for(roots.size(), [&](std::size_t r) {
    const WhitneyCube& q = roots[r];
    if (q.level == K) {
      if (!E(q.i, q.j)) ++branches[r].residual;
      return;
    }
    for (int b = 0; b < 2; ++b)
      for (int a = 0; a < 2; ++a) refine(refine, {q.level + 1, 2 * q.i + a, 2 * q.j + b}, branches[r]);
  });
  for (auto& b : branches) {
    dec.cubes.insert(dec.cubes.end(), b.cubes.begin(), b.cubes.end());
    dec.residual_cells += b.residual;
  }

  dec.c1 = std::numeric_limits<double>::infinity();
  dec.c2 = 0.0;
  for (const auto& q : dec.cubes) {
    const double ratio = pyramid[q.level](q.i, q.j) / dec.diam(q);
    dec.c1 = std::min(dec.c1, ratio);
    dec.c2 = std::max(dec.c2, ratio);
  }
  if (dec.cubes.empty()) dec.c1 = std::numeric_limits<double>::quiet_NaN();
  return dec;
}

WhitneyAudit audit(const CompactMask& E, const WhitneyDecomposition& dec) {
  E.validate();
  if (dec.K != E.K) throw std::invalid_argument("audit: decomposition and mask resolution differ");
  const int n = E.side();
  const Eigen::ArrayXXd dist = mask_distance(E);
  std::vector<int> hits(E.cells.size(), 0);
  WhitneyAudit a;
  a.min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& q : dec.cubes) {
    const int w = 1 << (E.K - q.level);
    double dq = std::numeric_limits<double>::infinity();
    for (int j = q.j * w; j < (q.j + 1) * w; ++j)
      for (int i = q.i * w; i < (q.i + 1) * w; ++i) {
        ++hits[static_cast<std::size_t>(j) * n + i];
        dq = std::min(dq, dist(i, j));
      }
    a.min_ratio = std::min(a.min_ratio, dq / dec.diam(q));
    a.max_ratio = std::max(a.max_ratio, dq / dec.diam(q));
  }
  for (std::size_t k = 0; k < hits.size(); ++k) {
    if (E.cells[k]) {
      ++a.in_E;
      if (hits[k] > 0) a.disjoint = false;
    } else if (hits[k] == 0) {
      ++a.uncovered;
    } else {
      ++a.covered;
    }
    if (hits[k] > 1) {
      ++a.overlapping;
      a.disjoint = false;
    }
  }
  return a;
}

CoveringReport weak_c_covering(const WhitneyDecomposition& dec, const Point& x0, int k0, std::optional<double> c_bound) {
  if (k0 < 1) throw std::invalid_argument("weak_c_covering: k0 must be >= 1");
  CoveringReport rep;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int k = k0; k <= dec.K - 1; ++k) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : dec.cubes) {
      if (q.level != k) continue;
      const Point lo = dec.corner(q);
      const double s = dec.side(q);
      const double dx = std::max({lo.x() - x0.x(), 0.0, x0.x() - lo.x() - s});
      const double dy = std::max({lo.y() - x0.y(), 0.0, x0.y() - lo.y() - s});
      best = std::min(best, std::hypot(dx, dy) / s);
    }
    rep.levels.push_back(k);
    const bool found = std::isfinite(best);
    rep.c_per_level.push_back(found ? best : nan);
    const bool ok = found && (!c_bound || best <= *c_bound);
    if (found) rep.c_est = std::max(rep.c_est, best);
    if (!ok && rep.holds) {
      rep.holds = false;
      rep.failed_level = k;
    }
    if (!ok) rep.verified_from = -1;
    else if (rep.verified_from < 0) rep.verified_from = k;
  }
  return rep;
}

void write_mask(std::ostream& os, const CompactMask& E) {
  E.validate();
  os.precision(17);
  os << "# " << E.K << ',' << E.x0.x() << ',' << E.x0.y() << '\n';
  const int n = E.side();
  for (int j = 0; j < n; ++j) {
    bool state = false;
    int run = 0;
    bool first = true;
    for (int i = 0; i < n; ++i) {
      if (E(i, j) == state) {
        ++run;
        continue;
      }
      os << (first ? "" : " ") << run;
      first = false;
      state = !state;
      run = 1;
    }
    os << (first ? "" : " ") << run << '\n';
  }
  if (!os) throw IoError("write_mask: stream failure");
}

CompactMask read_mask(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0) throw IoError("read_mask: missing '# K,x0,y0' header");
  std::replace(line.begin(), line.end(), ',', ' ');
  std::istringstream hs(line.substr(2));
  int K = 0;
  double x = 0.0, y = 0.0;
  if (!(hs >> K >> x >> y)) throw IoError("read_mask: malformed header");
  CompactMask m;
  try {
    m = CompactMask::empty(K, {x, y});
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("read_mask: ") + e.what());
  }
  const int n = m.side();
  for (int j = 0; j < n; ++j) {
    if (!std::getline(is, line)) throw IoError("read_mask: fewer rows than 2^K");
    std::istringstream rs(line);
    long run = 0;
    int i = 0;
    bool state = false;
    while (rs >> run) {
      if (run < 0 || i + run > n) throw IoError("read_mask: run lengths exceed the row width");
      for (long r = 0; r < run; ++r) m.cells[static_cast<std::size_t>(j) * n + i++] = state;
      state = !state;
    }
    if (!rs.eof() || i != n) throw IoError("read_mask: row " + std::to_string(j) + " does not sum to 2^K");
  }
  return m;
}

void write_mask_file(const std::string& path, const CompactMask& E) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  write_mask(os, E);
}

CompactMask read_mask_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  return read_mask(is);
}

}  // namespace fbp
