#include "fbp/grid.hpp"

#include "fbp/errors.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace fbp {

namespace {

double keys_weight(double t) {
  constexpr double a = -0.5;
  t = std::abs(t);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
  return 0.0;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<Point> FreeBoundary::points_in_ball(const Point& center, double r) const {
  std::vector<Point> out;
  for (const auto& p : points)
    if ((p - center).norm() <= r) out.push_back(p);
  return out;
}

double default_grad_tol(const GridFunctiond& u) { return 10.0 * u.grid().h * u.max_abs(); }

FreeBoundary extract_free_boundary(const GridFunctiond& u, double zero_tol, double grad_tol) {
  if (!(zero_tol >= 0.0)) throw std::invalid_argument("extract_free_boundary: zero_tol must be >= 0");
  const Grid& g = u.grid();
  const auto grad = gradient(u);
  auto grad_at = [&](int k) -> Point {
    return {grad[0][k], g.dim == 2 ? grad[1][k] : 0.0};
  };

  FreeBoundary fb;
  fb.grad_tol = grad_tol;
  std::unordered_set<int> zero_nodes_taken;

  auto add_edge = [&](int ka, int kb, const Point& pa, const Point& pb) {
    const double ua = u[ka], ub = u[kb];
    const bool pos_a = ua > zero_tol, pos_b = ub > zero_tol;
    if (pos_a == pos_b) return;
    const int kp = pos_a ? ka : kb;
    const int kq = pos_a ? kb : ka;
    const Point& pp = pos_a ? pa : pb;
    const Point& pq = pos_a ? pb : pa;
    const double up = u[kp], uq = u[kq];
    if (std::abs(uq) <= zero_tol) {
      if (!zero_nodes_taken.insert(kq).second) return;
      fb.points.push_back(pq);
      fb.singular.push_back(grad_at(kq).norm() <= grad_tol);
      return;
    }
    const double t = up / (up - uq);
    fb.points.push_back(pp + t * (pq - pp));
    const Point gi = (1.0 - t) * grad_at(kp) + t * grad_at(kq);
    fb.singular.push_back(gi.norm() <= grad_tol);
  };

  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int k = g.index(i, j);
      if (i + 1 < g.nx) add_edge(k, g.index(i + 1, j), g.node(i, j), g.node(i + 1, j));
      if (g.dim == 2 && j + 1 < g.ny) add_edge(k, g.index(i, j + 1), g.node(i, j), g.node(i, j + 1));
    }
  return fb;
}

double cubic_interpolate(const GridFunctiond& f, const Point& p) {
  const Grid& g = f.grid();
  const double fx = (p.x() - g.ox) / g.h;
  const int i0 = static_cast<int>(std::floor(fx));
  const double tx = fx - i0;
  const std::array<double, 4> wx = {keys_weight(1.0 + tx), keys_weight(tx), keys_weight(1.0 - tx),
                                    keys_weight(2.0 - tx)};
  auto check = [](int idx, int n) {
    if (idx < 0 || idx >= n) throw std::invalid_argument("cubic_interpolate: stencil leaves the grid");
  };
  if (g.dim == 1) {
    double s = 0.0;
    for (int a = 0; a < 4; ++a) {
      if (wx[a] == 0.0) continue;
      check(i0 - 1 + a, g.nx);
      s += wx[a] * f(i0 - 1 + a);
    }
    return s;
  }
  const double fy = (p.y() - g.oy) / g.h;
  const int j0 = static_cast<int>(std::floor(fy));
  const double ty = fy - j0;
  const std::array<double, 4> wy = {keys_weight(1.0 + ty), keys_weight(ty), keys_weight(1.0 - ty),
                                    keys_weight(2.0 - ty)};
  double s = 0.0;
  for (int b = 0; b < 4; ++b) {
    if (wy[b] == 0.0) continue;
    check(j0 - 1 + b, g.ny);
    for (int a = 0; a < 4; ++a) {
      if (wx[a] == 0.0) continue;
      check(i0 - 1 + a, g.nx);
      s += wx[a] * wy[b] * f(i0 - 1 + a, j0 - 1 + b);
    }
  }
  return s;
}

double bilinear_interpolate(const GridFunctiond& f, const Point& p) {
  const Grid& g = f.grid();
  const double fx = std::clamp((p.x() - g.ox) / g.h, 0.0, double(g.nx - 1));
  const int i0 = std::min(static_cast<int>(std::floor(fx)), g.nx - 2);
  const double tx = fx - i0;
  if (g.dim == 1) return (1.0 - tx) * f(i0) + tx * f(i0 + 1);
  const double fy = std::clamp((p.y() - g.oy) / g.h, 0.0, double(g.ny - 1));
  const int j0 = std::min(static_cast<int>(std::floor(fy)), g.ny - 2);
  const double ty = fy - j0;
  return (1.0 - tx) * (1.0 - ty) * f(i0, j0) + tx * (1.0 - ty) * f(i0 + 1, j0) + (1.0 - tx) * ty * f(i0, j0 + 1) +
         tx * ty * f(i0 + 1, j0 + 1);
}

PolarSampler::PolarSampler(const GridFunctiond& u)
    : u_(u), ux_(u), uy_(u), uxx_(u), uxy_(u), uyy_(u) {
  if (u.grid().dim != 2) throw std::invalid_argument("polar sampling: 2D grid required");
  auto grad = gradient(u);
  ux_ = grad[0];
  uy_ = grad[1];
  auto hess = hessian(u);
  uxx_ = hess.xx;
  uxy_ = hess.xy;
  uyy_ = hess.yy;
}

bool PolarSampler::fits(const Point& c, double r) const {
  const Grid& g = u_.grid();
  const double m = r + 2.0 * g.h;
  return r > 0.0 && c.x() - m >= g.ox && c.x() + m <= g.x_max() && c.y() - m >= g.oy && c.y() + m <= g.y_max();
}

PolarSamples PolarSampler::sample(const Point& c, double r, int n_theta) const {
  if (n_theta < 16) throw std::invalid_argument("sample_circle: n_theta must be >= 16");
  if (!fits(c, r)) throw std::invalid_argument("sample_circle: circle exits the grid margin");
  PolarSamples s;
  s.center = c;
  s.r = r;
  s.theta.resize(n_theta);
  for (auto* a : {&s.u, &s.u_r, &s.u_theta, &s.u_rr, &s.u_thetar, &s.u_thetatheta, &s.lap}) a->resize(n_theta);
  for (int k = 0; k < n_theta; ++k) {
    const double th = 2.0 * M_PI * k / n_theta;
    const double co = std::cos(th), si = std::sin(th);
    const Point p = c + r * Point(co, si);
    const double v = cubic_interpolate(u_, p);
    const double ux = cubic_interpolate(ux_, p), uy = cubic_interpolate(uy_, p);
    const double uxx = cubic_interpolate(uxx_, p), uxy = cubic_interpolate(uxy_, p),
                 uyy = cubic_interpolate(uyy_, p);
    s.theta[k] = th;
    s.u[k] = v;
    s.u_r[k] = co * ux + si * uy;
    const double tangential = -si * ux + co * uy;
    s.u_theta[k] = r * tangential;
    s.u_rr[k] = co * co * uxx + 2.0 * co * si * uxy + si * si * uyy;
    s.u_thetar[k] = tangential + r * (co * si * (uyy - uxx) + (co * co - si * si) * uxy);
    s.u_thetatheta[k] = r * r * (si * si * uxx - 2.0 * co * si * uxy + co * co * uyy) - r * s.u_r[k];
    s.lap[k] = uxx + uyy;
  }
  return s;
}

PolarSamples sample_circle(const GridFunctiond& u, const Point& center, double r, int n_theta) {
  return PolarSampler(u).sample(center, r, n_theta);
}

double disk_box_overlap(double x0, double x1, double y0, double y1, double r) {
  const double xa = std::max(x0, -r), xb = std::min(x1, r);
  if (xa >= xb || y0 >= y1) return 0.0;
  const double r2 = r * r;
  auto chord = [r2](double x) { return std::sqrt(std::max(0.0, r2 - x * x)); };
  // integral of sqrt(r^2 - t^2) from 0 to x
  auto prim = [&](double x) {
    const double xc = std::clamp(x, -r, r);
    return 0.5 * (xc * chord(xc) + r2 * std::asin(xc / r));
  };
  std::vector<double> cuts = {xa, xb};
  for (double yv : {y0, y1}) {
    if (std::abs(yv) < r) {
      const double xs = chord(yv);
      for (double c : {-xs, xs})
        if (c > xa && c < xb) cuts.push_back(c);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  double area = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double p = cuts[k], q = cuts[k + 1];
    if (q <= p) continue;
    const double s = chord(0.5 * (p + q));
    const double upper_mid = std::min(y1, s), lower_mid = std::max(y0, -s);
    if (upper_mid <= lower_mid) continue;
    const double upper = y1 < s ? y1 * (q - p) : prim(q) - prim(p);
    const double lower = y0 > -s ? y0 * (q - p) : -(prim(q) - prim(p));
    area += upper - lower;
  }
  return area;
}

std::vector<NodeWeight> ball_weights(const Grid& g, const Point& c, double r) {
  std::vector<NodeWeight> out;
  const double hh = 0.5 * g.h;
  const int i_lo = std::max(0, static_cast<int>(std::floor((c.x() - r - g.ox) / g.h)) - 1);
  const int i_hi = std::min(g.nx - 1, static_cast<int>(std::ceil((c.x() + r - g.ox) / g.h)) + 1);
  if (g.dim == 1) {
    for (int i = i_lo; i <= i_hi; ++i) {
      const double a = std::max(g.x(i) - hh, c.x() - r), b = std::min(g.x(i) + hh, c.x() + r);
      if (b > a) out.push_back({i, b - a});
    }
    return out;
  }
  const int j_lo = std::max(0, static_cast<int>(std::floor((c.y() - r - g.oy) / g.h)) - 1);
  const int j_hi = std::min(g.ny - 1, static_cast<int>(std::ceil((c.y() + r - g.oy) / g.h)) + 1);
  for (int j = j_lo; j <= j_hi; ++j)
    for (int i = i_lo; i <= i_hi; ++i) {
      const double dx = g.x(i) - c.x(), dy = g.y(j) - c.y();
      double w;
      if (std::hypot(std::abs(dx) + hh, std::abs(dy) + hh) <= r)
        w = g.h * g.h;
      else
        w = disk_box_overlap(dx - hh, dx + hh, dy - hh, dy + hh, r);
      if (w > 0.0) out.push_back({g.index(i, j), w});
    }
  return out;
}

GridFunctiond coarsen(const GridFunctiond& u) {
  const Grid& g = u.grid();
  const int cnx = (g.nx + 1) / 2;
  const int cny = g.dim == 2 ? (g.ny + 1) / 2 : 1;
  Grid cg = g.dim == 2 ? Grid::rectangle(g.ox, g.oy, 2.0 * g.h, cnx, cny) : Grid{1, cnx, 1, 2.0 * g.h, g.ox, 0.0};
  cg.validate();
  Eigen::VectorXd v(cg.size());
  for (int j = 0; j < cg.ny; ++j)
    for (int i = 0; i < cg.nx; ++i) v[cg.index(i, j)] = u(2 * i, g.dim == 2 ? 2 * j : 0);
  return GridFunctiond(cg, std::move(v));
}

void write_csv(std::ostream& os, const GridFunctiond& u) {
  const Grid& g = u.grid();
  os << "# " << g.dim << ',' << g.nx << ',' << g.ny << ',' << format_double(g.h) << ',' << format_double(g.ox) << ','
     << format_double(g.oy) << '\n';
  for (int k = 0; k < u.values().size(); ++k) os << format_double(u[k]) << '\n';
}

GridFunctiond read_csv(std::istream& is) {
  std::string line;
  Grid g;
  bool have_header = false;
  while (!have_header && std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] != '#') throw IoError("grid csv: missing '# dim,nx,ny,h,ox,oy' header");
    std::string body = line.substr(1);
    std::replace(body.begin(), body.end(), ',', ' ');
    std::istringstream ss(body);
    double dim, nx, ny;
    if (!(ss >> dim >> nx >> ny >> g.h >> g.ox >> g.oy)) continue;  // column-name line
    g.dim = static_cast<int>(dim);
    g.nx = static_cast<int>(nx);
    g.ny = static_cast<int>(ny);
    have_header = true;
  }
  if (!have_header) throw IoError("grid csv: header not found");
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("grid csv: ") + e.what());
  }
  Eigen::VectorXd v(g.size());
  int k = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (k >= g.size()) throw IoError("grid csv: more values than nodes");
    try {
      v[k++] = std::stod(line);
    } catch (const std::exception&) {
      throw IoError("grid csv: bad value '" + line + "'");
    }
  }
  if (k != g.size()) throw IoError("grid csv: expected " + std::to_string(g.size()) + " values, got " + std::to_string(k));
  return GridFunctiond(g, std::move(v));
}

void write_csv_file(const std::string& path, const GridFunctiond& u) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write_csv(os, u);
  if (!os) throw IoError("write failed for '" + path + "'");
}

GridFunctiond read_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "'");
  return read_csv(is);
}

}  // namespace fbp
