#include "fbp/flatness.hpp"

#include "fbp/parallel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fbp {

QuadraticForm2D QuadraticForm2D::from_ratio(double phi, double rho) {
  phi = std::fmod(phi, M_PI);
  if (phi < 0.0) phi += M_PI;
  return {1.0, std::clamp(rho, -1.0, 1.0), phi};
}

double QuadraticForm2D::operator()(const Point& x) const {
  const double c = std::cos(phi), s = std::sin(phi);
  const double y1 = c * x.x() + s * x.y(), y2 = -s * x.x() + c * x.y();
  return lambda1 * y1 * y1 + lambda2 * y2 * y2;
}

QuadraticForm2D QuadraticForm2D::normalized() const {
  const double m = std::max(std::abs(lambda1), std::abs(lambda2));
  if (!(m > 0.0)) throw std::invalid_argument("QuadraticForm2D: zero form cannot be normalized");
  return {lambda1 / m, lambda2 / m, phi};
}

int rank_stratum(const QuadraticForm2D& p, double tol) {
  return (std::abs(p.lambda1) > tol ? 1 : 0) + (std::abs(p.lambda2) > tol ? 1 : 0);
}

namespace {

// Uniform bucket grid over a point set for exact nearest-neighbour distances.
class Buckets {
 public:
  explicit Buckets(const std::vector<Point>& pts) : pts_(pts) {
    lo_ = hi_ = pts.front();
    for (const auto& p : pts) {
      lo_ = lo_.cwiseMin(p);
      hi_ = hi_.cwiseMax(p);
    }
    const Point ext = hi_ - lo_;
    const double span = std::max(ext.x(), ext.y());
    cell_ = span > 0.0 ? span / std::sqrt(static_cast<double>(pts.size())) : 1.0;
    cell_ = std::max(cell_, span / 2048.0);
    nx_ = static_cast<int>(ext.x() / cell_) + 1;
    ny_ = static_cast<int>(ext.y() / cell_) + 1;
    start_.assign(static_cast<std::size_t>(nx_) * ny_ + 1, 0);
    std::vector<int> owner(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
      owner[k] = cell_of(pts[k]);
      ++start_[owner[k] + 1];
    }
    std::partial_sum(start_.begin(), start_.end(), start_.begin());
    order_.resize(pts.size());
    std::vector<int> fill(start_.begin(), start_.end() - 1);
    for (std::size_t k = 0; k < pts.size(); ++k) order_[fill[owner[k]]++] = static_cast<int>(k);
  }

  double nearest(const Point& a) const {
    const int ci = clamp_i(static_cast<int>(std::floor((a.x() - lo_.x()) / cell_)), nx_);
    const int cj = clamp_i(static_cast<int>(std::floor((a.y() - lo_.y()) / cell_)), ny_);
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0;; ++k) {
      const int i0 = ci - k, i1 = ci + k, j0 = cj - k, j1 = cj + k;
      for (int j = std::max(j0, 0); j <= std::min(j1, ny_ - 1); ++j)
        for (int i = std::max(i0, 0); i <= std::min(i1, nx_ - 1); ++i) {
          if (i != i0 && i != i1 && j != j0 && j != j1) continue;  // ring only
          if (box_dist2(a, i, j) >= best) continue;
          for (int s = start_[j * nx_ + i]; s < start_[j * nx_ + i + 1]; ++s)
            best = std::min(best, (pts_[order_[s]] - a).squaredNorm());
        }
      // Unvisited cells lie in the slabs outside the visited rectangle.
      double bound = std::numeric_limits<double>::infinity();
      if (i0 > 0) bound = std::min(bound, std::max(0.0, a.x() - (lo_.x() + i0 * cell_)));
      if (i1 < nx_ - 1) bound = std::min(bound, std::max(0.0, lo_.x() + (i1 + 1) * cell_ - a.x()));
      if (j0 > 0) bound = std::min(bound, std::max(0.0, a.y() - (lo_.y() + j0 * cell_)));
      if (j1 < ny_ - 1) bound = std::min(bound, std::max(0.0, lo_.y() + (j1 + 1) * cell_ - a.y()));
      if (!std::isfinite(bound) || bound * bound >= best) return std::sqrt(best);
    }
  }

 private:
  static int clamp_i(int v, int n) { return std::clamp(v, 0, n - 1); }
  int cell_of(const Point& p) const {
    const int i = clamp_i(static_cast<int>((p.x() - lo_.x()) / cell_), nx_);
    const int j = clamp_i(static_cast<int>((p.y() - lo_.y()) / cell_), ny_);
    return j * nx_ + i;
  }
  double box_dist2(const Point& a, int i, int j) const {
    const double x0 = lo_.x() + i * cell_, y0 = lo_.y() + j * cell_;
    // The last row/column absorbs points on the far edge, so it extends to hi_.
    const double x1 = i == nx_ - 1 ? std::max(x0 + cell_, hi_.x()) : x0 + cell_;
    const double y1 = j == ny_ - 1 ? std::max(y0 + cell_, hi_.y()) : y0 + cell_;
    const double dx = std::max({x0 - a.x(), 0.0, a.x() - x1});
    const double dy = std::max({y0 - a.y(), 0.0, a.y() - y1});
    return dx * dx + dy * dy;
  }

  const std::vector<Point>& pts_;
  Point lo_, hi_;
  double cell_ = 1.0;
  int nx_ = 1, ny_ = 1;
  std::vector<int> start_, order_;
};

double directed(const std::vector<Point>& A, const Buckets& B) {
  double d = 0.0;
  for (const auto& a : A) d = std::max(d, B.nearest(a));
  return d;
}

}  // namespace

double hausdorff(const std::vector<Point>& A, const std::vector<Point>& B) {
  if (A.empty() || B.empty()) throw std::invalid_argument("hausdorff: empty point set");
  const Buckets ba(A), bb(B);
  return std::max(directed(A, bb), directed(B, ba));
}

double hausdorff_brute_force(const std::vector<Point>& A, const std::vector<Point>& B) {
  if (A.empty() || B.empty()) throw std::invalid_argument("hausdorff: empty point set");
  auto one_way = [](const std::vector<Point>& X, const std::vector<Point>& Y) {
    double d = 0.0;
    for (const auto& x : X) {
      double m = std::numeric_limits<double>::infinity();
      for (const auto& y : Y) m = std::min(m, (x - y).squaredNorm());
      d = std::max(d, m);
    }
    return std::sqrt(d);
  };
  return std::max(one_way(A, B), one_way(B, A));
}

std::vector<Point> zero_set_samples(const QuadraticForm2D& p, const Point& x0, double r, int n) {
  if (n < 64) throw std::invalid_argument("zero_set_samples: n must be >= 64");
  if (!(r > 0.0)) throw std::invalid_argument("zero_set_samples: r must be > 0");
  const int rank = rank_stratum(p);
  if (rank == 0) throw std::invalid_argument("zero_set_samples: zero form");
  if (rank == 2 && p.lambda1 * p.lambda2 > 0.0) return {x0};

  const Point e1(std::cos(p.phi), std::sin(p.phi)), e2(-std::sin(p.phi), std::cos(p.phi));
  std::vector<Point> dirs;
  if (rank == 1) {
    dirs.push_back(std::abs(p.lambda1) > 1e-12 ? e2 : e1);
  } else {
    const double m = std::sqrt(-p.lambda1 / p.lambda2);
    for (double sgn : {1.0, -1.0}) dirs.push_back((e1 + sgn * m * e2).normalized());
  }
  std::vector<Point> out;
  out.reserve(dirs.size() * n);
  for (const auto& d : dirs)
    for (int k = 0; k < n; ++k) out.push_back(x0 + (-r + 2.0 * r * k / (n - 1)) * d);
  return out;
}

double flatness_h_min(const std::vector<Point>& fb_in_ball, const QuadraticForm2D& p, const Point& x0, double r,
                      int samples) {
  return hausdorff(fb_in_ball, zero_set_samples(p, x0, r, samples));
}

namespace {

// Nelder-Mead on R^2; returns the best vertex and its value.
template <typename F>
std::pair<Eigen::Vector2d, double> nelder_mead(F&& f, Eigen::Vector2d x0, const Eigen::Vector2d& step, int max_iter,
                                               int& evals) {
  std::array<Eigen::Vector2d, 3> v = {x0, x0 + Eigen::Vector2d(step.x(), 0.0), x0 + Eigen::Vector2d(0.0, step.y())};
  std::array<double, 3> fv;
  for (int k = 0; k < 3; ++k) fv[k] = f(v[k]);
  evals += 3;
  for (int it = 0; it < max_iter; ++it) {
    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    const int b = idx[0], m = idx[1], w = idx[2];
    if (fv[w] - fv[b] <= 1e-14 && (v[w] - v[b]).norm() < 1e-10) break;
    const Eigen::Vector2d c = 0.5 * (v[b] + v[m]);
    const Eigen::Vector2d xr = c + (c - v[w]);
    const double fr = f(xr);
    ++evals;
    if (fr < fv[b]) {
      const Eigen::Vector2d xe = c + 2.0 * (c - v[w]);
      const double fe = f(xe);
      ++evals;
      if (fe < fr) {
        v[w] = xe;
        fv[w] = fe;
      } else {
        v[w] = xr;
        fv[w] = fr;
      }
    } else if (fr < fv[m]) {
      v[w] = xr;
      fv[w] = fr;
    } else {
      const Eigen::Vector2d xc = fr < fv[w] ? Eigen::Vector2d(c + 0.5 * (xr - c)) : Eigen::Vector2d(c + 0.5 * (v[w] - c));
      const double fc = f(xc);
      ++evals;
      if (fc < std::min(fr, fv[w])) {
        v[w] = xc;
        fv[w] = fc;
      } else {
        for (int k : {m, w}) {
          v[k] = v[b] + 0.5 * (v[k] - v[b]);
          fv[k] = f(v[k]);
          ++evals;
        }
      }
    }
  }
  int best = 0;
  for (int k = 1; k < 3; ++k)
    if (fv[k] < fv[best]) best = k;
  return {v[best], fv[best]};
}

template <typename F>
double golden_section(F&& f, double lo, double hi, int iters = 60) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
  double fa = f(a), fb = f(b);
  for (int k = 0; k < iters; ++k) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - g * (hi - lo);
      fa = f(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + g * (hi - lo);
      fb = f(b);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

FlatnessReport flatness_h(const FreeBoundary& fb, const Point& x0, double r, const FlatnessOptions& opts) {
  if (!(r > 0.0)) throw std::invalid_argument("flatness_h: r must be > 0");
  if (opts.n_phi < 1 || opts.n_rho < 2) throw std::invalid_argument("flatness_h: search grid too small");
  const std::vector<Point> pts = fb.points_in_ball(x0, r);
  if (pts.empty()) throw std::invalid_argument("flatness_h: no free-boundary points in B_r(x0)");

  auto h_of = [&](double phi, double rho) {
    return flatness_h_min(pts, QuadraticForm2D::from_ratio(phi, rho), x0, r, opts.samples);
  };
  const int np = opts.n_phi, nr = opts.n_rho;
  std::vector<double> grid_vals(static_cast<std::size_t>(np) * nr);
  parallel_for(grid_vals.size(), [&](std::size_t k) {
    const int i = static_cast<int>(k) / nr, j = static_cast<int>(k) % nr;
    grid_vals[k] = h_of(M_PI * i / np, -1.0 + 2.0 * j / (nr - 1));
  });

  FlatnessReport rep;
  rep.x0 = x0;
  rep.r = r;
  rep.fb_points = static_cast<int>(pts.size());
  rep.resolution = r / (opts.samples - 1);
  rep.probed = static_cast<int>(grid_vals.size());

  std::vector<std::size_t> order(grid_vals.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return grid_vals[a] < grid_vals[b]; });
  rep.h_value = grid_vals[order.front()];
  const auto at = [&](std::size_t k) {
    return Eigen::Vector2d(M_PI * (k / nr) / np, -1.0 + 2.0 * (k % nr) / (nr - 1));
  };
  Eigen::Vector2d best_x = at(order.front());

  const int starts = std::min<int>(opts.refine_starts, static_cast<int>(order.size()));
  std::vector<std::pair<Eigen::Vector2d, double>> refined(starts);
  std::vector<int> evals(starts, 0);
  parallel_for(starts, [&](std::size_t s) {
    auto obj = [&](const Eigen::Vector2d& x) { return h_of(x.x(), x.y()); };
    refined[s] = nelder_mead(obj, at(order[s]), Eigen::Vector2d(M_PI / np, 2.0 / (nr - 1)), 200, evals[s]);
  });
  for (int s = 0; s < starts; ++s) {
    rep.probed += evals[s];
    if (refined[s].second < rep.h_value) {
      rep.h_value = refined[s].second;
      best_x = refined[s].first;
    }
  }
  rep.best_form = QuadraticForm2D::from_ratio(best_x.x(), best_x.y());
  rep.deltas = opts.deltas;
  for (double d : opts.deltas) rep.flat_at.push_back(rep.h_value < d * r);
  return rep;
}

std::string to_string(BlowupType t) {
  switch (t) {
    case BlowupType::Type1: return "Type1";
    case BlowupType::Type2: return "Type2";
    case BlowupType::Type3: return "Type3";
    default: return "Undetermined";
  }
}

namespace {

struct DirectionalFit {
  double residual2 = 0.0;  // squared residual norm
  double amplitude = 0.0;
  double angle = 0.0;
};

// v ~ a w(z.e) with w(t) = t^2 or (t^+)^2, best a >= 0 for each e.
DirectionalFit fit_directional(const std::vector<Point>& z, const Eigen::VectorXd& v, bool half, double period) {
  const double vv = v.squaredNorm();
  auto eval = [&](double ang) {
    const Point e(std::cos(ang), std::sin(ang));
    double wv = 0.0, ww = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
      double t = z[k].dot(e);
      if (half) t = std::max(t, 0.0);
      const double w = t * t;
      wv += w * v[k];
      ww += w * w;
    }
    DirectionalFit f;
    f.angle = ang;
    if (ww <= 0.0 || wv <= 0.0) {
      f.residual2 = vv;
      return f;
    }
    f.amplitude = wv / ww;
    f.residual2 = std::max(0.0, vv - wv * wv / ww);
    return f;
  };
  const int n = half ? 720 : 360;
  DirectionalFit best = eval(0.0);
  for (int k = 1; k < n; ++k) {
    const DirectionalFit f = eval(period * k / n);
    if (f.residual2 < best.residual2) best = f;
  }
  const double dstep = period / n;
  const double ang = golden_section([&](double a) { return eval(a).residual2; }, best.angle - dstep, best.angle + dstep);
  const DirectionalFit refined = eval(ang);
  if (refined.residual2 <= best.residual2) best = refined;
  best.angle = std::fmod(best.angle, period);
  if (best.angle < 0.0) best.angle += period;
  if (period - best.angle < 1e-9) best.angle = 0.0;
  return best;
}

}  // namespace

BlowupClass classify_blowup(const GridFunctiond& u, const Point& x0, const std::vector<double>& scales,
                            const BlowupOptions& opts) {
  const Grid& g = u.grid();
  if (g.dim != 2) throw std::invalid_argument("classify_blowup: 2D grid required");
  if (scales.empty()) throw std::invalid_argument("classify_blowup: no scales");
  auto positive = [&](int i, int j) { return u(i, j) > 0.0; };
  auto near_interface = [&](int i, int j) {
    const bool s = positive(i, j);
    for (int dj = -2; dj <= 2; ++dj)
      for (int di = -2; di <= 2; ++di) {
        const int ii = i + di, jj = j + dj;
        if (ii < 0 || jj < 0 || ii >= g.nx || jj >= g.ny) continue;
        if (positive(ii, jj) != s) return true;
      }
    return false;
  };

  BlowupClass out;
  std::size_t finest = 0;
  struct Fits {
    Eigen::Vector3d quad;
    DirectionalFit two, three;
  };
  std::vector<Fits> fits(scales.size());

  for (std::size_t s = 0; s < scales.size(); ++s) {
    const double rho = scales[s];
    if (!(rho >= 8.0 * g.h)) throw std::invalid_argument("classify_blowup: scales must be >= 8h");
    if (x0.x() - rho < g.ox || x0.x() + rho > g.x_max() || x0.y() - rho < g.oy || x0.y() + rho > g.y_max())
      throw std::out_of_range("classify_blowup: scale exits the grid");
    if (rho < scales[finest]) finest = s;

    std::vector<Point> z;
    std::vector<double> vals;
    const int i_lo = std::max(0, static_cast<int>(std::floor((x0.x() - rho - g.ox) / g.h)));
    const int i_hi = std::min(g.nx - 1, static_cast<int>(std::ceil((x0.x() + rho - g.ox) / g.h)));
    const int j_lo = std::max(0, static_cast<int>(std::floor((x0.y() - rho - g.oy) / g.h)));
    const int j_hi = std::min(g.ny - 1, static_cast<int>(std::ceil((x0.y() + rho - g.oy) / g.h)));
    for (int j = j_lo; j <= j_hi; ++j)
      for (int i = i_lo; i <= i_hi; ++i) {
        const Point d = g.node(i, j) - x0;
        const double dist = d.norm();
        if (dist < 0.5 * rho || dist > rho || near_interface(i, j)) continue;
        z.push_back(d / rho);
        vals.push_back(u(i, j) / (rho * rho));
      }
    BlowupScaleFit sf;
    sf.rho = rho;
    sf.nodes = static_cast<int>(z.size());
    if (z.size() < 8) throw std::out_of_range("classify_blowup: annulus holds too few nodes");
    const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(vals.data(), vals.size());
    const double vnorm = v.norm();

    Eigen::MatrixXd M(z.size(), 3);
    for (std::size_t k = 0; k < z.size(); ++k) M.row(k) << z[k].x() * z[k].x(), z[k].x() * z[k].y(), z[k].y() * z[k].y();
    fits[s].quad = M.colPivHouseholderQr().solve(v);
    fits[s].two = fit_directional(z, v, false, M_PI);
    fits[s].three = fit_directional(z, v, true, 2.0 * M_PI);

    if (vnorm > 0.0) {
      sf.residual[0] = (M * fits[s].quad - v).norm() / vnorm;
      sf.residual[1] = std::sqrt(fits[s].two.residual2) / vnorm;
      sf.residual[2] = std::sqrt(fits[s].three.residual2) / vnorm;
    } else {
      sf.residual[0] = sf.residual[1] = sf.residual[2] = 1.0;
    }
    const double m = *std::min_element(sf.residual, sf.residual + 3);
    // Simpler templates first: Type2, Type3, then the full quadratic.
    for (int t : {1, 2, 0})
      if (sf.residual[t] <= m + opts.tie_tolerance) {
        sf.best = static_cast<BlowupType>(t);
        break;
      }
    if (m > opts.undetermined_threshold) sf.best = BlowupType::Undetermined;
    out.scales.push_back(sf);
  }

  const BlowupScaleFit& f = out.scales[finest];
  out.type = f.best;
  const Fits& fit = fits[finest];
  switch (out.type) {
    case BlowupType::Type1: {
      Eigen::Matrix2d H;
      H << fit.quad[0], 0.5 * fit.quad[1], 0.5 * fit.quad[1], fit.quad[2];
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es;
      es.computeDirect(H);
      out.amplitudes = {es.eigenvalues()[1], es.eigenvalues()[0]};
      const Eigen::Vector2d e = es.eigenvectors().col(1);
      double ang = std::atan2(e.y(), e.x());
      if (ang < 0.0) ang += M_PI;
      out.orientation = std::fmod(ang, M_PI);
      break;
    }
    case BlowupType::Type2:
      out.amplitudes = {fit.two.amplitude};
      out.orientation = fit.two.angle;
      break;
    case BlowupType::Type3:
      out.amplitudes = {fit.three.amplitude};
      out.orientation = fit.three.angle;
      break;
    default:
      break;
  }
  return out;
}

double cone_energy(double theta1, double theta2) {
  if (!(theta1 >= 0.0 && theta1 <= theta2 && theta2 <= 2.0 * M_PI))
    throw std::invalid_argument("cone_energy: need 0 <= theta1 <= theta2 <= 2 pi");
  return (theta2 - theta1) / 8.0;
}

namespace {

// P(U1 + U2 <= s) for U1 ~ U[-a, a], U2 ~ U[-b, b].
double box_sum_cdf(double s, double a, double b) {
  const double p = 2.0 * std::max(a, b), q = 2.0 * std::min(a, b);
  const double t = s + a + b;
  if (t <= 0.0) return 0.0;
  if (t >= p + q) return 1.0;
  if (q <= 1e-14 * p) return std::clamp(t / p, 0.0, 1.0);
  if (t <= q) return t * t / (2.0 * p * q);
  if (t <= p) return (2.0 * t - q) / (2.0 * p);
  const double w = p + q - t;
  return 1.0 - w * w / (2.0 * p * q);
}

}  // namespace

double halfplane_mismatch(const GridFunctiond& u, const Point& xbar, double rho, double angle) {
  const Grid& g = u.grid();
  const Point e(std::cos(angle), std::sin(angle));
  const double a = 0.5 * g.h * std::abs(e.x()), b = 0.5 * g.h * std::abs(e.y());
  double D = 0.0;
  for (const auto& [k, w] : ball_weights(g, xbar, rho)) {
    const Point p = g.node(k % g.nx, k / g.nx);
    const double t = (p - xbar).dot(e);
    const double inside = 1.0 - box_sum_cdf(-t, a, b);  // fraction of the cell with (x - xbar).e > 0
    D += w * (u[k] > 0.0 ? 1.0 - inside : inside);
  }
  return D / (M_PI * rho * rho);
}

TangentFit tangent_halfplane_fit(const GridFunctiond& u, const Point& xbar, const std::vector<double>& radii) {
  const Grid& g = u.grid();
  if (g.dim != 2) throw std::invalid_argument("tangent_halfplane_fit: 2D grid required");
  if (radii.empty()) throw std::invalid_argument("tangent_halfplane_fit: no radii");
  for (double r : radii) {
    if (!(r >= 2.0 * g.h)) throw std::invalid_argument("tangent_halfplane_fit: radii must be >= 2h");
    const double m = r + g.h;
    if (xbar.x() - m < g.ox || xbar.x() + m > g.x_max() || xbar.y() - m < g.oy || xbar.y() + m > g.y_max())
      throw std::out_of_range("tangent_halfplane_fit: radius exits the grid");
  }
  const double r_min = *std::min_element(radii.begin(), radii.end());
  bool has_zero = false;
  for (const auto& nw : ball_weights(g, xbar, r_min)) has_zero = has_zero || u[nw.index] <= 0.0;
  if (!has_zero) throw std::invalid_argument("tangent_halfplane_fit: no free boundary near xbar");

  TangentFit fit;
  fit.radii = radii;
  fit.angles.resize(radii.size());
  fit.densities.resize(radii.size());
  parallel_for(radii.size(), [&](std::size_t i) {
    const double rho = radii[i];
    constexpr int n = 360;
    int best = 0;
    double best_v = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
      const double v = halfplane_mismatch(u, xbar, rho, 2.0 * M_PI * k / n);
      if (v < best_v) {
        best_v = v;
        best = k;
      }
    }
    const double step = 2.0 * M_PI / n;
    const double c = step * best;
    double ang = golden_section([&](double a) { return halfplane_mismatch(u, xbar, rho, a); }, c - step, c + step);
    double v = halfplane_mismatch(u, xbar, rho, ang);
    if (v > best_v) {
      ang = c;
      v = best_v;
    }
    ang = std::fmod(ang, 2.0 * M_PI);
    if (ang < 0.0) ang += 2.0 * M_PI;
    if (2.0 * M_PI - ang < 1e-9) ang = 0.0;
    fit.angles[i] = ang;
    fit.densities[i] = v;
  });
  std::size_t imin = std::min_element(radii.begin(), radii.end()) - radii.begin();
  fit.direction = Point(std::cos(fit.angles[imin]), std::sin(fit.angles[imin]));
  return fit;
}

}  // namespace fbp
