#pragma once

// Box-constrained Nelder-Mead simplex minimiser.
//
// Uses the dimension-adaptive coefficients of Gao & Han (2012), which keep
// the method from stalling beyond ~4 parameters. Trial points are projected
// onto the box. Fully deterministic: ties in the vertex ordering are broken
// by insertion order.

#include <algorithm>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace nvdnp {

template <typename Scalar = double>
struct SimplexOptions {
  int max_iterations = 400;
  Scalar x_tol = Scalar(1e-4);  // max vertex distance from the best (inf-norm)
  Scalar f_tol = Scalar(1e-5);  // max objective spread across the simplex
  Scalar initial_step = Scalar(0.1);
};

template <typename Scalar = double>
struct SimplexResult {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  Scalar f = 0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

template <typename Scalar, typename Objective>
SimplexResult<Scalar> nelder_mead_minimize(Objective&& objective,
                                           const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x0,
                                           const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& lower,
                                           const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& upper,
                                           const SimplexOptions<Scalar>& opt = {}) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = x0.size();
  const Scalar dim = static_cast<Scalar>(n);
  const Scalar reflect = 1;
  const Scalar expand = 1 + 2 / dim;
  const Scalar contract = Scalar(0.75) - 1 / (2 * dim);
  const Scalar shrink = 1 - 1 / dim;

  SimplexResult<Scalar> res;
  auto project = [&](Vec x) { return x.cwiseMax(lower).cwiseMin(upper).eval(); };
  auto eval = [&](const Vec& x) {
    ++res.evaluations;
    return static_cast<Scalar>(objective(x));
  };

  std::vector<Vec> pts;
  std::vector<Scalar> fs;
  pts.push_back(project(x0));
  for (Eigen::Index i = 0; i < n; ++i) {
    Vec p = pts[0];
    p(i) += opt.initial_step;
    if (p(i) > upper(i)) p(i) = pts[0](i) - opt.initial_step;
    pts.push_back(project(p));
  }
  for (const Vec& p : pts) fs.push_back(eval(p));

  std::vector<int> order(n + 1);
  auto sort_vertices = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    std::vector<Vec> p2;
    std::vector<Scalar> f2;
    for (int k : order) {
      p2.push_back(pts[k]);
      f2.push_back(fs[k]);
    }
    pts.swap(p2);
    fs.swap(f2);
  };

  sort_vertices();
  for (res.iterations = 0; res.iterations < opt.max_iterations; ++res.iterations) {
    Scalar diameter = 0;
    for (Eigen::Index k = 1; k <= n; ++k) diameter = std::max(diameter, (pts[k] - pts[0]).cwiseAbs().maxCoeff());
    if (diameter < opt.x_tol && fs[n] - fs[0] < opt.f_tol) {
      res.converged = true;
      break;
    }

    Vec centroid = Vec::Zero(n);
    for (Eigen::Index k = 0; k < n; ++k) centroid += pts[k];
    centroid /= dim;

    const Vec xr = project(centroid + reflect * (centroid - pts[n]));
    const Scalar fr = eval(xr);
    if (fr < fs[0]) {
      const Vec xe = project(centroid + expand * (xr - centroid));
      const Scalar fe = eval(xe);
      if (fe < fr) {
        pts[n] = xe;
        fs[n] = fe;
      } else {
        pts[n] = xr;
        fs[n] = fr;
      }
    } else if (fr < fs[n - 1]) {
      pts[n] = xr;
      fs[n] = fr;
    } else {
      const bool outside = fr < fs[n];
      const Vec xc = outside ? project(centroid + contract * (xr - centroid))
                             : project(centroid + contract * (pts[n] - centroid));
      const Scalar fc = eval(xc);
      if (fc <= (outside ? fr : fs[n])) {
        pts[n] = xc;
        fs[n] = fc;
      } else {
        for (Eigen::Index k = 1; k <= n; ++k) {
          pts[k] = project(pts[0] + shrink * (pts[k] - pts[0]));
          fs[k] = eval(pts[k]);
        }
      }
    }
    sort_vertices();
  }
  res.x = pts[0];
  res.f = fs[0];
  return res;
}

}  // namespace nvdnp
