#include "gnorm_oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace bvg::testing {

double gnorm_oracle(const Image& v) {
  const std::size_t w = v.width(), hgt = v.height(), n = v.size();
  // Unknowns: g1 at pixels with x < w - 1, g2 at pixels with y < h - 1.
  std::vector<int> i1(n, -1), i2(n, -1);
  int m = 0;
  for (std::size_t y = 0; y < hgt; ++y)
    for (std::size_t x = 0; x + 1 < w; ++x) i1[y * w + x] = m++;
  for (std::size_t y = 0; y + 1 < hgt; ++y)
    for (std::size_t x = 0; x < w; ++x) i2[y * w + x] = m++;

  // Raw divergence: g1(x) - g1(x - 1) + g2(y) - g2(y - 1).
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), m);
  Eigen::VectorXd b(static_cast<Eigen::Index>(n));
  for (std::size_t y = 0; y < hgt; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const std::size_t k = y * w + x;
      const auto r = static_cast<Eigen::Index>(k);
      if (i1[k] >= 0) a(r, i1[k]) += 1.0;
      if (x > 0) a(r, i1[k - 1]) -= 1.0;
      if (i2[k] >= 0) a(r, i2[k]) += 1.0;
      if (y > 0) a(r, i2[k - w]) -= 1.0;
      b(r) = v[k] * v.spacing();
    }
  }
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  const Eigen::VectorXd z0 = cod.solve(b);
  if ((a * z0 - b).norm() > 1e-9 * (1.0 + b.norm())) {
    throw std::invalid_argument("gnorm_oracle: image does not have zero mean");
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  const Eigen::MatrixXd basis = lu.kernel();
  const Eigen::Index d = basis.cols();

  // Per pixel, g_k = c_k + B_k y as a 2-vector.
  std::vector<Eigen::Vector2d> c(n);
  std::vector<Eigen::MatrixXd> bk(n, Eigen::MatrixXd::Zero(2, d));
  for (std::size_t k = 0; k < n; ++k) {
    c[k].setZero();
    if (i1[k] >= 0) {
      c[k](0) = z0(i1[k]);
      bk[k].row(0) = basis.row(i1[k]);
    }
    if (i2[k] >= 0) {
      c[k](1) = z0(i2[k]);
      bk[k].row(1) = basis.row(i2[k]);
    }
  }

  // Variables x = (y, t); minimise s t - sum log(t^2 - |g_k|^2).
  Eigen::VectorXd x = Eigen::VectorXd::Zero(d + 1);
  double start = 0.0;
  for (std::size_t k = 0; k < n; ++k) start = std::max(start, c[k].norm());
  x(d) = 2.0 * start + 1e-3;

  auto field = [&](const Eigen::VectorXd& xx, std::size_t k) -> Eigen::Vector2d {
    return c[k] + bk[k] * xx.head(d);
  };
  auto barrier = [&](const Eigen::VectorXd& xx, double s) {
    double f = s * xx(d);
    for (std::size_t k = 0; k < n; ++k) {
      const double ck = xx(d) * xx(d) - field(xx, k).squaredNorm();
      if (ck <= 0.0 || xx(d) <= 0.0) return std::numeric_limits<double>::infinity();
      f -= std::log(ck);
    }
    return f;
  };

  const double constraints = static_cast<double>(n);
  for (double s = 1.0; constraints / s > 1e-11; s *= 8.0) {
    for (int it = 0; it < 200; ++it) {
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(d + 1);
      Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(d + 1, d + 1);
      grad(d) = s;
      for (std::size_t k = 0; k < n; ++k) {
        const Eigen::Vector2d gk = field(x, k);
        const double ck = x(d) * x(d) - gk.squaredNorm();
        Eigen::VectorXd dc(d + 1);
        dc.head(d) = -2.0 * bk[k].transpose() * gk;
        dc(d) = 2.0 * x(d);
        grad -= dc / ck;
        hess += dc * dc.transpose() / (ck * ck);
        hess.topLeftCorner(d, d) += 2.0 * bk[k].transpose() * bk[k] / ck;
        hess(d, d) -= 2.0 / ck;
      }
      const Eigen::VectorXd step = -hess.ldlt().solve(grad);
      const double decrement = -grad.dot(step);
      if (decrement / 2.0 < 1e-12) break;
      if (!step.allFinite()) break;
      double alpha = 1.0;
      const double f0 = barrier(x, s);
      while (!(barrier(x + alpha * step, s) <= f0 - 0.25 * alpha * decrement)) {
        alpha *= 0.5;
        if (alpha < 1e-14) break;
      }
      if (alpha < 1e-14) break;
      x += alpha * step;
    }
  }
  double best = 0.0;
  for (std::size_t k = 0; k < n; ++k) best = std::max(best, field(x, k).norm());
  return best;
}

}  // namespace bvg::testing
