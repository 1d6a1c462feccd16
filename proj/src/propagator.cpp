#include "nvdnp/propagator.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace nvdnp {

using std::numbers::pi;
using C = std::complex<double>;

namespace {

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) i = parent[i] = parent[parent[i]];
  return i;
}

}  // namespace

BlockPropagator::BlockPropagator(const Mat9& static_part, const Mat9& drive)
    : static_(static_part), drive_(drive) {
  std::vector<int> parent(9);
  std::iota(parent.begin(), parent.end(), 0);
  for (int i = 0; i < 9; ++i) {
    for (int j = i + 1; j < 9; ++j) {
      if (static_(i, j) != C{} || static_(j, i) != C{} || drive_(i, j) != C{} || drive_(j, i) != C{}) {
        parent[find_root(parent, i)] = find_root(parent, j);
      }
    }
  }
  std::vector<int> block_of(9, -1);
  for (int i = 0; i < 9; ++i) {
    const int r = find_root(parent, i);
    if (block_of[r] < 0) {
      block_of[r] = static_cast<int>(blocks_.size());
      blocks_.push_back({});
    }
    blocks_[block_of[r]].levels.push_back(i);
  }
  reset();
}

void BlockPropagator::reset() {
  for (Block& b : blocks_) {
    const auto n = static_cast<Eigen::Index>(b.levels.size());
    b.small.setIdentity();
    b.phase = 0.0;
    if (n > 2) b.large = Eigen::MatrixXcd::Identity(n, n);
  }
}

void BlockPropagator::step(double amplitude, double duration) {
  const double theta = 2.0 * pi * duration;
  for (Block& b : blocks_) {
    const auto& lv = b.levels;
    if (lv.size() == 1) {
      b.phase -= theta * (static_(lv[0], lv[0]) + amplitude * drive_(lv[0], lv[0])).real();
    } else if (lv.size() == 2) {
      const double h00 = (static_(lv[0], lv[0]) + amplitude * drive_(lv[0], lv[0])).real();
      const double h11 = (static_(lv[1], lv[1]) + amplitude * drive_(lv[1], lv[1])).real();
      const C h01 = static_(lv[0], lv[1]) + amplitude * drive_(lv[0], lv[1]);
      const double mean = 0.5 * (h00 + h11);
      const double half = 0.5 * (h00 - h11);
      const double w = std::sqrt(half * half + std::norm(h01));
      const double phi = theta * w;
      const double sinc = w > 0 ? std::sin(phi) / w : theta;
      const double cphi = std::cos(phi);
      const C off = C(0, -sinc) * h01;
      // SU(2) part only; the common phase is accumulated separately.
      Eigen::Matrix2cd r;
      r << C(cphi, -sinc * half), off, -std::conj(off), C(cphi, sinc * half);
      b.small = (r * b.small).eval();
      b.phase -= theta * mean;
    } else {
      const auto n = static_cast<Eigen::Index>(lv.size());
      Eigen::MatrixXcd h(n, n);
      for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index c = 0; c < n; ++c) h(a, c) = static_(lv[a], lv[c]) + amplitude * drive_(lv[a], lv[c]);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
      const Eigen::VectorXcd phases =
          (es.eigenvalues().cast<C>() * C(0, -theta)).array().exp().matrix();
      b.large = (es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint() * b.large).eval();
    }
  }
}

Mat9 BlockPropagator::unitary() const {
  Mat9 u = Mat9::Zero();
  for (const Block& b : blocks_) {
    const C ph = std::polar(1.0, b.phase);
    for (std::size_t a = 0; a < b.levels.size(); ++a)
      for (std::size_t c = 0; c < b.levels.size(); ++c)
        u(b.levels[a], b.levels[c]) = b.levels.size() > 2 ? b.large(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c))
                                                           : ph * b.small(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c));
  }
  return u;
}

Mat9 hermitian_propagator(const Mat9& h, double t) {
  BlockPropagator p(h, Mat9::Zero());
  p.step(0.0, t);
  return p.unitary();
}

}  // namespace nvdnp
