#pragma once

#include <vector>

#include "nvdnp/types.hpp"

namespace nvdnp {

// Accumulates U <- exp(-i 2 pi (H_s + a V) t) U for a fixed static part H_s
// and drive operator V (both Hermitian, MHz; t in us).
//
// The coupling graph of H_s + V splits the 9 levels into invariant blocks
// that every step shares, so each factor is exponentiated block by block:
// 1x1 blocks are phases, 2x2 blocks use the closed-form SU(2) rotation and
// larger blocks fall back to a Hermitian eigendecomposition.
class BlockPropagator {
 public:
  BlockPropagator(const Mat9& static_part, const Mat9& drive);

  void step(double amplitude, double duration);
  void reset();

  Mat9 unitary() const;
  int block_count() const { return static_cast<int>(blocks_.size()); }

 private:
  struct Block {
    std::vector<int> levels;
    Eigen::Matrix2cd small;  // blocks of size 1 or 2
    Eigen::MatrixXcd large;  // blocks of size > 2
    double phase = 0;        // accumulated common phase of a size 1 or 2 block
  };

  Mat9 static_;
  Mat9 drive_;
  std::vector<Block> blocks_;
};

// exp(-i 2 pi H t) for Hermitian H.
Mat9 hermitian_propagator(const Mat9& h, double t);

}  // namespace nvdnp
