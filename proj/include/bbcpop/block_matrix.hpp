#pragma once

#include <Eigen/Dense>
#include <vector>

namespace bbcpop {

/// Element of the product space S^{A^1} x ... x S^{A^l}: one dense symmetric
/// matrix per clique block. Houses Z, X, Y1, Y2 and G(y0).
struct BlockSymMatrix {
  std::vector<Eigen::MatrixXd> blocks;

  BlockSymMatrix() = default;
  explicit BlockSymMatrix(const std::vector<int>& sizes) {
    blocks.reserve(sizes.size());
    for (int s : sizes) blocks.emplace_back(Eigen::MatrixXd::Zero(s, s));
  }

  static BlockSymMatrix zeros_like(const BlockSymMatrix& other) {
    BlockSymMatrix z;
    z.blocks.reserve(other.blocks.size());
    for (const auto& b : other.blocks) z.blocks.emplace_back(Eigen::MatrixXd::Zero(b.rows(), b.cols()));
    return z;
  }

  static BlockSymMatrix identity_like(const BlockSymMatrix& other) {
    BlockSymMatrix z;
    z.blocks.reserve(other.blocks.size());
    for (const auto& b : other.blocks) z.blocks.emplace_back(Eigen::MatrixXd::Identity(b.rows(), b.cols()));
    return z;
  }

  size_t block_count() const { return blocks.size(); }

  double inner(const BlockSymMatrix& other) const {
    double s = 0.0;
    for (size_t k = 0; k < blocks.size(); ++k) s += blocks[k].cwiseProduct(other.blocks[k]).sum();
    return s;
  }

  double squared_norm() const {
    double s = 0.0;
    for (const auto& b : blocks) s += b.squaredNorm();
    return s;
  }

  double norm() const;

  void symmetrize() {
    for (auto& b : blocks) b = ((b + b.transpose()) * 0.5).eval();
  }

  BlockSymMatrix& operator+=(const BlockSymMatrix& o) {
    for (size_t k = 0; k < blocks.size(); ++k) blocks[k] += o.blocks[k];
    return *this;
  }
  BlockSymMatrix& operator-=(const BlockSymMatrix& o) {
    for (size_t k = 0; k < blocks.size(); ++k) blocks[k] -= o.blocks[k];
    return *this;
  }
  BlockSymMatrix& operator*=(double s) {
    for (auto& b : blocks) b *= s;
    return *this;
  }

  friend BlockSymMatrix operator+(BlockSymMatrix a, const BlockSymMatrix& b) { return a += b; }
  friend BlockSymMatrix operator-(BlockSymMatrix a, const BlockSymMatrix& b) { return a -= b; }
  friend BlockSymMatrix operator*(double s, BlockSymMatrix a) { return a *= s; }
  friend BlockSymMatrix operator-(BlockSymMatrix a) { return a *= -1.0; }
};

inline double BlockSymMatrix::norm() const { return std::sqrt(squared_norm()); }

}  // namespace bbcpop
