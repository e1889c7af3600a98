#pragma once

#include <Eigen/Dense>

#include <vector>

namespace impulse_geo {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vector = VectorX<double>;
using Matrix = MatrixX<double>;

// Chart coordinates (x^1, ..., x^n) of a point of N.
using ChartPoint = Vector;

struct TangentVector {
  ChartPoint base;
  Vector comps;
};

// Gamma^k_ij stored as one symmetric n x n block per upper index k.
class Christoffel {
 public:
  Christoffel() = default;
  explicit Christoffel(int n) : blocks_(n, Matrix::Zero(n, n)) {}

  int dim() const { return static_cast<int>(blocks_.size()); }

  double operator()(int k, int i, int j) const { return blocks_[k](i, j); }
  double& operator()(int k, int i, int j) { return blocks_[k](i, j); }

  const Matrix& block(int k) const { return blocks_[k]; }
  Matrix& block(int k) { return blocks_[k]; }

  // Gamma^k_ij a^i b^j
  template <typename DerivedA, typename DerivedB>
  Vector contract(const Eigen::MatrixBase<DerivedA>& a,
                  const Eigen::MatrixBase<DerivedB>& b) const {
    Vector out(dim());
    for (int k = 0; k < dim(); ++k) out[k] = a.dot(blocks_[k] * b);
    return out;
  }

  template <typename Derived>
  Vector contract(const Eigen::MatrixBase<Derived>& a) const {
    return contract(a, a);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& b : blocks_) m = std::max(m, b.cwiseAbs().maxCoeff());
    return m;
  }

 private:
  std::vector<Matrix> blocks_;
};

}  // namespace impulse_geo
