#pragma once

#include <cmath>
#include <vector>

namespace hypersurf {

// Dense per-point tensors of dimension n. Storage is row-major in the index
// order of the accessor.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n, 0.0) {}

  int dim() const { return n_; }
  double& operator()(int a, int b, int c) { return data_[(a * n_ + b) * n_ + c]; }
  double operator()(int a, int b, int c) const { return data_[(a * n_ + b) * n_ + c]; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::size_t size() const { return data_.size(); }

 private:
  int n_ = 0;
  std::vector<double> data_;
};

class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}

  int dim() const { return n_; }
  double& operator()(int a, int b, int c, int d) { return data_[((a * n_ + b) * n_ + c) * n_ + d]; }
  double operator()(int a, int b, int c, int d) const {
    return data_[((a * n_ + b) * n_ + c) * n_ + d];
  }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::size_t size() const { return data_.size(); }

  // Plain Frobenius norm of the stored components.
  double norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
  }

  Tensor4& operator+=(const Tensor4& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Tensor4& operator-=(const Tensor4& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Tensor4& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }
  friend Tensor4 operator+(Tensor4 a, const Tensor4& b) { return a += b; }
  friend Tensor4 operator-(Tensor4 a, const Tensor4& b) { return a -= b; }
  friend Tensor4 operator*(double s, Tensor4 a) { return a *= s; }

 private:
  int n_ = 0;
  std::vector<double> data_;
};

}  // namespace hypersurf
