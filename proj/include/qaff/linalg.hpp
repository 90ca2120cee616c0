#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

namespace qaff {

// Dense matrix over an exact field, row-major.
template <class F>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int r, int c) : r_(r), c_(c), a_(static_cast<size_t>(r) * c) {}
  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = F(1);
    return m;
  }

  int rows() const { return r_; }
  int cols() const { return c_; }
  F& operator()(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
  const F& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }

  bool is_zero() const {
    for (const auto& x : a_)
      if (!x.is_zero()) return false;
    return true;
  }
  bool operator==(const Matrix& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.c_ != b.r_) throw std::invalid_argument("Matrix: shape mismatch in product");
    Matrix r(a.r_, b.c_);
    for (int i = 0; i < a.r_; ++i)
      for (int k = 0; k < a.c_; ++k) {
        const F& x = a(i, k);
        if (x.is_zero()) continue;
        for (int j = 0; j < b.c_; ++j)
          if (!b(k, j).is_zero()) r(i, j) += x * b(k, j);
      }
    return r;
  }
  Matrix scaled(const F& s) const {
    Matrix r = *this;
    for (auto& x : r.a_) x *= s;
    return r;
  }
  std::vector<F> apply(const std::vector<F>& v) const {
    std::vector<F> out(r_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j)
        if (!(*this)(i, j).is_zero() && !v[j].is_zero()) out[i] += (*this)(i, j) * v[j];
    return out;
  }
  Matrix transpose() const {
    Matrix t(c_, r_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

 private:
  void check_same(const Matrix& o) const {
    if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("Matrix: shape mismatch");
  }
  int r_ = 0, c_ = 0;
  std::vector<F> a_;
};

// Reduced row echelon form in place; returns pivot columns.
template <class F>
std::vector<int> rref(Matrix<F>& m) {
  std::vector<int> piv;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int p = -1;
    for (int i = row; i < m.rows(); ++i)
      if (!m(i, col).is_zero()) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != row)
      for (int j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
    F inv = m(row, col).inv();
    for (int j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      F f = m(i, col);
      for (int j = col; j < m.cols(); ++j)
        if (!m(row, j).is_zero()) m(i, j) -= f * m(row, j);
    }
    piv.push_back(col);
    ++row;
  }
  return piv;
}

template <class F>
int rank(Matrix<F> m) {
  return static_cast<int>(rref(m).size());
}

// Basis of the right kernel, one vector per free column.
template <class F>
std::vector<std::vector<F>> kernel(Matrix<F> m) {
  auto piv = rref(m);
  std::vector<bool> is_piv(m.cols(), false);
  for (int c : piv) is_piv[c] = true;
  std::vector<std::vector<F>> out;
  for (int f = 0; f < m.cols(); ++f) {
    if (is_piv[f]) continue;
    std::vector<F> v(m.cols());
    v[f] = F(1);
    for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m(static_cast<int>(r), f);
    out.push_back(std::move(v));
  }
  return out;
}

// Basis of the column space, taken from the pivot columns of the input.
template <class F>
std::vector<std::vector<F>> column_space(const Matrix<F>& m) {
  Matrix<F> w = m;
  auto piv = rref(w);
  std::vector<std::vector<F>> out;
  for (int c : piv) {
    std::vector<F> v(m.rows());
    for (int i = 0; i < m.rows(); ++i) v[i] = m(i, c);
    out.push_back(std::move(v));
  }
  return out;
}

template <class F>
F det(Matrix<F> m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("det: non-square matrix");
  F d(1);
  const int n = m.rows();
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i)
      if (!m(i, c).is_zero()) {
        p = i;
        break;
      }
    if (p < 0) return F();
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      d = -d;
    }
    d *= m(c, c);
    F inv = m(c, c).inv();
    for (int i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      F f = m(i, c) * inv;
      for (int j = c; j < n; ++j)
        if (!m(c, j).is_zero()) m(i, j) -= f * m(c, j);
    }
  }
  return d;
}

template <class F>
Matrix<F> inverse(const Matrix<F>& m) {
  const int n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("inverse: non-square matrix");
  Matrix<F> aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = F(1);
  }
  auto piv = rref(aug);
  if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1)
    throw std::domain_error("inverse: singular matrix");
  Matrix<F> r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = aug(i, n + j);
  return r;
}

// Solve m x = b; nothing if inconsistent. Free variables are set to zero.
template <class F>
std::optional<std::vector<F>> solve(const Matrix<F>& m, const std::vector<F>& b) {
  Matrix<F> aug(m.rows(), m.cols() + 1);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  auto piv = rref(aug);
  if (!piv.empty() && piv.back() == m.cols()) return std::nullopt;
  std::vector<F> x(m.cols());
  for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug(static_cast<int>(r), m.cols());
  return x;
}

}  // namespace qaff
