#pragma once

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qaff/linalg.hpp"

namespace qaff {

// Sparse matrix stored by columns; every stored entry is nonzero.
template <class F>
class LinearOp {
 public:
  using Column = std::vector<std::pair<int, F>>;  // sorted by row

  LinearOp() = default;
  LinearOp(int rows, int cols) : rows_(rows), cols_(cols) {}
  static LinearOp identity(int n) {
    LinearOp m(n, n);
    for (int i = 0; i < n; ++i) m.c_[i].push_back({i, F(1)});
    return m;
  }
  static LinearOp diagonal(const std::vector<F>& d) {
    LinearOp m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i)
      if (!d[i].is_zero()) m.c_[i].push_back({static_cast<int>(i), d[i]});
    return m;
  }
  static LinearOp from_dense(const Matrix<F>& a) {
    LinearOp m(a.rows(), a.cols());
    for (int j = 0; j < a.cols(); ++j)
      for (int i = 0; i < a.rows(); ++i)
        if (!a(i, j).is_zero()) m.c_[j].push_back({i, a(i, j)});
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const Column& col(int j) const { return c_.at(j); }

  F at(int i, int j) const {
    for (const auto& [r, v] : c_.at(j))
      if (r == i) return v;
    return F();
  }
  // Adds v to entry (i, j).
  void add(int i, int j, const F& v) {
    if (v.is_zero()) return;
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw std::out_of_range("LinearOp::add");
    auto& col = c_[j];
    auto it = col.begin();
    while (it != col.end() && it->first < i) ++it;
    if (it != col.end() && it->first == i) {
      it->second += v;
      if (it->second.is_zero()) col.erase(it);
    } else {
      col.insert(it, {i, v});
    }
  }

  bool is_zero() const {
    for (const auto& col : c_)
      if (!col.empty()) return false;
    return true;
  }
  size_t nnz() const {
    size_t n = 0;
    for (const auto& col : c_) n += col.size();
    return n;
  }
  bool operator==(const LinearOp& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && c_ == o.c_; }
  bool operator!=(const LinearOp& o) const { return !(*this == o); }

  LinearOp scaled(const F& s) const {
    if (s.is_zero()) return LinearOp(rows_, cols_);
    LinearOp r = *this;
    for (auto& col : r.c_)
      for (auto& e : col) e.second *= s;
    return r;
  }
  LinearOp operator-() const { return scaled(F(-1)); }
  friend LinearOp operator+(const LinearOp& a, const LinearOp& b) {
    a.check_same(b);
    LinearOp r(a.rows_, a.cols_);
    for (int j = 0; j < a.cols_; ++j) {
      const auto &x = a.c_[j], &y = b.c_[j];
      auto& out = r.c_[j];
      size_t p = 0, s = 0;
      while (p < x.size() || s < y.size()) {
        if (s == y.size() || (p < x.size() && x[p].first < y[s].first)) {
          out.push_back(x[p++]);
        } else if (p == x.size() || y[s].first < x[p].first) {
          out.push_back(y[s++]);
        } else {
          F v = x[p].second + y[s].second;
          if (!v.is_zero()) out.push_back({x[p].first, std::move(v)});
          ++p;
          ++s;
        }
      }
    }
    return r;
  }
  friend LinearOp operator-(const LinearOp& a, const LinearOp& b) { return a + (-b); }
  friend LinearOp operator*(const LinearOp& a, const LinearOp& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("LinearOp: shape mismatch in product");
    LinearOp r(a.rows_, b.cols_);
    for (int j = 0; j < b.cols_; ++j) {
      std::map<int, F> acc;
      for (const auto& [k, bv] : b.c_[j])
        for (const auto& [i, av] : a.c_[k]) acc[i] += av * bv;
      for (auto& [i, v] : acc)
        if (!v.is_zero()) r.c_[j].push_back({i, std::move(v)});
    }
    return r;
  }
  std::vector<F> apply(const std::vector<F>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("LinearOp::apply: size mismatch");
    std::vector<F> out(rows_);
    for (int j = 0; j < cols_; ++j) {
      if (v[j].is_zero()) continue;
      for (const auto& [i, a] : c_[j]) out[i] += a * v[j];
    }
    return out;
  }
  Matrix<F> dense() const {
    Matrix<F> m(rows_, cols_);
    for (int j = 0; j < cols_; ++j)
      for (const auto& [i, v] : c_[j]) m(i, j) = v;
    return m;
  }
  // Submatrix on the given row and column index lists.
  Matrix<F> dense(const std::vector<int>& rows, const std::vector<int>& cols) const {
    std::map<int, int> pos;
    for (size_t i = 0; i < rows.size(); ++i) pos[rows[i]] = static_cast<int>(i);
    Matrix<F> m(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j)
      for (const auto& [i, v] : c_[cols[j]]) {
        auto it = pos.find(i);
        if (it != pos.end()) m(it->second, static_cast<int>(j)) = v;
      }
    return m;
  }

 private:
  void check_same(const LinearOp& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("LinearOp: shape mismatch");
  }
  int rows_ = 0, cols_ = 0;
  std::vector<Column> c_ = std::vector<Column>(static_cast<size_t>(cols_));
};

template <class F>
LinearOp<F> commutator(const LinearOp<F>& a, const LinearOp<F>& b) {
  return a * b - b * a;
}

}  // namespace qaff
