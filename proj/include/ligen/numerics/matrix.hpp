#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace ligen {

// Dense row-major matrix of doubles. Value type; copies are deep.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  bool all_finite() const noexcept;

  // Rows [first, first + count).
  Matrix row_block(std::size_t first, std::size_t count) const;
  // Columns [first, first + count).
  Matrix col_block(std::size_t first, std::size_t count) const;
  Matrix gather_rows(std::span<const std::size_t> indices) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// a * b^T. Counts rows(a) * cols(a) * rows(b) multiply-accumulates.
Matrix matmul_nt(const Matrix& a, const Matrix& b);
// a^T * b.
Matrix matmul_tn(const Matrix& a, const Matrix& b);
// a * b.
Matrix matmul_nn(const Matrix& a, const Matrix& b);

// [a | b], row counts must match.
Matrix hstack(const Matrix& a, const Matrix& b);

// Multiply-accumulate counter for the current thread, incremented by every
// matmul_* call. Used to check the analytic cost model against the engine.
std::uint64_t mac_count() noexcept;
void reset_mac_count() noexcept;

}  // namespace ligen
