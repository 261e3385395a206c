#include "ligen/numerics/matrix.hpp"

#include <Eigen/Core>

#include <cmath>
#include <string>

#include "ligen/common/errors.hpp"

namespace ligen {
namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMajor>;
using MutMap = Eigen::Map<RowMajor>;

thread_local std::uint64_t g_macs = 0;

ConstMap view(const Matrix& m) {
  return ConstMap(m.values().data(), static_cast<Eigen::Index>(m.rows()),
                  static_cast<Eigen::Index>(m.cols()));
}
MutMap view(Matrix& m) {
  return MutMap(m.values().data(), static_cast<Eigen::Index>(m.rows()),
                static_cast<Eigen::Index>(m.cols()));
}

[[noreturn]] void shape_error(const char* op, const Matrix& a, const Matrix& b) {
  throw ContractViolation(std::string(op) + ": incompatible shapes " +
                          std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                          " and " + std::to_string(b.rows()) + "x" +
                          std::to_string(b.cols()));
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_)
    throw ContractViolation("Matrix: data length " + std::to_string(data_.size()) +
                            " != " + std::to_string(rows_) + "x" + std::to_string(cols_));
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ContractViolation("Matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

bool Matrix::all_finite() const noexcept {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

Matrix Matrix::row_block(std::size_t first, std::size_t count) const {
  if (first + count > rows_) throw ContractViolation("row_block: out of range");
  return Matrix(count, cols_,
                std::vector<double>(data_.begin() + static_cast<std::ptrdiff_t>(first * cols_),
                                    data_.begin() + static_cast<std::ptrdiff_t>((first + count) * cols_)));
}

Matrix Matrix::col_block(std::size_t first, std::size_t count) const {
  if (first + count > cols_) throw ContractViolation("col_block: out of range");
  Matrix out(rows_, count);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < count; ++c) out(r, c) = (*this)(r, first + c);
  return out;
}

Matrix Matrix::gather_rows(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= rows_) throw ContractViolation("gather_rows: index out of range");
    auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) shape_error("matmul_nt", a, b);
  Matrix out(a.rows(), b.rows());
  if (!out.empty() && a.cols() > 0) view(out).noalias() = view(a) * view(b).transpose();
  g_macs += static_cast<std::uint64_t>(a.rows()) * a.cols() * b.rows();
  return out;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) shape_error("matmul_tn", a, b);
  Matrix out(a.cols(), b.cols());
  if (!out.empty() && a.rows() > 0) view(out).noalias() = view(a).transpose() * view(b);
  g_macs += static_cast<std::uint64_t>(a.cols()) * a.rows() * b.cols();
  return out;
}

Matrix matmul_nn(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) shape_error("matmul_nn", a, b);
  Matrix out(a.rows(), b.cols());
  if (!out.empty() && a.cols() > 0) view(out).noalias() = view(a) * view(b);
  g_macs += static_cast<std::uint64_t>(a.rows()) * a.cols() * b.cols();
  return out;
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) shape_error("hstack", a, b);
  Matrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto dst = out.row(r);
    std::copy(a.row(r).begin(), a.row(r).end(), dst.begin());
    std::copy(b.row(r).begin(), b.row(r).end(), dst.begin() + static_cast<std::ptrdiff_t>(a.cols()));
  }
  return out;
}

std::uint64_t mac_count() noexcept { return g_macs; }
void reset_mac_count() noexcept { g_macs = 0; }

}  // namespace ligen
