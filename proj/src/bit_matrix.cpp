#include "polar/bit_matrix.hpp"

#include <bit>
#include <utility>

#include "polar/error.hpp"

namespace polar {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::NotPolarizing: return "NotPolarizing";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::AssumptionUnmet: return "AssumptionUnmet";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::RequiresExactCdf: return "RequiresExactCdf";
    case ErrorCode::PrefixTooDeep: return "PrefixTooDeep";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::MismatchedLevel: return "MismatchedLevel";
    case ErrorCode::FrozenBitNonzero: return "FrozenBitNonzero";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

BitMatrix::BitMatrix(int ell, std::vector<std::uint32_t> rows) : ell_(ell), rows_(std::move(rows)) {
  if (ell < 1) throw PolarError(ErrorCode::InvalidArgument, "matrix size must be positive");
  if (ell > kMaxKernelSize) throw PolarError(ErrorCode::DimensionTooLarge, "matrix size above 16");
  if (static_cast<int>(rows_.size()) != ell) {
    throw PolarError(ErrorCode::InvalidArgument, "row count differs from matrix size");
  }
  const std::uint32_t mask = (ell == 32) ? ~0u : ((1u << ell) - 1u);
  for (auto r : rows_) {
    if (r & ~mask) throw PolarError(ErrorCode::InvalidArgument, "row has bits beyond the matrix size");
  }
}

BitMatrix BitMatrix::identity(int ell) {
  std::vector<std::uint32_t> rows(ell);
  for (int i = 0; i < ell; ++i) rows[i] = 1u << i;
  return BitMatrix(ell, std::move(rows));
}

BitMatrix BitMatrix::parse(std::string_view literal) {
  std::vector<std::uint32_t> rows;
  int width = -1;
  std::size_t start = 0;
  while (start <= literal.size()) {
    auto end = literal.find(';', start);
    if (end == std::string_view::npos) end = literal.size();
    auto token = literal.substr(start, end - start);
    if (token.empty()) throw PolarError(ErrorCode::InvalidArgument, "empty row in kernel literal");
    if (width < 0) width = static_cast<int>(token.size());
    if (static_cast<int>(token.size()) != width) {
      throw PolarError(ErrorCode::InvalidArgument, "kernel literal rows have different lengths");
    }
    if (width > kMaxKernelSize) throw PolarError(ErrorCode::DimensionTooLarge, "kernel literal wider than 16");
    std::uint32_t bits = 0;
    for (int k = 0; k < width; ++k) {
      if (token[k] == '1') {
        bits |= 1u << k;
      } else if (token[k] != '0') {
        throw PolarError(ErrorCode::InvalidArgument, "kernel literal may only contain 0, 1 and ';'");
      }
    }
    rows.push_back(bits);
    start = end + 1;
  }
  if (static_cast<int>(rows.size()) != width) {
    throw PolarError(ErrorCode::InvalidArgument, "kernel literal is not square");
  }
  return BitMatrix(width, std::move(rows));
}

int BitMatrix::row_weight(int i) const { return std::popcount(rows_.at(i)); }

std::uint32_t BitMatrix::column(int k) const {
  std::uint32_t c = 0;
  for (int i = 0; i < ell_; ++i) c |= ((rows_[i] >> k) & 1u) << i;
  return c;
}

BitMatrix BitMatrix::transpose() const {
  std::vector<std::uint32_t> rows(ell_);
  for (int k = 0; k < ell_; ++k) rows[k] = column(k);
  return BitMatrix(ell_, std::move(rows));
}

BitMatrix BitMatrix::operator*(const BitMatrix& rhs) const {
  if (ell_ != rhs.ell_) throw PolarError(ErrorCode::InvalidArgument, "matrix sizes differ");
  std::vector<std::uint32_t> rows(ell_, 0);
  for (int i = 0; i < ell_; ++i) {
    for (int j = 0; j < ell_; ++j) {
      if ((rows_[i] >> j) & 1u) rows[i] ^= rhs.rows_[j];
    }
  }
  return BitMatrix(ell_, std::move(rows));
}

std::string BitMatrix::to_literal() const {
  std::string out;
  for (int i = 0; i < ell_; ++i) {
    if (i) out.push_back(';');
    for (int k = 0; k < ell_; ++k) out.push_back(at(i, k) ? '1' : '0');
  }
  return out;
}

bool Gf2Basis::insert(std::uint32_t v) {
  v = reduce(v);
  if (v == 0) return false;
  pivot_rows_[std::bit_width(v) - 1] = v;
  ++rank_;
  return true;
}

std::uint32_t Gf2Basis::reduce(std::uint32_t v) const {
  for (int b = 31; b >= 0; --b) {
    if (((v >> b) & 1u) && pivot_rows_[b]) v ^= pivot_rows_[b];
  }
  return v;
}

int gf2_rank(std::vector<std::uint32_t> rows) {
  Gf2Basis basis;
  for (auto r : rows) basis.insert(r);
  return basis.rank();
}

BitMatrix gf2_invert(const BitMatrix& m) {
  const int ell = m.size();
  std::vector<std::uint32_t> a = m.rows();
  std::vector<std::uint32_t> inv = BitMatrix::identity(ell).rows();
  for (int col = 0; col < ell; ++col) {
    int pivot = -1;
    for (int r = col; r < ell; ++r) {
      if ((a[r] >> col) & 1u) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) throw PolarError(ErrorCode::SingularMatrix, "matrix " + m.to_literal() + " is singular");
    std::swap(a[col], a[pivot]);
    std::swap(inv[col], inv[pivot]);
    for (int r = 0; r < ell; ++r) {
      if (r != col && ((a[r] >> col) & 1u)) {
        a[r] ^= a[col];
        inv[r] ^= inv[col];
      }
    }
  }
  return BitMatrix(ell, std::move(inv));
}

}  // namespace polar
