#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace polar {

inline constexpr int kMaxKernelSize = 16;

/// Square binary matrix of size ell <= 16. Row i is a bitmask whose bit k is
/// the entry in column k.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(int ell, std::vector<std::uint32_t> rows);

  static BitMatrix identity(int ell);
  /// Parses the literal form "10;11": rows separated by ';', the k-th
  /// character of a row is column k.
  static BitMatrix parse(std::string_view literal);

  int size() const noexcept { return ell_; }
  std::uint32_t row(int i) const { return rows_.at(i); }
  const std::vector<std::uint32_t>& rows() const noexcept { return rows_; }
  bool at(int i, int k) const { return (rows_.at(i) >> k) & 1u; }
  int row_weight(int i) const;
  std::uint32_t column(int k) const;

  BitMatrix transpose() const;
  BitMatrix operator*(const BitMatrix& rhs) const;
  bool operator==(const BitMatrix&) const = default;

  std::string to_literal() const;

 private:
  int ell_ = 0;
  std::vector<std::uint32_t> rows_;
};

int gf2_rank(std::vector<std::uint32_t> rows);
/// Throws SingularMatrix when the rank is below ell.
BitMatrix gf2_invert(const BitMatrix& m);

/// Reduces `v` against an echelon basis whose pivots are the highest set bits.
class Gf2Basis {
 public:
  /// Returns false when v was already in the span.
  bool insert(std::uint32_t v);
  std::uint32_t reduce(std::uint32_t v) const;
  bool contains(std::uint32_t v) const { return reduce(v) == 0; }
  int rank() const noexcept { return rank_; }

 private:
  std::uint32_t pivot_rows_[32] = {};
  int rank_ = 0;
};

}  // namespace polar
