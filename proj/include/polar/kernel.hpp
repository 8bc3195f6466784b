#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polar/bit_matrix.hpp"

namespace polar {

/// Column order that makes `g` upper triangular, if one exists. Entry k is the
/// original column placed at position k. Returns nullopt for matrices that no
/// column permutation triangularizes (including singular ones).
std::optional<std::vector<int>> triangular_column_order(const BitMatrix& g);

/// Invertible and not upper triangular under any column permutation.
bool is_polarizing(const BitMatrix& g);

/// D_i = Hamming distance from row i to the span of rows i+1..ell-1.
/// Throws SingularMatrix for singular input.
std::vector<int> partial_distances(const BitMatrix& g);

/// Mean and population variance of log_ell(values[i]).
struct LogMoments {
  double mean = 0.0;
  double variance = 0.0;
};
LogMoments log_moments(const std::vector<int>& values, int ell);

struct KernelProfile {
  BitMatrix kernel;
  std::vector<int> partial_distances;
  double exponent = 0.0;         // E(G), log base ell
  double second_exponent = 0.0;  // V(G)
  std::vector<int> row_weights;
  double weight_exponent = 0.0;
  double weight_second_exponent = 0.0;
  BitMatrix derived_h;  // inverse of [g_{ell-1}^T, ..., g_0^T]
  std::vector<int> h_partial_distances;
  double h_exponent = 0.0;
  double h_second_exponent = 0.0;
  /// D_i(H) <= D_{i-1}(H) in the row order of H.
  bool h_monotone = false;
  /// Same condition with the rows of H read in reverse order.
  bool h_monotone_reversed = false;
  double c3_constant = 0.0;  // 2^ell

  int ell() const noexcept { return kernel.size(); }
};

/// Throws NotPolarizing unless is_polarizing(g).
KernelProfile kernel_profile(const BitMatrix& g);

/// JSON object with every profile field; reals use 17 significant digits.
std::string profile_to_json(const KernelProfile& p);

}  // namespace polar
