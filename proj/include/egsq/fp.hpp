#pragma once

#include <cstdint>
#include <vector>

namespace egsq {

bool is_prime(std::uint32_t p);

/// A residue mod a prime p, kept in [0, p).
class FpScalar {
 public:
  FpScalar(std::uint32_t p, long long value);

  std::uint32_t value() const { return value_; }
  std::uint32_t modulus() const { return p_; }

  FpScalar operator+(const FpScalar& other) const;
  FpScalar operator-(const FpScalar& other) const;
  FpScalar operator*(const FpScalar& other) const;
  bool operator==(const FpScalar&) const = default;

 private:
  std::uint32_t p_;
  std::uint32_t value_;
};

/// A vector over F_p; entries are reduced mod p at construction.
class FpVector {
 public:
  FpVector(std::uint32_t p, const std::vector<long long>& entries);
  static FpVector from_reduced(std::uint32_t p,
                               std::vector<std::uint32_t> entries);

  std::uint32_t modulus() const { return p_; }
  std::size_t size() const { return entries_.size(); }
  std::uint32_t operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<std::uint32_t>& entries() const { return entries_; }

  std::uint32_t coordinate_sum() const;
  bool is_zero() const;

  bool operator==(const FpVector&) const = default;
  bool operator<(const FpVector& other) const;

 private:
  std::uint32_t p_;
  std::vector<std::uint32_t> entries_;
};

using FpMatrix = std::vector<FpVector>;

/// Row echelon form by Gaussian elimination with first-nonzero pivoting.
/// Rows are normalized to pivot 1 and zero rows dropped; the result is
/// deterministic for a given row order.
FpMatrix fp_echelon(FpMatrix rows);

/// Dimension of the row span. Rows must share modulus and length.
std::size_t fp_rank(const FpMatrix& rows);

/// True iff the coordinates sum to zero; v must have length p-1.
bool in_sum_zero_hyperplane(const FpVector& v);

/// All length-p vectors obtained from each input vector by inserting a zero
/// at position j and wrapping the remaining entries cyclically around it,
/// for j = 1..p. Duplicates removed; order is input order, then j ascending.
std::vector<FpVector> bar_closure(const std::vector<FpVector>& vectors,
                                  std::uint32_t p);

}  // namespace egsq
