#include "egsq/fp.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace egsq {

bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

namespace {

std::uint32_t checked_prime(std::uint32_t p) {
  if (!is_prime(p))
    throw std::invalid_argument("modulus " + std::to_string(p) +
                                " is not prime");
  return p;
}

std::uint32_t reduce(std::uint32_t p, long long v) {
  long long r = v % static_cast<long long>(p);
  if (r < 0) r += p;
  return static_cast<std::uint32_t>(r);
}

}  // namespace

FpScalar::FpScalar(std::uint32_t p, long long value)
    : p_(checked_prime(p)), value_(reduce(p, value)) {}

FpScalar FpScalar::operator+(const FpScalar& other) const {
  if (p_ != other.p_) throw std::invalid_argument("mixed moduli");
  return FpScalar(p_, static_cast<long long>(value_) + other.value_);
}

FpScalar FpScalar::operator-(const FpScalar& other) const {
  if (p_ != other.p_) throw std::invalid_argument("mixed moduli");
  return FpScalar(p_, static_cast<long long>(value_) - other.value_);
}

FpScalar FpScalar::operator*(const FpScalar& other) const {
  if (p_ != other.p_) throw std::invalid_argument("mixed moduli");
  return FpScalar(p_, static_cast<long long>(value_) * other.value_);
}

FpVector::FpVector(std::uint32_t p, const std::vector<long long>& entries)
    : p_(checked_prime(p)) {
  entries_.reserve(entries.size());
  for (long long v : entries) entries_.push_back(reduce(p, v));
}

FpVector FpVector::from_reduced(std::uint32_t p,
                                std::vector<std::uint32_t> entries) {
  FpVector out(p, std::vector<long long>{});
  for (std::uint32_t v : entries)
    if (v >= p) throw std::invalid_argument("entry not reduced mod p");
  out.entries_ = std::move(entries);
  return out;
}

std::uint32_t FpVector::coordinate_sum() const {
  std::uint64_t s = 0;
  for (std::uint32_t v : entries_) s += v;
  return static_cast<std::uint32_t>(s % p_);
}

bool FpVector::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](std::uint32_t v) { return v == 0; });
}

bool FpVector::operator<(const FpVector& other) const {
  return entries_ < other.entries_;
}

namespace {

// multiplicative inverse mod p by Fermat; p is tiny
std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::uint64_t r = 1, b = a % p, e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

void check_uniform(const FpMatrix& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].modulus() != rows[0].modulus())
      throw std::invalid_argument("rows with mixed moduli");
    if (rows[i].size() != rows[0].size())
      throw std::invalid_argument("rows with mixed lengths");
  }
}

}  // namespace

FpMatrix fp_echelon(FpMatrix rows) {
  check_uniform(rows);
  if (rows.empty()) return rows;
  const std::uint32_t p = rows[0].modulus();
  const std::size_t m = rows[0].size();

  std::vector<std::vector<std::uint32_t>> a;
  a.reserve(rows.size());
  for (const auto& r : rows) a.push_back(r.entries());

  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < m && pivot_row < a.size(); ++col) {
    std::size_t sel = pivot_row;
    while (sel < a.size() && a[sel][col] == 0) ++sel;
    if (sel == a.size()) continue;
    std::swap(a[pivot_row], a[sel]);
    const std::uint32_t inv = inv_mod(a[pivot_row][col], p);
    for (std::size_t j = col; j < m; ++j)
      a[pivot_row][j] =
          static_cast<std::uint32_t>(static_cast<std::uint64_t>(a[pivot_row][j]) * inv % p);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == pivot_row || a[i][col] == 0) continue;
      const std::uint64_t factor = a[i][col];
      for (std::size_t j = col; j < m; ++j) {
        std::uint64_t v = a[i][j] + (p - 1ULL) * factor % p * a[pivot_row][j];
        a[i][j] = static_cast<std::uint32_t>(v % p);
      }
    }
    ++pivot_row;
  }

  FpMatrix out;
  out.reserve(pivot_row);
  for (std::size_t i = 0; i < pivot_row; ++i)
    out.push_back(FpVector::from_reduced(p, std::move(a[i])));
  return out;
}

std::size_t fp_rank(const FpMatrix& rows) { return fp_echelon(rows).size(); }

bool in_sum_zero_hyperplane(const FpVector& v) {
  if (v.size() + 1 != v.modulus())
    throw std::invalid_argument("vector length must be p-1");
  return v.coordinate_sum() == 0;
}

std::vector<FpVector> bar_closure(const std::vector<FpVector>& vectors,
                                  std::uint32_t p) {
  checked_prime(p);
  std::vector<FpVector> out;
  for (const auto& e : vectors) {
    if (e.modulus() != p || e.size() + 1 != p)
      throw std::invalid_argument("bar_closure expects vectors of length p-1");
    for (std::uint32_t j = 1; j <= p; ++j) {
      std::vector<std::uint32_t> w(p, 0);
      for (std::uint32_t i = 1; i <= p; ++i) {
        if (i == j) continue;
        w[i - 1] = e[(i + p - j) % p - 1];
      }
      FpVector candidate = FpVector::from_reduced(p, std::move(w));
      if (std::find(out.begin(), out.end(), candidate) == out.end())
        out.push_back(std::move(candidate));
    }
  }
  return out;
}

}  // namespace egsq
