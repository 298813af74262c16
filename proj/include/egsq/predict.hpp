#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "egsq/group_spec.hpp"
#include "egsq/quotient.hpp"
#include "egsq/words.hpp"

namespace egsq {

/// Closed-form exponent of the level-n quotient: p^floor((n+1)/2) for
/// periodic specs, p^n otherwise.
std::uint64_t predicted_exponent(const GroupSpec& spec, std::uint32_t level);

/// Closed-form order of the level-2 quotient: p^(t+1), where t is the rank
/// of the span of the bar closure of all listed defining vectors.
std::uint64_t predicted_level2_order(const GroupSpec& spec);

/// For a non-periodic single-vector spec: the word a^x c_j, where x is the
/// coordinate sum of the defining vector. Its order in the level-n quotient
/// is exactly p^n for every n.
Word deep_witness_word(const GroupSpec& spec, std::uint32_t conjugate_index);

/// For a periodic single-vector spec with first entry 1: a word over the
/// c-generators whose first-level sections are (h, a^r, a^{r e_2}, ...,
/// a^{r e_{p-2}}, *), with r the factor count of h. Lifts h one level up.
Word first_section_lift(const GroupSpec& spec, const Word& h);

/// For a single-vector spec with symmetric defining vector (e_i = e_{p-i})
/// and first entry 1: prepends copies of c0^{p-1} c2 to h so that the factor
/// count becomes congruent mod p to the subscript sum, without changing the
/// first section at any truncation depth.
Word rebalance_stabilizer_word(const GroupSpec& spec, const Word& h);

struct LevelRecord {
  std::uint32_t level = 0;
  std::uint64_t size = 0;
  std::uint64_t exponent = 0;
  std::uint64_t predicted_exponent = 0;
  bool exponent_match = false;
  std::optional<std::uint64_t> predicted_size;  // level 2 only
  std::optional<bool> size_match;
};

struct WitnessLevelRecord {
  std::uint32_t level = 0;
  std::uint64_t order = 0;
  std::uint64_t predicted = 0;
  bool match = false;
};

struct WitnessRecord {
  std::string word;
  std::vector<WitnessLevelRecord> levels;
};

/// Brute-force measurements against the closed forms, per level, plus
/// direct-powering witness orders where the family admits them.
struct VerificationReport {
  std::string spec_json;
  std::uint32_t prime = 0;
  std::string family;
  bool periodic = false;
  std::optional<std::uint32_t> defining_sum;
  std::uint32_t max_level = 0;

  std::vector<LevelRecord> levels;
  std::vector<WitnessRecord> witnesses;
  bool monotone = true;
  bool submultiplicative = true;
  bool limit_exceeded = false;
  std::size_t partial_count = 0;

  bool pass() const;
  std::string to_json() const;
  static VerificationReport from_json(const std::string& text);
  std::string to_text() const;
};

struct VerifyOptions {
  std::uint32_t max_level = 3;
  /// Depth for direct-powering witness orders; 0 picks a per-prime default
  /// (16 for p=2, 8 for p=3, 5 for p=5), never below max_level.
  std::uint32_t witness_depth = 0;
  std::uint32_t witness_conjugate = 0;
  EnumerationLimits limits;
  unsigned threads = 1;
  std::optional<std::string> cache_dir;
  /// Test hook: skew every predicted exponent by a factor p to exercise the
  /// mismatch reporting path.
  bool corrupt_predictions = false;
};

/// Enumerates the quotients up to max_level, measures exponents (and the
/// level-2 order), compares with the closed forms, and measures witness
/// orders for non-periodic single-vector specs. A hit element cap stops the
/// level scan and is recorded in the report instead of escaping.
VerificationReport verify_exponents(const GroupSpec& spec,
                                    const VerifyOptions& options = {});

/// True iff exponent(n+k) <= exponent(n) * exponent(k) for every pair of
/// measured levels with n+k in range.
bool check_submultiplicativity(const std::vector<LevelRecord>& levels);

}  // namespace egsq
