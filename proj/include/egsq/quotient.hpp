#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "egsq/group_spec.hpp"
#include "egsq/tree_aut.hpp"
#include "egsq/words.hpp"

namespace egsq {

struct EnumerationLimits {
  std::size_t max_elements = 2'000'000;
  std::size_t max_memory_hint = 0;  // advisory only
};

/// Thrown when a closure computation outgrows its element cap.
class LimitExceeded : public std::runtime_error {
 public:
  LimitExceeded(std::size_t partial, std::size_t cap)
      : std::runtime_error("element cap " + std::to_string(cap) +
                           " exceeded (partial count " +
                           std::to_string(partial) + ")"),
        partial_count(partial) {}

  std::size_t partial_count;
};

/// The fully enumerated level-n quotient of the group a spec defines:
/// every element of the subgroup of the level-n sigma-power group generated
/// by the spec's generators, stored as packed portraits.
///
/// Elements are indexed in a canonical order: breadth-first layer, then
/// portrait encoding; the order does not depend on thread count.
class QuotientGroup {
 public:
  const GroupSpec& spec() const { return spec_; }
  std::uint32_t level() const { return level_; }
  std::size_t size() const { return count_; }

  std::span<const std::uint8_t> raw_element(std::size_t i) const;
  TreeAut element(std::size_t i) const;
  std::string element_encoding(std::size_t i) const;
  bool contains(const TreeAut& g) const;

  const std::vector<Word>& generator_words() const { return gen_words_; }
  std::size_t layer_count() const { return layer_offsets_.size() - 1; }
  double enumeration_seconds() const { return seconds_; }
  double elements_per_second() const;

  /// Largest element order; always a power of p. Exact full scan.
  std::uint64_t exponent(unsigned threads = 1) const;
  std::map<std::uint64_t, std::size_t> order_histogram(unsigned threads = 1) const;

  /// Canonical indices of the elements fixing all vertices of depth <= k.
  std::vector<std::size_t> stabilizer_slice(std::uint32_t k) const;

  /// Canonical element-file format: header "p=<p> n=<n>", then one label
  /// digit string per element in canonical order.
  void save_elements(std::ostream& out) const;
  static QuotientGroup from_element_file(const GroupSpec& spec,
                                         std::uint32_t level,
                                         std::istream& in);

  friend QuotientGroup enumerate_quotient(const GroupSpec& spec,
                                          std::uint32_t level,
                                          const EnumerationLimits& limits,
                                          unsigned threads);

 private:
  QuotientGroup(GroupSpec spec, std::uint32_t level);

  std::size_t record_size() const { return record_; }
  const std::uint8_t* record(std::uint32_t pool_index) const {
    return pool_.data() + static_cast<std::size_t>(pool_index) * record_;
  }
  void ensure_sorted_index() const;
  void ensure_histogram(unsigned threads) const;

  GroupSpec spec_;
  std::uint32_t level_;
  std::size_t record_;
  std::size_t count_ = 0;
  std::vector<std::uint8_t> pool_;           // count_ * record_ label bytes
  std::vector<std::uint32_t> order_;         // canonical order -> pool index
  std::vector<std::size_t> layer_offsets_;   // offsets into order_, per layer
  std::vector<Word> gen_words_;
  double seconds_ = 0.0;

  mutable std::vector<std::uint32_t> sorted_;  // lazily built, for contains()
  mutable std::map<std::uint64_t, std::size_t> histogram_;
  mutable bool histogram_ready_ = false;
};

/// Breadth-first closure of the spec's generators at a truncation depth.
/// Deterministic for fixed inputs regardless of thread count. Throws
/// LimitExceeded when the element cap is hit.
QuotientGroup enumerate_quotient(const GroupSpec& spec, std::uint32_t level,
                                 const EnumerationLimits& limits = {},
                                 unsigned threads = 1);

/// enumerate_quotient with a content-addressed element cache: results are
/// stored in cache_dir keyed by a hash of (spec, level) and reloaded on a
/// hit instead of being recomputed.
QuotientGroup enumerate_cached(const GroupSpec& spec, std::uint32_t level,
                               const EnumerationLimits& limits,
                               unsigned threads, const std::string& cache_dir);

/// Shortest word over the first-level stabilizer generators (the rooted
/// conjugates of the directed generators) whose masked first-level sections
/// equal the targets at depth level-1. Targets is a full p-tuple of depth
/// level-1; mask_components lists the 1-based positions that must match.
/// Words are searched by length, ties broken by generator order; returns
/// nothing once the whole stabilizer subgroup is exhausted.
std::optional<Word> find_preimage(const GroupSpec& spec, std::uint32_t level,
                                  const std::vector<TreeAut>& targets,
                                  const std::vector<std::uint32_t>& mask_components,
                                  const EnumerationLimits& limits = {});

}  // namespace egsq
