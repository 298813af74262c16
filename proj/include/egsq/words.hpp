#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace egsq {

/// One generator factor of a word. Three kinds:
///   "a"        - the rooted generator
///   "d<j>.<m>" - the m-th listed directed generator along path j (1-based)
///   "c<i>"     - the i-th rooted-conjugate of d<p>.1 (single-vector sugar)
struct GenToken {
  enum class Kind { rooted, directed, conjugated };

  Kind kind = Kind::rooted;
  std::uint32_t path = 0;      // j for directed tokens
  std::uint32_t index = 0;     // m for directed tokens
  std::uint32_t shift = 0;     // i for conjugated tokens
  long long exponent = 1;

  bool operator==(const GenToken&) const = default;
};

/// A sequence of generator powers, multiplied left to right.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<GenToken> tokens) : tokens_(std::move(tokens)) {}

  /// Grammar: whitespace-separated tokens "a", "d<j>.<m>", "c<i>", each with
  /// an optional "^<int>" suffix (negative exponents allowed).
  static Word parse(std::string_view text);

  static GenToken rooted(long long exponent = 1);
  static GenToken directed(std::uint32_t path, std::uint32_t index,
                           long long exponent = 1);
  static GenToken conjugated(std::uint32_t shift, long long exponent = 1);

  const std::vector<GenToken>& tokens() const { return tokens_; }
  bool empty() const { return tokens_.empty(); }

  void append(GenToken t) { tokens_.push_back(t); }
  void append(const Word& w);

  std::string str() const;

  bool operator==(const Word&) const = default;

 private:
  std::vector<GenToken> tokens_;
};

}  // namespace egsq
