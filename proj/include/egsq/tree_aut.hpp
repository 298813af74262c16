#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace egsq {

/// A vertex of the p-adic tree: digits in 1..p, root = empty sequence.
using Vertex = std::vector<std::uint32_t>;

namespace portrait {

/// Number of labelled vertices (depth < n): 1 + p + ... + p^{n-1}.
std::size_t label_count(std::uint32_t p, std::uint32_t depth);

/// img[u] = flat index of f(u) for every vertex u of depth < depth.
void vertex_images(std::uint32_t p, std::uint32_t depth, const std::uint8_t* f,
                   std::uint32_t* img);

/// out = f then g. out may not alias f or g; img_scratch holds label_count slots.
void compose(std::uint32_t p, std::uint32_t depth, const std::uint8_t* f,
             const std::uint8_t* g, std::uint8_t* out,
             std::uint32_t* img_scratch);

void inverse(std::uint32_t p, std::uint32_t depth, const std::uint8_t* f,
             std::uint8_t* out, std::uint32_t* img_scratch);

bool is_identity(const std::uint8_t* f, std::size_t count);

/// Order of f in the depth-n quotient; always a power of p, found by the
/// p-th power ladder. Scratch buffers must each hold label_count slots.
std::uint64_t order(std::uint32_t p, std::uint32_t depth, const std::uint8_t* f,
                    std::uint8_t* tmp_a, std::uint8_t* tmp_b,
                    std::uint8_t* tmp_c, std::uint32_t* img_scratch);

}  // namespace portrait

/// An automorphism of the depth-n truncated p-adic tree whose labels are all
/// powers of the p-cycle (1 2 ... p). The portrait is stored flat in level
/// order as exponents in [0, p); a label e sends digit x to ((x-1+e) mod p)+1.
///
/// Values are immutable after construction; all operations return new values.
class TreeAut {
 public:
  /// Identity automorphism of the given shape. depth >= 1, p prime.
  TreeAut(std::uint32_t p, std::uint32_t depth);

  static TreeAut identity(std::uint32_t p, std::uint32_t depth) {
    return TreeAut(p, depth);
  }

  /// Root label sigma^exponent, every other label trivial.
  static TreeAut rooted(std::uint32_t p, std::uint32_t depth,
                        long long exponent = 1);

  /// Rebuild from raw label exponents in level order.
  static TreeAut from_labels(std::uint32_t p, std::uint32_t depth,
                             std::vector<std::uint8_t> labels);

  std::uint32_t prime() const { return p_; }
  std::uint32_t depth() const { return n_; }
  std::size_t label_count() const { return labels_.size(); }
  const std::vector<std::uint8_t>& labels() const { return labels_; }

  /// Label exponent at a vertex of depth < n.
  std::uint8_t label(const Vertex& u) const;

  /// Image of a vertex of depth <= n.
  Vertex apply(const Vertex& u) const;

  /// this first, then g.
  TreeAut compose(const TreeAut& g) const;
  TreeAut inverse() const;
  TreeAut pow(long long k) const;

  /// Least power of p that kills the element in this quotient.
  std::uint64_t order() const;

  bool is_identity() const;

  /// True iff all labels at depth < k vanish (the element fixes level k).
  bool in_level_stabilizer(std::uint32_t k) const;

  /// Subtree automorphism at u, shifted to the root; depth(u) <= n-1.
  TreeAut section(const Vertex& u) const;

  /// The p first-level sections; requires a trivial root label.
  std::vector<TreeAut> sections() const;

  /// Assemble a depth-(m+1) element from a root exponent and p depth-m parts.
  static TreeAut from_sections(long long root_exponent,
                               const std::vector<TreeAut>& parts);

  /// Truncation to depth m <= n.
  TreeAut restrict_depth(std::uint32_t m) const;

  /// Level-order label digits, most-shallow first; injective for fixed shape.
  std::string encode() const;
  static TreeAut decode(std::uint32_t p, std::uint32_t depth,
                        std::string_view digits);

  friend bool operator==(const TreeAut&, const TreeAut&) = default;

  friend TreeAut operator*(const TreeAut& f, const TreeAut& g) {
    return f.compose(g);
  }

 private:
  std::uint32_t p_;
  std::uint32_t n_;
  std::vector<std::uint8_t> labels_;
};

/// h^{-1} g h (apply h^{-1} first).
TreeAut conjugate(const TreeAut& g, const TreeAut& h);

/// g^{-1} h^{-1} g h.
TreeAut commutator(const TreeAut& g, const TreeAut& h);

}  // namespace egsq
