#include "egsq/tree_aut.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>
#include <string>

#include "egsq/fp.hpp"

namespace egsq {

namespace portrait {

std::size_t label_count(std::uint32_t p, std::uint32_t depth) {
  std::size_t total = 0, level = 1;
  for (std::uint32_t k = 0; k < depth; ++k) {
    total += level;
    level *= p;
  }
  return total;
}

void vertex_images(std::uint32_t p, std::uint32_t depth, const std::uint8_t* f,
                   std::uint32_t* img) {
  img[0] = 0;
  std::size_t off = 0, level_size = 1;
  for (std::uint32_t k = 0; k + 1 < depth; ++k) {
    const std::size_t off_next = off + level_size;
    for (std::size_t u = off; u < off + level_size; ++u) {
      const std::size_t base_src = off_next + (u - off) * p;
      const std::size_t base_dst = off_next + (img[u] - off) * p;
      const std::uint32_t e = f[u];
      for (std::uint32_t x = 0; x < p; ++x) {
        std::uint32_t y = x + e;
        if (y >= p) y -= p;
        img[base_src + x] = static_cast<std::uint32_t>(base_dst + y);
      }
    }
    off = off_next;
    level_size *= p;
  }
}

void compose(std::uint32_t p, std::uint32_t depth, const std::uint8_t* f,
             const std::uint8_t* g, std::uint8_t* out,
             std::uint32_t* img_scratch) {
  vertex_images(p, depth, f, img_scratch);
  const std::size_t count = label_count(p, depth);
  for (std::size_t u = 0; u < count; ++u) {
    std::uint32_t v = f[u] + g[img_scratch[u]];
    if (v >= p) v -= p;
    out[u] = static_cast<std::uint8_t>(v);
  }
}

void inverse(std::uint32_t p, std::uint32_t depth, const std::uint8_t* f,
             std::uint8_t* out, std::uint32_t* img_scratch) {
  vertex_images(p, depth, f, img_scratch);
  const std::size_t count = label_count(p, depth);
  for (std::size_t u = 0; u < count; ++u)
    out[img_scratch[u]] = static_cast<std::uint8_t>(f[u] ? p - f[u] : 0);
}

bool is_identity(const std::uint8_t* f, std::size_t count) {
  for (std::size_t u = 0; u < count; ++u)
    if (f[u]) return false;
  return true;
}

namespace {

// out = f^p by repeated right multiplication; p is tiny
void pth_power(std::uint32_t p, std::uint32_t depth, const std::uint8_t* f,
               std::uint8_t* out, std::uint8_t* tmp, std::uint32_t* img) {
  const std::size_t count = label_count(p, depth);
  std::memcpy(out, f, count);
  for (std::uint32_t i = 1; i < p; ++i) {
    compose(p, depth, out, f, tmp, img);
    std::memcpy(out, tmp, count);
  }
}

}  // namespace

std::uint64_t order(std::uint32_t p, std::uint32_t depth, const std::uint8_t* f,
                    std::uint8_t* tmp_a, std::uint8_t* tmp_b,
                    std::uint8_t* tmp_c, std::uint32_t* img_scratch) {
  const std::size_t count = label_count(p, depth);
  std::memcpy(tmp_a, f, count);
  std::uint64_t ord = 1;
  for (std::uint32_t step = 0; step <= depth; ++step) {
    if (is_identity(tmp_a, count)) return ord;
    pth_power(p, depth, tmp_a, tmp_b, tmp_c, img_scratch);
    std::memcpy(tmp_a, tmp_b, count);
    ord *= p;
  }
  throw std::logic_error("element order exceeds p^depth");
}

}  // namespace portrait

namespace {

constexpr std::string_view kDigits = "0123456789abcdefghijklmnopqrstuvwxyz";

void check_shape(std::uint32_t p, std::uint32_t depth) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  if (depth < 1) throw std::invalid_argument("depth must be at least 1");
  if (p > kDigits.size())
    throw std::invalid_argument("p too large for the digit encoding");
}

void check_same_shape(const TreeAut& f, const TreeAut& g) {
  if (f.prime() != g.prime() || f.depth() != g.depth())
    throw std::invalid_argument("shape mismatch between automorphisms");
}

}  // namespace

TreeAut::TreeAut(std::uint32_t p, std::uint32_t depth) : p_(p), n_(depth) {
  check_shape(p, depth);
  labels_.assign(portrait::label_count(p, depth), 0);
}

TreeAut TreeAut::rooted(std::uint32_t p, std::uint32_t depth,
                        long long exponent) {
  TreeAut a(p, depth);
  long long r = exponent % p;
  if (r < 0) r += p;
  a.labels_[0] = static_cast<std::uint8_t>(r);
  return a;
}

TreeAut TreeAut::from_labels(std::uint32_t p, std::uint32_t depth,
                             std::vector<std::uint8_t> labels) {
  TreeAut a(p, depth);
  if (labels.size() != a.labels_.size())
    throw std::invalid_argument("wrong number of labels");
  for (std::uint8_t v : labels)
    if (v >= p) throw std::invalid_argument("label exponent out of range");
  a.labels_ = std::move(labels);
  return a;
}

std::uint8_t TreeAut::label(const Vertex& u) const {
  if (u.size() >= n_) throw std::invalid_argument("vertex too deep for a label");
  std::size_t off = 0, level_size = 1, idx = 0;
  for (std::uint32_t digit : u) {
    if (digit < 1 || digit > p_) throw std::invalid_argument("digit out of range");
    idx = off + level_size + (idx - off) * p_ + (digit - 1);
    off += level_size;
    level_size *= p_;
  }
  return labels_[idx];
}

Vertex TreeAut::apply(const Vertex& u) const {
  if (u.size() > n_) throw std::invalid_argument("vertex deeper than the tree");
  Vertex out;
  out.reserve(u.size());
  std::size_t off = 0, level_size = 1, idx = 0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const std::uint32_t digit = u[k];
    if (digit < 1 || digit > p_) throw std::invalid_argument("digit out of range");
    std::uint32_t y = digit - 1 + labels_[idx];
    if (y >= p_) y -= p_;
    out.push_back(y + 1);
    if (k + 1 < u.size()) {
      idx = off + level_size + (idx - off) * p_ + (digit - 1);
      off += level_size;
      level_size *= p_;
    }
  }
  return out;
}

TreeAut TreeAut::compose(const TreeAut& g) const {
  check_same_shape(*this, g);
  TreeAut out(p_, n_);
  std::vector<std::uint32_t> img(labels_.size());
  portrait::compose(p_, n_, labels_.data(), g.labels_.data(),
                    out.labels_.data(), img.data());
  return out;
}

TreeAut TreeAut::inverse() const {
  TreeAut out(p_, n_);
  std::vector<std::uint32_t> img(labels_.size());
  portrait::inverse(p_, n_, labels_.data(), out.labels_.data(), img.data());
  return out;
}

TreeAut TreeAut::pow(long long k) const {
  if (k < 0) return inverse().pow(-k);
  TreeAut acc(p_, n_);
  TreeAut base = *this;
  unsigned long long e = static_cast<unsigned long long>(k);
  while (e) {
    if (e & 1) acc = acc.compose(base);
    e >>= 1;
    if (e) base = base.compose(base);
  }
  return acc;
}

std::uint64_t TreeAut::order() const {
  std::vector<std::uint8_t> a(labels_.size()), b(labels_.size()),
      c(labels_.size());
  std::vector<std::uint32_t> img(labels_.size());
  return portrait::order(p_, n_, labels_.data(), a.data(), b.data(), c.data(),
                         img.data());
}

bool TreeAut::is_identity() const {
  return portrait::is_identity(labels_.data(), labels_.size());
}

bool TreeAut::in_level_stabilizer(std::uint32_t k) const {
  const std::size_t prefix = portrait::label_count(p_, std::min(k, n_));
  for (std::size_t u = 0; u < prefix; ++u)
    if (labels_[u]) return false;
  return true;
}

TreeAut TreeAut::section(const Vertex& u) const {
  if (u.size() + 1 > n_)
    throw std::invalid_argument("section vertex too deep");
  const std::uint32_t m = n_ - static_cast<std::uint32_t>(u.size());
  TreeAut out(p_, m);

  // flat index of u
  std::size_t off = 0, level_size = 1, idx = 0;
  for (std::uint32_t digit : u) {
    if (digit < 1 || digit > p_) throw std::invalid_argument("digit out of range");
    idx = off + level_size + (idx - off) * p_ + (digit - 1);
    off += level_size;
    level_size *= p_;
  }

  // copy the subtree level by level
  std::vector<std::size_t> frontier{idx};
  std::size_t pos = 0;
  for (std::uint32_t k = 0; k < m; ++k) {
    for (std::size_t v : frontier) out.labels_[pos++] = labels_[v];
    if (k + 1 == m) break;
    const std::size_t off_next = off + level_size;
    std::vector<std::size_t> next;
    next.reserve(frontier.size() * p_);
    for (std::size_t v : frontier) {
      const std::size_t base = off_next + (v - off) * p_;
      for (std::uint32_t x = 0; x < p_; ++x) next.push_back(base + x);
    }
    frontier = std::move(next);
    off = off_next;
    level_size *= p_;
  }
  return out;
}

std::vector<TreeAut> TreeAut::sections() const {
  if (labels_[0] != 0)
    throw std::invalid_argument(
        "sections tuple requires a first-level stabilizer element");
  std::vector<TreeAut> out;
  out.reserve(p_);
  for (std::uint32_t i = 1; i <= p_; ++i) out.push_back(section({i}));
  return out;
}

TreeAut TreeAut::from_sections(long long root_exponent,
                               const std::vector<TreeAut>& parts) {
  if (parts.empty()) throw std::invalid_argument("empty section tuple");
  const std::uint32_t p = static_cast<std::uint32_t>(parts.size());
  const std::uint32_t m = parts[0].depth();
  for (const auto& s : parts)
    if (s.prime() != p || s.depth() != m)
      throw std::invalid_argument("sections must share p and depth, with p parts");

  TreeAut out(p, m + 1);
  long long r = root_exponent % p;
  if (r < 0) r += p;
  out.labels_[0] = static_cast<std::uint8_t>(r);

  std::size_t pos = 1;
  std::size_t off = 0, level_size = 1;
  for (std::uint32_t k = 0; k < m; ++k) {
    for (std::uint32_t i = 0; i < p; ++i)
      for (std::size_t u = off; u < off + level_size; ++u)
        out.labels_[pos++] = parts[i].labels_[u];
    off += level_size;
    level_size *= p;
  }
  return out;
}

TreeAut TreeAut::restrict_depth(std::uint32_t m) const {
  if (m < 1 || m > n_) throw std::invalid_argument("bad restriction depth");
  TreeAut out(p_, m);
  std::copy_n(labels_.begin(), out.labels_.size(), out.labels_.begin());
  return out;
}

std::string TreeAut::encode() const {
  std::string s(labels_.size(), '0');
  for (std::size_t i = 0; i < labels_.size(); ++i) s[i] = kDigits[labels_[i]];
  return s;
}

TreeAut TreeAut::decode(std::uint32_t p, std::uint32_t depth,
                        std::string_view digits) {
  TreeAut out(p, depth);
  if (digits.size() != out.labels_.size())
    throw std::invalid_argument("encoded string has wrong length");
  for (std::size_t i = 0; i < digits.size(); ++i) {
    const std::size_t v = kDigits.find(digits[i]);
    if (v == std::string_view::npos || v >= p)
      throw std::invalid_argument("invalid digit in encoded string");
    out.labels_[i] = static_cast<std::uint8_t>(v);
  }
  return out;
}

TreeAut conjugate(const TreeAut& g, const TreeAut& h) {
  return h.inverse().compose(g).compose(h);
}

TreeAut commutator(const TreeAut& g, const TreeAut& h) {
  return g.inverse().compose(h.inverse()).compose(g).compose(h);
}

}  // namespace egsq
