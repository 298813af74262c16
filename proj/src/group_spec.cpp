#include "egsq/group_spec.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace egsq {

std::string Classification::family_name() const {
  switch (family) {
    case Family::ggs:
      return "GGS";
    case Family::multi_ggs:
      return "multi-GGS";
    case Family::multi_egs:
      return "multi-EGS";
  }
  return "?";
}

GroupSpec::GroupSpec(std::uint32_t p, std::vector<std::vector<FpVector>> spaces)
    : p_(p), spaces_(std::move(spaces)) {
  if (!is_prime(p_)) throw std::invalid_argument("p must be prime");
  if (spaces_.size() != p_)
    throw std::invalid_argument("expected exactly p vector lists");
  bool any_nonzero = false;
  for (const auto& space : spaces_) {
    for (const auto& v : space) {
      if (v.modulus() != p_ || v.size() + 1 != p_)
        throw std::invalid_argument("defining vectors must lie in F_p^{p-1}");
      any_nonzero = any_nonzero || !v.is_zero();
    }
  }
  if (!any_nonzero)
    throw std::invalid_argument("not a multi-EGS group: all spaces null");
}

GroupSpec GroupSpec::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed spec document: ") +
                                e.what());
  }
  if (!doc.is_object() || !doc.contains("p") || !doc.contains("spaces"))
    throw std::invalid_argument("spec document needs fields 'p' and 'spaces'");
  if (!doc["p"].is_number_integer())
    throw std::invalid_argument("'p' must be an integer");
  const long long p = doc["p"].get<long long>();
  if (p < 2 || !is_prime(static_cast<std::uint32_t>(p)))
    throw std::invalid_argument("'p' must be a prime");
  if (!doc["spaces"].is_array())
    throw std::invalid_argument("'spaces' must be an array");

  std::vector<std::vector<FpVector>> spaces;
  for (const auto& space : doc["spaces"]) {
    if (!space.is_array())
      throw std::invalid_argument("each space must be an array of vectors");
    std::vector<FpVector> vecs;
    for (const auto& vec : space) {
      if (!vec.is_array())
        throw std::invalid_argument("each vector must be an integer array");
      std::vector<long long> entries;
      for (const auto& x : vec) {
        if (!x.is_number_integer())
          throw std::invalid_argument("vector entries must be integers");
        entries.push_back(x.get<long long>());
      }
      if (entries.size() + 1 != static_cast<std::size_t>(p))
        throw std::invalid_argument("defining vectors must have length p-1");
      vecs.emplace_back(static_cast<std::uint32_t>(p), entries);
    }
    spaces.push_back(std::move(vecs));
  }
  return GroupSpec(static_cast<std::uint32_t>(p), std::move(spaces));
}

GroupSpec GroupSpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open spec file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::string GroupSpec::to_json() const {
  nlohmann::json doc;
  doc["p"] = p_;
  auto spaces = nlohmann::json::array();
  for (const auto& space : spaces_) {
    auto list = nlohmann::json::array();
    for (const auto& v : space) list.push_back(v.entries());
    spaces.push_back(std::move(list));
  }
  doc["spaces"] = std::move(spaces);
  return doc.dump();
}

Classification GroupSpec::classify() const {
  Classification out;
  bool lower_paths_trivial = true;
  for (std::uint32_t j = 0; j + 1 < p_; ++j)
    for (const auto& v : spaces_[j]) lower_paths_trivial &= v.is_zero();

  out.periodic = true;
  for (const auto& space : spaces_)
    for (const auto& v : space) out.periodic &= (v.coordinate_sum() == 0);

  if (lower_paths_trivial) {
    const std::size_t dim = fp_rank(FpMatrix(spaces_[p_ - 1].begin(),
                                             spaces_[p_ - 1].end()));
    out.family = dim == 1 ? Classification::Family::ggs
                          : Classification::Family::multi_ggs;
  } else {
    out.family = Classification::Family::multi_egs;
  }

  if (out.family == Classification::Family::ggs)
    out.defining_sum = ggs_vector().coordinate_sum();
  return out;
}

const FpVector& GroupSpec::ggs_vector() const {
  for (std::uint32_t j = 0; j + 1 < p_; ++j)
    for (const auto& v : spaces_[j])
      if (!v.is_zero())
        throw std::invalid_argument("not a single-vector spec");
  const FpVector* first_nonzero = nullptr;
  for (const auto& v : spaces_[p_ - 1])
    if (!v.is_zero()) {
      if (!first_nonzero) first_nonzero = &v;
    }
  if (!first_nonzero) throw std::invalid_argument("not a single-vector spec");
  FpMatrix rows(spaces_[p_ - 1].begin(), spaces_[p_ - 1].end());
  if (fp_rank(rows) != 1) throw std::invalid_argument("not a single-vector spec");
  return *first_nonzero;
}

std::vector<std::pair<Word, TreeAut>> GroupSpec::generators(
    std::uint32_t depth) const {
  std::vector<std::pair<Word, TreeAut>> out;
  out.emplace_back(Word({Word::rooted()}), rooted_generator(depth));
  for (std::uint32_t j = 1; j <= p_; ++j) {
    const auto& space = spaces_[j - 1];
    for (std::uint32_t m = 1; m <= space.size(); ++m) {
      if (space[m - 1].is_zero()) continue;
      out.emplace_back(Word({Word::directed(j, m)}),
                       egsq::directed_generator(depth, j, space[m - 1]));
    }
  }
  return out;
}

TreeAut GroupSpec::rooted_generator(std::uint32_t depth) const {
  return TreeAut::rooted(p_, depth);
}

TreeAut GroupSpec::directed_generator(std::uint32_t depth, std::uint32_t path,
                                      std::uint32_t index) const {
  if (path < 1 || path > p_) throw std::invalid_argument("path out of range");
  const auto& space = spaces_[path - 1];
  if (index < 1 || index > space.size())
    throw std::invalid_argument("no such defining vector");
  return egsq::directed_generator(depth, path, space[index - 1]);
}

TreeAut GroupSpec::evaluate(const Word& word, std::uint32_t depth) const {
  TreeAut acc = TreeAut::identity(p_, depth);
  for (const auto& t : word.tokens()) {
    TreeAut g = TreeAut::identity(p_, depth);
    switch (t.kind) {
      case GenToken::Kind::rooted:
        g = rooted_generator(depth);
        break;
      case GenToken::Kind::directed:
        g = directed_generator(depth, t.path, t.index);
        break;
      case GenToken::Kind::conjugated: {
        if (t.shift >= p_)
          throw std::invalid_argument("conjugate index must lie in 0..p-1");
        // ggs_vector() rejects anything but a single-vector spec
        const TreeAut base = egsq::directed_generator(depth, p_, ggs_vector());
        g = conjugate(base, rooted_generator(depth).pow(t.shift));
        break;
      }
    }
    acc = acc.compose(g.pow(t.exponent));
  }
  return acc;
}

TreeAut directed_generator(std::uint32_t depth, std::uint32_t path,
                           const FpVector& e) {
  const std::uint32_t p = e.modulus();
  if (e.size() + 1 != p)
    throw std::invalid_argument("defining vector must have length p-1");
  if (path < 1 || path > p) throw std::invalid_argument("path out of range");

  TreeAut out = TreeAut::identity(p, depth);
  std::vector<std::uint8_t> labels(out.label_count(), 0);

  // nontrivial labels sit beside the path: at vertex (path)^k . i the label
  // is e_{(i-path) mod p}, everything on the path and elsewhere is trivial
  std::size_t off = 0, level_size = 1;
  std::size_t path_idx = 0;  // index of (path)^k at level k
  for (std::uint32_t k = 0; k + 1 < depth; ++k) {
    const std::size_t base = off + level_size + (path_idx - off) * p;
    for (std::uint32_t i = 1; i <= p; ++i) {
      if (i == path) continue;
      labels[base + (i - 1)] =
          static_cast<std::uint8_t>(e[(i + p - path) % p - 1]);
    }
    path_idx = base + (path - 1);
    off += level_size;
    level_size *= p;
  }
  return TreeAut::from_labels(p, depth, std::move(labels));
}

TreeAut path_conjugator(std::uint32_t p, std::uint32_t depth,
                        std::uint32_t path) {
  if (path < 1 || path > p) throw std::invalid_argument("path out of range");
  TreeAut out = TreeAut::identity(p, depth);
  std::vector<std::uint8_t> labels(out.label_count(),
                                   static_cast<std::uint8_t>((p - path) % p));
  return TreeAut::from_labels(p, depth, std::move(labels));
}

}  // namespace egsq
