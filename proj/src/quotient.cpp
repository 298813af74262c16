#include "egsq/quotient.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_set>

namespace egsq {

namespace {

std::uint64_t fnv1a(const std::uint8_t* data, std::size_t len,
                    std::uint64_t seed = 1469598103934665603ULL) {
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= data[i];
    h *= 1099511628211ULL;
  }
  return h;
}

// Deduplicated multiplier set: every generator and its inverse.
std::vector<std::vector<std::uint8_t>> multiplier_labels(
    const std::vector<std::pair<Word, TreeAut>>& gens) {
  std::vector<std::vector<std::uint8_t>> muls;
  auto add = [&muls](const std::vector<std::uint8_t>& labels) {
    if (std::find(muls.begin(), muls.end(), labels) == muls.end())
      muls.push_back(labels);
  };
  for (const auto& [word, g] : gens) {
    add(g.labels());
    add(g.inverse().labels());
  }
  return muls;
}

}  // namespace

QuotientGroup::QuotientGroup(GroupSpec spec, std::uint32_t level)
    : spec_(std::move(spec)),
      level_(level),
      record_(portrait::label_count(spec_.prime(), level)) {
  if (level < 1) throw std::invalid_argument("level must be at least 1");
}

std::span<const std::uint8_t> QuotientGroup::raw_element(std::size_t i) const {
  return {record(order_[i]), record_};
}

TreeAut QuotientGroup::element(std::size_t i) const {
  auto raw = raw_element(i);
  return TreeAut::from_labels(spec_.prime(), level_,
                              std::vector<std::uint8_t>(raw.begin(), raw.end()));
}

std::string QuotientGroup::element_encoding(std::size_t i) const {
  return element(i).encode();
}

double QuotientGroup::elements_per_second() const {
  return seconds_ > 0 ? static_cast<double>(count_) / seconds_ : 0.0;
}

void QuotientGroup::ensure_sorted_index() const {
  if (sorted_.size() == count_) return;
  sorted_ = order_;
  std::sort(sorted_.begin(), sorted_.end(),
            [this](std::uint32_t x, std::uint32_t y) {
              return std::memcmp(record(x), record(y), record_) < 0;
            });
}

bool QuotientGroup::contains(const TreeAut& g) const {
  if (g.prime() != spec_.prime() || g.depth() != level_) return false;
  ensure_sorted_index();
  const std::uint8_t* key = g.labels().data();
  auto it = std::lower_bound(sorted_.begin(), sorted_.end(), key,
                             [this](std::uint32_t x, const std::uint8_t* k) {
                               return std::memcmp(record(x), k, record_) < 0;
                             });
  return it != sorted_.end() && std::memcmp(record(*it), key, record_) == 0;
}

void QuotientGroup::ensure_histogram(unsigned threads) const {
  if (histogram_ready_) return;
  const std::uint32_t p = spec_.prime();
  const std::uint32_t n = level_;
  const std::size_t rec = record_;

  auto scan = [&](std::size_t lo, std::size_t hi,
                  std::map<std::uint64_t, std::size_t>& local) {
    std::vector<std::uint8_t> a(rec), b(rec), c(rec);
    std::vector<std::uint32_t> img(rec);
    for (std::size_t i = lo; i < hi; ++i) {
      const std::uint64_t ord = portrait::order(p, n, record(order_[i]),
                                                a.data(), b.data(), c.data(),
                                                img.data());
      ++local[ord];
    }
  };

  std::map<std::uint64_t, std::size_t> total;
  if (threads <= 1 || count_ < 4096) {
    scan(0, count_, total);
  } else {
    const unsigned t = std::min<std::size_t>(threads, 64);
    std::vector<std::map<std::uint64_t, std::size_t>> locals(t);
    std::vector<std::thread> workers;
    const std::size_t chunk = (count_ + t - 1) / t;
    for (unsigned w = 0; w < t; ++w) {
      const std::size_t lo = std::min(count_, w * chunk);
      const std::size_t hi = std::min(count_, lo + chunk);
      workers.emplace_back(scan, lo, hi, std::ref(locals[w]));
    }
    for (auto& w : workers) w.join();
    for (const auto& local : locals)
      for (const auto& [ord, cnt] : local) total[ord] += cnt;
  }
  histogram_ = std::move(total);
  histogram_ready_ = true;
}

std::uint64_t QuotientGroup::exponent(unsigned threads) const {
  ensure_histogram(threads);
  return histogram_.rbegin()->first;
}

std::map<std::uint64_t, std::size_t> QuotientGroup::order_histogram(
    unsigned threads) const {
  ensure_histogram(threads);
  return histogram_;
}

std::vector<std::size_t> QuotientGroup::stabilizer_slice(
    std::uint32_t k) const {
  const std::size_t prefix =
      portrait::label_count(spec_.prime(), std::min(k, level_));
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < count_; ++i) {
    const std::uint8_t* r = record(order_[i]);
    bool in_stab = true;
    for (std::size_t u = 0; u < prefix && in_stab; ++u) in_stab = (r[u] == 0);
    if (in_stab) out.push_back(i);
  }
  return out;
}

void QuotientGroup::save_elements(std::ostream& out) const {
  static constexpr std::string_view digits =
      "0123456789abcdefghijklmnopqrstuvwxyz";
  out << "p=" << spec_.prime() << " n=" << level_ << "\n";
  std::string line(record_, '0');
  for (std::size_t i = 0; i < count_; ++i) {
    const std::uint8_t* r = record(order_[i]);
    for (std::size_t u = 0; u < record_; ++u) line[u] = digits[r[u]];
    out << line << "\n";
  }
}

QuotientGroup QuotientGroup::from_element_file(const GroupSpec& spec,
                                               std::uint32_t level,
                                               std::istream& in) {
  std::string header;
  if (!std::getline(in, header))
    throw std::invalid_argument("element file is empty");
  std::ostringstream expect;
  expect << "p=" << spec.prime() << " n=" << level;
  if (header != expect.str())
    throw std::invalid_argument("element file header mismatch: " + header);

  QuotientGroup q(spec, level);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const TreeAut g = TreeAut::decode(spec.prime(), level, line);
    q.pool_.insert(q.pool_.end(), g.labels().begin(), g.labels().end());
    q.order_.push_back(static_cast<std::uint32_t>(q.count_));
    ++q.count_;
  }
  if (q.count_ == 0) throw std::invalid_argument("element file has no elements");
  q.layer_offsets_ = {0, q.count_};
  for (const auto& [word, g] : spec.generators(level))
    q.gen_words_.push_back(word);
  return q;
}

QuotientGroup enumerate_quotient(const GroupSpec& spec, std::uint32_t level,
                                 const EnumerationLimits& limits,
                                 unsigned threads) {
  if (limits.max_elements < 1)
    throw std::invalid_argument("max_elements must be at least 1");
  const auto t_start = std::chrono::steady_clock::now();

  QuotientGroup q(spec, level);
  const std::uint32_t p = spec.prime();
  const std::size_t rec = q.record_;

  auto gens = spec.generators(level);
  const auto muls = multiplier_labels(gens);
  for (auto& [word, g] : gens) q.gen_words_.push_back(word);

  auto& pool = q.pool_;
  pool.reserve(rec * 1024);

  struct Hash {
    const std::vector<std::uint8_t>* pool;
    std::size_t rec;
    std::size_t operator()(std::uint32_t idx) const {
      return fnv1a(pool->data() + static_cast<std::size_t>(idx) * rec, rec);
    }
  };
  struct Eq {
    const std::vector<std::uint8_t>* pool;
    std::size_t rec;
    bool operator()(std::uint32_t x, std::uint32_t y) const {
      return std::memcmp(pool->data() + static_cast<std::size_t>(x) * rec,
                         pool->data() + static_cast<std::size_t>(y) * rec,
                         rec) == 0;
    }
  };
  std::unordered_set<std::uint32_t, Hash, Eq> seen(
      4096, Hash{&pool, rec}, Eq{&pool, rec});

  std::size_t count = 0;
  auto try_insert = [&](const std::uint8_t* candidate) -> std::int64_t {
    pool.insert(pool.end(), candidate, candidate + rec);
    const auto idx = static_cast<std::uint32_t>(count);
    if (seen.insert(idx).second) {
      ++count;
      if (count > limits.max_elements) throw LimitExceeded(count, limits.max_elements);
      return idx;
    }
    pool.resize(pool.size() - rec);
    return -1;
  };

  // seed with the identity
  {
    std::vector<std::uint8_t> id(rec, 0);
    try_insert(id.data());
  }
  std::vector<std::uint32_t> frontier{0};
  q.order_.push_back(0);
  q.layer_offsets_ = {0, 1};

  const auto record_of = [&pool, rec](std::uint32_t idx) {
    return pool.data() + static_cast<std::size_t>(idx) * rec;
  };

  std::vector<std::uint8_t> tmp(rec);
  std::vector<std::uint32_t> img(rec);

  while (!frontier.empty()) {
    std::vector<std::uint32_t> next;

    if (threads <= 1 || frontier.size() < 1024) {
      for (std::uint32_t u : frontier) {
        for (const auto& m : muls) {
          portrait::compose(p, level, record_of(u), m.data(), tmp.data(),
                            img.data());
          if (auto idx = try_insert(tmp.data()); idx >= 0)
            next.push_back(static_cast<std::uint32_t>(idx));
        }
      }
    } else {
      // produce candidate blocks in parallel, merge sequentially; the final
      // set (and the sorted layers) cannot depend on the thread count
      const unsigned t = std::min<std::size_t>(threads, 64);
      const std::size_t block = 65536;
      std::vector<std::vector<std::uint8_t>> bufs(t);
      for (std::size_t lo = 0; lo < frontier.size(); lo += block) {
        const std::size_t hi = std::min(frontier.size(), lo + block);
        const std::size_t chunk = (hi - lo + t - 1) / t;
        std::vector<std::thread> workers;
        for (unsigned w = 0; w < t; ++w) {
          const std::size_t wlo = std::min(hi, lo + w * chunk);
          const std::size_t whi = std::min(hi, wlo + chunk);
          bufs[w].clear();
          bufs[w].reserve((whi - wlo) * muls.size() * rec);
          workers.emplace_back([&, wlo, whi, w] {
            std::vector<std::uint8_t> ltmp(rec);
            std::vector<std::uint32_t> limg(rec);
            for (std::size_t i = wlo; i < whi; ++i) {
              for (const auto& m : muls) {
                portrait::compose(p, level, record_of(frontier[i]), m.data(),
                                  ltmp.data(), limg.data());
                bufs[w].insert(bufs[w].end(), ltmp.begin(), ltmp.end());
              }
            }
          });
        }
        for (auto& w : workers) w.join();
        for (unsigned w = 0; w < t; ++w)
          for (std::size_t off = 0; off < bufs[w].size(); off += rec)
            if (auto idx = try_insert(bufs[w].data() + off); idx >= 0)
              next.push_back(static_cast<std::uint32_t>(idx));
      }
    }

    std::sort(next.begin(), next.end(),
              [&](std::uint32_t x, std::uint32_t y) {
                return std::memcmp(record_of(x), record_of(y), rec) < 0;
              });
    q.order_.insert(q.order_.end(), next.begin(), next.end());
    q.layer_offsets_.push_back(q.order_.size());
    frontier = std::move(next);
  }

  q.count_ = count;
  q.seconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t_start)
                   .count();
  return q;
}

QuotientGroup enumerate_cached(const GroupSpec& spec, std::uint32_t level,
                               const EnumerationLimits& limits,
                               unsigned threads, const std::string& cache_dir) {
  namespace fs = std::filesystem;
  const std::string key_material =
      spec.to_json() + "|" + std::to_string(level);
  const std::uint64_t key =
      fnv1a(reinterpret_cast<const std::uint8_t*>(key_material.data()),
            key_material.size());
  std::ostringstream name;
  name << "egsq-" << std::hex << key << ".elements";
  const fs::path path = fs::path(cache_dir) / name.str();

  if (fs::exists(path)) {
    std::ifstream in(path);
    if (in) return QuotientGroup::from_element_file(spec, level, in);
  }

  QuotientGroup q = enumerate_quotient(spec, level, limits, threads);
  fs::create_directories(cache_dir);
  const fs::path tmp_path = path.string() + ".tmp";
  {
    std::ofstream out(tmp_path);
    if (!out)
      throw std::runtime_error("cannot write cache file " + tmp_path.string());
    q.save_elements(out);
  }
  fs::rename(tmp_path, path);
  return q;
}

std::optional<Word> find_preimage(const GroupSpec& spec, std::uint32_t level,
                                  const std::vector<TreeAut>& targets,
                                  const std::vector<std::uint32_t>& mask_components,
                                  const EnumerationLimits& limits) {
  const std::uint32_t p = spec.prime();
  if (level < 2)
    throw std::invalid_argument("preimage search needs level >= 2");
  if (targets.size() != p)
    throw std::invalid_argument("targets must have exactly p components");
  for (const auto& t : targets)
    if (t.prime() != p || t.depth() != level - 1)
      throw std::invalid_argument("targets must have depth level-1");
  if (mask_components.empty())
    throw std::invalid_argument("mask must select at least one component");
  for (std::uint32_t c : mask_components)
    if (c < 1 || c > p)
      throw std::invalid_argument("mask components are 1-based in 1..p");

  // Alphabet: rooted conjugates of every directed generator. These all fix
  // the first level, so every word over them does too.
  std::vector<std::pair<Word, TreeAut>> alphabet;
  const TreeAut a = spec.rooted_generator(level);
  const bool ggs = spec.classify().family == Classification::Family::ggs;
  if (ggs) {
    const TreeAut c = directed_generator(level, p, spec.ggs_vector());
    for (std::uint32_t i = 0; i < p; ++i)
      alphabet.emplace_back(Word({Word::conjugated(i)}),
                            conjugate(c, a.pow(i)));
  } else {
    for (std::uint32_t j = 1; j <= p; ++j) {
      const auto& space = spec.spaces()[j - 1];
      for (std::uint32_t m = 1; m <= space.size(); ++m) {
        if (space[m - 1].is_zero()) continue;
        const TreeAut d = directed_generator(level, j, space[m - 1]);
        for (std::uint32_t l = 0; l < p; ++l) {
          Word w;
          if (l) w.append(Word::rooted(-static_cast<long long>(l)));
          w.append(Word::directed(j, m));
          if (l) w.append(Word::rooted(l));
          alphabet.emplace_back(std::move(w), conjugate(d, a.pow(l)));
        }
      }
    }
  }

  const std::size_t rec = portrait::label_count(p, level);
  auto matches = [&](const std::uint8_t* labels) {
    const TreeAut g = TreeAut::from_labels(
        p, level, std::vector<std::uint8_t>(labels, labels + rec));
    for (std::uint32_t c : mask_components)
      if (g.section({c}) != targets[c - 1]) return false;
    return true;
  };

  std::vector<std::uint8_t> pool;
  struct Node {
    std::int64_t parent;
    std::uint32_t token;
  };
  std::vector<Node> nodes;

  struct Hash {
    const std::vector<std::uint8_t>* pool;
    std::size_t rec;
    std::size_t operator()(std::uint32_t idx) const {
      return fnv1a(pool->data() + static_cast<std::size_t>(idx) * rec, rec);
    }
  };
  struct Eq {
    const std::vector<std::uint8_t>* pool;
    std::size_t rec;
    bool operator()(std::uint32_t x, std::uint32_t y) const {
      return std::memcmp(pool->data() + static_cast<std::size_t>(x) * rec,
                         pool->data() + static_cast<std::size_t>(y) * rec,
                         rec) == 0;
    }
  };
  std::unordered_set<std::uint32_t, Hash, Eq> seen(4096, Hash{&pool, rec},
                                                   Eq{&pool, rec});

  auto emit_word = [&](std::size_t idx) {
    std::vector<std::uint32_t> tokens;
    for (std::int64_t cur = static_cast<std::int64_t>(idx); cur > 0;
         cur = nodes[cur].parent)
      tokens.push_back(nodes[cur].token);
    std::reverse(tokens.begin(), tokens.end());
    Word w;
    for (std::uint32_t t : tokens) w.append(alphabet[t].first);
    return w;
  };

  // seed: the empty word
  pool.assign(rec, 0);
  nodes.push_back({-1, 0});
  seen.insert(0);
  if (matches(pool.data())) return Word{};

  std::vector<std::uint8_t> tmp(rec);
  std::vector<std::uint32_t> img(rec);
  std::size_t head = 0, total = 1;
  while (head < total) {
    const std::uint8_t* base =
        pool.data() + static_cast<std::size_t>(head) * rec;
    for (std::uint32_t t = 0; t < alphabet.size(); ++t) {
      portrait::compose(p, level, base, alphabet[t].second.labels().data(),
                        tmp.data(), img.data());
      pool.insert(pool.end(), tmp.begin(), tmp.end());
      const auto idx = static_cast<std::uint32_t>(total);
      if (seen.insert(idx).second) {
        nodes.push_back({static_cast<std::int64_t>(head), t});
        ++total;
        if (total > limits.max_elements)
          throw LimitExceeded(total, limits.max_elements);
        if (matches(pool.data() + static_cast<std::size_t>(idx) * rec))
          return emit_word(idx);
      } else {
        pool.resize(pool.size() - rec);
      }
      base = pool.data() + static_cast<std::size_t>(head) * rec;
    }
    ++head;
  }
  return std::nullopt;
}

}  // namespace egsq
