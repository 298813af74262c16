#include "egsq/predict.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace egsq {

namespace {

std::uint64_t upow(std::uint64_t base, std::uint32_t e) {
  std::uint64_t r = 1;
  while (e--) r *= base;
  return r;
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::uint64_t r = 1, b = a % p, e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

/// Expand a word over c-generators into the list of conjugate subscripts,
/// reducing exponents mod p (the c-generators have order p).
std::vector<std::uint32_t> expand_c_word(const Word& word, std::uint32_t p) {
  std::vector<std::uint32_t> subscripts;
  for (const auto& t : word.tokens()) {
    if (t.kind != GenToken::Kind::conjugated)
      throw std::invalid_argument("expected a word over c-generators only");
    if (t.shift >= p)
      throw std::invalid_argument("conjugate index must lie in 0..p-1");
    long long reps = t.exponent % static_cast<long long>(p);
    if (reps < 0) reps += p;
    for (long long k = 0; k < reps; ++k) subscripts.push_back(t.shift);
  }
  return subscripts;
}

}  // namespace

std::uint64_t predicted_exponent(const GroupSpec& spec, std::uint32_t level) {
  if (level < 1) throw std::invalid_argument("level must be at least 1");
  const auto cls = spec.classify();
  const std::uint32_t e = cls.periodic ? (level + 1) / 2 : level;
  return upow(spec.prime(), e);
}

std::uint64_t predicted_level2_order(const GroupSpec& spec) {
  std::vector<FpVector> listed;
  for (const auto& space : spec.spaces())
    for (const auto& v : space) listed.push_back(v);
  const auto closure = bar_closure(listed, spec.prime());
  const std::size_t t = fp_rank(FpMatrix(closure.begin(), closure.end()));
  return upow(spec.prime(), static_cast<std::uint32_t>(t) + 1);
}

Word deep_witness_word(const GroupSpec& spec, std::uint32_t conjugate_index) {
  const auto cls = spec.classify();
  if (cls.family != Classification::Family::ggs || cls.periodic)
    throw std::invalid_argument(
        "deep witnesses need a non-periodic single-vector spec");
  if (conjugate_index >= spec.prime())
    throw std::invalid_argument("conjugate index must lie in 0..p-1");
  const std::uint32_t x = *cls.defining_sum;
  Word w;
  w.append(Word::rooted(x));
  w.append(Word::conjugated(conjugate_index));
  return w;
}

Word first_section_lift(const GroupSpec& spec, const Word& h) {
  const auto cls = spec.classify();
  if (cls.family != Classification::Family::ggs || !cls.periodic)
    throw std::invalid_argument(
        "section lift needs a periodic single-vector spec");
  if (spec.ggs_vector()[0] != 1)
    throw std::invalid_argument(
        "section lift needs a defining vector with first entry 1");

  const auto subscripts = expand_c_word(h, spec.prime());
  Word out;
  for (std::uint32_t j : subscripts) {
    if (j) out.append(Word::conjugated(0, -static_cast<long long>(j)));
    out.append(Word::conjugated(1));
    if (j) out.append(Word::conjugated(0, j));
  }
  return out;
}

Word rebalance_stabilizer_word(const GroupSpec& spec, const Word& h) {
  const std::uint32_t p = spec.prime();
  if (p < 3)
    throw std::invalid_argument("rebalancing needs an odd prime");
  const auto cls = spec.classify();
  if (cls.family != Classification::Family::ggs)
    throw std::invalid_argument("rebalancing needs a single-vector spec");
  const FpVector& e = spec.ggs_vector();
  for (std::size_t i = 1; i < p; ++i)
    if (e[i - 1] != e[p - 1 - i])
      throw std::invalid_argument(
          "rebalancing needs a symmetric defining vector");
  if (e[0] != 1)
    throw std::invalid_argument(
        "rebalancing needs a defining vector with first entry 1");

  const auto subscripts = expand_c_word(h, p);
  std::uint64_t sum = 0;
  for (std::uint32_t j : subscripts) sum += j;
  const std::uint32_t r = static_cast<std::uint32_t>(subscripts.size() % p);
  const std::uint32_t deficit =
      static_cast<std::uint32_t>((r + p - sum % p) % p);
  const std::uint32_t alpha =
      static_cast<std::uint32_t>(static_cast<std::uint64_t>(deficit) *
                                 inv_mod(2, p) % p);

  Word out;
  for (std::uint32_t k = 0; k < alpha; ++k) {
    out.append(Word::conjugated(0, p - 1));
    out.append(Word::conjugated(2));
  }
  out.append(h);
  return out;
}

bool check_submultiplicativity(const std::vector<LevelRecord>& levels) {
  std::vector<std::uint64_t> exp_by_level(levels.size() + 1, 0);
  std::uint32_t max_level = 0;
  for (const auto& rec : levels) {
    if (rec.level > levels.size()) return true;  // sparse; nothing to check
    exp_by_level[rec.level] = rec.exponent;
    max_level = std::max(max_level, rec.level);
  }
  for (std::uint32_t n = 1; n <= max_level; ++n)
    for (std::uint32_t k = 1; n + k <= max_level; ++k) {
      if (!exp_by_level[n] || !exp_by_level[k] || !exp_by_level[n + k])
        continue;
      if (exp_by_level[n + k] > exp_by_level[n] * exp_by_level[k])
        return false;
    }
  return true;
}

bool VerificationReport::pass() const {
  if (levels.empty()) return false;
  for (const auto& rec : levels) {
    if (!rec.exponent_match) return false;
    if (rec.size_match && !*rec.size_match) return false;
  }
  for (const auto& w : witnesses)
    for (const auto& rec : w.levels)
      if (!rec.match) return false;
  return !limit_exceeded;
}

VerificationReport verify_exponents(const GroupSpec& spec,
                                    const VerifyOptions& options) {
  if (options.max_level < 1)
    throw std::invalid_argument("max_level must be at least 1");

  VerificationReport report;
  report.spec_json = spec.to_json();
  report.prime = spec.prime();
  const auto cls = spec.classify();
  report.family = cls.family_name();
  report.periodic = cls.periodic;
  report.defining_sum = cls.defining_sum;
  report.max_level = options.max_level;

  auto predicted = [&](std::uint32_t n) {
    std::uint64_t v = predicted_exponent(spec, n);
    return options.corrupt_predictions ? v * spec.prime() : v;
  };

  for (std::uint32_t n = 1; n <= options.max_level; ++n) {
    try {
      QuotientGroup q =
          options.cache_dir
              ? enumerate_cached(spec, n, options.limits, options.threads,
                                 *options.cache_dir)
              : enumerate_quotient(spec, n, options.limits, options.threads);
      LevelRecord rec;
      rec.level = n;
      rec.size = q.size();
      rec.exponent = q.exponent(options.threads);
      rec.predicted_exponent = predicted(n);
      rec.exponent_match = rec.exponent == rec.predicted_exponent;
      if (n == 2) {
        rec.predicted_size = predicted_level2_order(spec);
        rec.size_match = rec.size == *rec.predicted_size;
      }
      report.levels.push_back(rec);
    } catch (const LimitExceeded& e) {
      report.limit_exceeded = true;
      report.partial_count = e.partial_count;
      break;
    }
  }

  for (std::size_t i = 1; i < report.levels.size(); ++i)
    if (report.levels[i].exponent % report.levels[i - 1].exponent != 0)
      report.monotone = false;
  report.submultiplicative = check_submultiplicativity(report.levels);

  if (cls.family == Classification::Family::ggs && !cls.periodic) {
    std::uint32_t depth = options.witness_depth;
    if (depth == 0) {
      const std::uint32_t p = spec.prime();
      depth = p == 2 ? 16 : p == 3 ? 8 : p == 5 ? 5 : options.max_level;
    }
    depth = std::max(depth, options.max_level);

    WitnessRecord witness;
    const Word word = deep_witness_word(spec, options.witness_conjugate);
    witness.word = word.str();
    for (std::uint32_t n = 1; n <= depth; ++n) {
      WitnessLevelRecord rec;
      rec.level = n;
      rec.order = spec.evaluate(word, n).order();
      rec.predicted = upow(spec.prime(), n);
      if (options.corrupt_predictions) rec.predicted *= spec.prime();
      rec.match = rec.order == rec.predicted;
      witness.levels.push_back(rec);
    }
    report.witnesses.push_back(std::move(witness));
  }

  return report;
}

std::string VerificationReport::to_json() const {
  nlohmann::json doc;
  doc["spec"] = nlohmann::json::parse(spec_json);
  doc["p"] = prime;
  doc["family"] = family;
  doc["periodic"] = periodic;
  if (defining_sum)
    doc["defining_sum"] = *defining_sum;
  else
    doc["defining_sum"] = nullptr;
  doc["max_level"] = max_level;

  auto levels_json = nlohmann::json::array();
  for (const auto& rec : levels) {
    nlohmann::json item;
    item["n"] = rec.level;
    item["size"] = rec.size;
    item["exponent"] = rec.exponent;
    item["predicted_exponent"] = rec.predicted_exponent;
    item["exponent_match"] = rec.exponent_match;
    if (rec.predicted_size) {
      item["predicted_size"] = *rec.predicted_size;
      item["size_match"] = *rec.size_match;
    }
    levels_json.push_back(std::move(item));
  }
  doc["levels"] = std::move(levels_json);

  auto witnesses_json = nlohmann::json::array();
  for (const auto& w : witnesses) {
    nlohmann::json item;
    item["word"] = w.word;
    auto levels_arr = nlohmann::json::array();
    for (const auto& rec : w.levels) {
      nlohmann::json lvl;
      lvl["n"] = rec.level;
      lvl["order"] = rec.order;
      lvl["predicted"] = rec.predicted;
      lvl["match"] = rec.match;
      levels_arr.push_back(std::move(lvl));
    }
    item["levels"] = std::move(levels_arr);
    witnesses_json.push_back(std::move(item));
  }
  doc["witnesses"] = std::move(witnesses_json);

  doc["monotone"] = monotone;
  doc["submultiplicative"] = submultiplicative;
  doc["limit_exceeded"] = limit_exceeded;
  if (limit_exceeded) doc["partial_count"] = partial_count;
  doc["verdict"] = pass() ? "pass" : "fail";
  return doc.dump(2);
}

VerificationReport VerificationReport::from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  VerificationReport report;
  report.spec_json = doc.at("spec").dump();
  report.prime = doc.at("p").get<std::uint32_t>();
  report.family = doc.at("family").get<std::string>();
  report.periodic = doc.at("periodic").get<bool>();
  if (!doc.at("defining_sum").is_null())
    report.defining_sum = doc.at("defining_sum").get<std::uint32_t>();
  report.max_level = doc.at("max_level").get<std::uint32_t>();
  for (const auto& item : doc.at("levels")) {
    LevelRecord rec;
    rec.level = item.at("n").get<std::uint32_t>();
    rec.size = item.at("size").get<std::uint64_t>();
    rec.exponent = item.at("exponent").get<std::uint64_t>();
    rec.predicted_exponent = item.at("predicted_exponent").get<std::uint64_t>();
    rec.exponent_match = item.at("exponent_match").get<bool>();
    if (item.contains("predicted_size")) {
      rec.predicted_size = item.at("predicted_size").get<std::uint64_t>();
      rec.size_match = item.at("size_match").get<bool>();
    }
    report.levels.push_back(rec);
  }
  for (const auto& item : doc.at("witnesses")) {
    WitnessRecord w;
    w.word = item.at("word").get<std::string>();
    for (const auto& lvl : item.at("levels")) {
      WitnessLevelRecord rec;
      rec.level = lvl.at("n").get<std::uint32_t>();
      rec.order = lvl.at("order").get<std::uint64_t>();
      rec.predicted = lvl.at("predicted").get<std::uint64_t>();
      rec.match = lvl.at("match").get<bool>();
      w.levels.push_back(rec);
    }
    report.witnesses.push_back(std::move(w));
  }
  report.monotone = doc.at("monotone").get<bool>();
  report.submultiplicative = doc.at("submultiplicative").get<bool>();
  report.limit_exceeded = doc.at("limit_exceeded").get<bool>();
  if (doc.contains("partial_count"))
    report.partial_count = doc.at("partial_count").get<std::size_t>();
  return report;
}

std::string VerificationReport::to_text() const {
  std::ostringstream out;
  out << family << (periodic ? ", periodic" : ", non-periodic");
  if (defining_sum) out << ", defining sum " << *defining_sum;
  out << "\n";
  out << std::left << std::setw(4) << "n" << std::setw(12) << "size"
      << std::setw(12) << "exponent" << std::setw(12) << "predicted"
      << "verdict\n";
  for (const auto& rec : levels) {
    out << std::left << std::setw(4) << rec.level << std::setw(12) << rec.size
        << std::setw(12) << rec.exponent << std::setw(12)
        << rec.predicted_exponent
        << (rec.exponent_match ? "ok" : "MISMATCH") << "\n";
  }
  for (const auto& rec : levels)
    if (rec.predicted_size)
      out << "level-2 order: measured " << rec.size << ", predicted "
          << *rec.predicted_size << " -> "
          << (*rec.size_match ? "ok" : "MISMATCH") << "\n";
  for (const auto& w : witnesses) {
    out << "witness " << w.word << ": orders";
    bool all = true;
    for (const auto& rec : w.levels) {
      out << " " << rec.order;
      all = all && rec.match;
    }
    out << " -> " << (all ? "ok" : "MISMATCH") << "\n";
  }
  if (limit_exceeded)
    out << "stopped early: element cap hit at " << partial_count
        << " elements\n";
  out << "verdict: " << (pass() ? "pass" : "fail") << "\n";
  return out.str();
}

}  // namespace egsq
