// Command-line front end: spec inspection, quotient enumeration, exponent
// verification, element export, word orders, witness and preimage searches.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "egsq/predict.hpp"
#include "egsq/quotient.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitInput = 2;
constexpr int kExitLimit = 3;

struct CommonOpts {
  std::string spec_path;
  std::string output;
  std::string format = "text";
  std::string cache_dir;
  unsigned threads = 1;
  std::size_t max_elements = 2'000'000;
};

void add_spec_option(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--spec", opts.spec_path, "spec JSON file")
      ->required()
      ->check(CLI::ExistingFile);
}

egsq::EnumerationLimits limits_of(const CommonOpts& opts) {
  egsq::EnumerationLimits limits;
  limits.max_elements = opts.max_elements;
  return limits;
}

egsq::QuotientGroup enumerate_with(const egsq::GroupSpec& spec,
                                   std::uint32_t level,
                                   const CommonOpts& opts) {
  if (!opts.cache_dir.empty())
    return egsq::enumerate_cached(spec, level, limits_of(opts), opts.threads,
                                  opts.cache_dir);
  return egsq::enumerate_quotient(spec, level, limits_of(opts), opts.threads);
}

// Writes to --output when given, stdout otherwise.
void emit(const CommonOpts& opts, const std::string& text) {
  if (opts.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opts.output);
  if (!out) throw std::runtime_error("cannot open output file " + opts.output);
  out << text;
}

int run_info(const CommonOpts& opts, std::uint32_t max_level) {
  const auto spec = egsq::GroupSpec::load(opts.spec_path);
  const auto cls = spec.classify();

  if (opts.format == "json") {
    nlohmann::json doc;
    doc["p"] = spec.prime();
    doc["family"] = cls.family_name();
    doc["periodic"] = cls.periodic;
    if (cls.defining_sum)
      doc["defining_sum"] = *cls.defining_sum;
    else
      doc["defining_sum"] = nullptr;
    auto exps = nlohmann::json::array();
    for (std::uint32_t n = 1; n <= max_level; ++n)
      exps.push_back(egsq::predicted_exponent(spec, n));
    doc["predicted_exponents"] = std::move(exps);
    doc["predicted_level2_order"] = egsq::predicted_level2_order(spec);
    emit(opts, doc.dump(2) + "\n");
    return kExitOk;
  }

  std::ostringstream out;
  out << (cls.periodic ? "periodic" : "non-periodic") << " "
      << cls.family_name() << " group, p=" << spec.prime() << "\n";
  if (cls.defining_sum)
    out << "defining vector sum: " << *cls.defining_sum << "\n";
  out << "predicted exponents:";
  for (std::uint32_t n = 1; n <= max_level; ++n)
    out << " " << egsq::predicted_exponent(spec, n);
  out << "\npredicted level-2 order: " << egsq::predicted_level2_order(spec)
      << "\n";
  emit(opts, out.str());
  return kExitOk;
}

int run_verify(const CommonOpts& opts, std::uint32_t max_level,
               std::uint32_t witness_depth, std::uint32_t witness_conjugate,
               bool corrupt) {
  const auto spec = egsq::GroupSpec::load(opts.spec_path);
  egsq::VerifyOptions vopts;
  vopts.max_level = max_level;
  vopts.witness_depth = witness_depth;
  vopts.witness_conjugate = witness_conjugate;
  vopts.limits = limits_of(opts);
  vopts.threads = opts.threads;
  if (!opts.cache_dir.empty()) vopts.cache_dir = opts.cache_dir;
  vopts.corrupt_predictions = corrupt;

  const auto report = egsq::verify_exponents(spec, vopts);
  emit(opts, opts.format == "json" ? report.to_json() + "\n"
                                   : report.to_text());
  if (report.limit_exceeded) return kExitLimit;
  return report.pass() ? kExitOk : kExitMismatch;
}

int run_quotient(const CommonOpts& opts, std::uint32_t level) {
  const auto spec = egsq::GroupSpec::load(opts.spec_path);
  const auto q = enumerate_with(spec, level, opts);
  const auto histogram = q.order_histogram(opts.threads);

  if (opts.format == "csv") {
    std::ostringstream out;
    out << "order,count\n";
    for (const auto& [ord, cnt] : histogram) out << ord << "," << cnt << "\n";
    emit(opts, out.str());
    return kExitOk;
  }
  if (opts.format == "json") {
    nlohmann::json doc;
    doc["p"] = spec.prime();
    doc["level"] = level;
    doc["size"] = q.size();
    doc["exponent"] = q.exponent(opts.threads);
    nlohmann::json hist;
    for (const auto& [ord, cnt] : histogram) hist[std::to_string(ord)] = cnt;
    doc["histogram"] = std::move(hist);
    doc["layers"] = q.layer_count();
    doc["seconds"] = q.enumeration_seconds();
    doc["elements_per_second"] = q.elements_per_second();
    emit(opts, doc.dump(2) + "\n");
    return kExitOk;
  }

  std::ostringstream out;
  out << "size=" << q.size() << " exp=" << q.exponent(opts.threads) << "\n";
  out << "order histogram:\n";
  for (const auto& [ord, cnt] : histogram)
    out << "  " << ord << ": " << cnt << "\n";
  if (q.enumeration_seconds() > 0)
    out << "enumerated in " << q.enumeration_seconds() << "s ("
        << static_cast<std::uint64_t>(q.elements_per_second())
        << " elements/s)\n";
  emit(opts, out.str());
  return kExitOk;
}

int run_order(const CommonOpts& opts, const std::string& word_text,
              std::uint32_t level) {
  const auto spec = egsq::GroupSpec::load(opts.spec_path);
  const auto word = egsq::Word::parse(word_text);
  emit(opts, std::to_string(spec.evaluate(word, level).order()) + "\n");
  return kExitOk;
}

int run_witness(const CommonOpts& opts, std::uint32_t max_level,
                std::uint32_t conjugate) {
  const auto spec = egsq::GroupSpec::load(opts.spec_path);
  const auto word = egsq::deep_witness_word(spec, conjugate);
  std::uint32_t depth = max_level;
  if (depth == 0) {
    const std::uint32_t p = spec.prime();
    depth = p == 2 ? 16 : p == 3 ? 8 : p == 5 ? 5 : 4;
  }
  std::ostringstream out;
  out << "witness: " << word.str() << "\n";
  for (std::uint32_t n = 1; n <= depth; ++n)
    out << "n=" << n << " order=" << spec.evaluate(word, n).order() << "\n";
  emit(opts, out.str());
  return kExitOk;
}

int run_preimage(const CommonOpts& opts, std::uint32_t level,
                 const std::vector<std::string>& target_args) {
  const auto spec = egsq::GroupSpec::load(opts.spec_path);
  if (level < 2) throw std::invalid_argument("preimage needs --level >= 2");
  const std::uint32_t p = spec.prime();

  std::vector<egsq::TreeAut> targets(
      p, egsq::TreeAut::identity(p, level - 1));
  std::vector<std::uint32_t> mask;
  for (const auto& arg : target_args) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("targets look like <component>=<word>");
    const auto component =
        static_cast<std::uint32_t>(std::stoul(arg.substr(0, eq)));
    if (component < 1 || component > p)
      throw std::invalid_argument("target component must lie in 1..p");
    const auto word = egsq::Word::parse(arg.substr(eq + 1));
    targets[component - 1] = spec.evaluate(word, level - 1);
    mask.push_back(component);
  }

  const auto found =
      egsq::find_preimage(spec, level, targets, mask, limits_of(opts));
  if (!found) {
    emit(opts, "not found\n");
    return kExitOk;
  }
  emit(opts, (found->empty() ? std::string("<empty word>") : found->str()) +
                 "\n");
  return kExitOk;
}

int run_export(const CommonOpts& opts, std::uint32_t level) {
  const auto spec = egsq::GroupSpec::load(opts.spec_path);
  const auto q = enumerate_with(spec, level, opts);
  std::ostringstream out;
  q.save_elements(out);
  emit(opts, out.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"arithmetic and congruence-quotient computations for groups of "
               "p-adic tree automorphisms defined by directed generators"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::uint32_t level = 1;
  std::uint32_t info_max_level = 4;
  std::uint32_t verify_max_level = 3;
  std::uint32_t witness_depth = 0;
  std::uint32_t witness_conjugate = 0;
  bool corrupt_predictions = false;
  std::string word_text;
  std::vector<std::string> target_args;

  auto add_common = [&](CLI::App* cmd, bool with_enum) {
    add_spec_option(cmd, opts);
    cmd->add_option("--output", opts.output, "write output to a file");
    if (with_enum) {
      cmd->add_option("--threads", opts.threads, "enumeration threads");
      cmd->add_option("--max-elements", opts.max_elements,
                      "element cap for enumeration");
      cmd->add_option("--cache-dir", opts.cache_dir,
                      "content-addressed element cache directory");
    }
  };

  auto* info = app.add_subcommand(
      "info", "classify a spec and print its closed-form predictions");
  add_common(info, false);
  info->add_option("--max-level", info_max_level, "levels to predict");
  info->add_option("--format", opts.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  auto* verify = app.add_subcommand(
      "verify", "compare brute-force exponents against the closed forms");
  add_common(verify, true);
  verify->add_option("--max-level", verify_max_level, "levels to enumerate");
  verify->add_option("--witness-depth", witness_depth,
                     "depth for direct-powering witness orders (0 = auto)");
  verify->add_option("--witness-conjugate", witness_conjugate,
                     "conjugate index of the witness word");
  verify->add_option("--format", opts.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  verify
      ->add_flag("--corrupt-predictions", corrupt_predictions,
                 "test hook: skew predictions to exercise mismatch reporting")
      ->group("");  // hidden

  auto* quotient = app.add_subcommand(
      "quotient", "enumerate a congruence quotient and report its statistics");
  add_common(quotient, true);
  quotient->add_option("--level", level, "truncation depth")->required();
  quotient->add_option("--format", opts.format, "text, json or csv histogram")
      ->check(CLI::IsMember({"text", "json", "csv"}));

  auto* order_cmd =
      app.add_subcommand("order", "order of a word in a level-n quotient");
  add_common(order_cmd, false);
  order_cmd->add_option("--word", word_text, "word over a, d<j>.<m>, c<i>")
      ->required();
  order_cmd->add_option("--level", level, "truncation depth")->required();

  auto* witness = app.add_subcommand(
      "witness",
      "maximal-order witness word of a non-periodic single-vector spec");
  add_common(witness, false);
  witness->add_option("--max-level", witness_depth,
                      "measure orders up to this depth (0 = auto)");
  witness->add_option("--conjugate", witness_conjugate,
                      "conjugate index in 0..p-1");

  auto* preimage = app.add_subcommand(
      "preimage",
      "shortest stabilizer word with prescribed first-level sections");
  add_common(preimage, true);
  preimage->add_option("--level", level, "truncation depth")->required();
  preimage
      ->add_option("--target", target_args,
                   "<component>=<word>, evaluated one level shallower")
      ->required();

  auto* export_cmd = app.add_subcommand(
      "export", "write the canonical element file of a quotient");
  add_common(export_cmd, true);
  export_cmd->add_option("--level", level, "truncation depth")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (app.got_subcommand(info)) return run_info(opts, info_max_level);
    if (app.got_subcommand(verify))
      return run_verify(opts, verify_max_level, witness_depth,
                        witness_conjugate, corrupt_predictions);
    if (app.got_subcommand(quotient)) return run_quotient(opts, level);
    if (app.got_subcommand(order_cmd)) return run_order(opts, word_text, level);
    if (app.got_subcommand(witness))
      return run_witness(opts, witness_depth, witness_conjugate);
    if (app.got_subcommand(preimage))
      return run_preimage(opts, level, target_args);
    if (app.got_subcommand(export_cmd)) return run_export(opts, level);
  } catch (const egsq::LimitExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitLimit;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
