#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "miflab/coset_table.hpp"
#include "miflab/errors.hpp"
#include "miflab/finite_group.hpp"
#include "miflab/grigorchuk.hpp"
#include "miflab/identity_lab.hpp"
#include "miflab/limit_group.hpp"
#include "miflab/mif_search.hpp"
#include "miflab/mixed_word.hpp"
#include "miflab/presentation.hpp"
#include "miflab/window_cache.hpp"

using namespace miflab;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kCapacity = 2, kVerification = 3, kParse = 4 };

struct Config {
  int p = 2;
  std::string c = CSequence::identity().to_string();
  std::size_t max_cosets = 1'000'000;
  std::int64_t max_width = 8;
  std::string cache_dir;
  unsigned threads = 0;
  bool json = false;
  std::uint64_t seed = 1;
  SearchBounds bounds;

  Instance instance() const {
    if (!is_prime(p)) throw std::invalid_argument("--p must be prime, got " + std::to_string(p));
    return Instance{p, CSequence::parse(c)};
  }

  CacheOptions cache_options() const {
    CacheOptions o;
    o.enumeration.max_cosets = max_cosets;
    o.limits.max_width = max_width;
    if (!cache_dir.empty())
      o.directory = cache_dir;
    else if (const char* env = std::getenv("MIFLAB_CACHE"))
      o.directory = env;
    return o;
  }

  LimitGroup group() const { return LimitGroup(instance(), cache_options()); }
};

void emit(const Config& cfg, const json& j, const std::string& text) {
  if (cfg.json)
    std::cout << j.dump() << "\n";
  else
    std::cout << text << "\n";
}

Elem finite_element(const GroupWithConstants& g, const std::string& text) {
  auto w = compile_word(text, g);
  if (!w.variables().empty()) throw ParseError("expected a group element: " + text, 0);
  return evaluate(g.group, w, {});
}

std::vector<Elem> subgroup_closure(const FiniteGroup& g, const std::vector<Elem>& gens) {
  std::set<Elem> seen{FiniteGroup::identity()};
  std::vector<Elem> queue{FiniteGroup::identity()};
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (Elem s : gens)
      if (Elem y = g.mul(queue[i], s); seen.insert(y).second) queue.push_back(y);
  return {seen.begin(), seen.end()};
}

int cyclic_order(const std::string& text) {
  static const std::regex re(R"(^(?:C-?)?(\d+)$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw ParseError("expected a cyclic top group C<k>: " + text, 0);
  return std::stoi(m[1]);
}

json bounds_json(const SearchBounds& b) { return b; }

int cmd_order(const Config& cfg, const std::string& window_text) {
  auto inst = cfg.instance();
  auto window = Window::parse(window_text);
  PresentationLimits limits;
  limits.max_width = cfg.max_width;
  auto pres = build_window_presentation(inst.p, inst.c, window, limits);
  EnumerationOptions opts;
  opts.max_cosets = cfg.max_cosets;
  auto table = enumerate_cosets(pres, opts);
  json j{{"p", inst.p},
         {"c", inst.c.to_string()},
         {"window", window.to_string()},
         {"order", table.coset_count()},
         {"relators", pres.relators.size()},
         {"cosets_defined", table.stats().cosets_defined},
         {"coincidences", table.stats().coincidences}};
  emit(cfg, j, std::to_string(table.coset_count()));
  return kOk;
}

int cmd_presentation(const Config& cfg, const std::string& window_text) {
  auto inst = cfg.instance();
  PresentationLimits limits;
  limits.max_width = cfg.max_width;
  auto pres = build_window_presentation(inst.p, inst.c, Window::parse(window_text), limits);
  json j = pres;
  if (cfg.json) {
    std::cout << j.dump() << "\n";
  } else {
    for (const auto& r : j.at("relators")) std::cout << r.dump() << "\n";
  }
  return kOk;
}

struct CheckArgs {
  std::string id, word, group, a = "C2", b = "C2", base = "C2", top = "C2", element;
  std::vector<std::string> constants, normal;
  std::int64_t radius = 2;
};

json canned_json(const std::string& id, const CannedResult& r) {
  json j{{"id", id}, {"verdict", r.holds}, {"pairs", r.pairs}, {"substitutions_checked", r.substitutions}};
  if (!r.holds) j["failure"] = r.failure;
  return j;
}

int cmd_check(const Config& cfg, const CheckArgs& args) {
  IdentityOptions opts;
  opts.threads = cfg.threads;
  if (!args.word.empty()) {
    GroupWithConstants g(make_group(args.group.empty() ? "S3" : args.group));
    for (const auto& binding : args.constants) {
      auto eq = binding.find('=');
      if (eq == std::string::npos) throw ParseError("expected name=value: " + binding, 0);
      g.bind(binding.substr(0, eq), std::string_view(binding).substr(eq + 1));
    }
    auto w = compile_word(args.word, g);
    auto report = make_report(args.word, g.group, is_mixed_identity(w, g.group, opts));
    json j = report;
    std::ostringstream text;
    text << (report.verdict ? "true" : "false");
    if (report.counterexample)
      for (const auto& [var, value] : *report.counterexample) text << " " << var << "=" << value;
    emit(cfg, j, text.str());
    return kOk;
  }
  if (args.id == "direct-product") {
    auto r = check_direct_product_identity(make_group(args.a), make_group(args.b), opts);
    emit(cfg, canned_json(args.id, r), r.holds ? "true" : "false " + r.failure);
    return kOk;
  }
  if (args.id == "wreath") {
    auto r = check_wreath_identity(make_group(args.base), cyclic_order(args.top), opts);
    emit(cfg, canned_json(args.id, r), r.holds ? "true" : "false " + r.failure);
    return kOk;
  }
  if (args.id == "factorial") {
    GroupWithConstants g(make_group(args.group.empty() ? "S4" : args.group));
    std::vector<Elem> gens;
    for (const auto& text : args.normal) gens.push_back(finite_element(g, text));
    auto normal = subgroup_closure(g.group, gens);
    auto v = factorial_identity_check(g.group, normal, finite_element(g, args.element));
    json j{{"id", args.id},
           {"group", g.group.name()},
           {"n", v.n},
           {"verdict", v.holds},
           {"substitutions_checked", v.substitutions_checked}};
    if (v.counterexample) j["counterexample"] = g.group.label(*v.counterexample);
    emit(cfg, j, v.holds ? "true" : "false " + g.group.label(*v.counterexample));
    return kOk;
  }
  if (args.id == "lamplighter") {
    // C_p wr Z is G(p, c = 1, 1, ...); the base is elementary abelian.
    Config lcfg = cfg;
    lcfg.c = "1";
    auto G = lcfg.group();
    MixedCalculus M(G);
    SearchBounds b = cfg.bounds;
    b.max_support_radius = args.radius;
    const std::string word = "[[[x,a0],a0],a1]";
    auto out = find_witness(G, M.parse(word), b, cfg.threads);
    json j{{"id", args.id},
           {"word", word},
           {"p", G.p()},
           {"verdict", !out.witness},
           {"candidates_tried", out.candidates_tried},
           {"bounds", bounds_json(b)}};
    if (out.witness) j["counterexample"] = G.to_string(*out.witness);
    emit(cfg, j, out.witness ? "false x=" + G.to_string(*out.witness) : "true");
    return kOk;
  }
  throw std::invalid_argument("check needs --word or --id {direct-product, wreath, factorial, lamplighter}");
}

int cmd_grig_act(const Config& cfg, const std::string& w, const std::string& s) {
  auto image = grig::act(w, s);
  emit(cfg, json{{"word", w}, {"input", s}, {"image", image}}, image);
  return kOk;
}

int cmd_grig_trivial(const Config& cfg, const std::string& w) {
  const bool trivial = grig::is_trivial(w);
  json j{{"word", w}, {"reduced", grig::reduce(w)}, {"trivial", trivial}};
  std::string text = trivial ? "trivial" : "nontrivial";
  if (!trivial)
    if (auto s = grig::moved_string(w, 32)) {
      j["moved"] = *s;
      text += " moves " + *s;
    }
  emit(cfg, j, text);
  return kOk;
}

int cmd_grig_verify(const Config& cfg, int max_len) {
  auto rep = grig::verify_identity(max_len, cfg.threads);
  json j = rep;
  std::ostringstream text;
  text << rep.checked << " words checked, " << rep.violations.size() << " violations";
  for (const auto& v : rep.violations) text << "\n  " << v;
  emit(cfg, j, text.str());
  return rep.violations.empty() ? kOk : kVerification;
}

int cmd_search(const Config& cfg, const std::string& text) {
  auto G = cfg.group();
  MixedCalculus M(G);
  auto w = M.parse(text);
  auto out = find_witness(G, w, cfg.bounds, cfg.threads);
  json j{{"word", M.to_string(w)},
         {"found", out.witness.has_value()},
         {"candidates_tried", out.candidates_tried},
         {"capacity_skips", out.capacity_skips},
         {"skipped_radii", out.skipped_radii},
         {"bounds", bounds_json(cfg.bounds)}};
  std::string line = "no witness within bounds";
  if (out.witness) {
    j["witness"] = G.to_string(*out.witness);
    j["evaluation"] = G.to_string(*out.value);
    line = G.to_string(*out.witness);
  }
  emit(cfg, j, line);
  return kOk;
}

int cmd_drive(const Config& cfg, std::size_t count, const std::string& output) {
  auto G = cfg.group();
  auto res = drive(G, count, cfg.bounds, cfg.threads);
  if (output.empty() || output == "-") {
    write_certificates(std::cout, res.certificates);
  } else {
    std::ofstream out(output);
    if (!out) throw std::runtime_error("cannot write " + output);
    write_certificates(out, res.certificates);
  }
  std::map<std::string, std::size_t> counts;
  for (const auto& c : res.certificates) ++counts[to_string(c.status)];
  json summary{{"certificates", res.certificates.size()},
               {"statuses", counts},
               {"witness_set", res.witness_set.size()},
               {"persistence_violations", res.persistence_violations},
               {"complete", res.complete}};
  if (!res.complete) summary["error"] = res.error;
  std::cerr << summary.dump() << "\n";
  if (!res.complete) return kCapacity;
  return res.persistence_violations == 0 ? kOk : kVerification;
}

int cmd_verify(const Config& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  auto certs = read_certificates(in);
  std::map<std::pair<int, std::string>, std::vector<Certificate>> by_instance;
  for (const auto& c : certs) by_instance[{c.p, c.c}].push_back(c);
  VerifyReport total;
  for (const auto& [key, group_certs] : by_instance) {
    Config icfg = cfg;
    icfg.p = key.first;
    icfg.c = key.second;
    auto rep = verify_certificates(icfg.group(), group_certs);
    total.checked += rep.checked;
    total.witnesses += rep.witnesses;
    total.inconclusive += rep.inconclusive;
    total.failures.insert(total.failures.end(), rep.failures.begin(), rep.failures.end());
  }
  json j{{"checked", total.checked},
         {"witnesses", total.witnesses},
         {"inconclusive", total.inconclusive},
         {"failures", total.failures},
         {"ok", total.ok()}};
  std::ostringstream text;
  text << total.checked << " certificates, " << total.witnesses << " witnesses verified, " << total.failures.size()
       << " failures";
  for (const auto& f : total.failures) text << "\n  " << f;
  emit(cfg, j, text.str());
  return total.ok() ? kOk : kVerification;
}

AWord sample_aword(std::mt19937_64& rng, int p, std::int64_t lo, std::int64_t hi, int max_len) {
  std::uniform_int_distribution<std::int64_t> idx(lo, hi);
  std::uniform_int_distribution<int> len(0, max_len), ex(1, p - 1);
  std::vector<ALetter> letters;
  for (int n = len(rng); n > 0; --n) letters.push_back({idx(rng), ex(rng)});
  return AWord(letters, p);
}

int cmd_props(const Config& cfg, std::size_t samples, std::int64_t width) {
  auto G = cfg.group();
  MixedCalculus M(G);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::int64_t> bit(0, 1);
  const std::int64_t span = std::max<std::int64_t>(width - 1, 0);
  std::map<std::string, std::size_t> failures{{"associativity", 0}, {"inverse", 0}, {"order", 0}, {"iota", 0}};
  for (std::size_t i = 0; i < samples; ++i) {
    // t-exponents stay in {0, 1}, so every product lives in [0, width].
    GElement g{sample_aword(rng, G.p(), 0, span, 5), bit(rng)};
    GElement h{sample_aword(rng, G.p(), 0, span, 5), bit(rng) - g.beta};
    GElement k{sample_aword(rng, G.p(), 0, span, 5), 0};
    failures["associativity"] += !G.equal(G.multiply(G.multiply(g, h), k), G.multiply(g, G.multiply(h, k)));
    failures["inverse"] += !G.is_trivial(G.multiply(g, G.inverse(g)));
    failures["order"] += G.order(g).infinite != (g.beta != 0);
    auto u = G.from_aword(sample_aword(rng, G.p(), 0, width, 4));
    if (G.is_trivial(u)) continue;
    auto w = M.reduce({VariableSyllable{1, 1}, ConstantSyllable{k}, VariableSyllable{2, -1}});
    auto v = G.from_aword(sample_aword(rng, G.p(), 0, width, 3));
    Assignment sigma{{1, G.multiply(G.multiply(v, u), v)}, {2, G.multiply(G.multiply(G.power(v, 2), u), G.power(v, 2))}};
    failures["iota"] += !G.equal(M.evaluate(M.iota_embed(w, u), v), M.evaluate(w, sigma));
  }
  std::size_t total = 0;
  std::ostringstream text;
  text << samples << " samples (seed " << cfg.seed << ")";
  for (const auto& [name, n] : failures) {
    total += n;
    text << ", " << name << " " << n;
  }
  emit(cfg, json{{"samples", samples}, {"seed", cfg.seed}, {"failures", failures}}, text.str());
  return total == 0 ? kOk : kVerification;
}

void report_error(bool as_json, const std::string& kind, const std::string& message) {
  if (as_json)
    std::cout << json{{"error", kind}, {"message", message}}.dump() << "\n";
  else
    std::cerr << "error (" << kind << "): " << message << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Window groups, mixed identities and witness search"};
  app.require_subcommand(1);
  Config cfg;

  auto add_instance = [&](CLI::App* sub) {
    sub->add_option("--p", cfg.p, "Prime p")->capture_default_str();
    sub->add_option("--c", cfg.c, "Class sequence c_1,c_2,... (last value repeats)")->capture_default_str();
    sub->add_option("--max-cosets", cfg.max_cosets, "Coset cap per enumeration")->capture_default_str();
    sub->add_option("--max-width", cfg.max_width, "Widest window a presentation may span")->capture_default_str();
    sub->add_option("--cache-dir", cfg.cache_dir, "Table cache directory (default $MIFLAB_CACHE)");
  };
  auto add_bounds = [&](CLI::App* sub) {
    sub->add_option("--radius", cfg.bounds.max_support_radius, "Largest candidate support radius")
        ->capture_default_str();
    sub->add_option("--max-beta", cfg.bounds.max_beta, "Largest |t-exponent| of a candidate")->capture_default_str();
    sub->add_option("--max-word-length", cfg.bounds.max_word_length, "Longest candidate A-part")
        ->capture_default_str();
    sub->add_option("--max-candidates", cfg.bounds.max_candidates, "Candidate budget per word")
        ->capture_default_str();
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--json", cfg.json, "Machine-readable output");
    sub->add_option("--threads", cfg.threads, "Worker threads (0 = available parallelism)")->capture_default_str();
  };

  std::string window = "0..1";
  auto* order = app.add_subcommand("order", "Order of the window group B(window)");
  add_instance(order);
  add_common(order);
  order->add_option("--window", window, "Window lo..hi")->capture_default_str();

  auto* presentation = app.add_subcommand("presentation", "Relators of B(window)");
  add_instance(presentation);
  add_common(presentation);
  presentation->add_option("--window", window, "Window lo..hi")->capture_default_str();

  CheckArgs check_args;
  auto* check = app.add_subcommand("check", "Decide a mixed identity on a finite group");
  add_common(check);
  add_bounds(check);
  check->add_option("--p", cfg.p, "Prime for the lamplighter check")->capture_default_str();
  check->add_option("--word", check_args.word, "Word in x, y, z, x<k> and group constants");
  check->add_option("--group", check_args.group, "Group spec, e.g. S3, D-4, C2xC3, C2wrC3");
  check->add_option("--const", check_args.constants, "Constant binding name=value")->expected(1)->take_all();
  check->add_option("--id", check_args.id, "Canned identity: direct-product, wreath, factorial, lamplighter");
  check->add_option("--A", check_args.a, "First direct factor")->capture_default_str();
  check->add_option("--B", check_args.b, "Second direct factor")->capture_default_str();
  check->add_option("--base", check_args.base, "Wreath base group")->capture_default_str();
  check->add_option("--top", check_args.top, "Wreath top group C<k>")->capture_default_str();
  check->add_option("--normal", check_args.normal, "Normal subgroup generator (repeatable)")->expected(1)->take_all();
  check->add_option("--element", check_args.element, "Element g of the normal subgroup");
  check->add_option("--support", check_args.radius, "Lamplighter support radius")->capture_default_str();

  auto* grig = app.add_subcommand("grig", "First Grigorchuk group");
  grig->require_subcommand(1);
  std::string grig_word, grig_string;
  int max_len = 6;
  auto* grig_act = grig->add_subcommand("act", "Image of a binary string");
  add_common(grig_act);
  grig_act->add_option("word", grig_word, "Word over a, b, c, d")->required();
  grig_act->add_option("string", grig_string, "Binary string")->required();
  auto* grig_trivial = grig->add_subcommand("trivial", "Word problem");
  add_common(grig_trivial);
  grig_trivial->add_option("word", grig_word, "Word over a, b, c, d")->required();
  auto* grig_verify = grig->add_subcommand("verify-identity", "Check [[[[x,b],d],d],ada] on short words");
  add_common(grig_verify);
  grig_verify->add_option("--max-len", max_len, "Longest reduced word")->capture_default_str();

  std::string search_word;
  auto* search = app.add_subcommand("search", "Find g with w(g) != 1");
  add_instance(search);
  add_bounds(search);
  add_common(search);
  search->add_option("--word", search_word, "Mixed word in x, a<i>, t")->required();

  std::size_t count = 50;
  std::string output;
  auto* drive_cmd = app.add_subcommand("drive", "Certify the first N enumerated words (JSON lines)");
  add_instance(drive_cmd);
  add_bounds(drive_cmd);
  add_common(drive_cmd);
  drive_cmd->add_option("--count", count, "Number of words")->capture_default_str();
  drive_cmd->add_option("-o,--output", output, "Certificate file (default stdout)");

  std::string cert_path;
  auto* verify = app.add_subcommand("verify", "Re-check a certificate file");
  add_instance(verify);
  add_common(verify);
  verify->add_option("file", cert_path, "JSON-lines certificates")->required()->check(CLI::ExistingFile);

  std::size_t samples = 1000;
  std::int64_t width = 2;
  auto* props = app.add_subcommand("props", "Sampled group-law and embedding checks");
  add_instance(props);
  add_common(props);
  props->add_option("--samples", samples, "Sample count")->capture_default_str();
  props->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  props->add_option("--width", width, "Window width of sampled supports")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (cfg.threads == 0) cfg.threads = std::max(1u, std::thread::hardware_concurrency());
    if (*order) return cmd_order(cfg, window);
    if (*presentation) return cmd_presentation(cfg, window);
    if (*check) return cmd_check(cfg, check_args);
    if (*grig_act) return cmd_grig_act(cfg, grig_word, grig_string);
    if (*grig_trivial) return cmd_grig_trivial(cfg, grig_word);
    if (*grig_verify) return cmd_grig_verify(cfg, max_len);
    if (*search) return cmd_search(cfg, search_word);
    if (*drive_cmd) return cmd_drive(cfg, count, output);
    if (*verify) return cmd_verify(cfg, cert_path);
    if (*props) return cmd_props(cfg, samples, width);
  } catch (const CapacityExceeded& e) {
    report_error(cfg.json, "capacity", e.what());
    return kCapacity;
  } catch (const VerificationFailure& e) {
    report_error(cfg.json, "verification", e.what());
    return kVerification;
  } catch (const ParseError& e) {
    report_error(cfg.json, "parse", e.what());
    return kParse;
  } catch (const std::invalid_argument& e) {
    report_error(cfg.json, "invalid-argument", e.what());
    return kParse;
  } catch (const json::exception& e) {
    report_error(cfg.json, "parse", e.what());
    return kParse;
  } catch (const std::exception& e) {
    report_error(cfg.json, "error", e.what());
    return kFailure;
  }
  return kOk;
}
