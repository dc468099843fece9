#pragma once

#include "zeck/continuation.hpp"
#include "zeck/experiments.hpp"
#include "zeck/leading_blocks.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace zeck::cli {

using Json = nlohmann::ordered_json;

enum class Format { table, json, csv };

inline std::string to_string(Format f) {
  switch (f) {
    case Format::table: return "table";
    case Format::json: return "json";
    case Format::csv: return "csv";
  }
  return "table";
}

inline Format parse_format(const std::string& s) {
  if (s == "table") return Format::table;
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  throw std::invalid_argument("unknown format '" + s + "' (expected table, json or csv)");
}

/// Everything a run depends on. Serializes to JSON and back unchanged.
struct RunConfig {
  std::string command;
  std::string system = "1,0";
  Format format = Format::table;
  int digits = 12;
  unsigned precision_bits = 0;  // 0: ZB_PRECISION_BITS or the default
  std::uint64_t seed = 1;
  unsigned threads = 0;         // 0: machine parallelism
  std::map<std::string, std::string> params;

  Json to_json() const {
    return Json{{"command", command}, {"system", system},   {"format", to_string(format)},
                {"digits", digits},   {"precision_bits", precision_bits}, {"seed", seed},
                {"threads", threads}, {"params", params}};
  }

  static RunConfig from_json(const Json& j) {
    RunConfig c;
    c.command = j.at("command").get<std::string>();
    c.system = j.at("system").get<std::string>();
    c.format = parse_format(j.at("format").get<std::string>());
    c.digits = j.at("digits").get<int>();
    c.precision_bits = j.at("precision_bits").get<unsigned>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.threads = j.at("threads").get<unsigned>();
    c.params = j.at("params").get<std::map<std::string, std::string>>();
    return c;
  }

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct OptionSpec {
  const char* name;
  const char* help;
  const char* fallback;  // nullptr: required
};

struct CommandSpec {
  const char* name;
  const char* help;
  std::vector<OptionSpec> options;
};

inline const std::vector<CommandSpec>& commands() {
  static const std::vector<CommandSpec> table = {
      {"expand", "Greedy ℋ-expansion (generalized Zeckendorf decomposition) of n under the system",
       {{"n", "positive integer(s), comma separated", nullptr}}},
      {"blocks", "The ordered family ℋ_s of leading blocks of length s with their Benford probabilities",
       {{"s", "block length", nullptr}}},
      {"prob", "Probability of a leading block: strong Benford's law log_ψ(b̃·Ĥ / b·Ĥ), or a continuation profile",
       {{"lb", "leading block, comma separated", nullptr},
        {"s", "block length (defaults to the length of --lb)", "0"},
        {"profile", "limit profile: benford, line, power:E, fake-benford:S", "benford"}}},
      {"freq", "Empirical leading-block frequencies LB_s(K_n) against strong Benford probabilities",
       {{"seq", "sequence: power:A, lucas, linrec:C..:I.., floorgeo:C:P/Q, monomial:A, synth:PROFILE[@OFFSET]", nullptr},
        {"s", "block length", nullptr},
        {"count", "number of terms", nullptr}}},
      {"synth", "Sequence K_n = floor(H_n + (H_{n+1}-H_n) h∞({nπ})) induced by a uniform continuation",
       {{"profile", "limit profile: line, benford, power:E, fake-benford:S", "line"},
        {"count", "number of terms", nullptr},
        {"offset", "index offset", "0"}}},
      {"equidist", "Star discrepancy of the fractional parts frac(h^{-1}(K_n)) under a continuation",
       {{"seq", "sequence spec (see freq)", nullptr},
        {"count", "number of terms", nullptr},
        {"profile", "limit profile of the continuation", "benford"},
        {"values", "also print the fractional parts (yes/no)", "no"}}},
      {"oscillate", "Running proportion of monomials k^a with a given leading block, with lim sup / lim inf",
       {{"a", "exponent", nullptr},
        {"lb", "leading block", nullptr},
        {"min-m", "first window", "20"},
        {"max-m", "last window", "30"},
        {"trace", "also print every sampled point (yes/no)", "no"}}},
      {"within", "Benford behaviour within expansions: P_t(n) for n uniform in [1, K_{t+1})",
       {{"outer", "outer system K (principal block)", nullptr},
        {"lb", "leading block over the inner system (--block)", nullptr},
        {"t", "expansion length", nullptr},
        {"epsilon", "tolerance around log_ψ(b̃·Ĥ / b·Ĥ)", "0.05"},
        {"samples", "number of sampled n", "10000"}}},
      {"real-expand", "ℋ-expression μ of a real number in (0,1): beta = Σ μ(k) θ^k",
       {{"beta", "real in (0,1); products/quotients of numbers, phi, omega, sqrt5, pi, e", nullptr},
        {"depth", "number of digits", "40"}}},
      {"concentrate", "Leading block of length s that a·ψ^n(1+o(1)) concentrates on",
       {{"a", "leading coefficient a > 0 (same syntax as --beta)", nullptr}, {"s", "block length", nullptr}}},
      {"absolute", "Absolute Benford's law: frequency reports across several systems",
       {{"seq", "sequence spec (see freq)", nullptr},
        {"systems", "principal blocks separated by ';'", "1,0;1,1;2,1;3,2,1;9,9"},
        {"s-max", "largest block length", "3"},
        {"count", "number of terms", nullptr},
        {"threshold", "deviation that raises a flag", "0.03"}}},
  };
  return table;
}

namespace detail {

inline std::string num(double v, int digits) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

inline Json jnum(double v, int digits) { return std::stod(num(v, digits)); }

inline std::uint64_t to_u64(const std::string& text, const char* what) {
  const BigInt v = parse_bigint(text);
  if (v < 0 || v > BigInt(std::numeric_limits<std::uint64_t>::max())) {
    throw std::invalid_argument(std::string(what) + " out of range: '" + text + "'");
  }
  return v.convert_to<std::uint64_t>();
}

inline double to_double(const std::string& text, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0' || !std::isfinite(v)) {
    throw std::invalid_argument(std::string("malformed ") + what + " '" + text + "'");
  }
  return v;
}

inline bool to_flag(const std::string& text) {
  if (text == "yes" || text == "true" || text == "1") return true;
  if (text == "no" || text == "false" || text == "0") return false;
  throw std::invalid_argument("expected yes or no, got '" + text + "'");
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& out, Format f) const {
    if (f == Format::csv) {
      auto line = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) {
          const bool quote = r[i].find_first_of(",\"") != std::string::npos;
          if (i) out << ',';
          if (quote) {
            out << '"';
            for (char c : r[i]) out << (c == '"' ? "\"\"" : std::string(1, c));
            out << '"';
          } else {
            out << r[i];
          }
        }
        out << '\n';
      };
      line(header);
      for (const auto& r : rows) line(r);
      return;
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) out << "  ";
        out << r[i];
        if (i + 1 < r.size()) out << std::string(width[i] - r[i].size(), ' ');
      }
      out << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
  }
};

struct Output {
  Json json;
  Table table;
  std::string plain;  // replaces the table in table format when set
};

class Runner {
 public:
  explicit Runner(const RunConfig& c) : c_(c), sys_(NumerationSystem::parse(c.system)) {}

  Output run() {
    const std::string& cmd = c_.command;
    if (cmd == "expand") return expand();
    if (cmd == "blocks") return blocks();
    if (cmd == "prob") return prob();
    if (cmd == "freq") return freq();
    if (cmd == "synth") return synth();
    if (cmd == "equidist") return equidist();
    if (cmd == "oscillate") return oscillate();
    if (cmd == "within") return within();
    if (cmd == "real-expand") return real_expand();
    if (cmd == "concentrate") return concentrate();
    if (cmd == "absolute") return absolute();
    throw std::invalid_argument("unknown subcommand '" + cmd + "'");
  }

 private:
  const std::string& p(const std::string& key) const {
    const auto it = c_.params.find(key);
    if (it == c_.params.end()) throw std::invalid_argument("missing option --" + key);
    return it->second;
  }

  std::string n(double v) const { return num(v, c_.digits); }
  Json jn(double v) const { return jnum(v, c_.digits); }
  unsigned threads() const { return c_.threads ? c_.threads : default_threads(); }

  std::size_t size_param(const std::string& key) const {
    return static_cast<std::size_t>(to_u64(p(key), ("--" + key).c_str()));
  }

  static Json digits_json(const CoefficientFunction& d) { return Json(d.digits()); }

  LeadingBlock block_param(const std::string& key, const NumerationSystem& sys, std::size_t s = 0) const {
    const CoefficientFunction d = CoefficientFunction::parse(p(key));
    return s ? make_block(d, s, sys) : make_block(d, sys);
  }

  Output expand() {
    Output o;
    o.json["system"] = sys_.id();
    o.json["results"] = Json::array();
    o.table.header = {"n", "digits"};
    for (const auto& tok : zeck::detail::split(p("n"), ',')) {
      const BigInt v = parse_bigint(tok);
      const CoefficientFunction e = zeck::expand(v, sys_);
      o.json["results"].push_back({{"n", v.str()}, {"digits", digits_json(e)}, {"compact", e.compact()}});
      o.table.rows.push_back({v.str(), e.compact()});
      o.plain += e.compact() + "\n";
    }
    return o;
  }

  Output blocks() {
    const std::size_t s = size_param("s");
    const BlockFamily fam = enumerate_blocks(s, sys_);
    Output o;
    o.json["system"] = sys_.id();
    o.json["s"] = s;
    o.json["blocks"] = Json::array();
    o.table.header = {"block", "probability"};
    for (std::size_t k = 0; k < fam.size(); ++k) {
      const double pr = benford_probability(fam.block(k));
      o.json["blocks"].push_back({{"block", digits_json(fam.blocks[k])}, {"probability", jn(pr)}});
      o.table.rows.push_back({fam.blocks[k].to_string(), n(pr)});
    }
    o.json["exclusive"] = digits_json(fam.exclusive);
    return o;
  }

  Output prob() {
    const std::size_t s = size_param("s");
    const LeadingBlock b = block_param("lb", sys_, s);
    const LimitProfile prof = parse_profile(p("profile"), sys_);
    const double pr = prof.kind() == ProfileKind::benford ? benford_probability(b) : profile_probability(b, prof);
    Output o;
    o.json = {{"system", sys_.id()},     {"block", digits_json(b.digits)}, {"s", b.s},
              {"profile", prof.name()}, {"probability", jn(pr)}};
    o.table.header = {"block", "profile", "probability"};
    o.table.rows.push_back({b.digits.to_string(), prof.name(), n(pr)});
    o.plain = n(pr) + "\n";
    return o;
  }

  Json report_json(const FrequencyReport& r) const {
    Json j{{"system", r.system},
           {"s", r.s},
           {"terms", r.terms},
           {"defined", r.defined},
           {"max_deviation", jn(r.max_deviation)},
           {"blocks", Json::array()}};
    for (const auto& f : r.blocks) {
      j["blocks"].push_back({{"block", digits_json(f.block)},
                             {"count", f.count},
                             {"empirical", jn(f.empirical)},
                             {"theoretical", jn(f.theoretical)},
                             {"deviation", jn(f.deviation)}});
    }
    return j;
  }

  Output freq() {
    const SequenceSpec spec = parse_sequence(p("seq"), sys_);
    const auto r = empirical_block_frequency(spec, sys_, size_param("s"), size_param("count"), threads());
    Output o;
    o.json = report_json(r);
    o.json["sequence"] = spec.to_string();
    o.table.header = {"block", "count", "empirical", "theoretical", "deviation"};
    for (const auto& f : r.blocks) {
      o.table.rows.push_back({f.block.to_string(), std::to_string(f.count), n(f.empirical), n(f.theoretical),
                              n(f.deviation)});
    }
    if (c_.format == Format::table) {
      std::ostringstream os;
      o.table.write(os, Format::table);
      os << "terms " << r.terms << ", defined " << r.defined << ", max deviation " << n(r.max_deviation) << '\n';
      o.plain = os.str();
    }
    return o;
  }

  Output synth() {
    const LimitProfile prof = parse_profile(p("profile"), sys_);
    const auto terms = synthesize(prof, sys_, size_param("count"), size_param("offset"));
    Output o;
    o.json = {{"system", sys_.id()}, {"profile", prof.name()}, {"offset", size_param("offset")}, {"terms", Json::array()}};
    o.table.header = {"n", "K_n"};
    for (std::size_t i = 0; i < terms.size(); ++i) {
      o.json["terms"].push_back(terms[i].str());
      o.table.rows.push_back({std::to_string(i + 1), terms[i].str()});
      o.plain += (i ? " " : "") + terms[i].str();
    }
    o.plain += "\n";
    return o;
  }

  Output equidist() {
    const SequenceSpec spec = parse_sequence(p("seq"), sys_);
    const LimitProfile prof = parse_profile(p("profile"), sys_);
    const auto fr = fractional_parts(generate(spec, size_param("count")), prof, sys_);
    const double d = star_discrepancy(fr);
    Output o;
    o.json = {{"system", sys_.id()}, {"sequence", spec.to_string()}, {"profile", prof.name()},
              {"count", fr.size()},  {"star_discrepancy", jn(d)}};
    o.table.header = {"n", "frac"};
    const bool values = to_flag(p("values"));
    if (values) {
      o.json["values"] = Json::array();
      for (std::size_t i = 0; i < fr.size(); ++i) {
        o.json["values"].push_back(jn(fr[i]));
        o.table.rows.push_back({std::to_string(i + 1), n(fr[i])});
      }
    }
    if (c_.format == Format::table) {
      std::ostringstream os;
      if (values) o.table.write(os, Format::table);
      os << "star discrepancy " << n(d) << " over " << fr.size() << " terms\n";
      o.plain = os.str();
    } else if (!values) {
      o.table.header = {"count", "star_discrepancy"};
      o.table.rows.push_back({std::to_string(fr.size()), n(d)});
    }
    return o;
  }

  Output oscillate() {
    const auto a = to_u64(p("a"), "--a");
    if (a == 0 || a > 1u << 20) throw std::invalid_argument("--a must be in 1..1048576, got '" + p("a") + "'");
    const LeadingBlock b = block_param("lb", sys_);
    const auto tr = oscillation_scan(static_cast<unsigned>(a), b, size_param("min-m"), size_param("max-m"));
    Output o;
    o.json = {{"system", sys_.id()}, {"a", a}, {"block", digits_json(b.digits)},
              {"beta_lo", jn(tr.beta_lo)}, {"beta_hi", jn(tr.beta_hi)},
              {"limsup", tr.limsup ? jn(*tr.limsup) : Json()}, {"liminf", tr.liminf ? jn(*tr.liminf) : Json()},
              {"empirical_max", jn(tr.empirical_max)}, {"empirical_min", jn(tr.empirical_min)}};
    const bool trace = to_flag(p("trace"));
    if (trace) {
      o.json["points"] = Json::array();
      for (const auto& pt : tr.points) o.json["points"].push_back({{"m", pt.m}, {"n", pt.n.str()}, {"proportion", jn(pt.proportion)}});
      o.table.header = {"m", "n", "proportion"};
      for (const auto& pt : tr.points) o.table.rows.push_back({std::to_string(pt.m), pt.n.str(), n(pt.proportion)});
    } else {
      o.table.header = {"limsup", "liminf", "empirical_max", "empirical_min"};
      o.table.rows.push_back({tr.limsup ? n(*tr.limsup) : "", tr.liminf ? n(*tr.liminf) : "", n(tr.empirical_max),
                              n(tr.empirical_min)});
    }
    if (c_.format == Format::table) {
      std::ostringstream os;
      if (trace) o.table.write(os, Format::table);
      if (tr.limsup) os << "lim sup " << n(*tr.limsup) << ", lim inf " << n(*tr.liminf) << '\n';
      os << "sampled max " << n(tr.empirical_max) << ", sampled min " << n(tr.empirical_min) << " over windows "
         << p("min-m") << ".." << p("max-m") << '\n';
      o.plain = os.str();
    }
    return o;
  }

  Output within() {
    const NumerationSystem outer = NumerationSystem::parse(p("outer"));
    const LeadingBlock b = block_param("lb", sys_);
    const double eps = to_double(p("epsilon"), "--epsilon");
    const auto r = within_expansion(outer, b, size_param("t"), eps, to_u64(p("samples"), "--samples"), c_.seed,
                                    threads());
    Output o;
    o.json = {{"outer", r.outer},     {"inner", r.inner},         {"block", digits_json(r.block)},
              {"t", r.t},             {"expected", jn(r.expected)}, {"epsilon", jn(r.epsilon)},
              {"samples", r.samples}, {"hits", r.hits},           {"fraction", jn(r.fraction)},
              {"mean", jn(r.mean)},   {"seed", c_.seed}};
    o.table.header = {"t", "expected", "epsilon", "samples", "fraction", "mean"};
    o.table.rows.push_back({std::to_string(r.t), n(r.expected), n(r.epsilon), std::to_string(r.samples), n(r.fraction),
                            n(r.mean)});
    return o;
  }

  Output real_expand() {
    const auto mu = real_expansion(parse_real(p("beta")), sys_, size_param("depth"));
    const CoefficientFunction d(mu.digits);
    Output o;
    o.json = {{"system", sys_.id()}, {"beta", p("beta")}, {"depth", mu.depth}, {"digits", digits_json(d)},
              {"terminates", mu.terminates}};
    o.table.header = {"depth", "digits"};
    o.table.rows.push_back({std::to_string(mu.depth), d.to_string()});
    o.plain = d.to_string() + "\n";
    return o;
  }

  Output concentrate() {
    const auto c = concentration_block(parse_real(p("a")), sys_, size_param("s"));
    Output o;
    o.json = {{"system", sys_.id()}, {"a", p("a")}, {"s", c.block.s}, {"block", digits_json(c.block.digits)},
              {"c", jn(c.c)}, {"on_boundary", c.on_boundary}};
    o.table.header = {"block", "c", "on_boundary"};
    o.table.rows.push_back({c.block.digits.to_string(), n(c.c), c.on_boundary ? "yes" : "no"});
    return o;
  }

  Output absolute() {
    const SequenceSpec spec = parse_sequence(p("seq"), sys_);
    std::vector<NumerationSystem> systems;
    for (const auto& tok : zeck::detail::split(p("systems"), ';')) systems.push_back(NumerationSystem::parse(tok));
    const double threshold = to_double(p("threshold"), "--threshold");
    const auto rep = absolute_benford_suite(spec, systems, size_param("s-max"), size_param("count"), threshold, threads());
    Output o;
    o.json = {{"sequence", spec.to_string()}, {"threshold", jn(threshold)}, {"reports", Json::array()},
              {"flags", Json::array()},       {"skipped", rep.skipped}};
    for (const auto& r : rep.reports) o.json["reports"].push_back(report_json(r));
    for (const auto& f : rep.flags) {
      o.json["flags"].push_back({{"system", f.system}, {"s", f.s}, {"block", digits_json(f.block)},
                                 {"deviation", jn(f.deviation)}});
    }
    o.table.header = {"system", "s", "blocks", "max_deviation", "flagged"};
    for (const auto& r : rep.reports) {
      std::size_t flagged = 0;
      for (const auto& f : rep.flags) flagged += f.system == r.system && f.s == r.s;
      o.table.rows.push_back({r.system, std::to_string(r.s), std::to_string(r.blocks.size()), n(r.max_deviation),
                              std::to_string(flagged)});
    }
    for (const auto& s : rep.skipped) o.table.rows.push_back({s, "", "", "skipped", ""});
    return o;
  }

  const RunConfig& c_;
  NumerationSystem sys_;
};

inline void apply_precision(unsigned bits) {
  if (bits == 0) return;
  const unsigned current = zeck::detail::precision_bits_storage();
  if (current != 0) {
    if (current != bits) {
      throw std::invalid_argument("--precision " + std::to_string(bits) + ": precision is already fixed at " +
                                  std::to_string(current) + " bits in this process");
    }
    return;
  }
  if (bits < 64 || bits > (1u << 20)) throw std::invalid_argument("--precision must be in [64, 1048576]");
  setenv("ZB_PRECISION_BITS", std::to_string(bits).c_str(), 1);
  ext_precision_bits();
}

}  // namespace detail

/// Executes a parsed configuration. Exit codes: 0 success, 1 domain error,
/// 2 usage error.
inline int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    detail::apply_precision(config.precision_bits);
    if (config.digits < 1 || config.digits > 40) throw std::invalid_argument("--digits must be in 1..40");
    const detail::Output o = detail::Runner(config).run();
    if (config.format == Format::json) out << o.json.dump(2) << '\n';
    else if (config.format == Format::table && !o.plain.empty()) out << o.plain;
    else o.table.write(out, config.format);
    return 0;
  } catch (const std::invalid_argument& e) {
    err << "zeck " << config.command << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "zeck " << config.command << ": " << e.what() << '\n';
    return 1;
  }
}

/// Parses argv (without the program name) into a configuration; returns an
/// exit code instead when parsing ends the run (help, usage error).
inline std::variant<RunConfig, int> parse(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized Zeckendorf expansions and their leading-block distributions", "zeck"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  std::string config_path;
  bool print_config = false;
  app.add_option("--config", config_path, "run a configuration saved with --print-config");
  app.add_flag("--print-config", print_config, "print the parsed configuration as JSON instead of running");

  RunConfig cfg;
  std::string format = "table";
  std::map<std::string, std::string> values;
  std::vector<std::string> n_values;
  for (const auto& spec : commands()) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.help);
    sub->add_option("--block", cfg.system, "principal block L = a1,...,aN")->capture_default_str();
    sub->add_option("--format", format, "output format: table, json, csv")->capture_default_str();
    sub->add_option("--digits", cfg.digits, "significant digits of printed reals")->capture_default_str();
    sub->add_option("--precision", cfg.precision_bits, "extended precision in bits (default ZB_PRECISION_BITS or 256)");
    sub->add_option("--seed", cfg.seed, "seed for sampling")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "worker threads (default: machine parallelism)");
    for (const auto& opt : spec.options) {
      std::string& slot = values[std::string(spec.name) + "/" + opt.name];
      CLI::Option* o = sub->add_option(std::string("--") + opt.name, slot, opt.help);
      if (opt.fallback) {
        slot = opt.fallback;
        o->capture_default_str();
      } else {
        o->required();
      }
    }
  }
  std::vector<const char*> argv{"zeck"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  if (!config_path.empty()) {
    if (!app.get_subcommands().empty()) {
      err << "zeck: --config cannot be combined with a subcommand\n";
      return 2;
    }
    std::ifstream in(config_path);
    if (!in) {
      err << "zeck: cannot read '" << config_path << "'\n";
      return 2;
    }
    try {
      return RunConfig::from_json(Json::parse(in));
    } catch (const std::exception& e) {
      err << "zeck: malformed configuration '" << config_path << "': " << e.what() << '\n';
      return 2;
    }
  }
  if (app.get_subcommands().empty()) {
    out << app.help();
    return 2;
  }
  const CLI::App* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();
  try {
    cfg.format = parse_format(format);
  } catch (const std::invalid_argument& e) {
    err << "zeck " << cfg.command << ": " << e.what() << '\n';
    return 2;
  }
  for (const auto& spec : commands()) {
    if (cfg.command != spec.name) continue;
    for (const auto& opt : spec.options) cfg.params[opt.name] = values[std::string(spec.name) + "/" + opt.name];
  }
  if (print_config) {
    out << cfg.to_json().dump(2) << '\n';
    return 0;
  }
  return cfg;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto parsed = parse(args, out, err);
  if (const int* code = std::get_if<int>(&parsed)) return *code;
  return execute(std::get<RunConfig>(parsed), out, err);
}

}  // namespace zeck::cli
