// hypermon: command-line front end.
//
//   hypermon check INPUT [FORMULA] [--formula-text F] [--engine enum|selfcomp|parallel] ...
//   hypermon monitor [FORMULA] [--formula-text F] [--input FILE] [--dag]
//   hypermon gen-qbf --reduction acyclic|tree --vars N --clauses M --alternations A --out DIR
//   hypermon transform INPUT (--minimize | --selfcomp N | --classify)
//   hypermon classify [FORMULA] [--formula-text F]
//   hypermon bench --suite qbf|random
//
// INPUT is either structure JSON or a trace file. Results go to stdout as
// JSON, diagnostics to stderr. check and monitor exit 0 when the (final)
// verdict holds, 1 when it does not and 2 on any error.

#include "hypermon/hypermon.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace hypermon;

namespace {

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_argument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invalid_argument("cannot write '" + path.string() + "'");
  out << text;
}

bool looks_like_json(const std::string& text) {
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    return c == '{';
  }
  return false;
}

struct FormulaSource {
  std::string path;
  std::string text;

  HyperFormula load() const {
    if (!path.empty() && !text.empty()) throw invalid_argument("give either a formula file or --formula-text");
    if (path.empty() && text.empty()) throw invalid_argument("no formula given");
    return parse_formula(text.empty() ? read_file(path) : text);
  }
};

std::vector<FiniteTrace> prepend(std::vector<FiniteTrace> traces, const std::optional<Letter>& first) {
  if (!first) return traces;
  for (auto& t : traces) {
    std::vector<Letter> letters{*first};
    letters.insert(letters.end(), t.letters().begin(), t.letters().end());
    t = FiniteTrace(std::move(letters));
  }
  return traces;
}

/// What INPUT turned into: a plain structure, or a log built from traces.
struct Input {
  std::optional<KripkeStructure> structure;
  std::optional<TraceLog> log;
  bool empty_trace_file = false;

  const KripkeStructure& kripke() const {
    if (log) return log->structure();
    if (!structure) throw empty_input("trace file contains no traces");
    return *structure;
  }
};

struct InputOptions {
  std::string path;
  bool dag = false;
  std::string prepend_letter;
};

Input load_input(const InputOptions& o) {
  const std::string text = read_file(o.path);
  Input in;
  if (looks_like_json(text)) {
    if (!o.prepend_letter.empty()) throw invalid_argument("--prepend-letter applies to trace files only");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw invalid_structure(std::string("malformed structure JSON: ") + e.what());
    }
    in.structure = structure_from_json(j);
    if (o.dag) in.structure = minimize_structure(*in.structure);
    return in;
  }
  std::optional<Letter> first;
  if (!o.prepend_letter.empty()) first = parse_trace(o.prepend_letter).letters().front();
  const auto traces = prepend(parse_traces(text), first);
  if (traces.empty()) {
    in.empty_trace_file = true;
    return in;
  }
  TraceLog log = build_tree(traces);
  in.log = o.dag ? minimize_to_dag(log) : std::move(log);
  return in;
}

EmptySetPolicy parse_policy(const std::string& s) {
  return s == "vacuous" ? EmptySetPolicy::Vacuous : EmptySetPolicy::Error;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("HYPERMON_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string_view(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw invalid_argument(std::string("HYPERMON_SEED is not an unsigned integer: '") + env + "'");
  }
  return 0;
}

void print(const nlohmann::json& j) { std::cout << j.dump() << '\n'; }

// ---------------------------------------------------------------------------
// check

struct CheckArgs {
  InputOptions input;
  FormulaSource formula;
  std::string engine = "enum";
  std::size_t workers = 1;
  std::string empty_set = "error";
};

int run_check(const CheckArgs& a) {
  const HyperFormula f = a.formula.load();
  // Fragment/engine mismatches are reported before touching the input.
  if (a.engine == "selfcomp" && !classify(f).alternation_free())
    throw unsupported_fragment("--engine=selfcomp needs an alternation-free formula, got " + to_string(classify(f)));
  if (a.engine == "parallel" && !parallel_supported(f))
    throw unsupported_fragment("--engine=parallel needs an alternation-free or two-quantifier AE/EA formula, got " +
                               to_string(classify(f)));

  const Input in = load_input(a.input);
  const CheckOptions opts{parse_policy(a.empty_set), nullptr};
  Verdict v;
  if (in.empty_trace_file) {
    if (a.engine == "selfcomp") throw empty_input("trace file contains no traces");
    v = check(std::span<const FiniteTrace>{}, f, opts);
  } else if (a.engine == "selfcomp") {
    v = check_selfcomp(in.kripke(), f);
    if (in.log && v.witness) {
      // Report trace-file ids like the other engines do.
      const auto order = collect_traces(in.kripke());
      const auto& ids = in.log->ingested();
      for (auto& b : *v.witness)
        b.trace = static_cast<std::size_t>(std::find(ids.begin(), ids.end(), order.at(b.trace)) - ids.begin());
    }
  } else if (a.engine == "parallel") {
    v = in.log ? check_parallel(*in.log, f, a.workers, opts) : check_parallel(*in.structure, f, a.workers, opts);
  } else {
    v = in.log ? check(*in.log, f, opts) : check(*in.structure, f, opts);
  }
  print(to_json(v));
  return v.holds ? kExitTrue : kExitFalse;
}

// ---------------------------------------------------------------------------
// monitor

struct MonitorArgs {
  FormulaSource formula;
  std::string input;
  bool dag = false;
  std::string empty_set = "error";
};

int run_monitor(const MonitorArgs& a) {
  Session s(a.formula.load(), a.dag ? LogMode::Dag : LogMode::Tree, parse_policy(a.empty_set));
  std::ifstream file;
  if (!a.input.empty() && a.input != "-") {
    file.open(a.input);
    if (!file) throw invalid_argument("cannot open '" + a.input + "'");
  }
  std::istream& in = file.is_open() ? static_cast<std::istream&>(file) : std::cin;

  auto emit = [&](const std::string& chunk) {
    Batch b{parse_traces(chunk), std::nullopt};
    if (b.traces.empty()) throw invalid_argument("batch " + std::to_string(s.history().size()) + " is empty");
    auto j = to_json(s.ingest(b));
    j["batch"] = s.history().size() - 1;
    j["locked"] = s.locked_verdict().has_value();
    print(j);
    std::cout.flush();
  };

  std::string line, chunk;
  bool pending = false;
  while (std::getline(in, line)) {
    if (detail::trim(line) == "---") {
      emit(chunk);
      chunk.clear();
      pending = false;
      continue;
    }
    chunk += line;
    chunk += '\n';
    pending = pending || !parse_traces(line).empty();
  }
  if (pending) emit(chunk);
  const Verdict v = s.current_verdict();
  if (s.history().empty()) print(to_json(v));
  return v.holds ? kExitTrue : kExitFalse;
}

// ---------------------------------------------------------------------------
// gen-qbf

struct GenArgs {
  std::string reduction = "acyclic";
  std::optional<std::uint64_t> seed;
  std::size_t vars = 3;
  std::size_t clauses = 3;
  std::size_t alternations = 1;
  std::string lead;
  std::string out;
};

std::optional<Quantifier> parse_lead(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return s == "forall" ? Quantifier::Forall : Quantifier::Exists;
}

int run_gen(const GenArgs& a) {
  const std::uint64_t seed = resolve_seed(a.seed);
  const Qbf q = random_qbf(seed, a.vars, a.clauses, a.alternations, parse_lead(a.lead));
  const ReductionOutput r = a.reduction == "tree" ? reduce_qbf_tree(q) : reduce_qbf_acyclic(q);

  const fs::path dir(a.out);
  fs::create_directories(dir);
  write_file(dir / "structure.json", to_json(r.structure).dump(2) + "\n");
  write_file(dir / "formula.txt", format_formula(r.formula) + "\n");
  nlohmann::ordered_json m;
  m["seed"] = seed;
  m["n"] = a.vars;
  m["m"] = a.clauses;
  m["alternations"] = a.alternations;
  m["ground_truth"] = r.ground_truth;
  m["reduction"] = a.reduction;
  m["states"] = r.structure.size();
  m["qbf"] = format_qbf(q);
  write_file(dir / "manifest.json", m.dump(2) + "\n");
  print(m);
  return kExitTrue;
}

// ---------------------------------------------------------------------------
// transform / classify

struct TransformArgs {
  InputOptions input;
  bool minimize = false;
  std::optional<std::size_t> selfcomp;
  bool classify = false;
};

int run_transform(const TransformArgs& a) {
  if (!a.minimize && !a.selfcomp && !a.classify)
    throw invalid_argument("transform needs one of --minimize, --selfcomp N, --classify");
  const Input in = load_input(a.input);
  const KripkeStructure& k = in.kripke();
  if (a.minimize) {
    print(to_json(minimize_structure(k)));
  } else if (a.selfcomp) {
    print(to_json(self_composition(k, *a.selfcomp)));
  } else {
    print({{"frame", to_string(classify_frame(k))}, {"states", k.size()}});
  }
  return kExitTrue;
}

int run_classify(const FormulaSource& src) {
  const HyperFormula f = src.load();
  const FragmentClass c = classify(f);
  print({{"class", to_string(c)},
         {"alternation_depth", c.alternation_depth},
         {"quantifiers", f.prefix.size()},
         {"formula", format_formula(f)}});
  return kExitTrue;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::string suite = "qbf";
  std::optional<std::uint64_t> seed;
  std::size_t min_vars = 3;
  std::size_t max_vars = 6;
  std::size_t instances = 4;
};

struct Timed {
  Verdict v;
  double ms;
};

template <class F>
Timed timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v = f();
  const auto t1 = std::chrono::steady_clock::now();
  return {std::move(v), std::chrono::duration<double, std::milli>(t1 - t0).count()};
}

void row(const std::vector<std::string>& cells) {
  static const int widths[] = {14, 8, 7, 7, 9, 8, 10, 8};
  for (std::size_t i = 0; i < cells.size(); ++i)
    std::cout << std::left << std::setw(i < std::size(widths) ? widths[i] : 10) << cells[i];
  std::cout << '\n';
}

std::string fixed3(double x) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << x;
  return s.str();
}

int bench_qbf(const BenchArgs& a, std::uint64_t seed) {
  row({"instance", "n", "m", "alt", "frame", "states", "time_ms", "tuples"});
  for (std::size_t n = a.min_vars; n <= a.max_vars; ++n) {
    const std::size_t m = n - 1;
    for (std::size_t alt = 0; alt < std::min<std::size_t>(n, 3); ++alt) {
      const std::uint64_t s = seed + n * 16 + alt;
      const Qbf q = random_qbf(s, n, m, alt);
      for (const auto* kind : {"acyclic", "tree"}) {
        const auto r = std::string(kind) == "tree" ? reduce_qbf_tree(q) : reduce_qbf_acyclic(q);
        const auto t = timed([&] { return check(r.structure, r.formula); });
        if (t.v.holds != r.ground_truth) throw error("verdict disagrees with the QBF oracle for seed " + std::to_string(s));
        row({"qbf-" + std::to_string(s), std::to_string(n), std::to_string(m), std::to_string(alt),
             to_string(classify_frame(r.structure)), std::to_string(r.structure.size()), fixed3(t.ms),
             std::to_string(t.v.stats.tuples_evaluated)});
      }
    }
  }
  return kExitTrue;
}

int bench_random(const BenchArgs& a, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto below = [&](std::size_t bound) { return static_cast<std::size_t>(rng() % bound); };
  const std::vector<std::string> props{"a", "b", "c"};
  const std::vector<std::string> bodies{"G (a@p1 <-> a@p2) -> G (b@p1 <-> b@p2)", "F (a@p1 & !a@p2)",
                                        "(a@p1 U b@p2) | G c@p1"};
  row({"instance", "traces", "alt", "frame", "states", "time_ms", "tuples"});
  for (std::size_t i = 0; i < a.instances; ++i) {
    const std::size_t count = 4 + below(8 * (i + 1));
    std::vector<FiniteTrace> traces;
    for (std::size_t t = 0; t < count; ++t) {
      std::vector<Letter> letters{Letter{}};
      const std::size_t len = 1 + below(8);
      for (std::size_t j = 0; j < len; ++j) {
        std::vector<std::string> l;
        for (const auto& p : props)
          if (below(2)) l.push_back(p);
        letters.emplace_back(std::move(l));
      }
      traces.emplace_back(std::move(letters));
    }
    const TraceLog log = build_tree(traces);
    const std::string& body = bodies[below(bodies.size())];
    for (const auto* prefix : {"forall p1. forall p2. ", "forall p1. exists p2. "}) {
      const HyperFormula f = parse_formula(std::string(prefix) + body);
      const auto t = timed([&] { return check(log, f); });
      row({"random-" + std::to_string(i), std::to_string(log.trace_count()),
           std::to_string(classify(f).alternation_depth), to_string(classify_frame(log.structure())),
           std::to_string(log.structure().size()), fixed3(t.ms), std::to_string(t.v.stats.tuples_evaluated)});
    }
  }
  return kExitTrue;
}

int run_bench(const BenchArgs& a) {
  if (a.min_vars == 0 || a.min_vars > a.max_vars) throw invalid_argument("need 1 <= --min-vars <= --max-vars");
  const std::uint64_t seed = resolve_seed(a.seed);
  return a.suite == "random" ? bench_random(a, seed) : bench_qbf(a, seed);
}

void add_formula_options(CLI::App* cmd, FormulaSource& src) {
  cmd->add_option("formula", src.path, "File holding the formula");
  cmd->add_option("--formula-text", src.text, "Formula given inline");
}

void add_input_options(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("input", in.path, "Structure JSON or trace file")->required();
  cmd->add_flag("--dag", in.dag, "Minimize the input into a prefix- and suffix-sharing DAG");
  cmd->add_option("--prepend-letter", in.prepend_letter,
                  "Prefix every trace with this letter (shifts all temporal operators by one step)");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"HyperLTL model checking and monitoring over finite trace logs"};
  app.require_subcommand(1);

  CheckArgs check_args;
  auto* check_cmd = app.add_subcommand("check", "Decide whether a structure or trace log satisfies a formula");
  add_input_options(check_cmd, check_args.input);
  add_formula_options(check_cmd, check_args.formula);
  check_cmd->add_option("--engine", check_args.engine)
      ->check(CLI::IsMember({"enum", "selfcomp", "parallel"}))
      ->capture_default_str();
  check_cmd->add_option("--workers", check_args.workers)->check(CLI::PositiveNumber)->capture_default_str();
  check_cmd->add_option("--empty-set", check_args.empty_set)
      ->check(CLI::IsMember({"error", "vacuous"}))
      ->capture_default_str();

  MonitorArgs monitor_args;
  auto* monitor_cmd = app.add_subcommand("monitor", "Re-check a policy after every batch of traces");
  add_formula_options(monitor_cmd, monitor_args.formula);
  monitor_cmd->add_option("--input", monitor_args.input, "Batch stream (default: stdin); batches end at '---'");
  monitor_cmd->add_flag("--dag", monitor_args.dag, "Keep the log minimized");
  monitor_cmd->add_option("--empty-set", monitor_args.empty_set)
      ->check(CLI::IsMember({"error", "vacuous"}))
      ->capture_default_str();

  GenArgs gen_args;
  auto* gen_cmd = app.add_subcommand("gen-qbf", "Generate a labeled instance from a random QBF");
  gen_cmd->add_option("--reduction", gen_args.reduction)
      ->check(CLI::IsMember({"acyclic", "tree"}))
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen_args.seed, "Seed (falls back to HYPERMON_SEED, then 0)");
  gen_cmd->add_option("--vars", gen_args.vars)->capture_default_str();
  gen_cmd->add_option("--clauses", gen_args.clauses)->capture_default_str();
  gen_cmd->add_option("--alternations", gen_args.alternations)->capture_default_str();
  gen_cmd->add_option("--lead", gen_args.lead, "Lead quantifier (default: drawn from the seed)")
      ->check(CLI::IsMember({"exists", "forall"}));
  gen_cmd->add_option("--out", gen_args.out, "Output directory")->required();

  TransformArgs transform_args;
  auto* transform_cmd = app.add_subcommand("transform", "Minimize, self-compose or classify a structure");
  add_input_options(transform_cmd, transform_args.input);
  auto* minimize = transform_cmd->add_flag("--minimize", transform_args.minimize);
  auto* selfcomp = transform_cmd->add_option("--selfcomp", transform_args.selfcomp)->check(CLI::PositiveNumber);
  auto* classify_flag = transform_cmd->add_flag("--classify", transform_args.classify);
  minimize->excludes(selfcomp)->excludes(classify_flag);
  selfcomp->excludes(classify_flag);

  FormulaSource classify_src;
  auto* classify_cmd = app.add_subcommand("classify", "Report a formula's quantifier pattern");
  add_formula_options(classify_cmd, classify_src);

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Time the engine on generated instance families");
  bench_cmd->add_option("--suite", bench_args.suite)->check(CLI::IsMember({"qbf", "random"}))->capture_default_str();
  bench_cmd->add_option("--seed", bench_args.seed, "Seed (falls back to HYPERMON_SEED, then 0)");
  bench_cmd->add_option("--min-vars", bench_args.min_vars)->capture_default_str();
  bench_cmd->add_option("--max-vars", bench_args.max_vars)->capture_default_str();
  bench_cmd->add_option("--instances", bench_args.instances, "Random suite size")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*check_cmd) return run_check(check_args);
    if (*monitor_cmd) return run_monitor(monitor_args);
    if (*gen_cmd) return run_gen(gen_args);
    if (*transform_cmd) return run_transform(transform_args);
    if (*classify_cmd) return run_classify(classify_src);
    if (*bench_cmd) return run_bench(bench_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
