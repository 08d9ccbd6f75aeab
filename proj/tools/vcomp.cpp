// vcomp: command-line front end.
//
//   vcomp analyze ENSEMBLE
//   vcomp minimize ENSEMBLE [--n N] [--ancilla-dim A] [--purifier-dim P | --pure-extensions] ...
//   vcomp simulate-js ENSEMBLE --n N [--eps E | --dim-cap M | --rate-budget R | --max-minority K]
//   vcomp simulate-ep ENSEMBLE --k K [--n N] [--assignment FILE | --trivial | optimizer flags]
//   vcomp sweep ENSEMBLE --protocol js --n 2:10 ...   (or --protocol ep --k 1:4)
//
// Exit codes: 0 ok, 1 usage/parse, 2 validation, 3 bound violated, 4 resource guard.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vcomp/bounds.hpp"
#include "vcomp/errors.hpp"
#include "vcomp/extopt.hpp"
#include "vcomp/io.hpp"
#include "vcomp/protocol.hpp"
#include "vcomp/states.hpp"
#include "vcomp/version.hpp"

namespace {

using vcomp::io::Json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitBound = 3;
constexpr int kExitGuard = 4;

const std::vector<std::string> kAnalyzeColumns = {"item", "probability", "entropy", "support_dim", "holevo_quantity"};
const std::vector<std::string> kMinimizeColumns = {"start",      "origin",    "initial_entropy", "final_entropy",
                                                   "iterations", "converged", "fallback",        "best"};
const std::vector<std::string> kProtocolColumns = {
    "protocol",     "n",            "k",                  "block_length", "channel_dim", "rate",  "retained_mass",
    "avg_fidelity", "extension_fidelity", "stderr",       "sampled",     "samples",     "seed"};

struct Options {
  std::string command;
  std::string ensemble;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 0;
  std::size_t threads = 0;

  std::string n = "1";  // a single value, or a range/list for js sweeps
  std::string k = "1";  // likewise for ep sweeps
  std::optional<double> eps;
  std::optional<std::size_t> dim_cap;
  std::optional<double> rate_budget;
  std::optional<std::size_t> max_minority;
  std::size_t samples = 1000;
  std::string sampling = "auto";
  bool per_sequence = false;

  std::size_t ancilla_dim = 2;
  std::size_t purifier_dim = 0;
  bool pure_extensions = false;
  std::size_t multistarts = 8;
  std::size_t max_iters = 500;
  std::string assignment;
  std::string assignment_out;
  bool trivial = false;
  std::string protocol = "js";
};

struct Output {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
  std::vector<vcomp::BoundReport> bounds;
  std::vector<std::string> notes;  // "key=value" summary lines
  Json extra = Json::object();
};

std::size_t parse_size(const std::string& s, const std::string& flag) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    throw vcomp::ParseError(flag + ": '" + s + "' is not a positive integer");
  }
  if (pos != s.size() || v == 0 || s.front() == '-') {
    throw vcomp::ParseError(flag + ": '" + s + "' is not a positive integer");
  }
  return static_cast<std::size_t>(v);
}

// "5", "2:10" (inclusive) or "2,4,8".
std::vector<std::size_t> parse_values(const std::string& s, const std::string& flag) {
  std::vector<std::size_t> out;
  if (const auto colon = s.find(':'); colon != std::string::npos) {
    const std::size_t lo = parse_size(s.substr(0, colon), flag);
    const std::size_t hi = parse_size(s.substr(colon + 1), flag);
    if (hi < lo) throw vcomp::ParseError(flag + ": empty range '" + s + "'");
    for (std::size_t v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_size(item, flag));
  if (out.empty()) throw vcomp::ParseError(flag + ": no values");
  return out;
}

std::size_t parse_single(const std::string& s, const std::string& flag) {
  const auto v = parse_values(s, flag);
  if (v.size() != 1) throw vcomp::ParseError(flag + ": expected a single value for this command");
  return v.front();
}

Json config_echo(const Options& o) {
  Json c = {{"ensemble", o.ensemble}, {"seed", o.seed}, {"format", o.format}};
  if (o.command == "analyze") return c;
  auto add_optimizer = [&] {
    c["ancilla_dim"] = o.ancilla_dim;
    c["purifier_dim"] = o.pure_extensions ? 1 : o.purifier_dim;
    c["multistarts"] = o.multistarts;
    c["max_iters"] = o.max_iters;
  };
  c["n"] = o.n;
  if (o.command == "minimize") {
    add_optimizer();
    return c;
  }
  if (o.eps) c["eps"] = *o.eps;
  if (o.dim_cap) c["dim_cap"] = *o.dim_cap;
  if (o.rate_budget) c["rate_budget"] = *o.rate_budget;
  if (o.max_minority) c["max_minority"] = *o.max_minority;
  c["samples"] = o.samples;
  c["sampling"] = o.sampling;
  const bool ep = o.command == "simulate-ep" || (o.command == "sweep" && o.protocol == "ep");
  if (o.command == "sweep") c["protocol"] = o.protocol;
  if (ep) {
    c["k"] = o.k;
    if (!o.assignment.empty()) {
      c["assignment"] = o.assignment;
    } else if (o.trivial) {
      c["assignment"] = "trivial";
      c["ancilla_dim"] = o.ancilla_dim;
    } else {
      add_optimizer();
    }
  }
  return c;
}

Json cell(double x) { return Json(x); }
Json cell(std::size_t x) { return Json(x); }

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return vcomp::io::format_number(v.get<double>());
  if (v.is_number()) return v.dump();
  const std::string s = v.get<std::string>();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return quoted + "\"";
}

const char* status_of(const vcomp::BoundReport& b) {
  if (!b.applicable) return "not-applicable";
  return b.satisfied ? "satisfied" : "violated";
}

Json bound_json(const vcomp::BoundReport& b) {
  Json j = {{"name", b.name},         {"lhs", b.lhs},           {"rhs", b.rhs},
            {"slack", b.slack},       {"tolerance", b.tolerance}, {"status", status_of(b)},
            {"note", b.note}};
  if (b.lower) j["lower"] = *b.lower;
  return j;
}

std::string render(const Options& o, const Output& out) {
  std::ostringstream s;
  if (o.format == "json") {
    Json rows = Json::array();
    for (const auto& r : out.rows) {
      Json obj = Json::object();
      for (std::size_t c = 0; c < out.columns.size(); ++c) obj[out.columns[c]] = r[c];
      rows.push_back(std::move(obj));
    }
    Json bounds = Json::array();
    for (const auto& b : out.bounds) bounds.push_back(bound_json(b));
    Json doc = {{"tool", "vcomp"},         {"version", vcomp::kVersion}, {"command", o.command},
                {"config", config_echo(o)}, {"seed", o.seed},            {"columns", out.columns},
                {"rows", std::move(rows)},  {"bounds", std::move(bounds)}};
    for (auto it = out.extra.begin(); it != out.extra.end(); ++it) doc[it.key()] = it.value();
    s << doc.dump(2) << "\n";
    return s.str();
  }
  s << "# vcomp " << vcomp::kVersion << "\n";
  s << "# command: " << o.command << "\n";
  s << "# config: " << config_echo(o).dump() << "\n";
  s << "# seed: " << o.seed << "\n";
  for (const auto& note : out.notes) s << "# " << note << "\n";
  for (std::size_t c = 0; c < out.columns.size(); ++c) s << (c ? "," : "") << out.columns[c];
  s << "\n";
  for (const auto& r : out.rows) {
    for (std::size_t c = 0; c < r.size(); ++c) s << (c ? "," : "") << csv_cell(r[c]);
    s << "\n";
  }
  if (out.bounds.empty()) s << "# bounds: none\n";
  for (const auto& b : out.bounds) {
    s << "# bound " << b.name << ": lhs=" << vcomp::io::format_number(b.lhs)
      << " rhs=" << vcomp::io::format_number(b.rhs);
    if (b.lower) s << " lower=" << vcomp::io::format_number(*b.lower);
    s << " slack=" << vcomp::io::format_number(b.slack) << " status=" << status_of(b);
    if (!b.note.empty()) s << " (" << b.note << ")";
    s << "\n";
  }
  return s.str();
}

// ---- commands --------------------------------------------------------------

Output cmd_analyze(const Options& o, const vcomp::Ensemble& e) {
  Output out;
  out.columns = kAnalyzeColumns;
  const auto rho = vcomp::ensemble_density(e);
  out.rows.push_back({"ensemble", cell(1.0), cell(vcomp::von_neumann_entropy(rho)), cell(vcomp::support_dim(rho)),
                      cell(vcomp::holevo_quantity(e))});
  for (std::size_t i = 0; i < e.size(); ++i) {
    out.rows.push_back({"state_" + std::to_string(i), cell(e.prob(i)), cell(vcomp::von_neumann_entropy(e.state(i))),
                        cell(vcomp::support_dim(e.state(i))), Json()});
  }
  (void)o;
  return out;
}

vcomp::OptimizerConfig optimizer_config(const Options& o, std::size_t block_length) {
  vcomp::OptimizerConfig cfg;
  cfg.multistarts = o.multistarts;
  cfg.max_iters = o.max_iters;
  cfg.seed = o.seed;
  cfg.ancilla_dim = o.ancilla_dim;
  cfg.purifier_dim = o.pure_extensions ? 1 : o.purifier_dim;
  cfg.block_length = block_length;
  cfg.threads = o.threads;
  return cfg;
}

// With unit purifier the trivial extension is outside the search space, so
// only the lower side of the envelope is a theorem there.
vcomp::BoundReport envelope_report(const Options& o, const vcomp::Ensemble& block, double best) {
  auto r = vcomp::envelope_check(block, best);
  if (o.pure_extensions && !r.satisfied && best >= *r.lower - r.tolerance) {
    r.applicable = false;
    r.note = "pure extensions: upper side not guaranteed";
  }
  return r;
}

Output cmd_minimize(const Options& o, const vcomp::Ensemble& e) {
  const std::size_t n = parse_single(o.n, "--n");
  const auto res = vcomp::minimize_extension_entropy(e, optimizer_config(o, n));
  Output out;
  out.columns = kMinimizeColumns;
  for (const auto& s : res.starts) {
    const char* origin = s.start == 0 ? "trivial" : "random";
    out.rows.push_back({cell(s.start), origin, cell(s.initial_entropy), cell(s.final_entropy), cell(s.iterations),
                        Json(s.converged), Json(s.used_fallback), Json(s.start == res.best_start)});
  }
  const auto block = n == 1 ? e : vcomp::product_ensemble(e, n);
  out.bounds.push_back(envelope_report(o, block, res.best_entropy));
  out.notes.push_back("best_entropy=" + vcomp::io::format_number(res.best_entropy));
  out.notes.push_back("per_signal_entropy=" + vcomp::io::format_number(res.per_signal_entropy));
  out.notes.push_back("best_start=" + std::to_string(res.best_start));
  out.notes.push_back("iterations_total=" + std::to_string(res.history.size()));
  const Json assignment = vcomp::io::assignment_to_json(res.best_assignment, n);
  out.extra["summary"] = {{"best_entropy", res.best_entropy},
                          {"per_signal_entropy", res.per_signal_entropy},
                          {"best_start", res.best_start},
                          {"iterations_total", res.history.size()}};
  out.extra["assignment"] = assignment;
  if (!o.assignment_out.empty()) {
    std::ofstream f(o.assignment_out);
    if (!f) throw std::runtime_error("cannot write " + o.assignment_out);
    f << assignment.dump(2) << "\n";
  }
  return out;
}

vcomp::SubspaceTarget target_for(const Options& o, std::size_t signals, std::size_t sites, std::size_t site_dim) {
  const int chosen = (o.eps ? 1 : 0) + (o.dim_cap ? 1 : 0) + (o.rate_budget ? 1 : 0) + (o.max_minority ? 1 : 0);
  if (chosen > 1) throw vcomp::ParseError("choose one of --eps, --dim-cap, --rate-budget, --max-minority");
  if (o.dim_cap) return vcomp::SubspaceTarget::dim_cap(*o.dim_cap);
  if (o.rate_budget) return vcomp::SubspaceTarget::dim_cap(vcomp::dim_cap_for_rate(*o.rate_budget, signals));
  if (o.max_minority) return vcomp::SubspaceTarget::dim_cap(vcomp::minority_dim_cap(sites, site_dim, *o.max_minority));
  return vcomp::SubspaceTarget::mass(o.eps.value_or(0.05));
}

vcomp::Sampling sampling_for(const Options& o) {
  if (o.sampling == "exact") return vcomp::Sampling::exact();
  if (o.sampling == "mc") return vcomp::Sampling::monte_carlo(o.samples, o.seed);
  return vcomp::Sampling::automatic(o.samples, o.seed);
}

vcomp::ProtocolOptions protocol_options(const Options& o) {
  vcomp::ProtocolOptions p;
  p.threads = o.threads;
  return p;
}

void add_protocol_row(Output& out, const char* name, const vcomp::ProtocolResult& r, std::size_t n, Json k) {
  out.rows.push_back({name, cell(n), std::move(k), cell(r.block_length), cell(r.channel_dim), cell(r.rate),
                      cell(r.retained_mass), cell(r.avg_fidelity), cell(r.extension_avg_fidelity),
                      r.sampled ? cell(r.std_error) : Json(), Json(r.sampled), cell(r.samples),
                      Json(static_cast<std::uint64_t>(r.seed))});
}

void add_protocol_bounds(Output& out, const vcomp::Ensemble& e, const vcomp::ProtocolResult& r) {
  auto h = vcomp::holevo_bound_check(e, r.rate, r.avg_fidelity);
  h.note += "; block_length " + std::to_string(r.block_length);
  out.bounds.push_back(std::move(h));
  auto m = r.trace_monotonicity;
  m.note += "; block_length " + std::to_string(r.block_length);
  out.bounds.push_back(std::move(m));
}

Json per_sequence_json(const vcomp::ProtocolResult& r) {
  Json arr = Json::array();
  for (const auto& s : r.per_sequence) {
    arr.push_back({{"signals", s.signals},
                   {"probability", s.probability},
                   {"fidelity", s.fidelity},
                   {"extension_fidelity", s.extension_fidelity},
                   {"junk_mass", s.junk_mass}});
  }
  return arr;
}

Output run_js(const Options& o, const vcomp::Ensemble& e, const std::vector<std::size_t>& ns) {
  Output out;
  out.columns = kProtocolColumns;
  Json seqs = Json::array();
  for (std::size_t n : ns) {
    const auto r = vcomp::js_protocol(e, n, target_for(o, n, n, e.dim()), sampling_for(o), protocol_options(o));
    add_protocol_row(out, "js", r, n, Json());
    add_protocol_bounds(out, e, r);
    if (o.per_sequence) seqs.push_back(per_sequence_json(r));
  }
  if (o.per_sequence) out.extra["per_sequence"] = std::move(seqs);
  return out;
}

struct ChosenAssignment {
  vcomp::ExtensionAssignment assignment;
  std::optional<vcomp::MinimizationResult> minimized;
};

ChosenAssignment choose_assignment(const Options& o, const vcomp::Ensemble& e, std::size_t n_block) {
  ChosenAssignment c;
  if (!o.assignment.empty()) {
    auto loaded = vcomp::io::load_assignment(o.assignment);
    if (loaded.block_length != n_block) {
      throw vcomp::ValidationError("assignment block_length " + std::to_string(loaded.block_length) +
                                   " does not match --n " + std::to_string(n_block));
    }
    c.assignment = std::move(loaded.assignment);
    return c;
  }
  const std::size_t signals = vcomp::checked_power(e.size(), n_block);
  if (o.trivial) {
    const std::size_t sys = vcomp::checked_power(e.dim(), n_block);
    c.assignment = vcomp::ExtensionAssignment::trivial(signals, o.ancilla_dim, sys);
    return c;
  }
  c.minimized = vcomp::minimize_extension_entropy(e, optimizer_config(o, n_block));
  c.assignment = c.minimized->best_assignment;
  return c;
}

Output run_ep(const Options& o, const vcomp::Ensemble& e, std::size_t n_block, const std::vector<std::size_t>& ks) {
  Output out;
  out.columns = kProtocolColumns;
  const auto chosen = choose_assignment(o, e, n_block);
  const auto block = n_block == 1 ? e : vcomp::product_ensemble(e, n_block);
  if (chosen.minimized) {
    out.bounds.push_back(envelope_report(o, block, chosen.minimized->best_entropy));
    out.notes.push_back("extension_entropy=" + vcomp::io::format_number(chosen.minimized->best_entropy));
    out.extra["extension_entropy"] = chosen.minimized->best_entropy;
  }
  out.extra["assignment"] = vcomp::io::assignment_to_json(chosen.assignment, n_block);
  const std::size_t site_dim = block.dim() * chosen.assignment.ancilla_dim;
  Json seqs = Json::array();
  for (std::size_t k : ks) {
    const auto r = vcomp::extension_protocol(e, n_block, chosen.assignment, k,
                                             target_for(o, n_block * k, k, site_dim), sampling_for(o),
                                             protocol_options(o));
    add_protocol_row(out, "ep", r, n_block, cell(k));
    add_protocol_bounds(out, e, r);
    if (o.per_sequence) seqs.push_back(per_sequence_json(r));
  }
  if (o.per_sequence) out.extra["per_sequence"] = std::move(seqs);
  return out;
}

Output dispatch(const Options& o) {
  const auto e = vcomp::io::load_ensemble(o.ensemble);
  if (o.command == "analyze") return cmd_analyze(o, e);
  if (o.command == "minimize") return cmd_minimize(o, e);
  if (o.command == "simulate-js") return run_js(o, e, {parse_single(o.n, "--n")});
  if (o.command == "simulate-ep") return run_ep(o, e, parse_single(o.n, "--n"), {parse_single(o.k, "--k")});
  if (o.protocol == "js") return run_js(o, e, parse_values(o.n, "--n"));
  return run_ep(o, e, parse_single(o.n, "--n"), parse_values(o.k, "--k"));
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int run(const Options& o) {
  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  const Output out = dispatch(o);
  const std::string text = render(o, out);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + o.out);
    f << text;
    // Timestamps live in a sidecar so the primary output is reproducible.
    std::ofstream meta(o.out + ".meta.json");
    meta << Json{{"started_utc", started},
                 {"finished_utc", utc_now()},
                 {"elapsed_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
                 {"version", vcomp::kVersion}}
                .dump(2)
         << "\n";
  }
  for (const auto& b : out.bounds) {
    if (b.violated()) {
      std::cerr << "bound violated: " << b.name << " (lhs " << b.lhs << ", rhs " << b.rhs << ")\n";
      return kExitBound;
    }
  }
  return kExitOk;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("ensemble", o.ensemble, "Ensemble JSON file")->required();
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--out", o.out, "Output file (default stdout)");
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
}

void add_optimizer(CLI::App* cmd, Options& o) {
  cmd->add_option("--ancilla-dim", o.ancilla_dim, "Ancilla dimension")->check(CLI::PositiveNumber);
  auto* pur = cmd->add_option("--purifier-dim", o.purifier_dim, "Purifier dimension (0 = system x ancilla)");
  cmd->add_flag("--pure-extensions", o.pure_extensions, "Restrict to pure extensions (purifier dimension 1)")
      ->excludes(pur);
  cmd->add_option("--multistarts", o.multistarts, "Number of random starts")->check(CLI::NonNegativeNumber);
  cmd->add_option("--max-iters", o.max_iters, "Iterations per start")->check(CLI::PositiveNumber);
}

void add_target(CLI::App* cmd, Options& o) {
  cmd->add_option("--eps", o.eps, "Retained-mass target 1 - eps (default 0.05)")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--dim-cap", o.dim_cap, "Channel dimension cap")->check(CLI::PositiveNumber);
  cmd->add_option("--rate-budget", o.rate_budget, "Largest channel with rate <= budget")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--max-minority", o.max_minority, "Strings with at most K symbols off the dominant one");
  cmd->add_option("--samples", o.samples, "Monte-Carlo sample count")->check(CLI::PositiveNumber);
  cmd->add_option("--sampling", o.sampling, "Sequence sampling mode")->check(CLI::IsMember({"auto", "exact", "mc"}));
  cmd->add_flag("--per-sequence", o.per_sequence, "Include per-sequence records (json format)");
}

void add_assignment_source(CLI::App* cmd, Options& o) {
  auto* file = cmd->add_option("--assignment", o.assignment, "Extension assignment JSON file");
  cmd->add_flag("--trivial", o.trivial, "Use the trivial extension rho (x) |0><0|")->excludes(file);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Visible compression of mixed-state ensembles"};
  app.set_version_flag("--version", vcomp::kVersion);
  app.require_subcommand(1);
  Options o;

  auto* analyze = app.add_subcommand("analyze", "Entropies, Holevo quantity and supports");
  add_common(analyze, o);

  auto* minimize = app.add_subcommand("minimize", "Minimize the ensemble entropy over extensions");
  add_common(minimize, o);
  add_optimizer(minimize, o);
  minimize->add_option("--n", o.n, "Block length");
  minimize->add_option("--assignment-out", o.assignment_out, "Write the best assignment to this file");

  auto* js = app.add_subcommand("simulate-js", "Typical-subspace compression of n-signal blocks");
  add_common(js, o);
  add_target(js, o);
  js->add_option("--n", o.n, "Number of signals")->required();

  auto* ep = app.add_subcommand("simulate-ep", "Extension protocol over k blocks");
  add_common(ep, o);
  add_target(ep, o);
  add_optimizer(ep, o);
  add_assignment_source(ep, o);
  ep->add_option("--n", o.n, "Signals per block");
  ep->add_option("--k", o.k, "Blocks compressed together")->required();

  auto* sweep = app.add_subcommand("sweep", "One protocol row per n (js) or per k (ep)");
  add_common(sweep, o);
  add_target(sweep, o);
  add_optimizer(sweep, o);
  add_assignment_source(sweep, o);
  sweep->add_option("--protocol", o.protocol, "js or ep")->check(CLI::IsMember({"js", "ep"}));
  sweep->add_option("--n", o.n, "js: values of n (5, 2:10 or 2,4,8); ep: signals per block");
  sweep->add_option("--k", o.k, "ep: values of k");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  o.command = app.get_subcommands().front()->get_name();

  try {
    return run(o);
  } catch (const vcomp::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const vcomp::ResourceGuardError& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return kExitGuard;
  } catch (const vcomp::Error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
