#include "wpgibbs/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <locale>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "wpgibbs/cayley_group.hpp"
#include "wpgibbs/errors.hpp"
#include "wpgibbs/gibbs_oracle.hpp"
#include "wpgibbs/record_io.hpp"
#include "wpgibbs/reduction.hpp"
#include "wpgibbs/solvers.hpp"

namespace wpgibbs::cli {

namespace {

using nlohmann::json;

// Raised for semantic usage problems detected after parsing.
class usage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct run_config {
  int k = 0;
  std::optional<int> a_size;
  std::optional<double> alpha;
  std::optional<double> theta;
  std::string set = "full";
  std::string mode;
  int depth = 4;
  double tol = 1e-10;
  double verify_tol = 1e-9;
  double compat_tol = 1e-8;
  int grid = 0;
  int steps = 60;
  double alpha_lo = 0.0;
  double alpha_hi = 0.0;
  double width = 1e-3;
  std::optional<double> x_lo;
  std::optional<double> x_hi;
  std::string out_path;
  std::string in_path;
  std::string format = "json";
  std::string word;
  std::string a_list;
  int ball_depth = -1;
  int jobs = 1;
};

bool debug_enabled() {
  const char* v = std::getenv("WPGIBBS_LOG");
  return v != nullptr && std::string(v) == "debug";
}

std::ostringstream classic_stream() {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17);
  return os;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw usage("not an integer list: '" + s + "'");
    }
  }
  return out;
}

model_params params_of(const run_config& c) {
  if (c.k < 1) throw usage("--k is required and must be >= 1");
  const int a = c.a_size.value_or(c.k);
  if (a < 1 || a > c.k) throw usage("--a-size must lie in [1, k]");
  if (c.alpha.has_value() == c.theta.has_value()) throw usage("give exactly one of --alpha and --theta");
  try {
    return c.alpha ? model_params::from_alpha(c.k, a, *c.alpha) : model_params::from_theta(c.k, a, *c.theta);
  } catch (const std::domain_error& e) {
    throw usage(e.what());
  }
}

invariant_set set_of(const run_config& c) {
  try {
    return invariant_set_from_string(c.set);
  } catch (const std::invalid_argument& e) {
    throw usage(e.what());
  }
}

void emit(const run_config& c, const std::string& text, std::ostream& out) {
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out_path, std::ios::binary);
  if (!f) throw usage("cannot write " + c.out_path);
  f << text;
}

std::string records_csv(const std::vector<solution_record>& records) {
  auto os = classic_stream();
  os << "k,a_size,alpha,h1,h2,h3,h4,residual,ti,i1,i2,i3,source\n";
  for (const auto& r : records) {
    os << r.params.k() << ',' << r.params.a_size() << ',' << r.params.alpha();
    for (double h : r.h) os << ',' << h;
    os << ',' << r.residual << ',' << r.flags.translation_invariant << ',' << r.flags.in_i1 << ','
       << r.flags.in_i2 << ',' << r.flags.in_i3 << ',' << to_string(r.source) << '\n';
  }
  return os.str();
}

json transition_json(const count_transition& t) {
  json counts = json::array({t.count_before});
  if (t.count_at_tangency) counts.push_back(*t.count_at_tangency);
  counts.push_back(t.count_after);
  return {{"alpha_lo", t.alpha_lo},
          {"alpha_hi", t.alpha_hi},
          {"alpha_mid", 0.5 * (t.alpha_lo + t.alpha_hi)},
          {"count_before", t.count_before},
          {"count_after", t.count_after},
          {"count_at_tangency", t.count_at_tangency ? json(*t.count_at_tangency) : json(nullptr)},
          {"counts", counts}};
}

json scan_json(const scan_report& r, double lo, double hi, int steps, double width) {
  json points = json::array();
  for (const auto& p : r.points) {
    json results = json::array();
    for (const auto& s : p.solutions) results.push_back(to_json(s));
    json point = {{"alpha", p.alpha}, {"count", p.count}, {"results", results}};
    if (!p.error.empty()) point["error"] = p.error;
    points.push_back(point);
  }
  json transitions = json::array();
  for (const auto& t : r.transitions) transitions.push_back(transition_json(t));
  return {{"schema_version", schema_version},
          {"command", "scan"},
          {"params", {{"k", r.k}, {"a_size", r.a_size}, {"set", std::string(to_string(r.restrict_to))}}},
          {"grid", {{"alpha_lo", lo}, {"alpha_hi", hi}, {"steps", steps}, {"bifurcation_width", width}}},
          {"exactness", std::string(count_exactness(r.k, r.a_size, r.restrict_to))},
          {"reduction_path", r.reduction_path},
          {"points", points},
          {"transitions", transitions}};
}

int cmd_group(const run_config& c, std::ostream& out) {
  if (c.k < 1) throw usage("--k is required");
  json doc = {{"schema_version", schema_version}, {"command", "group"}, {"k", c.k}};
  if (!c.word.empty()) {
    const auto letters = parse_int_list(c.word);
    group_word w(c.k);
    try {
      w = reduce_word(c.k, letters);
    } catch (const std::out_of_range& e) {
      throw usage(e.what());
    }
    json kids = json::array();
    for (const auto& ch : children(w)) kids.push_back(ch.letters());
    doc["word"] = {{"input", letters}, {"reduced", w.letters()}, {"text", w.to_string()},
                   {"length", w.length()}, {"children", kids}};
    doc["word"]["parent"] = w.is_identity() ? json(nullptr) : json(parent(w).letters());
    if (!c.a_list.empty()) {
      const subgroup_spec spec(c.k, parse_int_list(c.a_list));
      doc["word"]["in_HA"] = in_ha(w, spec);
      if (!w.is_identity()) doc["word"]["field_role"] = field_role(w, spec) + 1;
    }
  }
  if (c.ball_depth >= 0) {
    const auto levels = ball(c.ball_depth, c.k);
    json sizes = json::array();
    std::size_t total = 0;
    for (const auto& l : levels) {
      sizes.push_back(l.size());
      total += l.size();
    }
    doc["ball"] = {{"depth", c.ball_depth}, {"level_sizes", sizes}, {"total", total}};
  }
  out << doc.dump(2) << '\n';
  return ok;
}

int cmd_critical(const run_config& c, std::ostream& out, std::ostream& err) {
  if (!c.mode.empty()) {
    if (c.mode != "a1k4") throw usage("unsupported mode '" + c.mode + "' (known: a1k4)");
    scan_options opts;
    opts.restrict_to = invariant_set::i3;
    opts.bifurcation_width = c.width;
    opts.jobs = c.jobs;
    const double lo = 0.05;
    const double hi = 0.3;
    const auto report = scan_alpha(4, 1, lo, hi, c.steps, opts);
    json doc = scan_json(report, lo, hi, c.steps, c.width);
    doc["command"] = "critical";
    doc["mode"] = "a1k4";
    if (!report.transitions.empty()) {
      const auto& last = report.transitions.back();
      doc["alpha_cr"] = 0.5 * (last.alpha_lo + last.alpha_hi);
    }
    doc.erase("points");
    out << doc.dump(2) << '\n';
    return ok;
  }
  if (c.k >= 1 && c.k <= 3) {
    err << "no critical point: count is constant\n";
    return usage_error;
  }
  if (c.k != 4) throw usage("critical supports --k 4 or --mode a1k4");
  const double acr = alpha_critical();
  const double xs = xi_star(acr);
  json doc = {{"schema_version", schema_version},
              {"command", "critical"},
              {"params", {{"k", 4}, {"a_size", 4}, {"set", "I3"}}},
              {"alpha_cr", acr},
              {"psi_residual", psi(acr)},
              {"xi_star", xs},
              {"gamma_at_xi_star", gamma_cubic(xs, acr)},
              {"counts", {{"below", count_i3_solutions(4, acr - 1e-6).count},
                          {"at", count_i3_solutions(4, acr).count},
                          {"above", count_i3_solutions(4, acr + 1e-6).count}}}};
  out << doc.dump(2) << '\n';
  return ok;
}

int cmd_count(const run_config& c, std::ostream& out) {
  const auto params = params_of(c);
  const auto set = set_of(c);
  std::vector<solution_record> records;
  json diag;
  if (set == invariant_set::i3 && params.a_size() == params.k() && params.alpha() > 0.0) {
    const auto res = count_i3_solutions(params.k(), params.alpha());
    records = res.records;
    diag = {{"method", "xi_polynomial"}, {"xi_roots", res.xi_roots}, {"tangency", res.tangency},
            {"discarded_xi", res.discarded_xi}};
  } else {
    solve_options opts;
    opts.tol = c.tol;
    opts.jobs = c.jobs;
    const auto res = solve_full_system(params, opts);
    for (const auto& r : res.records)
      if (in_set(r.flags, set)) records.push_back(r);
    diag = {{"method", "multi_start"}, {"starts", res.starts}, {"dropped_starts", res.dropped_starts},
            {"symmetry_closed", res.symmetry_closed}, {"tolerances", {{"solve", opts.tol}, {"dedup", opts.dedup_tol}}}};
  }
  if (c.format == "csv") {
    emit(c, records_csv(records), out);
    return ok;
  }
  json doc = make_document("count", to_json(params), records, diag);
  doc["set"] = std::string(to_string(set));
  doc["count"] = records.size();
  doc["exactness"] = std::string(count_exactness(params.k(), params.a_size(), set));
  emit(c, doc.dump(2) + "\n", out);
  return ok;
}

int cmd_solve(const run_config& c, std::ostream& out) {
  const auto params = params_of(c);
  const auto set = set_of(c);
  solve_options opts;
  opts.tol = c.tol;
  opts.jobs = c.jobs;
  const auto res = solve_full_system(params, opts);
  std::vector<solution_record> records;
  for (const auto& r : res.records)
    if (in_set(r.flags, set)) records.push_back(r);
  if (c.format == "csv") {
    emit(c, records_csv(records), out);
    return ok;
  }
  const json diag = {{"starts", res.starts},
                     {"dropped_starts", res.dropped_starts},
                     {"symmetry_closed", res.symmetry_closed},
                     {"grid", {{"levels", opts.seeds.levels}, {"general_points", opts.seeds.general_points}}},
                     {"tolerances", {{"solve", opts.tol}, {"dedup", opts.dedup_tol}, {"classify", opts.classify_tol}}}};
  json doc = make_document("solve", to_json(params), records, diag);
  doc["set"] = std::string(to_string(set));
  emit(c, doc.dump(2) + "\n", out);
  return ok;
}

int cmd_scan(const run_config& c, std::ostream& out) {
  if (c.k < 1) throw usage("--k is required");
  const int a = c.a_size.value_or(c.k);
  if (a < 1 || a > c.k) throw usage("--a-size must lie in [1, k]");
  if (!(c.alpha_lo > 0.0) || !(c.alpha_hi > c.alpha_lo)) throw usage("need 0 < --alpha-lo < --alpha-hi");
  if (c.steps < 2) throw usage("--steps must be >= 2");
  scan_options opts;
  opts.restrict_to = set_of(c);
  opts.bifurcation_width = c.width;
  opts.jobs = c.jobs;
  opts.solve.tol = c.tol;
  const auto report = scan_alpha(c.k, a, c.alpha_lo, c.alpha_hi, c.steps, opts);
  if (c.format == "csv") {
    auto os = classic_stream();
    os << "alpha,count\n";
    for (const auto& p : report.points) os << p.alpha << ',' << p.count << '\n';
    emit(c, os.str(), out);
    return ok;
  }
  emit(c, scan_json(report, c.alpha_lo, c.alpha_hi, c.steps, c.width).dump(2) + "\n", out);
  return ok;
}

int cmd_verify(const run_config& c, std::ostream& out, std::ostream& err) {
  if (c.in_path.empty()) throw usage("--in is required");
  std::ifstream f(c.in_path);
  if (!f) throw usage("cannot read " + c.in_path);
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::exception& e) {
    throw usage(std::string("malformed JSON: ") + e.what());
  }
  if (c.depth < 2) throw usage("--depth must be >= 2");
  std::vector<solution_record> records;
  std::vector<subgroup_spec> specs;
  try {
    records = records_from_document(doc);
    for (const auto& r : doc.at("results")) {
      specs.push_back(subgroup_from_json(r.contains("params") ? r.at("params") : doc.at("params")));
    }
  } catch (const json::exception& e) {
    throw usage(std::string("malformed record: ") + e.what());
  }

  bool all_pass = true;
  json checks = json::array();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const auto eq4 = check_eq4(r.h, r.params, specs[i], c.depth);
    json item = {{"index", i}, {"h", {r.h[0], r.h[1], r.h[2], r.h[3]}}, {"eq4_residual", eq4.max_residual},
                 {"eq4_pass", eq4.max_residual <= c.verify_tol}};
    bool pass = eq4.max_residual <= c.verify_tol;
    try {
      const double d = check_compatibility(r.params, r.h, specs[i], 2, default_enumeration_cap, c.jobs);
      item["compatibility_discrepancy"] = d;
      item["compatibility_pass"] = d <= c.compat_tol;
      pass = pass && d <= c.compat_tol;
    } catch (const resource_cap_error&) {
      item["compatibility_discrepancy"] = nullptr;  // volume too large to enumerate
    }
    item["pass"] = pass;
    all_pass = all_pass && pass;
    checks.push_back(item);
  }
  const json report = {{"schema_version", schema_version},
                       {"command", "verify"},
                       {"input", c.in_path},
                       {"depth", c.depth},
                       {"tolerances", {{"eq4", c.verify_tol}, {"compatibility", c.compat_tol}}},
                       {"checks", checks},
                       {"pass", all_pass}};
  emit(c, report.dump(2) + "\n", out);
  if (!all_pass) err << "verification failed\n";
  return all_pass ? ok : verification_failed;
}

int cmd_plot_phi(const run_config& c, std::ostream& out, std::ostream& err) {
  if (c.k < 1) throw usage("--k is required");
  if (!c.alpha || !(*c.alpha > 0.0)) throw usage("--alpha must be positive");
  const int k = c.k;
  const double alpha = *c.alpha;
  const auto range = phi_default_range(k, alpha);
  const double lo = c.x_lo.value_or(range.lo);
  const double hi = c.x_hi.value_or(range.hi);
  if (!(lo > 0.0 && lo < 1.0 && hi > 1.0)) throw usage("need 0 < --x-lo < 1 < --x-hi");
  const int n = c.grid > 1 ? c.grid : 2001;
  auto os = classic_stream();
  os << "x,phi,identity\n";
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < n; ++i) {
    const double x = std::exp(a + (b - a) * i / (n - 1));
    os << x << ',' << phi(x, k, alpha) << ',' << x << '\n';
  }
  emit(c, os.str(), out);
  const auto crossings = count_phi_crossings(k, alpha, interval{lo, hi});
  err << "phi crossings: " << crossings.count << '\n';
  return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weakly periodic Gibbs measures of the Ising model on the Cayley tree"};
  app.require_subcommand(1);
  run_config c;

  auto add_model = [&c](CLI::App* sub) {
    sub->add_option("--k", c.k, "tree order");
    sub->add_option("--a-size", c.a_size, "|A| (defaults to k)");
    auto* a = sub->add_option("--alpha", c.alpha, "alpha = (1 - theta) / (1 + theta)");
    auto* t = sub->add_option("--theta", c.theta, "theta = tanh(J beta)");
    a->excludes(t);
  };
  auto add_output = [&c](CLI::App* sub) {
    sub->add_option("--out", c.out_path, "output file (default stdout)");
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
  };

  auto* group = app.add_subcommand("group", "reduced-word debugging");
  group->add_option("--k", c.k, "tree order")->required();
  group->add_option("--word", c.word, "comma-separated generator indices");
  group->add_option("--A", c.a_list, "comma-separated subset A");
  group->add_option("--ball", c.ball_depth, "print level sizes of the ball of this depth");

  auto* critical = app.add_subcommand("critical", "critical parameter values");
  auto* ck = critical->add_option("--k", c.k, "tree order (|A| = k, on I3)");
  auto* cm = critical->add_option("--mode", c.mode, "a1k4: |A| = 1, k = 4 scan");
  ck->excludes(cm);
  critical->add_option("--steps", c.steps, "grid points for --mode scans");
  critical->add_option("--width", c.width, "bifurcation localisation width");
  critical->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* count = app.add_subcommand("count", "count fixed points");
  add_model(count);
  add_output(count);
  count->add_option("--set", c.set, "I1, I2, I3 or full");
  count->add_option("--tol", c.tol, "solver tolerance");

  auto* solve = app.add_subcommand("solve", "multi-start solve of the four-field system");
  add_model(solve);
  add_output(solve);
  solve->add_option("--set", c.set, "I1, I2, I3 or full");
  solve->add_option("--tol", c.tol, "solver tolerance");

  auto* scan = app.add_subcommand("scan", "solution counts over an alpha grid");
  scan->add_option("--k", c.k, "tree order")->required();
  scan->add_option("--a-size", c.a_size, "|A| (defaults to k)");
  scan->add_option("--alpha-lo", c.alpha_lo)->required();
  scan->add_option("--alpha-hi", c.alpha_hi)->required();
  scan->add_option("--steps", c.steps, "grid points");
  scan->add_option("--set", c.set, "I1, I2, I3 or full");
  scan->add_option("--width", c.width, "bifurcation localisation width");
  scan->add_option("--tol", c.tol, "solver tolerance");
  add_output(scan);

  auto* verify = app.add_subcommand("verify", "re-check records against the tree recursion and enumeration");
  verify->add_option("--in", c.in_path, "JSON document from solve/count")->required();
  verify->add_option("--depth", c.depth, "recursion check depth");
  verify->add_option("--tol", c.verify_tol, "recursion residual tolerance");
  verify->add_option("--compat-tol", c.compat_tol, "compatibility tolerance");
  add_output(verify);

  auto* plot = app.add_subcommand("plot-phi", "CSV of phi(x) against y = x");
  plot->add_option("--k", c.k, "tree order")->required();
  plot->add_option("--alpha", c.alpha, "alpha")->required();
  plot->add_option("--grid", c.grid, "number of log-spaced points");
  plot->add_option("--x-lo", c.x_lo);
  plot->add_option("--x-hi", c.x_hi);
  plot->add_option("--out", c.out_path, "output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return usage_error;
  }

  const auto start = std::chrono::steady_clock::now();
  int code = ok;
  try {
    if (*group) code = cmd_group(c, out);
    else if (*critical) code = cmd_critical(c, out, err);
    else if (*count) code = cmd_count(c, out);
    else if (*solve) code = cmd_solve(c, out);
    else if (*scan) code = cmd_scan(c, out);
    else if (*verify) code = cmd_verify(c, out, err);
    else if (*plot) code = cmd_plot_phi(c, out, err);
  } catch (const resource_cap_error& e) {
    err << "resource cap: " << e.what() << '\n';
    return resource_cap;
  } catch (const usage& e) {
    err << "usage: " << e.what() << '\n';
    return usage_error;
  } catch (const std::logic_error& e) {
    // invalid_argument, domain_error and out_of_range all stem from bad inputs.
    err << "usage: " << e.what() << '\n';
    return usage_error;
  }
  if (debug_enabled()) {
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    err << "elapsed " << ms << " ms\n";
  }
  return code;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace wpgibbs::cli
