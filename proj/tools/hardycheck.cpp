// Command-line front end: builds atoms, runs the inequality checks, sweeps
// parameter grids, and emits deterministic JSON/CSV reports.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hardy/hardy.hpp"
#include "hardy/parallel.hpp"

namespace {

using hardy::Atom;
using hardy::AtomSpec;
using hardy::BoundReport;
using hardy::Interval;
using hardy::ReportKey;
using hardy::Verdict;
using hardy::Weight;
using json = hardy::json;

struct Options {
  double p = 1.0;
  std::string q = "inf";
  int s = 0;
  double x0 = 1.0;
  double x1 = 2.0;
  std::string weight = "unit";
  double alpha = 0.0;
  int degree = -1;  // -1 = constraints + 1 (two null directions)
  std::uint64_t seed = 0;
  int count = 1;
  double rel_tol = 1e-10;
  double tol = 1e-9;
  bool allow_zero_left = false;
  bool thm2_literal = false;
  std::string shape = "polynomial";
  int nsteps = 4;
  std::string direction = "hardy";
  std::vector<double> A_list;
  int random_n = 0;
  std::string objective = "prop1";
  std::string family = "both";
  int restarts = 4;
  int iters = 200;
  unsigned jobs = 0;
  std::string output;
  std::string format;  // empty = command default (json; sweep emits csv)
  std::string input;
  std::string plot_data;
  std::string grid;
  std::string sweep_command;
};

double parse_q(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "INF") return hardy::kInfinity;
  std::size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw hardy::parameter_domain_error("bad q value: " + s);
  return v;
}

struct ReportEntry {
  ReportKey key;
  BoundReport rep;
};

json resolved_config(const std::string& command, const Options& o) {
  json c;
  c["command"] = command;
  c["p"] = o.p;
  c["q"] = o.q;
  c["s"] = o.s;
  c["x0"] = o.x0;
  c["x1"] = o.x1;
  c["weight"] = o.weight;
  if (o.weight == "power") c["alpha"] = o.alpha;
  c["degree"] = o.degree;
  c["seed"] = o.seed;
  c["count"] = o.count;
  c["rel_tol"] = o.rel_tol;
  c["tol"] = o.tol;
  c["allow_zero_left"] = o.allow_zero_left;
  c["shape"] = o.shape;
  if (o.shape == "steps") c["nsteps"] = o.nsteps;
  return c;
}

void stamp(BoundReport& rep, const std::string& command, const Options& o) {
  rep.metadata["config"] = resolved_config(command, o);
  rep.metadata["version"] = hardy::kVersion;
}

AtomSpec spec_from(const Options& o, bool log_moment, const Weight& weight) {
  AtomSpec spec;
  spec.p = o.p;
  spec.q = parse_q(o.q);
  spec.s = o.s;
  spec.weight = weight;
  spec.interval = {o.x0, o.x1};
  spec.log_moment = log_moment;
  spec.allow_zero_left = o.allow_zero_left;
  spec.validate();
  return spec;
}

int degree_for(const AtomSpec& spec, const Options& o) {
  return o.degree >= 0 ? o.degree : spec.constraint_count() + 1;
}

Atom make_atom(const AtomSpec& spec, const Options& o, std::uint64_t seed) {
  if (o.shape == "squarewave") {
    if (spec.s != 0 || spec.log_moment || !spec.weight.is_unit()) {
      throw hardy::parameter_domain_error(
          "squarewave shape requires s = 0, no log moment, unit weight");
    }
    return hardy::square_wave_atom(spec.p, spec.q, spec.interval,
                                   spec.allow_zero_left);
  }
  if (o.shape == "steps") return hardy::build_step_atom(spec, o.nsteps, seed);
  if (o.shape != "polynomial") {
    throw hardy::parameter_domain_error("unknown shape: " + o.shape);
  }
  return hardy::build_atom(spec, degree_for(spec, o), seed);
}

BoundReport wrap_validation(const char* name, const AtomSpec& source,
                            const hardy::AtomValidationReport& v,
                            const std::string& label) {
  BoundReport r = hardy::make_bound_report(
      hardy::detail::spec_id(name, source, label), v.norm_measured,
      v.norm_budget, true, v.norm_error);
  r.verdict = v.passed() ? Verdict::PASS : Verdict::FAIL;
  r.metadata["validation"] = hardy::to_json(v);
  return r;
}

// ---------------------------------------------------------------------------
// command runners (also used row-wise from sweep)

std::vector<ReportEntry> run_prop1(const Options& o) {
  std::vector<ReportEntry> out;
  if (o.weight != "unit") {
    throw hardy::parameter_domain_error("prop1 uses the unit weight");
  }
  AtomSpec spec = spec_from(o, false, Weight::unit());
  if (spec.s != 0) throw hardy::parameter_domain_error("prop1 requires s = 0");
  for (int i = 0; i < o.count; ++i) {
    std::uint64_t seed = o.seed + static_cast<std::uint64_t>(i);
    Atom a = make_atom(spec, o, seed);
    BoundReport r = hardy::check_prop1(a, o.rel_tol, "seed=" + std::to_string(seed));
    stamp(r, "prop1", o);
    out.push_back({{o.p, spec.q, 0, o.x0, o.x1, seed}, std::move(r)});
  }
  return out;
}

std::vector<ReportEntry> run_prop4(const Options& o) {
  std::vector<ReportEntry> out;
  Options oo = o;
  oo.weight = "power";
  oo.alpha = o.p;
  AtomSpec spec = spec_from(oo, false, Weight::power(o.p));
  if (spec.s != 0) throw hardy::parameter_domain_error("prop4 requires s = 0");
  hardy::constants::require_dual_domain(spec.p, spec.q, "prop4");
  for (int i = 0; i < o.count; ++i) {
    std::uint64_t seed = o.seed + static_cast<std::uint64_t>(i);
    Atom a = make_atom(spec, oo, seed);
    BoundReport r = hardy::check_prop4(a, o.rel_tol, "seed=" + std::to_string(seed));
    stamp(r, "prop4", oo);
    out.push_back({{o.p, spec.q, 0, o.x0, o.x1, seed}, std::move(r)});
  }
  return out;
}

std::vector<ReportEntry> run_log2(const Options& o) {
  std::vector<ReportEntry> out;
  Options oo = o;
  oo.p = 1.0;
  oo.q = "inf";
  oo.s = 0;
  if (o.p != 1.0) {
    throw hardy::parameter_domain_error("log2 checks (1,inf,0)-atoms; p must be 1");
  }
  AtomSpec spec = spec_from(oo, false, Weight::unit());
  for (int i = 0; i < o.count; ++i) {
    std::uint64_t seed = o.seed + static_cast<std::uint64_t>(i);
    Atom a = make_atom(spec, oo, seed);
    BoundReport r = hardy::check_log2(a, o.rel_tol, "seed=" + std::to_string(seed));
    stamp(r, "log2", oo);
    out.push_back({{1.0, hardy::kInfinity, 0, o.x0, o.x1, seed}, std::move(r)});
  }
  return out;
}

hardy::AtomicSum make_sum(const AtomSpec& spec, const Options& o) {
  hardy::Rng lambda_rng(o.seed ^ 0xc2b2ae3d27d4eb4fULL);
  std::vector<std::pair<double, Atom>> entries;
  for (int i = 0; i < std::max(o.count, 1); ++i) {
    std::uint64_t seed = o.seed + static_cast<std::uint64_t>(i);
    double lambda = lambda_rng.uniform(-1.0, 1.0);
    entries.emplace_back(lambda, make_atom(spec, o, seed));
  }
  return hardy::make_atomic_sum(std::move(entries));
}

std::vector<ReportEntry> run_thm1(const Options& o) {
  AtomSpec spec = spec_from(o, false, Weight::unit());
  if (spec.s != 0) throw hardy::parameter_domain_error("thm1 requires s = 0");
  auto sum = make_sum(spec, o);
  BoundReport r = hardy::check_thm1(sum, o.rel_tol, "seed=" + std::to_string(o.seed));
  stamp(r, "thm1", o);
  std::vector<ReportEntry> out;
  out.push_back({{o.p, spec.q, 0, o.x0, o.x1, o.seed}, std::move(r)});
  return out;
}

std::vector<ReportEntry> run_thm2(const Options& o) {
  Options oo = o;
  oo.weight = "power";
  oo.alpha = o.p;
  AtomSpec spec = spec_from(oo, false, Weight::power(o.p));
  if (spec.s != 0) throw hardy::parameter_domain_error("thm2 requires s = 0");
  hardy::constants::require_dual_domain(spec.p, spec.q, "thm2");
  auto sum = make_sum(spec, oo);
  std::vector<ReportEntry> out;
  BoundReport r = hardy::check_thm2(sum, o.rel_tol, "seed=" + std::to_string(o.seed));
  stamp(r, "thm2", oo);
  out.push_back({{o.p, spec.q, 0, o.x0, o.x1, o.seed}, std::move(r)});
  if (o.thm2_literal) {
    BoundReport lit =
        hardy::check_thm2_literal(sum, o.rel_tol, "seed=" + std::to_string(o.seed));
    stamp(lit, "thm2", oo);
    out.push_back({{o.p, spec.q, 0, o.x0, o.x1, o.seed}, std::move(lit)});
  }
  return out;
}

std::vector<ReportEntry> run_thm3(const Options& o) {
  AtomSpec spec = spec_from(o, true, Weight::unit());
  std::vector<ReportEntry> out;
  for (int i = 0; i < o.count; ++i) {
    std::uint64_t seed = o.seed + static_cast<std::uint64_t>(i);
    Atom a = make_atom(spec, o, seed);
    auto v = hardy::check_thm3(a, o.tol);
    BoundReport r = wrap_validation("thm3", spec, v, "seed=" + std::to_string(seed));
    // slack in the image scale: the size bound still holds with q' - eps
    r.metadata["epsilon_margin"] =
        hardy::conjugate_exponent(spec.q) * (1.0 - v.norm_measured / v.norm_budget);
    stamp(r, "thm3", o);
    out.push_back({{o.p, spec.q, o.s, o.x0, o.x1, seed}, std::move(r)});
  }
  return out;
}

std::vector<ReportEntry> run_thm4(const Options& o) {
  if (o.s < 1) {
    throw hardy::parameter_domain_error("thm4 requires s >= 1 (images drop one moment)");
  }
  Options oo = o;
  oo.weight = "power";
  oo.alpha = o.p;
  AtomSpec spec = spec_from(oo, false, Weight::power(o.p));
  std::vector<ReportEntry> out;
  for (int i = 0; i < o.count; ++i) {
    std::uint64_t seed = o.seed + static_cast<std::uint64_t>(i);
    Atom a = make_atom(spec, oo, seed);
    auto v = hardy::check_thm4(a, o.tol);
    BoundReport r = wrap_validation("thm4", spec, v, "seed=" + std::to_string(seed));
    stamp(r, "thm4", oo);
    out.push_back({{o.p, spec.q, o.s, o.x0, o.x1, seed}, std::move(r)});
  }
  return out;
}

std::vector<ReportEntry> run_classical(const Options& o) {
  std::vector<double> As = o.A_list;
  if (As.empty()) {
    As = {std::exp(5.0), std::exp(10.0), std::exp(15.0), std::exp(20.0)};
  }
  hardy::ClassicalDirection dir;
  if (o.direction == "hardy") {
    dir = hardy::ClassicalDirection::hardy;
  } else if (o.direction == "dual") {
    dir = hardy::ClassicalDirection::dual;
  } else {
    throw hardy::parameter_domain_error("direction must be hardy or dual");
  }
  std::vector<ReportEntry> out;
  for (double A : As) {
    BoundReport r = hardy::check_classical(o.p, A, dir, o.rel_tol);
    stamp(r, "classical", o);
    out.push_back({{o.p, std::nullopt, std::nullopt, 1.0, A, std::nullopt},
                   std::move(r)});
  }
  if (!o.plot_data.empty()) {
    std::ofstream f(o.plot_data);
    if (!f) throw hardy::parameter_domain_error("cannot open " + o.plot_data);
    for (const auto& e : out) {
      f << hardy::detail::fmt_full(e.rep.metadata.at("A").get<double>()) << " "
        << hardy::detail::fmt_full(
               e.rep.metadata.at("family_ratio").get<double>())
        << "\n";
    }
  }
  return out;
}

std::vector<ReportEntry> run_aux(const Options& o) {
  std::vector<std::tuple<double, double, double>> triples;
  if (o.random_n > 0) {
    hardy::Rng rng(o.seed);
    for (int i = 0; i < o.random_n; ++i) {
      double x0 = rng.uniform(0.01, 5.0);
      double x1 = x0 + rng.uniform(0.01, 5.0);
      double p = rng.uniform() < 0.5 ? rng.uniform(0.05, 0.95)
                                     : rng.uniform(1.05, 3.0);
      triples.emplace_back(x0, x1, p);
    }
  } else {
    triples.emplace_back(o.x0, o.x1, o.p);
  }
  std::vector<ReportEntry> out;
  for (auto [x0, x1, p] : triples) {
    auto aux = hardy::auxiliary_inequality_check(x0, x1, p);
    std::string base = "aux/p=" + hardy::detail::fmt_g(p) +
                       "/x0=" + hardy::detail::fmt_g(x0) +
                       "/x1=" + hardy::detail::fmt_g(x1);
    BoundReport r10 =
        hardy::make_bound_report(base + "/ineq=10", aux.lhs10, aux.rhs10, true, 0.0);
    stamp(r10, "aux", o);
    out.push_back({{p, std::nullopt, std::nullopt, x0, x1, o.seed}, std::move(r10)});
    if (p < 1.0) {
      // reverse inequality: columns swapped so PASS still means "holds"
      BoundReport r11 = hardy::make_bound_report(base + "/ineq=11", aux.rhs11,
                                                 aux.lhs11, true, 0.0);
      stamp(r11, "aux", o);
      out.push_back({{p, std::nullopt, std::nullopt, x0, x1, o.seed}, std::move(r11)});
    }
  }
  return out;
}

using Runner = std::vector<ReportEntry> (*)(const Options&);

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> m = {
      {"prop1", run_prop1}, {"prop4", run_prop4}, {"log2", run_log2},
      {"thm1", run_thm1},   {"thm2", run_thm2},   {"thm3", run_thm3},
      {"thm4", run_thm4},   {"classical", run_classical}, {"aux", run_aux},
  };
  return m;
}

// ---------------------------------------------------------------------------
// output plumbing

int exit_code_for(const std::vector<ReportEntry>& entries) {
  std::vector<Verdict> verdicts;
  verdicts.reserve(entries.size());
  for (const auto& e : entries) verdicts.push_back(e.rep.verdict);
  return hardy::exit_code_for(verdicts);
}

void print_summary(const std::vector<ReportEntry>& entries) {
  for (const auto& e : entries) {
    const auto& r = e.rep;
    std::cout << to_string(r.verdict) << "\t" << r.check_id
              << "\tlhs=" << hardy::detail::fmt_g(r.lhs)
              << "\tbound=" << hardy::detail::fmt_g(r.bound)
              << "\tratio=" << hardy::detail::fmt_g(r.ratio)
              << "\terr=" << hardy::detail::fmt_g(r.quad_error) << "\n";
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw hardy::parameter_domain_error("cannot open " + path);
  f << content;
}

std::string render_json(const std::vector<ReportEntry>& entries) {
  json arr = json::array();
  for (const auto& e : entries) arr.push_back(hardy::to_json(e.rep));
  return arr.dump(2) + "\n";
}

std::string render_csv(const std::vector<ReportEntry>& entries,
                       const std::vector<std::string>& extra_rows = {}) {
  std::string out = std::string(hardy::kReportCsvHeader) + "\n";
  for (const auto& e : entries) out += hardy::report_csv_row(e.rep, e.key) + "\n";
  for (const auto& r : extra_rows) out += r + "\n";
  return out;
}

int emit(std::vector<ReportEntry> entries, const Options& o,
         const std::vector<std::string>& extra_csv_rows = {}) {
  print_summary(entries);
  if (!o.output.empty()) {
    if (o.format == "csv") {
      write_file(o.output, render_csv(entries, extra_csv_rows));
    } else {
      write_file(o.output, render_json(entries));
    }
  }
  return exit_code_for(entries);
}

// ---------------------------------------------------------------------------
// grid files and sweep

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

const std::set<std::string>& known_grid_keys() {
  static const std::set<std::string> k = {
      "p",  "q",     "s",      "x0",    "x1",     "seed",  "degree",
      "count", "A",  "direction", "tol", "rel_tol", "shape", "nsteps",
      "allow_zero_left", "objective", "restarts", "iters", "family", "skip"};
  return k;
}

void apply_grid_cell(Options& o, const std::string& key, const std::string& val) {
  if (val.empty()) return;
  if (key == "p") o.p = std::stod(val);
  else if (key == "q") o.q = val;
  else if (key == "s") o.s = std::stoi(val);
  else if (key == "x0") o.x0 = std::stod(val);
  else if (key == "x1") o.x1 = std::stod(val);
  else if (key == "seed") o.seed = std::stoull(val);
  else if (key == "degree") o.degree = std::stoi(val);
  else if (key == "count") o.count = std::stoi(val);
  else if (key == "A") o.A_list = {std::stod(val)};
  else if (key == "direction") o.direction = val;
  else if (key == "tol") o.tol = std::stod(val);
  else if (key == "rel_tol") o.rel_tol = std::stod(val);
  else if (key == "shape") o.shape = val;
  else if (key == "nsteps") o.nsteps = std::stoi(val);
  else if (key == "allow_zero_left") o.allow_zero_left = (val == "true" || val == "1");
  else if (key == "objective") o.objective = val;
  else if (key == "restarts") o.restarts = std::stoi(val);
  else if (key == "iters") o.iters = std::stoi(val);
  else if (key == "family") o.family = val;
}

struct GridFile {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

GridFile load_grid(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw hardy::parameter_domain_error("cannot open grid file " + path);
  GridFile g;
  std::string line;
  if (!std::getline(f, line)) {
    throw hardy::parameter_domain_error("grid file is empty");
  }
  g.header = split_csv_line(line);
  for (auto& h : g.header) {
    if (!known_grid_keys().count(h)) {
      throw hardy::parameter_domain_error("unknown grid column: " + h);
    }
  }
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    g.rows.push_back(split_csv_line(line));
  }
  return g;
}

int run_sweep(const Options& base) {
  if (base.sweep_command.empty() || !runners().count(base.sweep_command)) {
    throw hardy::parameter_domain_error(
        "sweep needs --command, one of: prop1 prop4 log2 thm1 thm2 thm3 thm4 classical aux");
  }
  Runner runner = runners().at(base.sweep_command);
  GridFile grid = load_grid(base.grid);

  struct RowOut {
    std::vector<ReportEntry> entries;
    std::string skip_reason;
    Options opts;
    bool skipped = false;
  };
  std::vector<RowOut> outs(grid.rows.size());
  unsigned jobs = base.jobs == 0 ? hardy::default_jobs() : base.jobs;

  hardy::parallel_for_indexed(grid.rows.size(), jobs, [&](std::size_t i) {
    RowOut row;
    row.opts = base;
    bool marked_skip = false;
    try {
      for (std::size_t c = 0; c < grid.header.size() && c < grid.rows[i].size(); ++c) {
        if (grid.header[c] == "skip") {
          marked_skip = !grid.rows[i][c].empty() && grid.rows[i][c] != "false";
          continue;
        }
        apply_grid_cell(row.opts, grid.header[c], grid.rows[i][c]);
      }
      if (marked_skip) {
        row.skipped = true;
        row.skip_reason = "marked skip";
      } else {
        row.entries = runner(row.opts);
      }
    } catch (const std::exception& e) {
      row.skipped = true;
      row.skip_reason = e.what();
    }
    outs[i] = std::move(row);
  });

  std::vector<ReportEntry> entries;
  std::vector<std::string> skip_rows;
  int skipped = 0;
  for (auto& row : outs) {
    if (row.skipped) {
      ++skipped;
      ReportKey k{row.opts.p, std::nullopt, row.opts.s, row.opts.x0, row.opts.x1,
                  row.opts.seed};
      try {
        k.q = parse_q(row.opts.q);
      } catch (...) {
      }
      std::string cells = hardy::csv_quote(base.sweep_command + "/SKIP: " + row.skip_reason);
      auto num = [](std::optional<double> v) {
        return v ? (hardy::is_inf(*v) ? std::string("inf")
                                      : hardy::detail::fmt_full(*v))
                 : std::string();
      };
      cells += "," + num(k.p) + "," + num(k.q) + "," +
               (k.s ? std::to_string(*k.s) : "") + "," + num(k.x0) + "," +
               num(k.x1) + "," + (k.seed ? std::to_string(*k.seed) : "") +
               ",,,,false,,SKIP";
      skip_rows.push_back(std::move(cells));
    } else {
      for (auto& e : row.entries) entries.push_back(std::move(e));
    }
  }

  auto key_tuple = [](const ReportEntry& e) {
    return std::make_tuple(e.key.p.value_or(-1), e.key.q.value_or(-1),
                           e.key.s.value_or(-1), e.key.x0.value_or(-1),
                           e.key.x1.value_or(-1),
                           static_cast<double>(e.key.seed.value_or(0)),
                           e.rep.check_id);
  };
  std::sort(entries.begin(), entries.end(),
            [&](const ReportEntry& a, const ReportEntry& b) {
              return key_tuple(a) < key_tuple(b);
            });
  std::sort(skip_rows.begin(), skip_rows.end());

  int pass = 0, fail = 0, inconclusive = 0;
  for (const auto& e : entries) {
    switch (e.rep.verdict) {
      case Verdict::PASS: ++pass; break;
      case Verdict::FAIL: ++fail; break;
      case Verdict::INCONCLUSIVE: ++inconclusive; break;
    }
  }
  if (!base.output.empty() && base.format == "json") {
    write_file(base.output, render_json(entries));
  } else if (!base.output.empty()) {
    write_file(base.output, render_csv(entries, skip_rows));
  } else {
    std::cout << render_csv(entries, skip_rows);
  }
  std::cout << "sweep: " << entries.size() << " checks, " << pass << " PASS, "
            << fail << " FAIL, " << inconclusive << " INCONCLUSIVE, " << skipped
            << " SKIP\n";
  return exit_code_for(entries);
}

// ---------------------------------------------------------------------------
// extremize

int run_extremize(const Options& o) {
  hardy::SearchConfig cfg;
  cfg.p = o.p;
  cfg.q = parse_q(o.q);
  cfg.s = o.s;
  cfg.degree = o.degree >= 0 ? o.degree : 2;
  cfg.restarts = o.restarts;
  cfg.max_iters = o.iters;
  cfg.seed = o.seed;
  if (o.objective == "prop1") cfg.objective = hardy::Objective::prop1;
  else if (o.objective == "prop4") cfg.objective = hardy::Objective::prop4;
  else if (o.objective == "log2") cfg.objective = hardy::Objective::log2;
  else throw hardy::parameter_domain_error("objective must be prop1, prop4 or log2");
  if (o.family == "polynomial") cfg.family = hardy::AtomFamily::polynomial;
  else if (o.family == "steps") cfg.family = hardy::AtomFamily::steps;
  else if (o.family == "both") cfg.family = hardy::AtomFamily::both;
  else throw hardy::parameter_domain_error("family must be polynomial, steps or both");

  if (!o.grid.empty()) {
    GridFile grid = load_grid(o.grid);
    std::vector<std::pair<double, double>> points;
    for (const auto& row : grid.rows) {
      Options ro = o;
      for (std::size_t c = 0; c < grid.header.size() && c < row.size(); ++c) {
        apply_grid_cell(ro, grid.header[c], row[c]);
      }
      points.emplace_back(ro.p, parse_q(ro.q));
    }
    auto rows = hardy::tightness_sweep(points, cfg,
                                       o.jobs == 0 ? hardy::default_jobs() : o.jobs);
    std::string csv = std::string(hardy::kTightnessCsvHeader) + "\n";
    long violations = 0;
    int skipped = 0;
    for (const auto& row : rows) {
      csv += hardy::tightness_csv_row(row) + "\n";
      violations += row.bound_violations;
      if (row.skipped) ++skipped;
    }
    if (!o.output.empty()) {
      write_file(o.output, csv);
    } else {
      std::cout << csv;
    }
    std::cout << "tightness sweep: " << rows.size() << " rows, " << skipped
              << " skipped, " << violations << " bound violations\n";
    return violations > 0 ? 2 : 0;
  }

  hardy::ExtremalResult res = hardy::extremize(cfg);
  std::cout << "objective " << to_string(cfg.objective) << ": best value "
            << hardy::detail::fmt_g(res.best_value) << " vs bound "
            << hardy::detail::fmt_g(res.bound) << " (tightness "
            << hardy::detail::fmt_g(res.tightness) << ", r = "
            << hardy::detail::fmt_g(res.best_r) << ", " << res.evaluations
            << " evaluations, " << res.bound_violations << " violations)\n";
  if (!o.output.empty()) {
    json j;
    j["objective"] = to_string(cfg.objective);
    j["p"] = cfg.p;
    j["q"] = o.q;
    j["s"] = cfg.s;
    j["degree"] = cfg.degree;
    j["restarts"] = cfg.restarts;
    j["iters"] = cfg.max_iters;
    j["seed"] = cfg.seed;
    j["best_value"] = res.best_value;
    j["bound"] = res.bound;
    j["tightness"] = res.tightness;
    j["r"] = res.best_r;
    j["evaluations"] = res.evaluations;
    j["bound_violations"] = res.bound_violations;
    j["best_atom"] = hardy::to_json(res.best_atom);
    json traj = json::array();
    for (auto [it, v] : res.trajectory) traj.push_back({{"iter", it}, {"value", v}});
    j["trajectory"] = traj;
    j["version"] = hardy::kVersion;
    write_file(o.output, j.dump(2) + "\n");
  }
  return res.bound_violations > 0 ? 2 : 0;
}

// ---------------------------------------------------------------------------
// atom / validate

int run_atom(const Options& o) {
  Weight w = o.weight == "unit" ? Weight::unit() : Weight::power(o.alpha);
  AtomSpec spec = spec_from(o, false, w);
  Atom a = make_atom(spec, o, o.seed);
  auto v = hardy::validate_atom(a.fn, a.spec, o.tol);
  std::cout << (v.passed() ? "PASS" : "FAIL") << "\tatom "
            << hardy::detail::spec_id("atom", spec, "seed=" + std::to_string(o.seed))
            << "\tnorm=" << hardy::detail::fmt_g(v.norm_measured)
            << "\tbudget=" << hardy::detail::fmt_g(v.norm_budget) << "\n";
  if (!o.output.empty()) {
    write_file(o.output, hardy::to_json(a).dump(2) + "\n");
  }
  return v.passed() ? 0 : 2;
}

int run_validate(const Options& o) {
  if (o.input.empty()) {
    throw hardy::parameter_domain_error("validate needs --input <atom.json>");
  }
  std::ifstream f(o.input);
  if (!f) throw hardy::parameter_domain_error("cannot open " + o.input);
  json j = json::parse(f);
  Atom a = hardy::atom_from_json(j);
  auto v = hardy::validate_atom(a.fn, a.spec, o.tol);
  std::cout << (v.passed() ? "PASS" : "FAIL") << "\tvalidate " << o.input
            << "\tnorm=" << hardy::detail::fmt_g(v.norm_measured)
            << "\tbudget=" << hardy::detail::fmt_g(v.norm_budget) << "\n";
  if (!o.output.empty()) {
    write_file(o.output, hardy::to_json(v).dump(2) + "\n");
  }
  return v.passed() ? 0 : 2;
}

// ---------------------------------------------------------------------------
// config file merging: keys become synthesized --key=value tokens placed
// right after the subcommand, so explicit flags win (TakeLast policy).

std::vector<std::string> merge_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;
  std::ifstream f(config_path);
  if (!f) throw hardy::parameter_domain_error("cannot open config " + config_path);
  json cfg = json::parse(f);
  if (!cfg.is_object()) {
    throw hardy::parameter_domain_error("config file must hold a JSON object");
  }
  std::vector<std::string> synth;
  for (const auto& [key, value] : cfg.items()) {
    if (key == "command") {
      throw hardy::parameter_domain_error(
          "config key 'command' is not allowed; pass the subcommand directly");
    }
    std::string flag = "--" + key;
    if (value.is_boolean()) {
      if (value.get<bool>()) synth.push_back(flag);
    } else if (value.is_string()) {
      synth.push_back(flag + "=" + value.get<std::string>());
    } else {
      synth.push_back(flag + "=" + value.dump());
    }
  }
  // insert after the subcommand token (first non-flag argument)
  std::vector<std::string> merged;
  bool inserted = false;
  for (const auto& a : args) {
    merged.push_back(a);
    if (!inserted && !a.empty() && a[0] != '-') {
      merged.insert(merged.end(), synth.begin(), synth.end());
      inserted = true;
    }
  }
  if (!inserted) {
    throw hardy::parameter_domain_error("--config requires a subcommand");
  }
  return merged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hardycheck: atoms of Hardy-type spaces on the half-line and "
               "numerical certification of the operator bounds"};
  app.set_version_flag("--version", hardy::kVersion);
  app.require_subcommand(1);

  Options o;

  auto add_common = [&](CLI::App* cmd, bool with_spec = true) {
    auto tl = [](CLI::Option* opt) {
      opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
      return opt;
    };
    if (with_spec) {
      tl(cmd->add_option("--p", o.p, "exponent p in (0, 1]"));
      tl(cmd->add_option("--q", o.q, "exponent q in [1, inf]; pass inf for the sup norm"));
      tl(cmd->add_option("--s", o.s, "vanishing moments 0..s"));
      tl(cmd->add_option("--x0", o.x0, "support left endpoint"));
      tl(cmd->add_option("--x1", o.x1, "support right endpoint"));
      tl(cmd->add_option("--weight", o.weight, "unit or power")
             ->check(CLI::IsMember({"unit", "power"})));
      tl(cmd->add_option("--alpha", o.alpha, "power-weight exponent (w = x^alpha)"));
      tl(cmd->add_option("--degree", o.degree, "polynomial degree (default: constraints + 1)"));
      tl(cmd->add_option("--seed", o.seed, "base seed"));
      tl(cmd->add_option("--count", o.count, "number of seeded atoms"));
      tl(cmd->add_option("--shape", o.shape, "polynomial, squarewave or steps"));
      tl(cmd->add_option("--nsteps", o.nsteps, "cells for the steps shape"));
      cmd->add_flag("--allow-zero-left", o.allow_zero_left,
                    "permit x0 = 0 (non-strict bound mode)");
    }
    tl(cmd->add_option("--rel-tol", o.rel_tol, "quadrature relative tolerance"));
    tl(cmd->add_option("--tol", o.tol, "atom validation tolerance"));
    tl(cmd->add_option("--output,-o", o.output, "report output path"));
    tl(cmd->add_option("--format", o.format,
                       "json or csv (default: json; sweep defaults to csv)")
           ->check(CLI::IsMember({"json", "csv"})));
    cmd->add_option("--config", "JSON config file (flags override it)")
        ->each([](const std::string&) {});
    cmd->add_option("--jobs", o.jobs, "worker threads (default: hardware)");
  };

  auto* c_atom = app.add_subcommand("atom", "build one atom and write it as JSON");
  add_common(c_atom);
  auto* c_validate = app.add_subcommand("validate", "validate an atom JSON file");
  add_common(c_validate, false);
  c_validate->add_option("--input", o.input, "atom JSON path");

  auto* c_prop1 = app.add_subcommand("prop1", "atom bound for the averaging operator");
  auto* c_prop4 = app.add_subcommand("prop4", "atom bound for the dual operator (x^p weight)");
  auto* c_log2 = app.add_subcommand("log2", "ln 2 bound for (1,inf,0)-atoms");
  auto* c_thm1 = app.add_subcommand("thm1", "sum-level averaging bound");
  auto* c_thm2 = app.add_subcommand("thm2", "sum-level dual bound (x^p weight)");
  auto* c_thm3 = app.add_subcommand("thm3", "H image of a log-moment atom is an atom");
  auto* c_thm4 = app.add_subcommand("thm4", "H* image of a weighted atom is an atom");
  for (CLI::App* c : {c_prop1, c_prop4, c_log2, c_thm1, c_thm2, c_thm3, c_thm4}) {
    add_common(c);
  }
  c_thm2->add_flag("--thm2-literal", o.thm2_literal,
                   "additionally run the displayed-H variant");

  auto* c_classical = app.add_subcommand(
      "classical", "classical constants on the truncated power family");
  add_common(c_classical, false);
  c_classical->add_option("--p", o.p, "exponent p > 0, p != 1")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  c_classical->add_option("--direction", o.direction, "hardy or dual")
      ->check(CLI::IsMember({"hardy", "dual"}))
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  c_classical->add_option("--A", o.A_list, "family truncation points")->delimiter(',');
  c_classical->add_option("--plot-data", o.plot_data,
                          "write two-column (A, ratio) data here");

  auto* c_aux = app.add_subcommand("aux", "elementary power-difference inequalities");
  add_common(c_aux);
  c_aux->add_option("--random", o.random_n, "check this many random triples")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  auto* c_sweep = app.add_subcommand("sweep", "run a command over a CSV grid");
  add_common(c_sweep);
  c_sweep->add_option("--grid", o.grid, "grid CSV with a header row")->required();
  c_sweep->add_option("--command", o.sweep_command, "command to run per row")->required();

  auto* c_ext = app.add_subcommand("extremize", "search for worst-case atoms");
  add_common(c_ext);
  c_ext->add_option("--objective", o.objective, "prop1, prop4 or log2")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  c_ext->add_option("--family", o.family, "polynomial, steps or both")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  c_ext->add_option("--restarts", o.restarts, "random restarts")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  c_ext->add_option("--iters", o.iters, "compass iterations per restart")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  c_ext->add_option("--grid", o.grid, "optional (p, q) grid CSV for a tightness sweep");

  try {
    auto args = merge_config(argc, argv);
    std::vector<const char*> cargs;
    cargs.push_back(argv[0]);
    for (const auto& a : args) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (c_atom->parsed()) return run_atom(o);
    if (c_validate->parsed()) return run_validate(o);
    if (c_sweep->parsed()) return run_sweep(o);
    if (c_ext->parsed()) return run_extremize(o);
    for (const auto& [name, runner] : runners()) {
      CLI::App* sub = app.get_subcommand(name);
      if (sub->parsed()) return emit(runner(o), o);
    }
    std::cerr << "error: no command\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
