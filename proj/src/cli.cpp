#include "locrec/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "locrec/errors.hpp"
#include "locrec/experiments.hpp"
#include "locrec/geometry.hpp"
#include "locrec/newton_greedy.hpp"
#include "locrec/point_io.hpp"

namespace locrec::cli {

namespace {

struct Inputs {
  PointSet sites;
  std::vector<double> values;
};

SobolevKernelSpec kernel_spec(const RunConfig& cfg) { return {cfg.m, cfg.d, cfg.c}; }

Inputs load_inputs(const RunConfig& cfg) {
  Inputs in;
  if (cfg.data_file) {
    PointData data = read_point_file(*cfg.data_file, cfg.d);
    if (data.points.empty()) throw ConfigError("--data", "file contains no points");
    in.sites = std::move(data.points);
    if (cfg.function == "column") {
      if (!data.has_values()) throw ConfigError("--function", "column requested but the data file has no value column");
      in.values = std::move(data.values);
    }
  } else {
    in.sites = random_cloud(cfg.random_n.value_or(100), cfg.d, cfg.seed);
  }
  if (cfg.function == "peaks") in.values = peaks_values(in.sites);
  return in;
}

PointSet eval_points(const RunConfig& cfg, const GridSpec& fallback) {
  if (cfg.eval_file) {
    PointSet pts = read_point_file(*cfg.eval_file, cfg.d).points;
    if (pts.empty()) throw ConfigError("--eval", "file contains no points");
    return pts;
  }
  const GridSpec g = cfg.grid.value_or(fallback);
  return grid_2d(g.nx, g.ny, g.xmin, g.xmax, g.ymin, g.ymax);
}

std::vector<std::string> coordinate_names(int d, const std::string& prefix) {
  if (d == 2) return {prefix + "x", prefix + "y"};
  std::vector<std::string> names;
  for (int i = 1; i <= d; ++i) names.push_back(prefix + "x" + std::to_string(i));
  return names;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path) : out_(path, std::ios::binary) {
    if (!out_) throw ConfigError("--out", "cannot open '" + path.string() + "' for writing");
  }

  void header(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) out_ << (i ? "," : "") << names[i];
    out_ << '\n';
  }

  CsvWriter& field(const std::string& s) {
    if (!first_) out_ << ',';
    out_ << s;
    first_ = false;
    return *this;
  }
  CsvWriter& field(double v) { return field(format_number(v)); }
  CsvWriter& field(std::size_t v) { return field(std::to_string(v)); }
  void end_row() {
    out_ << '\n';
    first_ = true;
  }

  void close() {
    out_.close();
    if (!out_) throw std::runtime_error("failed writing the output file");
  }

 private:
  std::ofstream out_;
  bool first_ = true;
};

std::string summary_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct RowStats {
  double max_p2 = 0.0;
  double max_lebesgue = 0.0;
  std::size_t degenerate = 0;
};

RowStats summarize(const std::vector<RecoveryRow>& rows) {
  RowStats s;
  for (const auto& r : rows) {
    if (r.stop_reason == StopReason::degenerate) {
      ++s.degenerate;
      continue;
    }
    s.max_p2 = std::max(s.max_p2, r.p2);
    s.max_lebesgue = std::max(s.max_lebesgue, r.lebesgue);
  }
  return s;
}

std::string run_select(const RunConfig& cfg) {
  const Inputs in = load_inputs(cfg);
  const PointCloud cloud(in.sites);
  std::vector<double> z = cfg.point.empty() ? std::vector<double>(cfg.d, 0.0) : cfg.point;
  const std::size_t offer = cfg.offer.value_or(cloud.size());
  if (offer < 1 || offer > cloud.size()) throw ConfigError("--offer", "must lie in [1, N]");

  const auto nn = cloud.knn(z, offer);
  std::vector<std::size_t> idx;
  for (const auto& nb : nn) idx.push_back(nb.index);
  const PointSet candidates = cloud.points().subset(idx);

  StopRule stop;
  stop.k_max = cfg.k_max.value_or(offer);
  stop.p2_threshold = cfg.p2_threshold;
  stop.progress_floor = cfg.progress_floor;
  const Selection sel = greedy_select(z, candidates, kernel_spec(cfg), stop);

  CsvWriter csv(*cfg.out);
  std::vector<std::string> names = {"step", "p2", "lebesgue"};
  for (auto& n : coordinate_names(cfg.d, "site_")) names.push_back(n);
  names.push_back("stop_reason");
  csv.header(names);
  double max_leb = 0.0;
  for (std::size_t j = 1; j <= sel.size(); ++j) {
    const double leb = lebesgue_constant(lagrange_coefficients(sel, j));
    max_leb = std::max(max_leb, leb);
    csv.field(j).field(sel.p2_trace[j]).field(leb);
    for (double v : candidates[sel.site_indices[j - 1]]) csv.field(v);
    csv.field(std::string(to_string(sel.stop_reason))).end_row();
  }
  csv.close();
  return "select: points=" + std::to_string(sel.size()) + " final_p2=" + summary_number(sel.p2()) +
         " max_p2=" + summary_number(sel.p2_trace.front()) + " max_lebesgue=" + summary_number(max_leb) +
         " stop_reason=" + std::string(to_string(sel.stop_reason));
}

StopRule batch_stop_rule(const RunConfig& cfg) {
  StopRule stop = default_stop_rule(cfg.m, cfg.d);
  if (cfg.k_max) stop.k_max = *cfg.k_max;
  stop.p2_threshold = cfg.p2_threshold;
  stop.progress_floor = cfg.progress_floor;
  return stop;
}

std::size_t batch_offer(const RunConfig& cfg, std::size_t n) {
  const std::size_t offer = cfg.offer.value_or(std::min(default_offer(cfg.m, cfg.d), n));
  if (offer < 1 || offer > n) throw ConfigError("--offer", "must lie in [1, N] (N=" + std::to_string(n) + ")");
  return offer;
}

std::string run_upsample(const RunConfig& cfg, bool with_global) {
  const Inputs in = load_inputs(cfg);
  const PointCloud cloud(in.sites);
  const PointSet evals = eval_points(cfg, GridSpec{});
  const StopRule stop = batch_stop_rule(cfg);
  const std::size_t offer = batch_offer(cfg, cloud.size());

  std::vector<RecoveryRow> rows;
  std::vector<std::optional<double>> p2_global;
  std::string global_note;
  if (with_global) {
    Comparison cmp = compare_global_local(cloud, in.values, evals, kernel_spec(cfg), stop, offer, cfg.threads);
    for (auto& r : cmp.rows) {
      rows.push_back(std::move(r.local));
      p2_global.push_back(r.p2_global);
    }
    global_note = cmp.global_available ? " global=available" : " global=unavailable";
  } else {
    rows = upsample(cloud, in.values, evals, kernel_spec(cfg), stop, offer, cfg.threads);
  }

  CsvWriter csv(*cfg.out);
  std::vector<std::string> names = coordinate_names(cfg.d, "");
  names.insert(names.end(), {"value", "p2"});
  if (with_global) names.push_back("p2_global");
  names.insert(names.end(), {"lebesgue", "npoints", "stop_reason"});
  csv.header(names);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    for (double v : r.z) csv.field(v);
    csv.field(r.value).field(r.p2);
    if (with_global) csv.field(p2_global[i] ? format_number(*p2_global[i]) : std::string());
    csv.field(r.lebesgue).field(r.npoints).field(std::string(to_string(r.stop_reason))).end_row();
  }
  csv.close();

  const RowStats s = summarize(rows);
  std::string line = std::string(with_global ? "compare" : "upsample") + ": rows=" + std::to_string(rows.size()) +
                     " max_p2=" + summary_number(s.max_p2) + " max_lebesgue=" + summary_number(s.max_lebesgue) +
                     " degenerate=" + std::to_string(s.degenerate) + global_note;
  if (with_global) {
    double max_global = 0.0;
    for (const auto& g : p2_global) {
      if (g) max_global = std::max(max_global, *g);
    }
    line += " max_p2_global=" + summary_number(max_global);
  }
  return line;
}

std::string run_converge(const RunConfig& cfg) {
  const PointSet grid = eval_points(cfg, GridSpec{21, 21, -1.0, 1.0, -1.0, 1.0});
  const StopRule stop = batch_stop_rule(cfg);
  const std::size_t offer = cfg.offer.value_or(default_offer(cfg.m, cfg.d));
  const ConvergenceResult res = convergence_study(kernel_spec(cfg), cfg.Ns, grid, cfg.seed, stop, offer, cfg.threads);

  CsvWriter csv(*cfg.out);
  csv.header({"N", "h", "maxP"});
  for (const auto& p : res.points) csv.field(p.N).field(p.h).field(p.maxP).end_row();
  csv.close();
  return "converge: sizes=" + std::to_string(res.points.size()) + " max_p2=" +
         summary_number(res.points.front().maxP * res.points.front().maxP) +
         " slope=" + (res.slope ? summary_number(*res.slope) : std::string("undefined"));
}

std::string run_stability(const RunConfig& cfg) {
  const double h_bar = stability_fill_limit(cfg.m, cfg.d);
  if (cfg.out) {
    CsvWriter csv(*cfg.out);
    csv.header({"m", "d", "h_bar"});
    csv.field(cfg.m).field(static_cast<std::size_t>(cfg.d)).field(h_bar).end_row();
    csv.close();
  }
  return "stability: 2m-d=" + summary_number(2.0 * cfg.m - cfg.d) + " h_bar=" + summary_number(h_bar);
}

void add_common_options(CLI::App* sub, RunConfig& cfg, std::vector<double>& grid_values,
                        std::size_t& k_max, std::size_t& offer, std::size_t& random_n) {
  sub->add_option("--m", cfg.m, "Sobolev smoothness order m (> d/2)");
  sub->add_option("--d", cfg.d, "space dimension");
  sub->add_option("--scale", cfg.c, "kernel scale c");
  sub->add_option("--kmax", k_max, "maximum number of selected points");
  sub->add_option("--p2-threshold", cfg.p2_threshold, "stop once P^2 drops below this (0 disables)");
  sub->add_option("--progress-floor", cfg.progress_floor, "minimal admissible score and residual diagonal");
  sub->add_option("--offer", offer, "nearest neighbors offered per evaluation point");
  sub->add_option("--data", cfg.data_file, "point file with the data sites");
  sub->add_option("--random", random_n, "use N uniform random sites in [-1,1]^d");
  sub->add_option("--seed", cfg.seed, "seed of the random sites");
  sub->add_option("--grid", grid_values, "evaluation grid NX NY XMIN XMAX YMIN YMAX")->expected(6);
  sub->add_option("--eval", cfg.eval_file, "point file with evaluation points");
  sub->add_option("--function", cfg.function, "target values: peaks or column");
  sub->add_option("--out", cfg.out, "output CSV file");
  sub->add_option("--threads", cfg.threads, "worker threads (0 = hardware concurrency)");
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void RunConfig::validate() const {
  if (d < 1) throw ConfigError("--d", "must be >= 1");
  if (!std::isfinite(m) || !(m > 0.5 * d)) throw ConfigError("--m", "must exceed d/2");
  if (!std::isfinite(c) || !(c > 0.0)) throw ConfigError("--scale", "must be > 0");
  if (k_max && *k_max < 1) throw ConfigError("--kmax", "must be >= 1");
  if (!(p2_threshold >= 0.0)) throw ConfigError("--p2-threshold", "must be >= 0");
  if (!(progress_floor > 0.0)) throw ConfigError("--progress-floor", "must be > 0");
  if (offer && *offer < 1) throw ConfigError("--offer", "must be >= 1");
  if (grid && eval_file) throw ConfigError("--grid", "give either --grid or --eval, not both");
  if (data_file && random_n) throw ConfigError("--data", "give either --data or --random, not both");
  if (random_n && *random_n < 1) throw ConfigError("--random", "must be >= 1");
  if (function != "peaks" && function != "column") throw ConfigError("--function", "must be 'peaks' or 'column'");
  if (function == "column" && !data_file) throw ConfigError("--function", "column values need a --data file");
  if (function == "peaks" && d != 2 && command != Command::converge && command != Command::stability)
    throw ConfigError("--function", "peaks is defined for d = 2 only");
  if (grid) {
    if (d != 2) throw ConfigError("--grid", "grids are two-dimensional; use --eval for d != 2");
    if (grid->nx < 1 || grid->ny < 1) throw ConfigError("--grid", "NX and NY must be >= 1");
    if (!(grid->xmax >= grid->xmin) || !(grid->ymax >= grid->ymin))
      throw ConfigError("--grid", "bounds out of order");
  } else if (!eval_file && d != 2 && (command == Command::upsample || command == Command::compare ||
                                       command == Command::converge)) {
    throw ConfigError("--eval", "needed for d != 2");
  }
  if (command == Command::select && !point.empty() && point.size() != static_cast<std::size_t>(d))
    throw ConfigError("--point", "needs exactly d coordinates");
  if (command == Command::converge) {
    if (Ns.empty()) throw ConfigError("--ns", "at least one set size is required");
    for (std::size_t i = 0; i < Ns.size(); ++i) {
      if (Ns[i] < 1) throw ConfigError("--ns", "sizes must be >= 1");
      if (i > 0 && Ns[i] <= Ns[i - 1]) throw ConfigError("--ns", "sizes must be strictly increasing");
    }
    if (data_file) throw ConfigError("--data", "converge draws nested random sets; use --seed");
  }
  if (command != Command::stability && !out) throw ConfigError("--out", "an output CSV path is required");
}

std::optional<RunConfig> parse_command_line(int argc, const char* const* argv) {
  CLI::App app{"Local kernel recovery with greedy Power Function point selection"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::vector<double> grid_values;
  std::vector<double> point;
  std::vector<std::size_t> Ns;
  std::size_t k_max = 0, offer = 0, random_n = 0;

  struct Entry {
    const char* name;
    const char* help;
    Command command;
  };
  const Entry entries[] = {
      {"select", "greedy trace at one evaluation point", Command::select},
      {"upsample", "local recovery on a grid or point set", Command::upsample},
      {"compare", "local recovery next to global interpolation", Command::compare},
      {"converge", "convergence study on nested random sets", Command::converge},
      {"stability", "double-precision fill distance limit", Command::stability},
  };
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    add_common_options(sub, cfg, grid_values, k_max, offer, random_n);
    if (e.command == Command::select) sub->add_option("--point", point, "evaluation point coordinates");
    if (e.command == Command::converge)
      sub->add_option("--ns", Ns, "strictly increasing nested set sizes")->delimiter(',');
    subs.emplace_back(sub, e.command);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError("command line", e.what());
  }

  for (const auto& [sub, command] : subs) {
    if (!sub->parsed()) continue;
    cfg.command = command;
    if (sub->count("--kmax")) cfg.k_max = k_max;
    if (sub->count("--offer")) cfg.offer = offer;
    if (sub->count("--random")) cfg.random_n = random_n;
    if (sub->count("--grid")) {
      GridSpec g;
      if (grid_values[0] < 1 || grid_values[1] < 1 || grid_values[0] != std::floor(grid_values[0]) ||
          grid_values[1] != std::floor(grid_values[1]))
        throw ConfigError("--grid", "NX and NY must be positive integers");
      g.nx = static_cast<std::size_t>(grid_values[0]);
      g.ny = static_cast<std::size_t>(grid_values[1]);
      g.xmin = grid_values[2];
      g.xmax = grid_values[3];
      g.ymin = grid_values[4];
      g.ymax = grid_values[5];
      cfg.grid = g;
    }
  }
  cfg.point = point;
  cfg.Ns = Ns;
  cfg.validate();
  return cfg;
}

int run(const RunConfig& config, std::ostream& summary, std::ostream& diag) {
  const auto start = std::chrono::steady_clock::now();
  std::string line;
  try {
    config.validate();
    switch (config.command) {
      case Command::select: line = run_select(config); break;
      case Command::upsample: line = run_upsample(config, false); break;
      case Command::compare: line = run_upsample(config, true); break;
      case Command::converge: line = run_converge(config); break;
      case Command::stability: line = run_stability(config); break;
    }
  } catch (const ConfigError& e) {
    diag << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << '\n';
    return 1;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  summary << line << " wall_time=" << summary_number(seconds) << "s\n";
  return 0;
}

}  // namespace locrec::cli
