#include "commands.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "epsclust/error.hpp"
#include "epsclust/graph.hpp"
#include "epsclust/partition.hpp"
#include "epsclust/qubo.hpp"
#include "epsclust/tree_io.hpp"

namespace epsclust::cli {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// gen-grid

GridData generate_grid(const GridSpec& spec) {
  if (spec.dim != 2 && spec.dim != 3) throw ValidationError("grid dimension must be 2 or 3");
  if (spec.side == 0 || spec.samples_per_cell == 0) throw ValidationError("grid side and samples must be positive");
  if (!(spec.sigma >= 0.0)) throw ValidationError("grid sigma must be non-negative");

  std::size_t cells = 1;
  for (std::size_t a = 0; a < spec.dim; ++a) cells *= spec.side;

  GridData g;
  g.dim = spec.dim;
  g.coords.reserve(cells * spec.samples_per_cell * spec.dim);
  g.labels.reserve(cells * spec.samples_per_cell);
  Rng rng(derive_seed(spec.seed, {0x671dULL}));
  std::normal_distribution<double> noise(0.0, spec.sigma > 0.0 ? spec.sigma : 1.0);
  std::vector<std::size_t> idx(spec.dim);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    // Last axis varies fastest.
    std::size_t rest = cell;
    for (std::size_t a = spec.dim; a-- > 0;) {
      idx[a] = rest % spec.side;
      rest /= spec.side;
    }
    for (std::size_t s = 0; s < spec.samples_per_cell; ++s) {
      for (std::size_t a = 0; a < spec.dim; ++a) {
        const double mu = 10.0 * static_cast<double>(idx[a]) + 5.0;
        g.coords.push_back(spec.sigma > 0.0 ? mu + noise(rng) : mu);
      }
      g.labels.push_back(cell);
    }
  }
  return g;
}

WeightedDataset grid_dataset(const GridData& grid) {
  return WeightedDataset(grid.dim, grid.coords, std::vector<double>(grid.labels.size(), 1.0));
}

void write_grid_csv(std::ostream& out, const GridData& grid) {
  static constexpr const char* kAxis[] = {"x", "y", "z"};
  for (std::size_t a = 0; a < grid.dim; ++a) out << kAxis[a] << ',';
  out << "label\n";
  std::string line;
  for (std::size_t i = 0; i < grid.labels.size(); ++i) {
    line.clear();
    for (std::size_t a = 0; a < grid.dim; ++a) {
      line += format_double(grid.coords[i * grid.dim + a]);
      line += ',';
    }
    line += std::to_string(grid.labels[i]);
    line += '\n';
    out << line;
  }
}

// ---------------------------------------------------------------------------
// run

ClusterTree cmd_run(const RunConfig& cfg, std::ostream& log) {
  const WeightedDataset ds = load_csv(cfg.input, cfg.csv);
  TreeParams params;
  params.eps0 = cfg.eps0 ? *cfg.eps0 : estimate_initial_radius(ds, cfg.collapse_fraction, cfg.seed);
  params.alpha = cfg.alpha;
  params.kappa = cfg.kappa;
  params.solver = cfg.solver;
  params.seed = cfg.seed;
  params.max_levels = cfg.max_levels;
  params.use_centroids = cfg.centroid_mode;
  params.threads = cfg.threads;

  log << "level,epsilon,nodes,seconds\n";
  ClusterTree tree = build_tree(ds, params, [&](const LevelReport& r) {
    log << r.level << ',' << format_double(r.epsilon) << ',' << r.node_count << ',' << r.seconds << '\n';
  });
  save_tree(cfg.output, tree);
  return tree;
}

// ---------------------------------------------------------------------------
// labels

void write_labels_csv(std::ostream& out, const ClusteringAssignment& labels) {
  out << "point_id,label\n";
  for (std::size_t p = 0; p < labels.labels.size(); ++p) out << p << ',' << labels.labels[p] << '\n';
}

std::vector<std::size_t> read_labels_csv(std::istream& in, std::size_t n_points) {
  std::vector<std::size_t> labels(n_points);
  std::vector<char> seen(n_points, 0);
  std::string line;
  std::size_t row = 0;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (row == 1 && line.rfind("point_id", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(row, "expected 'point_id,label'");
    std::size_t id = 0;
    std::size_t label = 0;
    const char* b = line.data();
    auto r1 = std::from_chars(b, b + comma, id);
    auto r2 = std::from_chars(b + comma + 1, b + line.size(), label);
    if (r1.ec != std::errc() || r1.ptr != b + comma || r2.ec != std::errc() || r2.ptr != b + line.size()) {
      throw ParseError(row, "expected non-negative integers 'point_id,label'");
    }
    if (id >= n_points) {
      throw ValidationError("labels refer to point " + std::to_string(id) + " but the input has " +
                            std::to_string(n_points) + " points");
    }
    if (seen[id]) throw ValidationError("point " + std::to_string(id) + " labelled twice");
    seen[id] = 1;
    labels[id] = label;
    ++count;
  }
  if (count != n_points) {
    throw ValidationError("labels cover " + std::to_string(count) + " of " + std::to_string(n_points) + " points");
  }
  return labels;
}

// ---------------------------------------------------------------------------
// score

ScoreSelection parse_score_selection(const std::string& name) {
  if (name == "ch" || name == "calinski_harabasz") return ScoreSelection::calinski_harabasz;
  if (name == "db" || name == "davies_bouldin") return ScoreSelection::davies_bouldin;
  if (name == "both" || name == "all") return ScoreSelection::both;
  throw ValidationError("unknown score '" + name + "'");
}

namespace {

std::vector<ScoreReport> compute_scores(const WeightedDataset& ds, const std::vector<std::size_t>& labels,
                                        ScoreSelection which) {
  std::vector<ScoreReport> out;
  if (which != ScoreSelection::davies_bouldin) out.push_back(calinski_harabasz(ds, labels));
  if (which != ScoreSelection::calinski_harabasz) out.push_back(davies_bouldin(ds, labels));
  return out;
}

}  // namespace

void cmd_score(const WeightedDataset& ds, const std::vector<std::size_t>& labels, ScoreSelection which,
               std::ostream& out) {
  for (const auto& r : compute_scores(ds, labels, which)) {
    out << to_string(r.score) << ',' << format_double(r.value) << ',' << r.n_clusters << '\n';
  }
}

void cmd_score_sweep(const WeightedDataset& ds, const ClusterTree& tree, ScoreSelection which,
                     std::ostream& out) {
  if (tree.point_leaf.size() != ds.size()) {
    throw ValidationError("tree covers " + std::to_string(tree.point_leaf.size()) + " points but the input has " +
                          std::to_string(ds.size()));
  }
  out << "level,score_name,value,n_clusters\n";
  for (std::size_t level = 0; level < tree.level_count(); ++level) {
    const auto labels = labels_at_level(tree, level);
    for (auto kind : {ScoreSelection::calinski_harabasz, ScoreSelection::davies_bouldin}) {
      if (which != ScoreSelection::both && which != kind) continue;
      try {
        for (const auto& r : compute_scores(ds, labels.labels, kind)) {
          out << level << ',' << to_string(r.score) << ',' << format_double(r.value) << ',' << r.n_clusters
              << '\n';
        }
      } catch (const UndefinedScoreError&) {
        // Undefined at this level (single cluster, all singletons, ...).
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Entry point

namespace {

struct OutputTarget {
  std::ofstream file;
  std::ostream* stream = nullptr;

  OutputTarget(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream = &fallback;
    } else {
      file.open(path, std::ios::binary);
      if (!file) throw Error("cannot write '" + path + "'");
      stream = &file;
    }
  }
};

void add_csv_options(CLI::App* cmd, std::string& input, CsvOptions& csv, std::string& metric) {
  cmd->add_option("-i,--input", input, "Input CSV of numeric columns")->required();
  cmd->add_option("--weight-column", csv.weight_column, "Column holding point weights (default: all 1)");
  cmd->add_option("--ignore-column", csv.ignore_columns, "Column to skip; repeatable");
  cmd->add_option("--metric", metric, "euclidean, manhattan or chebyshev")->capture_default_str();
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hierarchical extreme clustering by maximum-weight epsilon-separated subsets"};
  app.require_subcommand(1);

  // gen-grid
  GridSpec grid;
  std::string grid_out = "-";
  auto* gen = app.add_subcommand("gen-grid", "Write a synthetic Gaussian grid dataset");
  gen->add_option("--dim", grid.dim, "2 or 3")->capture_default_str();
  gen->add_option("--side", grid.side, "Cells per axis")->capture_default_str();
  gen->add_option("--samples", grid.samples_per_cell, "Samples per cell")->capture_default_str();
  gen->add_option("--sigma", grid.sigma, "Per-axis standard deviation")->capture_default_str();
  gen->add_option("--seed", grid.seed)->capture_default_str();
  gen->add_option("-o,--output", grid_out, "Output CSV ('-' for stdout)")->capture_default_str();

  // run
  RunConfig run;
  std::string run_input, run_output, run_metric = "euclidean", solver_name = "greedy";
  double eps0 = 0.0;
  bool representatives = false;
  run.threads = std::max(1U, std::thread::hardware_concurrency());
  auto* runc = app.add_subcommand("run", "Build the clustering tree");
  add_csv_options(runc, run_input, run.csv, run_metric);
  auto* eps_opt = runc->add_option("--eps0", eps0, "Initial radius of interest (default: estimated)");
  runc->add_option("--collapse-fraction", run.collapse_fraction,
                   "Target first-level collapse fraction used to estimate --eps0")
      ->capture_default_str();
  runc->add_option("--alpha", run.alpha, "Radius growth factor per level (> 1)")->capture_default_str();
  runc->add_option("--kappa", run.kappa, "Maximum chunk cardinality")->capture_default_str();
  runc->add_option("--solver", solver_name, "greedy, exact or anneal")->capture_default_str();
  runc->add_option("--seed", run.seed)->capture_default_str();
  runc->add_option("--max-levels", run.max_levels)->capture_default_str();
  runc->add_option("--threads", run.threads, "Worker threads")->capture_default_str();
  runc->add_option("--sweeps", run.solver.sweeps, "Annealing sweeps per restart")->capture_default_str();
  runc->add_option("--restarts", run.solver.restarts, "Annealing restarts")->capture_default_str();
  runc->add_option("--gamma", run.solver.gamma, "QUBO penalty margin")->capture_default_str();
  runc->add_flag("--representatives", representatives,
                 "Carry representative coordinates instead of cell centroids to the next level");
  runc->add_option("-o,--output", run_output, "Tree JSON output")->required();

  // labels
  std::string tree_path, labels_out = "-";
  std::size_t level = 0;
  auto* labc = app.add_subcommand("labels", "Extract the clustering assignment of one tree level");
  labc->add_option("--tree", tree_path)->required();
  labc->add_option("--level", level)->required();
  labc->add_option("-o,--output", labels_out, "Output CSV ('-' for stdout)")->capture_default_str();

  // score
  std::string score_input, score_metric = "euclidean", score_labels, score_tree, which_name = "both";
  CsvOptions score_csv;
  auto* scorec = app.add_subcommand("score", "Calinski-Harabasz and Davies-Bouldin scores");
  add_csv_options(scorec, score_input, score_csv, score_metric);
  auto* lab_opt = scorec->add_option("--labels", score_labels, "Labels CSV 'point_id,label'");
  auto* tree_opt = scorec->add_option("--tree", score_tree, "Score every level of a tree instead");
  lab_opt->excludes(tree_opt);
  scorec->add_option("--which", which_name, "ch, db or both")->capture_default_str();

  // export-qubo
  std::string qin, qmetric = "euclidean", qout = "-", formulation = "mwis";
  CsvOptions qcsv;
  double qeps = 0.0, qgamma = kDefaultPenaltyMargin, qlambda = 0.0;
  std::size_t qkappa = 1000, qchunk = 0;
  bool qreduce = false;
  auto* qc = app.add_subcommand("export-qubo", "Write the QUBO of one chunk as 'i j value' text");
  add_csv_options(qc, qin, qcsv, qmetric);
  qc->add_option("--epsilon", qeps, "Radius of interest")->required();
  qc->add_option("--kappa", qkappa, "Maximum chunk cardinality")->capture_default_str();
  qc->add_option("--chunk", qchunk, "Chunk index")->capture_default_str();
  qc->add_option("--formulation", formulation, "mwis or msc")->capture_default_str();
  qc->add_option("--gamma", qgamma, "MWIS penalty margin")->capture_default_str();
  qc->add_option("--lambda", qlambda, "MSC penalty (default n*max(cost)+1)");
  qc->add_flag("--reduce", qreduce, "Fix isolated MWIS variables before export");
  qc->add_option("-o,--output", qout, "Output file ('-' for stdout)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (gen->parsed()) {
      const auto data = generate_grid(grid);
      OutputTarget target(grid_out, out);
      write_grid_csv(*target.stream, data);
    } else if (runc->parsed()) {
      run.input = run_input;
      run.output = run_output;
      run.csv.metric = parse_metric(run_metric);
      run.solver.kind = parse_solver(solver_name);
      run.centroid_mode = !representatives;
      if (eps_opt->count() > 0) run.eps0 = eps0;
      if (run.threads == 0) throw ValidationError("--threads must be positive");
      const auto tree = cmd_run(run, out);
      if (tree.status == TreeStatus::truncated) {
        err << "warning: stopped after " << run.max_levels << " levels with " << tree.levels.back().size()
            << " nodes remaining (status: truncated)\n";
      }
    } else if (labc->parsed()) {
      const auto tree = load_tree(tree_path);
      const auto labels = labels_at_level(tree, level);
      OutputTarget target(labels_out, out);
      write_labels_csv(*target.stream, labels);
    } else if (scorec->parsed()) {
      score_csv.metric = parse_metric(score_metric);
      const auto ds = load_csv(score_input, score_csv);
      const auto which = parse_score_selection(which_name);
      if (!score_tree.empty()) {
        cmd_score_sweep(ds, load_tree(score_tree), which, out);
      } else {
        if (score_labels.empty()) throw ValidationError("score needs --labels or --tree");
        std::ifstream in(score_labels);
        if (!in) throw InputError("cannot open '" + score_labels + "'");
        cmd_score(ds, read_labels_csv(in, ds.size()), which, out);
      }
    } else if (qc->parsed()) {
      qcsv.metric = parse_metric(qmetric);
      const auto ds = dedupe(load_csv(qin, qcsv));
      std::vector<std::size_t> ids(ds.size());
      std::iota(ids.begin(), ids.end(), std::size_t{0});
      const auto chunks = partition(ds, std::move(ids), PartitionConfig{qkappa});
      if (qchunk >= chunks.size()) {
        throw ValidationError("--chunk " + std::to_string(qchunk) + " out of range [0, " +
                              std::to_string(chunks.size() - 1) + "]");
      }
      const auto g = build_graph(ds, chunks[qchunk], qeps);
      QuboProblem q;
      if (formulation == "mwis") {
        q = build_mwis_qubo(g, qgamma);
        if (qreduce) q = reduce_qubo(q);
      } else if (formulation == "msc") {
        const std::vector<double> costs(g.size(), 1.0);
        q = build_msc_qubo(g, costs, qlambda > 0.0 ? qlambda : default_msc_lambda(g.size(), costs));
      } else {
        throw ValidationError("unknown formulation '" + formulation + "' (expected mwis or msc)");
      }
      OutputTarget target(qout, out);
      write_qubo_text(*target.stream, q);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace epsclust::cli
