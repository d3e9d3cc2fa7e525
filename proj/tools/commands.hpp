#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "epsclust/coarsen.hpp"
#include "epsclust/dataset.hpp"
#include "epsclust/validity.hpp"

namespace epsclust::cli {

struct GridSpec {
  std::size_t dim = 2;               ///< 2 or 3
  std::size_t side = 10;             ///< cells per axis
  std::size_t samples_per_cell = 100;
  double sigma = 2.0;                ///< per-axis standard deviation; 0 places points at cell centres
  std::uint64_t seed = 0;
};

struct GridData {
  std::size_t dim = 0;
  std::vector<double> coords;        ///< row-major
  std::vector<std::size_t> labels;   ///< ground-truth cell index per point
};

/// Gaussian blobs centred at (10i+5, 10j+5[, 10k+5]); cell index is
/// i·side^(dim-1) + j·side^(dim-2) + k.
GridData generate_grid(const GridSpec& spec);
WeightedDataset grid_dataset(const GridData& grid);

/// CSV with header "x,y[,z],label".
void write_grid_csv(std::ostream& out, const GridData& grid);

struct RunConfig {
  std::filesystem::path input;
  CsvOptions csv;
  std::optional<double> eps0;     ///< estimated from the data when absent
  double collapse_fraction = 0.1;
  double alpha = 1.3;
  std::size_t kappa = 1000;
  SolverConfig solver;
  std::uint64_t seed = 0;
  std::size_t max_levels = 64;
  bool centroid_mode = true;
  std::size_t threads = 1;
  std::filesystem::path output;
};

/// Builds the tree, writes it as JSON and prints one summary line per
/// level ("level,epsilon,nodes,seconds") to `log`.
ClusterTree cmd_run(const RunConfig& cfg, std::ostream& log);

/// "point_id,label" CSV for the chosen level.
void write_labels_csv(std::ostream& out, const ClusteringAssignment& labels);
std::vector<std::size_t> read_labels_csv(std::istream& in, std::size_t n_points);

enum class ScoreSelection { calinski_harabasz, davies_bouldin, both };

ScoreSelection parse_score_selection(const std::string& name);

/// Prints "score_name,value,n_clusters" lines.
void cmd_score(const WeightedDataset& ds, const std::vector<std::size_t>& labels, ScoreSelection which,
               std::ostream& out);

/// Prints "level,score_name,value,n_clusters" for every level where the
/// score is defined.
void cmd_score_sweep(const WeightedDataset& ds, const ClusterTree& tree, ScoreSelection which,
                     std::ostream& out);

std::string format_double(double v);

/// Entry point shared by the executable and tests. Returns the exit code:
/// 0 success, 1 runtime failure, 2 invalid input or configuration.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace epsclust::cli
