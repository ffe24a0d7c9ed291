#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace momentmix::experiments {

struct Stats {
  double min = 0.0;
  double avg = 0.0;
  double max = 0.0;
  double median = 0.0;
};

/// Over the finite entries of `values`; nullopt when there are none.
std::optional<Stats> summarize(const std::vector<double>& values);

/// One trial of a grid cell. `values` is empty when the trial failed.
struct Trial {
  std::uint64_t seed = 0;
  std::vector<double> values;
  double seconds = 0.0;
  std::string error;

  bool ok() const noexcept { return error.empty(); }
};

struct Cell {
  int d = 0;
  int m = 0;
  int r = 0;
  double epsilon = 0.0;  // table3 only
  std::vector<Trial> trials;

  int failures() const;
  /// Column `index` of the successful trials.
  std::vector<double> column(std::size_t index) const;
};

// Trial seeds are derive_seed(seed, trial index). Trials of a cell run in
// the OpenMP pool; results are stored by index so the output does not depend
// on scheduling.

struct Table2Options {
  int d = 15;
  std::vector<int> orders{3, 4, 5};
  int r = 0;  // 0 = max_rank(d-1, m)
  int trials = 5;
  std::uint64_t seed = 1;
};
/// values: decomp-err, vec-err-max.
std::vector<Cell> run_table2(const Table2Options& opts);

struct Table3Options {
  int d = 15;
  std::vector<int> orders{3, 4};
  std::vector<double> epsilons{0.1, 0.01, 0.001};
  int r = 0;
  int trials = 5;
  std::uint64_t seed = 1;
};
/// values: abs-err, rel-err.
std::vector<Cell> run_table3(const Table3Options& opts);

struct Table4Options {
  int d = 15;
  std::vector<int> orders{3};
  int r = 0;
  int trials = 5;
  long long n_samples = 100000;
  std::uint64_t seed = 1;
};
/// values: learn() accuracy, EM accuracy.
std::vector<Cell> run_table4(const Table4Options& opts);

enum class Format { md, csv, json };

Format parse_format(const std::string& name);

std::string render_table2(const std::vector<Cell>& cells, Format fmt);
std::string render_table3(const std::vector<Cell>& cells, Format fmt);
std::string render_table4(const std::vector<Cell>& cells, Format fmt);

}  // namespace momentmix::experiments
