#include "momentmix/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

#include "json.hpp"
#include "momentmix/decomposition.hpp"
#include "momentmix/errors.hpp"
#include "momentmix/gmm.hpp"
#include "momentmix/io.hpp"
#include "momentmix/numerics.hpp"
#include "momentmix/parallel.hpp"

namespace momentmix::experiments {

namespace {

using Clock = std::chrono::steady_clock;

// Kernels run serially when the trial loop itself is spread over threads.
Exec inner_exec() { return max_threads() > 1 ? Exec::serial : Exec::parallel; }

void run_trials(Cell& cell, int trials, std::uint64_t base_seed,
                const std::function<std::vector<double>(std::uint64_t, Exec)>& body) {
  cell.trials.assign(static_cast<std::size_t>(std::max(trials, 0)), Trial{});
  const Exec exec = inner_exec();
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < trials; ++i) {
    Trial& t = cell.trials[static_cast<std::size_t>(i)];
    t.seed = derive_seed(base_seed, static_cast<std::uint64_t>(i));
    const auto t0 = Clock::now();
    try {
      t.values = body(t.seed, exec);
    } catch (const std::exception& e) {
      t.values.clear();
      t.error = e.what();
      if (t.error.empty()) t.error = "unknown failure";
    }
    t.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  }
}

int default_rank(int d, int m, int r) { return r > 0 ? r : max_rank(d - 1, m).r_max; }

std::uint64_t cell_seed(std::uint64_t seed, int d, int m, int r, int extra = 0) {
  std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(d));
  s = derive_seed(s, static_cast<std::uint64_t>(m));
  s = derive_seed(s, static_cast<std::uint64_t>(r));
  return derive_seed(s, static_cast<std::uint64_t>(extra));
}

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Column {
  std::string name;
  std::size_t index;
};

std::string render(const std::vector<Cell>& cells, Format fmt, bool with_eps, const std::vector<Column>& cols) {
  using nlohmann::json;
  if (fmt == Format::json) {
    json out = json::array();
    for (const auto& c : cells) {
      if (c.trials.empty()) continue;
      json row{{"d", c.d}, {"m", c.m}, {"r", c.r}, {"trials", c.trials.size()}, {"failures", c.failures()}};
      if (with_eps) row["epsilon"] = c.epsilon;
      for (const auto& col : cols) {
        auto s = summarize(c.column(col.index));
        if (s) row[col.name] = {{"min", s->min}, {"avg", s->avg}, {"max", s->max}, {"median", s->median}};
      }
      json trials = json::array();
      for (const auto& t : c.trials) {
        json tj{{"seed", t.seed}, {"seconds", t.seconds}};
        if (t.ok()) {
          for (const auto& col : cols) tj[col.name] = t.values[col.index];
        } else {
          tj["error"] = t.error;
        }
        trials.push_back(std::move(tj));
      }
      row["trial_results"] = std::move(trials);
      out.push_back(std::move(row));
    }
    return out.dump(2) + "\n";
  }

  std::vector<std::string> header{"d", "m", "r"};
  if (with_eps) header.push_back("eps");
  for (const auto& col : cols) {
    header.push_back(col.name + " min");
    header.push_back(col.name + " avg");
    header.push_back(col.name + " max");
  }
  header.push_back("trials");
  header.push_back("status");

  std::vector<std::vector<std::string>> rows;
  for (const auto& c : cells) {
    if (c.trials.empty()) continue;
    std::vector<std::string> row{std::to_string(c.d), std::to_string(c.m), std::to_string(c.r)};
    if (with_eps) row.push_back(fmt_num(c.epsilon));
    for (const auto& col : cols) {
      auto s = summarize(c.column(col.index));
      row.push_back(s ? fmt_num(s->min) : "-");
      row.push_back(s ? fmt_num(s->avg) : "-");
      row.push_back(s ? fmt_num(s->max) : "-");
    }
    row.push_back(std::to_string(c.trials.size()));
    const int f = c.failures();
    row.push_back(f == 0 ? "ok" : "FAILED " + std::to_string(f) + "/" + std::to_string(c.trials.size()));
    rows.push_back(std::move(row));
  }

  std::string out;
  auto line = [&](const std::vector<std::string>& fields) {
    if (fmt == Format::csv) {
      for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + fields[i];
    } else {
      out += "|";
      for (const auto& f : fields) out += " " + f + " |";
    }
    out += "\n";
  };
  line(header);
  if (fmt == Format::md) line(std::vector<std::string>(header.size(), "---"));
  for (const auto& row : rows) line(row);
  return out;
}

}  // namespace

std::optional<Stats> summarize(const std::vector<double>& values) {
  std::vector<double> v;
  for (double x : values)
    if (std::isfinite(x)) v.push_back(x);
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  Stats s;
  s.min = v.front();
  s.max = v.back();
  double sum = 0.0;
  for (double x : v) sum += x;
  s.avg = sum / static_cast<double>(v.size());
  const std::size_t h = v.size() / 2;
  s.median = v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
  return s;
}

int Cell::failures() const {
  return static_cast<int>(std::count_if(trials.begin(), trials.end(), [](const Trial& t) { return !t.ok(); }));
}

std::vector<double> Cell::column(std::size_t index) const {
  std::vector<double> out;
  for (const auto& t : trials)
    if (t.ok() && index < t.values.size()) out.push_back(t.values[index]);
  return out;
}

std::vector<Cell> run_table2(const Table2Options& opts) {
  std::vector<Cell> cells;
  for (int m : opts.orders) {
    Cell cell;
    cell.d = opts.d;
    cell.m = m;
    cell.r = default_rank(opts.d, m, opts.r);
    const auto params = choose_params(opts.d - 1, m, cell.r);
    run_trials(cell, opts.trials, cell_seed(opts.seed, cell.d, m, cell.r), [&](std::uint64_t seed, Exec exec) {
      const auto truth = random_components(cell.d, cell.r, seed);
      const auto t = from_components(truth, m, omega_keys(cell.d, m), exec);
      auto p = params;
      p.seed = derive_seed(seed, 1);
      const auto dec = decompose(t, p, exec);
      return std::vector<double>{dec.diagnostics.decomp_err, vec_err_max(truth, dec.components, m)};
    });
    cells.push_back(std::move(cell));
  }
  return cells;
}

std::vector<Cell> run_table3(const Table3Options& opts) {
  std::vector<Cell> cells;
  for (int m : opts.orders) {
    for (std::size_t e = 0; e < opts.epsilons.size(); ++e) {
      Cell cell;
      cell.d = opts.d;
      cell.m = m;
      cell.r = default_rank(opts.d, m, opts.r);
      cell.epsilon = opts.epsilons[e];
      const auto params = choose_params(opts.d - 1, m, cell.r);
      const auto base = cell_seed(opts.seed, cell.d, m, cell.r, static_cast<int>(e));
      run_trials(cell, opts.trials, base, [&](std::uint64_t seed, Exec exec) {
        const auto truth = random_components(cell.d, cell.r, seed);
        const auto exact = from_components(truth, m, omega_keys(cell.d, m), exec);
        const auto noisy = perturb(exact, cell.epsilon, derive_seed(seed, 1));
        auto p = params;
        p.seed = derive_seed(seed, 2);
        const auto dec = approximate(noisy, p, &exact, exec);
        return std::vector<double>{dec.diagnostics.abs_err.value_or(NAN), dec.diagnostics.rel_err.value_or(NAN)};
      });
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::vector<Cell> run_table4(const Table4Options& opts) {
  if (opts.n_samples < 1) throw Error(ErrorCode::InvalidArgument, "n-samples must be positive");
  std::vector<Cell> cells;
  for (int m : opts.orders) {
    Cell cell;
    cell.d = opts.d;
    cell.m = m;
    cell.r = default_rank(opts.d, m, opts.r);
    run_trials(cell, opts.trials, cell_seed(opts.seed, cell.d, m, cell.r), [&](std::uint64_t seed, Exec exec) {
      const auto model = random_gmm(cell.d, cell.r, seed);
      const auto samples = sample_gmm(model, opts.n_samples, derive_seed(seed, 1), exec);
      LearnOptions lo;
      lo.seed = derive_seed(seed, 2);
      const auto learned = learn(samples, cell.r, m, lo, exec);
      const double a3 = accuracy(classify(learned.model, samples.data, kClassifyVarianceFloor, exec), samples.labels,
                                 cell.r);
      EmOptions eo;
      eo.seed = derive_seed(seed, 3);
      const auto em = em_baseline(samples.data, cell.r, eo, exec);
      const double ae = accuracy(classify(em.model, samples.data, kClassifyVarianceFloor, exec), samples.labels,
                                 cell.r);
      return std::vector<double>{a3, ae};
    });
    cells.push_back(std::move(cell));
  }
  return cells;
}

Format parse_format(const std::string& name) {
  if (name == "md") return Format::md;
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw Error(ErrorCode::InvalidArgument, "unknown format " + name);
}

std::string render_table2(const std::vector<Cell>& cells, Format fmt) {
  return render(cells, fmt, false, {{"decomp-err", 0}, {"vec-err-max", 1}});
}

std::string render_table3(const std::vector<Cell>& cells, Format fmt) {
  return render(cells, fmt, true, {{"abs-err", 0}, {"rel-err", 1}});
}

std::string render_table4(const std::vector<Cell>& cells, Format fmt) {
  return render(cells, fmt, false, {{"learn-accuracy", 0}, {"em-accuracy", 1}});
}

}  // namespace momentmix::experiments
