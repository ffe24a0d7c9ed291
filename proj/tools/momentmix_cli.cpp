// momentmix command-line driver.
//
// Exit codes: 0 ok, 2 usage / infeasible shape, 3 missing tensor entry,
// 4 degenerate spectrum, 5 other numerical failure, 6 file or parse error.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "momentmix/decomposition.hpp"
#include "momentmix/errors.hpp"
#include "momentmix/experiments.hpp"
#include "momentmix/gmm.hpp"
#include "momentmix/io.hpp"
#include "momentmix/parallel.hpp"
#include "momentmix/tensor_store.hpp"

namespace mm = momentmix;

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

int exit_code_for(mm::ErrorCode code) {
  switch (code) {
    case mm::ErrorCode::InvalidArgument:
    case mm::ErrorCode::OrderExceedsDim:
    case mm::ErrorCode::RankTooLarge:
    case mm::ErrorCode::ShapeCondition:
    case mm::ErrorCode::OrderConflict:
    case mm::ErrorCode::Overflow:
      return 2;
    case mm::ErrorCode::MissingEntry:
    case mm::ErrorCode::KeyCollision:
      return 3;
    case mm::ErrorCode::DegenerateSpectrum:
      return 4;
    case mm::ErrorCode::Parse:
      return 6;
    default:
      return 5;
  }
}

struct Common {
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string format = "json";
};

// Effective configuration, one line on stderr.
class Config {
 public:
  Config(std::string command, const Common& common) : command_(std::move(command)) {
    add("seed", std::to_string(common.seed));
    add("out", common.out.empty() ? "-" : common.out);
    add("format", common.format);
    add("threads", std::to_string(mm::max_threads()));
  }
  template <typename T>
  Config& add(const std::string& key, const T& value) {
    std::ostringstream ss;
    ss << value;
    fields_ += " " + key + "=" + ss.str();
    return *this;
  }
  void print() const { std::cerr << "config: command=" << command_ << fields_ << "\n"; }

 private:
  std::string command_;
  std::string fields_;
};

// The main document goes to --out when given, else stdout; metrics then go
// to stdout or stderr respectively so the document stays parseable.
struct Output {
  const Common& common;

  void document(const std::string& text) const {
    if (common.out.empty()) {
      std::cout << text;
    } else {
      mm::io::write_file(common.out, text);
    }
  }
  std::ostream& metrics() const { return common.out.empty() ? std::cerr : std::cout; }
};

std::string num(double v) { return mm::io::format_double(v); }

std::vector<std::string> row_fields(const std::vector<std::pair<std::string, std::string>>& kv, bool keys) {
  std::vector<std::string> out;
  for (const auto& [k, v] : kv) out.push_back(keys ? k : v);
  return out;
}

// Single-row table in the requested format.
std::string single_row(const std::vector<std::pair<std::string, std::string>>& kv, const std::string& format) {
  std::string out;
  if (format == "json") {
    out = "{";
    for (std::size_t i = 0; i < kv.size(); ++i) {
      out += (i ? ", \"" : "\"") + kv[i].first + "\": " + kv[i].second;
    }
    return out + "}\n";
  }
  const auto head = row_fields(kv, true);
  const auto vals = row_fields(kv, false);
  auto line = [&](const std::vector<std::string>& f) {
    std::string l = format == "md" ? "|" : "";
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (format == "md") {
        l += " " + f[i] + " |";
      } else {
        l += (i ? "," : "") + f[i];
      }
    }
    return l + "\n";
  };
  out += line(head);
  if (format == "md") out += line(std::vector<std::string>(head.size(), "---"));
  out += line(vals);
  return out;
}

mm::DecompositionParams resolve_params(int d, int m, int r, int p, int k, std::uint64_t seed) {
  mm::DecompositionParams params;
  if (p > 0 || k > 0) {
    if (p <= 0 || k <= 0) throw mm::Error(mm::ErrorCode::InvalidArgument, "--p and --k must be given together");
    params.r = r;
    params.p = p;
    params.k = k;
    mm::validate_params(d - 1, m, params);
  } else {
    params = mm::choose_params(d - 1, m, r);
  }
  params.seed = seed;
  return params;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw mm::Error(mm::ErrorCode::InvalidArgument, "bad integer list \"" + text + "\"");
    }
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw mm::Error(mm::ErrorCode::InvalidArgument, "bad number list \"" + text + "\"");
    }
  }
  return out;
}

mm::SampleSet read_samples(const std::string& path, const std::string& labels_path) {
  mm::SampleSet s;
  s.data = mm::io::samples_from_csv(mm::io::read_file(path));
  if (!labels_path.empty()) {
    s.labels = mm::io::labels_from_csv(mm::io::read_file(labels_path));
    if (static_cast<Eigen::Index>(s.labels.size()) != s.data.rows()) {
      throw mm::Error(mm::ErrorCode::Parse, "label count differs from sample count");
    }
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  mm::configure_threads_from_env();

  CLI::App app{"momentmix: incomplete symmetric tensor decomposition and diagonal GMM learning"};
  app.require_subcommand(1);
  Common common;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "random seed")->capture_default_str();
    sub->add_option("--out", common.out, "output path (default stdout)");
    sub->add_option("--format", common.format, "json|csv|md")
        ->check(CLI::IsMember({"json", "csv", "md"}))
        ->capture_default_str();
  };

  int d = 0, m = 0, r = 0, p = 0, k = 0, starts = 0, max_iters = 100, trials = 5;
  long long n_samples = 100000;
  double epsilon = 0.0, reg = 1e-3;
  std::string in, truth_path, model_path, samples_path, labels_path, labels_out, keys_kind = "learning";
  std::string experiment_name, orders_text, epsilons_text;

  auto* maxrank = app.add_subcommand("maxrank", "largest rank for dimension d and order m");
  maxrank->add_option("--d", d, "dimension (labels 0..d-1)")->required();
  maxrank->add_option("--m", m, "tensor order")->required();
  add_common(maxrank);

  auto* params_cmd = app.add_subcommand("params", "choose (p, k) for a rank");
  params_cmd->add_option("--d", d)->required();
  params_cmd->add_option("--m", m)->required();
  params_cmd->add_option("--r", r)->required();
  params_cmd->add_option("--p", p);
  params_cmd->add_option("--k", k);
  add_common(params_cmd);

  auto* gen_tensor = app.add_subcommand("gen-tensor", "random rank-r incomplete tensor on Omega_m");
  gen_tensor->add_option("--d", d)->required();
  gen_tensor->add_option("--m", m)->required();
  gen_tensor->add_option("--r", r)->required();
  gen_tensor->add_option("--epsilon", epsilon, "Omega-norm of added Gaussian noise");
  gen_tensor->add_option("--truth-out", truth_path, "write the planted components here");
  add_common(gen_tensor);

  auto* decompose_cmd = app.add_subcommand("decompose", "exact decomposition of a tensor file");
  auto* approximate_cmd = app.add_subcommand("approximate", "low-rank approximation of a noisy tensor file");
  for (auto* sub : {decompose_cmd, approximate_cmd}) {
    sub->add_option("--in", in, "tensor JSON")->required();
    sub->add_option("--r", r)->required();
    sub->add_option("--p", p);
    sub->add_option("--k", k);
    sub->add_option("--truth", truth_path, "planted components JSON");
    add_common(sub);
  }
  approximate_cmd->add_option("--epsilon", epsilon, "perturb the input first; the clean input then serves as truth");
  approximate_cmd->add_option("--starts", starts, "cyclic label shifts tried (0 = all)");

  auto* gen_gmm = app.add_subcommand("gen-gmm", "random diagonal Gaussian mixture");
  gen_gmm->add_option("--d", d)->required();
  gen_gmm->add_option("--r", r)->required();
  add_common(gen_gmm);

  auto* sample = app.add_subcommand("sample", "draw samples from a model");
  sample->add_option("--model", model_path)->required();
  sample->add_option("--n", n_samples)->required();
  sample->add_option("--labels-out", labels_out, "write true component labels here");
  add_common(sample);

  auto* moments = app.add_subcommand("moments", "sample moments");
  moments->add_option("--samples", samples_path)->required();
  moments->add_option("--m", m)->required();
  moments->add_option("--keys", keys_kind, "omega|learning")
      ->check(CLI::IsMember({"omega", "learning"}))
      ->capture_default_str();
  add_common(moments);

  auto* learn_cmd = app.add_subcommand("learn", "learn a mixture from samples");
  learn_cmd->add_option("--samples", samples_path)->required();
  learn_cmd->add_option("--r", r)->required();
  learn_cmd->add_option("--m", m)->required();
  learn_cmd->add_option("--labels", labels_path, "true labels; prints accuracy");
  add_common(learn_cmd);

  auto* em_cmd = app.add_subcommand("em", "EM baseline");
  em_cmd->add_option("--samples", samples_path)->required();
  em_cmd->add_option("--r", r)->required();
  em_cmd->add_option("--max-iters", max_iters)->capture_default_str();
  em_cmd->add_option("--reg", reg, "added to every variance")->capture_default_str();
  em_cmd->add_option("--labels", labels_path, "true labels; prints accuracy");
  add_common(em_cmd);

  auto* evaluate = app.add_subcommand("evaluate", "accuracy and log-likelihood of a model");
  evaluate->add_option("--model", model_path)->required();
  evaluate->add_option("--samples", samples_path)->required();
  evaluate->add_option("--labels", labels_path);
  evaluate->add_option("--truth", truth_path, "true model JSON; prints parameter error");
  add_common(evaluate);

  auto* experiment = app.add_subcommand("experiment", "rerun an experiment table");
  experiment->add_option("name", experiment_name, "table2|table3|table4")
      ->required()
      ->check(CLI::IsMember({"table2", "table3", "table4"}));
  experiment->add_option("--d", d, "dimension (default 15)");
  experiment->add_option("--m", orders_text, "single order");
  experiment->add_option("--orders", orders_text, "comma-separated orders");
  experiment->add_option("--r", r, "rank (default max_rank)");
  experiment->add_option("--trials", trials)->capture_default_str();
  experiment->add_option("--epsilons", epsilons_text, "table3 noise levels");
  experiment->add_option("--n-samples", n_samples)->capture_default_str();
  add_common(experiment);
  experiment->get_option("--format")->default_str("md");

  bool format_given = false;
  try {
    app.parse(argc, argv);
    format_given = app.get_subcommands().front()->count("--format") > 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  CLI::App* sub = app.get_subcommands().front();
  const std::string cmd = sub->get_name();
  if (cmd == "experiment" && !format_given) common.format = "md";
  Output out{common};
  Config config(cmd, common);

  try {
    if (sub == maxrank) {
      config.add("d", d).add("m", m).print();
      if (d < 1) throw mm::Error(mm::ErrorCode::InvalidArgument, "d must be positive");
      const auto bound = mm::max_rank(d - 1, m);
      out.document(single_row({{"d", std::to_string(d)},
                               {"m", std::to_string(m)},
                               {"r_max", std::to_string(bound.r_max)},
                               {"p_star", std::to_string(bound.p_star)},
                               {"k_star", std::to_string(bound.k_star)},
                               {"guaranteed", bound.guaranteed ? "true" : "false"}},
                              common.format));
    } else if (sub == params_cmd) {
      config.add("d", d).add("m", m).add("r", r).add("p", p).add("k", k).print();
      const auto chosen = resolve_params(d, m, r, p, k, common.seed);
      out.document(single_row({{"d", std::to_string(d)},
                               {"m", std::to_string(m)},
                               {"r", std::to_string(r)},
                               {"p", std::to_string(chosen.p)},
                               {"k", std::to_string(chosen.k)}},
                              common.format));
    } else if (sub == gen_tensor) {
      config.add("d", d).add("m", m).add("r", r).add("epsilon", epsilon).print();
      if (d < 1 || r < 1) throw mm::Error(mm::ErrorCode::InvalidArgument, "d and r must be positive");
      const auto comps = mm::random_components(d, r, mm::derive_seed(common.seed, 0));
      auto t = mm::from_components(comps, m, mm::omega_keys(d, m));
      if (epsilon > 0.0) t = mm::perturb(t, epsilon, mm::derive_seed(common.seed, 1));
      out.document(mm::io::tensor_to_json(t));
      if (!truth_path.empty()) mm::io::write_file(truth_path, mm::io::components_to_json(comps, m));
    } else if (sub == decompose_cmd || sub == approximate_cmd) {
      const bool exact = sub == decompose_cmd;
      config.add("in", in).add("r", r).add("p", p).add("k", k).add("truth", truth_path.empty() ? "-" : truth_path);
      if (!exact) config.add("epsilon", epsilon).add("starts", starts);
      config.print();
      const auto input = mm::io::tensor_from_json(mm::io::read_file(in));
      auto params = resolve_params(input.dim(), input.order(), r, p, k, common.seed);
      params.starts = starts;

      std::optional<mm::ComponentList> truth_comps;
      if (!truth_path.empty()) {
        int order = 0;
        truth_comps = mm::io::components_from_json(mm::io::read_file(truth_path), &order);
        if (order != input.order() || truth_comps->dim() != input.dim()) {
          throw mm::Error(mm::ErrorCode::Parse, "truth components do not match the tensor shape");
        }
      }

      mm::Decomposition dec;
      if (exact) {
        dec = mm::decompose(input, params);
      } else {
        std::optional<mm::IncompleteSymmetricTensor> clean;
        if (truth_comps) {
          clean = mm::from_components(*truth_comps, input.order(), input.keys());
        } else if (epsilon > 0.0) {
          clean = input;
        }
        const auto noisy = epsilon > 0.0 ? mm::perturb(input, epsilon, mm::derive_seed(common.seed, 1)) : input;
        dec = mm::approximate(noisy, params, clean ? &*clean : nullptr);
      }
      out.document(mm::io::decomposition_to_json(dec));
      auto& os = out.metrics();
      os << "decomp-err " << num(dec.diagnostics.decomp_err) << "\n";
      if (truth_comps && truth_comps->rank() == dec.rank()) {
        os << "vec-err-max " << num(mm::vec_err_max(*truth_comps, dec.components, dec.m)) << "\n";
      }
      if (dec.diagnostics.abs_err) os << "abs-err " << num(*dec.diagnostics.abs_err) << "\n";
      if (dec.diagnostics.rel_err) os << "rel-err " << num(*dec.diagnostics.rel_err) << "\n";
    } else if (sub == gen_gmm) {
      config.add("d", d).add("r", r).print();
      const auto model = mm::random_gmm(d, r, common.seed);
      out.document(mm::io::model_to_json(model));
    } else if (sub == sample) {
      config.add("model", model_path).add("n", n_samples).add("labels_out", labels_out.empty() ? "-" : labels_out)
          .print();
      const auto model = mm::io::model_from_json(mm::io::read_file(model_path));
      if (n_samples < 1) throw mm::Error(mm::ErrorCode::InvalidArgument, "--n must be positive");
      const auto s = mm::sample_gmm(model, n_samples, common.seed);
      out.document(mm::io::samples_to_csv(s.data));
      if (!labels_out.empty()) mm::io::write_file(labels_out, mm::io::labels_to_csv(s.labels));
    } else if (sub == moments) {
      config.add("samples", samples_path).add("m", m).add("keys", keys_kind).print();
      const auto s = read_samples(samples_path, "");
      const int dim = static_cast<int>(s.data.cols());
      auto keys = keys_kind == "omega" ? mm::omega_keys(dim, m) : mm::learning_keys(dim, m);
      out.document(mm::io::moments_to_json(mm::sample_moments(s.data, m, std::move(keys))));
    } else if (sub == learn_cmd) {
      config.add("samples", samples_path).add("r", r).add("m", m).print();
      const auto s = read_samples(samples_path, labels_path);
      mm::LearnOptions opts;
      opts.seed = common.seed;
      const auto report = mm::learn(s, r, m, opts);
      out.document(mm::io::model_to_json(report.model));
      auto& os = out.metrics();
      os << "t " << report.t << "\n";
      os << "tensor-residual " << num(report.decomposition.diagnostics.post_refine_residual) << "\n";
      os << "moment-cost " << num(report.refine_final_cost) << "\n";
      if (!s.labels.empty()) os << "accuracy " << num(mm::accuracy(mm::classify(report.model, s.data), s.labels, r)) << "\n";
    } else if (sub == em_cmd) {
      config.add("samples", samples_path).add("r", r).add("max_iters", max_iters).add("reg", reg).print();
      const auto s = read_samples(samples_path, labels_path);
      mm::EmOptions opts;
      opts.seed = common.seed;
      opts.max_iters = max_iters;
      opts.reg_value = reg;
      const auto report = mm::em_baseline(s.data, r, opts);
      out.document(mm::io::model_to_json(report.model));
      auto& os = out.metrics();
      os << "iterations " << report.iterations << "\n";
      if (!report.log_likelihood.empty()) os << "log-likelihood " << num(report.log_likelihood.back()) << "\n";
      if (!s.labels.empty()) os << "accuracy " << num(mm::accuracy(mm::classify(report.model, s.data), s.labels, r)) << "\n";
    } else if (sub == evaluate) {
      config.add("model", model_path).add("samples", samples_path).add("labels", labels_path.empty() ? "-" : labels_path)
          .add("truth", truth_path.empty() ? "-" : truth_path)
          .print();
      const auto model = mm::io::model_from_json(mm::io::read_file(model_path));
      const auto s = read_samples(samples_path, labels_path);
      if (s.data.cols() != model.dim()) throw mm::Error(mm::ErrorCode::InvalidArgument, "model and samples differ in d");
      std::vector<std::pair<std::string, std::string>> kv;
      kv.emplace_back("log_likelihood", num(mm::average_log_likelihood(model, s.data, mm::kClassifyVarianceFloor)));
      if (!s.labels.empty()) kv.emplace_back("accuracy", num(mm::accuracy(mm::classify(model, s.data), s.labels, model.rank())));
      if (!truth_path.empty()) {
        const auto truth = mm::io::model_from_json(mm::io::read_file(truth_path));
        kv.emplace_back("parameter_error", num(mm::parameter_error(truth, model)));
      }
      out.document(single_row(kv, common.format));
    } else if (sub == experiment) {
      namespace ex = mm::experiments;
      const auto fmt = ex::parse_format(common.format);
      const int dim = d > 0 ? d : 15;
      config.add("name", experiment_name).add("d", dim).add("orders", orders_text.empty() ? "default" : orders_text)
          .add("r", r).add("trials", trials);
      if (trials < 0) throw mm::Error(mm::ErrorCode::InvalidArgument, "--trials must be nonnegative");
      std::string table;
      if (experiment_name == "table2") {
        ex::Table2Options o;
        o.d = dim;
        o.r = r;
        o.trials = trials;
        o.seed = common.seed;
        if (!orders_text.empty()) o.orders = parse_int_list(orders_text);
        config.print();
        table = ex::render_table2(ex::run_table2(o), fmt);
      } else if (experiment_name == "table3") {
        ex::Table3Options o;
        o.d = dim;
        o.r = r;
        o.trials = trials;
        o.seed = common.seed;
        if (!orders_text.empty()) o.orders = parse_int_list(orders_text);
        if (!epsilons_text.empty()) o.epsilons = parse_double_list(epsilons_text);
        config.add("epsilons", epsilons_text.empty() ? "default" : epsilons_text).print();
        table = ex::render_table3(ex::run_table3(o), fmt);
      } else {
        ex::Table4Options o;
        o.d = dim;
        o.r = r;
        o.trials = trials;
        o.n_samples = n_samples;
        o.seed = common.seed;
        if (!orders_text.empty()) o.orders = parse_int_list(orders_text);
        config.add("n_samples", n_samples).print();
        table = ex::render_table4(ex::run_table4(o), fmt);
      }
      out.document(table);
    }
  } catch (const mm::Error& e) {
    std::cerr << "error [" << mm::to_string(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  }
  return 0;
}
