// sgbn-lab: file-based workflows around the SGBN learners.
//
// Subcommands: standardize, fit-single, fit-kl, fit-mm, classify,
// fisher-export, sample, eval-recovery, eval-permutation.
//
// Exit codes: 0 success, 2 usage/input error, 3 algorithmic failure
// (non-DAG result, infeasible budgets, solver failure).
//
// Every command is deterministic given --seed and its inputs, and every
// output file gets a .manifest.json sidecar recording the resolved
// configuration and input digests.

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "sgbn/bench.hpp"
#include "sgbn/io.hpp"
#include "sgbn/kl_sgbn.hpp"
#include "sgbn/mm_sgbn.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using namespace sgbn;

std::string sidecar(const std::string& path, const std::string& tag) {
  const auto dot = path.rfind('.');
  const std::string stem = dot == std::string::npos ? path : path.substr(0, dot);
  return stem + "." + tag + ".json";
}

// Column moments must already be standardized; the learners depend on it.
Dataset load_standardized(const std::string& path) {
  Dataset d = load_csv(path);
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    const double mean = d.values.col(j).mean();
    const double sd = std::sqrt((d.values.col(j).array() - mean).square().sum() /
                                static_cast<double>(d.rows() - 1));
    if (std::abs(mean) > 1e-6 || std::abs(sd - 1.0) > 1e-6)
      throw std::invalid_argument(path + ": column " + std::to_string(j + 1) +
                                  " is not standardized; run `sgbn-lab standardize` first");
  }
  d.standardized = true;
  return d;
}

int worker_count(int jobs) {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SGBN_LAB_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = cap;
  }
  return std::max(1, std::min(n, jobs));
}

// deterministic fan-out: results land in slot `index` regardless of timing
template <typename Fn>
void parallel_for(int jobs, Fn&& fn) {
  const int workers = worker_count(jobs);
  if (workers <= 1) {
    for (int i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= jobs) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct CommonArgs {
  std::uint64_t seed = 0;
};

RunManifest make_manifest(const std::string& command, const CommonArgs& common,
                          const std::map<std::string, std::string>& config,
                          const std::vector<std::string>& inputs) {
  RunManifest m;
  m.command = command;
  m.config = config;
  m.seed = common.seed;
  m.version = kVersion;
  for (const auto& path : inputs) m.input_hashes[path] = file_digest(path);
  return m;
}

// ---------------------------------------------------------------------------
// standardize
// ---------------------------------------------------------------------------

int cmd_standardize(const std::string& in_path, const std::string& out_path,
                    const CommonArgs& common) {
  const Dataset d = standardize(load_csv(in_path));
  save_csv(d, out_path);
  save_manifest(make_manifest("standardize", common, {{"input", in_path}, {"output", out_path}},
                              {in_path}),
                sidecar(out_path, "manifest"));
  return 0;
}

// ---------------------------------------------------------------------------
// fit-single
// ---------------------------------------------------------------------------

struct FitSingleArgs {
  std::string data_path;
  std::string out_path = "model.json";
  double lambda1 = 0.0;  // <= 0: auto (0.1 * n)
  std::vector<double> schedule;
  double delta = 1.0;
  double tau = kDefaultEdgeThreshold;
  int max_outer = 50;
  double tol = 1e-6;
};

int cmd_fit_single(const FitSingleArgs& args, const CommonArgs& common) {
  const Dataset data = load_standardized(args.data_path);

  OrConfig config;
  config.lambda1 = args.lambda1;
  config.delta = args.delta;
  config.max_outer_iters = args.max_outer;
  config.tol = args.tol;
  if (!args.schedule.empty()) {
    config.lambda_dag_schedule = args.schedule;
    config.scale_schedule_to_bound = false;  // explicit schedules are used verbatim
  }

  const OrFitResult fit = fit_or_sgbn(data, config);

  ModelFile model{fit.theta, NoiseModel::unit(fit.theta.m), args.tau};
  save_model(model, args.out_path);
  save_certificate(fit.cert, sidecar(args.out_path, "cert"));
  write_text_file(sidecar(args.out_path, "report"), to_json(fit.report));

  std::map<std::string, std::string> cfg{
      {"data", args.data_path},
      {"lambda1", format_full(args.lambda1)},
      {"delta", format_full(args.delta)},
      {"tau", format_full(args.tau)},
      {"max_outer_iters", std::to_string(args.max_outer)},
      {"tol", format_full(args.tol)},
  };
  std::ostringstream sched;
  for (std::size_t i = 0; i < fit.schedule_used.size(); ++i) {
    if (i) sched << ',';
    sched << format_full(fit.schedule_used[i]);
  }
  cfg["lambda_dag_schedule"] = sched.str();
  save_manifest(make_manifest("fit-single", common, cfg, {args.data_path}),
                sidecar(args.out_path, "manifest"));

  std::cerr << "fit-single: " << fit.theta.m << " nodes, "
            << structure_of(fit.theta, args.tau).edge_count() << " edges at tau=" << args.tau
            << ", objective " << fit.report.final_objective << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// fit-kl / fit-mm
// ---------------------------------------------------------------------------

struct FitPairArgs {
  std::string data1_path, data2_path;
  std::string init1_path, init2_path;
  std::string out_path = "pair.json";
  double budget_slack = 0.01;
  int k_edges = 30;     // kl only
  double c = 1.0;       // kl only
  double lambda = -1;   // mm only; <=0 means 1/n
  int mm_k_edges = -1;  // mm only; <0 means all existing edges
  int max_outer = 20;
  double delta = 1.0;
  double tau = kDefaultEdgeThreshold;
};

ClassPairModel load_init_pair(const FitPairArgs& args, const Dataset& x1, const Dataset& x2,
                              double slack) {
  const ModelFile m1 = load_model(args.init1_path);
  const ModelFile m2 = load_model(args.init2_path);
  ClassPairModel pair;
  pair.theta1 = m1.theta;
  pair.sigma1 = m1.sigma;
  pair.theta2 = m2.theta;
  pair.sigma2 = m2.sigma;
  if (!is_dag(structure_of(pair.theta1, 0.0)) || !is_dag(structure_of(pair.theta2, 0.0)))
    throw SolverError("init models must be acyclic", {});
  pair.cert1 = solve_ordering(pair.theta1, 1.0).cert;
  pair.cert2 = solve_ordering(pair.theta2, 1.0).cert;
  pair.t1 = (1.0 + slack) * fitting_error(x1, pair.theta1);
  pair.t2 = (1.0 + slack) * fitting_error(x2, pair.theta2);
  return pair;
}

std::string selection_json(const EdgeSelection& sel) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < sel.components.size(); ++i) {
    const auto& c = sel.components[i];
    if (i) out << ",";
    out << "[" << c.cls << "," << c.a + 1 << "," << c.q + 1 << "]";
  }
  out << "]";
  return out.str();
}

int cmd_fit_kl(const FitPairArgs& args, const CommonArgs& common) {
  const Dataset x1 = load_standardized(args.data1_path);
  const Dataset x2 = load_standardized(args.data2_path);
  const ClassPairModel init = load_init_pair(args, x1, x2, args.budget_slack);

  KlConfig cfg;
  cfg.svm.c = args.c;
  cfg.t1 = init.t1;
  cfg.t2 = init.t2;
  cfg.k_edges = args.k_edges;
  cfg.max_outer_iters = args.max_outer;
  cfg.delta = args.delta;

  const KlResult result = kl_learn(x1, x2, init, cfg);
  save_pair(result.model, args.tau, args.out_path);
  write_text_file(sidecar(args.out_path, "report"), to_json(result.report));
  {
    std::ostringstream trace;
    trace << "{\n  \"j_trace\": [";
    for (std::size_t i = 0; i < result.j_trace.size(); ++i) {
      if (i) trace << ",";
      trace << format_full(result.j_trace[i]);
    }
    trace << "],\n  \"selected_edges\": " << selection_json(result.selection) << "\n}\n";
    write_text_file(sidecar(args.out_path, "trace"), trace.str());
  }

  save_manifest(make_manifest("fit-kl", common,
                              {{"data1", args.data1_path},
                               {"data2", args.data2_path},
                               {"init1", args.init1_path},
                               {"init2", args.init2_path},
                               {"budget_slack", format_full(args.budget_slack)},
                               {"k_edges", std::to_string(args.k_edges)},
                               {"c", format_full(args.c)},
                               {"t1", format_full(cfg.t1)},
                               {"t2", format_full(cfg.t2)},
                               {"max_outer_iters", std::to_string(args.max_outer)},
                               {"delta", format_full(args.delta)}},
                              {args.data1_path, args.data2_path, args.init1_path, args.init2_path}),
                sidecar(args.out_path, "manifest"));
  std::cerr << "fit-kl: " << result.j_trace.size() - 1 << " outer iterations, J "
            << result.j_trace.front() << " -> " << result.report.final_objective << "\n";
  return 0;
}

int cmd_fit_mm(const FitPairArgs& args, const CommonArgs& common) {
  const Dataset x1 = load_standardized(args.data1_path);
  const Dataset x2 = load_standardized(args.data2_path);
  const ClassPairModel init = load_init_pair(args, x1, x2, args.budget_slack);

  MmConfig cfg;
  cfg.lambda = args.lambda;
  cfg.t1 = init.t1;
  cfg.t2 = init.t2;
  cfg.k_edges = args.mm_k_edges;
  cfg.max_outer_iters = args.max_outer;
  cfg.delta = args.delta;

  const MmResult result = mm_learn(x1, x2, init, cfg);
  save_pair(result.model, args.tau, args.out_path);
  write_text_file(sidecar(args.out_path, "report"), to_json(result.report));
  {
    std::ostringstream trace;
    trace << "{\n  \"objective_trace\": [";
    for (std::size_t i = 0; i < result.objective_trace.size(); ++i) {
      if (i) trace << ",";
      trace << format_full(result.objective_trace[i]);
    }
    trace << "],\n  \"r\": " << format_full(result.margin.r) << ",\n  \"xi\": [";
    for (Eigen::Index i = 0; i < result.margin.xi.size(); ++i) {
      if (i) trace << ",";
      trace << format_full(result.margin.xi(i));
    }
    trace << "],\n  \"selected_edges\": " << selection_json(result.selection) << "\n}\n";
    write_text_file(sidecar(args.out_path, "trace"), trace.str());
  }

  save_manifest(make_manifest("fit-mm", common,
                              {{"data1", args.data1_path},
                               {"data2", args.data2_path},
                               {"init1", args.init1_path},
                               {"init2", args.init2_path},
                               {"budget_slack", format_full(args.budget_slack)},
                               {"k_edges", std::to_string(args.mm_k_edges)},
                               {"lambda", format_full(args.lambda)},
                               {"t1", format_full(cfg.t1)},
                               {"t2", format_full(cfg.t2)},
                               {"max_outer_iters", std::to_string(args.max_outer)},
                               {"delta", format_full(args.delta)}},
                              {args.data1_path, args.data2_path, args.init1_path, args.init2_path}),
                sidecar(args.out_path, "manifest"));
  std::cerr << "fit-mm: objective " << result.objective_trace.front() << " -> "
            << result.report.final_objective << ", r=" << result.margin.r << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

struct ClassifyArgs {
  std::string pair_path, data_path;
  std::string classifier = "sgbn";
  std::string out_path = "pred.csv";
  std::string train1_path, train2_path;  // svm only
  int k_components = 0;                  // svm only; 0 = full vectors
};

int cmd_classify(const ClassifyArgs& args, const CommonArgs& common) {
  if (args.classifier != "sgbn" && args.classifier != "svm")
    throw CLI::ValidationError("--classifier must be sgbn or svm");
  const ClassPairModel pair = load_pair(args.pair_path);
  const Dataset data = load_csv(args.data_path);
  if (data.cols() != pair.m())
    throw std::invalid_argument("dataset dimension does not match the model pair");

  std::vector<int> predictions(static_cast<std::size_t>(data.rows()));
  std::vector<std::string> inputs{args.pair_path, args.data_path};

  if (args.classifier == "sgbn") {
    for (Eigen::Index i = 0; i < data.rows(); ++i)
      predictions[static_cast<std::size_t>(i)] =
          sgbn_predict(data.values.row(i).transpose(), pair);
  } else {
    if (args.train1_path.empty() || args.train2_path.empty())
      throw CLI::ValidationError("--classifier svm needs --train1 and --train2");
    inputs.push_back(args.train1_path);
    inputs.push_back(args.train2_path);
    const Dataset t1 = load_csv(args.train1_path);
    const Dataset t2 = load_csv(args.train2_path);
    std::vector<FisherVector> vectors;
    std::vector<int> labels;
    SvmConfig svm_cfg;
    int pos = 0;
    for (const auto* ds : {&t1, &t2}) {
      const int label = ds == &t1 ? 1 : 2;
      for (Eigen::Index i = 0; i < ds->rows(); ++i) {
        FisherVector v = fisher_vector(ds->values.row(i).transpose(), pair.theta1, pair.sigma1,
                                       pair.theta2, pair.sigma2);
        attach_augmentation(v, pos++, label == 1 ? 1 : -1, svm_cfg);
        vectors.push_back(std::move(v));
        labels.push_back(label);
      }
    }
    std::vector<int> selected;
    if (args.k_components > 0) {
      const EdgeSelection sel =
          select_edges(vectors, labels, args.k_components, pair.theta1, pair.theta2);
      for (const auto& c : sel.components) selected.push_back(c.flat);
    }
    const SvmModel svm = svm_train(vectors, labels, svm_cfg, selected.empty() ? nullptr : &selected);
    for (Eigen::Index i = 0; i < data.rows(); ++i)
      predictions[static_cast<std::size_t>(i)] =
          svm_predict(data.values.row(i).transpose(), svm, pair);
  }

  {
    std::ofstream out(args.out_path);
    if (!out) throw std::invalid_argument("cannot open " + args.out_path);
    out << (data.has_labels() ? "index,prediction,label\n" : "index,prediction\n");
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      out << i + 1 << ',' << predictions[static_cast<std::size_t>(i)];
      if (data.has_labels()) out << ',' << data.labels[static_cast<std::size_t>(i)];
      out << '\n';
    }
  }

  std::ostringstream summary;
  summary << "{\n  \"samples\": " << data.rows();
  if (data.has_labels()) {
    int correct = 0;
    for (Eigen::Index i = 0; i < data.rows(); ++i)
      if (predictions[static_cast<std::size_t>(i)] == data.labels[static_cast<std::size_t>(i)])
        ++correct;
    summary << ",\n  \"correct\": " << correct << ",\n  \"accuracy\": "
            << format_full(static_cast<double>(correct) / static_cast<double>(data.rows()));
  }
  summary << ",\n  \"classifier\": \"" << args.classifier << "\"\n}\n";
  write_text_file(sidecar(args.out_path, "summary"), summary.str());

  save_manifest(make_manifest("classify", common,
                              {{"pair", args.pair_path},
                               {"data", args.data_path},
                               {"classifier", args.classifier},
                               {"k_components", std::to_string(args.k_components)}},
                              inputs),
                sidecar(args.out_path, "manifest"));
  return 0;
}

// ---------------------------------------------------------------------------
// fisher-export
// ---------------------------------------------------------------------------

int cmd_fisher_export(const std::string& pair_path, const std::string& data_path,
                      const std::string& out_path, const CommonArgs& common) {
  const ClassPairModel pair = load_pair(pair_path);
  const Dataset data = load_csv(data_path);
  if (data.cols() != pair.m())
    throw std::invalid_argument("dataset dimension does not match the model pair");
  const int m = pair.m();

  std::ofstream out(out_path);
  if (!out) throw std::invalid_argument("cannot open " + out_path);
  for (int cls = 1; cls <= 2; ++cls)
    for (int q = 0; q < m; ++q)
      for (int a = 0; a <= m; ++a) {
        if (cls > 1 || q > 0 || a > 0) out << ',';
        out << 'c' << cls << "_t" << a + 1 << '_' << q + 1;
      }
  out << '\n';
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    const FisherVector v = fisher_vector(data.values.row(i).transpose(), pair.theta1, pair.sigma1,
                                         pair.theta2, pair.sigma2);
    for (Eigen::Index c = 0; c < v.blocks.size(); ++c) {
      if (c) out << ',';
      out << format_full(v.blocks(c));
    }
    out << '\n';
  }
  out.close();

  save_manifest(make_manifest("fisher-export", common, {{"pair", pair_path}, {"data", data_path}},
                              {pair_path, data_path}),
                sidecar(out_path, "manifest"));
  return 0;
}

// ---------------------------------------------------------------------------
// sample / eval-recovery / eval-permutation
// ---------------------------------------------------------------------------

BenchmarkNetwork resolve_network(const std::string& network, int m, const std::string& structure) {
  if (!structure.empty()) return load_structure(structure);
  if (network == "chain") return builtin_chain(m);
  throw CLI::ValidationError("unknown --network '" + network + "' (built-in: chain)");
}

int cmd_sample(const std::string& network, int m, const std::string& structure, int n,
               const std::string& out_path, const CommonArgs& common) {
  const BenchmarkNetwork net = resolve_network(network, m, structure);
  const Dataset data = sample_data(net, n, common.seed);
  save_csv(data, out_path);
  std::map<std::string, std::string> cfg{{"network", net.name},
                                         {"m", std::to_string(net.m)},
                                         {"n", std::to_string(n)}};
  save_manifest(make_manifest("sample", common, cfg,
                              structure.empty() ? std::vector<std::string>{}
                                                : std::vector<std::string>{structure}),
                sidecar(out_path, "manifest"));
  return 0;
}

struct EvalRecoveryArgs {
  std::string network = "chain";
  int m = 7;
  std::string structure;
  int n = 1000;
  int sims = 50;
  double lambda1 = 0.0;
  double tau = kDefaultEdgeThreshold;
  std::string out_path = "recovery.csv";
};

int cmd_eval_recovery(const EvalRecoveryArgs& args, const CommonArgs& common) {
  const BenchmarkNetwork net = resolve_network(args.network, args.m, args.structure);
  Rng root(common.seed);

  std::vector<RecoveryMetrics> metrics(static_cast<std::size_t>(args.sims));
  parallel_for(args.sims, [&](int i) {
    const std::uint64_t sim_seed = root.split(static_cast<std::uint64_t>(i)).seed();
    const Dataset data = sample_data(net, args.n, sim_seed);
    OrConfig config;
    config.lambda1 = args.lambda1;
    const OrFitResult fit = fit_or_sgbn(data, config);
    metrics[static_cast<std::size_t>(i)] =
        recovery_metrics(structure_of(fit.theta, args.tau), net);
  });

  double total = 0, false_e = 0, missing = 0, pdag = 0;
  for (const auto& r : metrics) {
    total += r.total_errors;
    false_e += r.false_edges;
    missing += r.missing_edges;
    pdag += r.pdag_errors;
  }
  const double s = static_cast<double>(args.sims);

  std::ofstream out(args.out_path);
  if (!out) throw std::invalid_argument("cannot open " + args.out_path);
  out << "network,method,sims,mean_total_errors,mean_false_edges,mean_missing_edges,mean_pdag_errors\n";
  out << net.name << ",or-sgbn," << args.sims << ',' << format_full(total / s) << ','
      << format_full(false_e / s) << ',' << format_full(missing / s) << ','
      << format_full(pdag / s) << '\n';
  out.close();

  save_manifest(make_manifest("eval-recovery", common,
                              {{"network", net.name},
                               {"m", std::to_string(net.m)},
                               {"n", std::to_string(args.n)},
                               {"sims", std::to_string(args.sims)},
                               {"lambda1", format_full(args.lambda1)},
                               {"tau", format_full(args.tau)}},
                              args.structure.empty() ? std::vector<std::string>{}
                                                     : std::vector<std::string>{args.structure}),
                sidecar(args.out_path, "manifest"));
  std::cerr << "eval-recovery: mean total errors " << total / s << " over " << args.sims
            << " simulations\n";
  return 0;
}

struct EvalPermutationArgs {
  std::string data_path;
  int trials = 20;
  double lambda1 = 0.0;
  std::string out_path = "permutation.csv";
};

int cmd_eval_permutation(const EvalPermutationArgs& args, const CommonArgs& common) {
  const Dataset data = load_standardized(args.data_path);
  OrConfig config;
  config.lambda1 = args.lambda1;
  const PermutationInvarianceResult res =
      permutation_invariance_test(data, config, args.trials, common.seed);

  std::ofstream out(args.out_path);
  if (!out) throw std::invalid_argument("cannot open " + args.out_path);
  out << "method,trials,mean_distance,mean_correlation\n";
  out << "or-sgbn," << args.trials << ',' << format_full(res.mean_distance) << ','
      << format_full(res.mean_correlation) << '\n';
  out.close();

  save_manifest(make_manifest("eval-permutation", common,
                              {{"data", args.data_path},
                               {"trials", std::to_string(args.trials)},
                               {"lambda1", format_full(args.lambda1)}},
                              {args.data_path}),
                sidecar(args.out_path, "manifest"));
  std::cerr << "eval-permutation: mean distance " << res.mean_distance << ", mean correlation "
            << res.mean_correlation << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sgbn-lab: sparse Gaussian Bayesian network learners and classifiers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  CommonArgs common;
  app.add_option("--seed", common.seed, "seed for all randomness")->capture_default_str();

  // standardize
  std::string std_in, std_out = "standardized.csv";
  auto* c_std = app.add_subcommand("standardize", "center and scale a CSV dataset");
  c_std->add_option("input", std_in, "input CSV")->required();
  c_std->add_option("-o,--output", std_out, "output CSV")->capture_default_str();

  // fit-single
  FitSingleArgs fs;
  auto* c_fs = app.add_subcommand("fit-single", "learn one SGBN from one class of data");
  c_fs->add_option("data", fs.data_path, "standardized CSV")->required();
  c_fs->add_option("--lambda1", fs.lambda1, "sparsity weight (<= 0: 0.1 * n)")->capture_default_str();
  c_fs->add_option("--lambda-dag-schedule", fs.schedule,
                   "explicit increasing acyclicity weights (default: 1,10,100,1000 auto-scaled)")
      ->delimiter(',');
  c_fs->add_option("--delta", fs.delta, "ordering range")->capture_default_str();
  c_fs->add_option("--tau", fs.tau, "edge threshold recorded in the model")->capture_default_str();
  c_fs->add_option("--max-outer", fs.max_outer, "outer iteration cap")->capture_default_str();
  c_fs->add_option("--tol", fs.tol, "relative objective tolerance")->capture_default_str();
  c_fs->add_option("-o,--output", fs.out_path, "model JSON path")->capture_default_str();

  // fit-kl
  FitPairArgs fk;
  auto* c_fk = app.add_subcommand("fit-kl", "discriminative refinement via Fisher-kernel SVM");
  c_fk->add_option("data1", fk.data1_path, "class-1 standardized CSV")->required();
  c_fk->add_option("data2", fk.data2_path, "class-2 standardized CSV")->required();
  c_fk->add_option("--init1", fk.init1_path, "class-1 init model JSON")->required();
  c_fk->add_option("--init2", fk.init2_path, "class-2 init model JSON")->required();
  c_fk->add_option("--budget-slack", fk.budget_slack, "extra fitting error allowed (fraction)")
      ->capture_default_str();
  c_fk->add_option("--k-edges", fk.k_edges, "components optimized")->capture_default_str();
  c_fk->add_option("--c", fk.c, "SVM regularization C")->capture_default_str();
  c_fk->add_option("--max-outer", fk.max_outer, "outer iteration cap")->capture_default_str();
  c_fk->add_option("--delta", fk.delta, "ordering range")->capture_default_str();
  c_fk->add_option("-o,--output", fk.out_path, "pair JSON path")->capture_default_str();

  // fit-mm
  FitPairArgs fm;
  auto* c_fm = app.add_subcommand("fit-mm", "discriminative refinement via the likelihood margin");
  c_fm->add_option("data1", fm.data1_path, "class-1 standardized CSV")->required();
  c_fm->add_option("data2", fm.data2_path, "class-2 standardized CSV")->required();
  c_fm->add_option("--init1", fm.init1_path, "class-1 init model JSON")->required();
  c_fm->add_option("--init2", fm.init2_path, "class-2 init model JSON")->required();
  c_fm->add_option("--budget-slack", fm.budget_slack, "extra fitting error allowed (fraction)")
      ->capture_default_str();
  c_fm->add_option("--k-edges", fm.mm_k_edges, "components optimized (-1: all existing edges)")
      ->capture_default_str();
  c_fm->add_option("--lambda", fm.lambda, "slack weight (<=0: 1/n)")->capture_default_str();
  c_fm->add_option("--max-outer", fm.max_outer, "outer iteration cap")->capture_default_str();
  c_fm->add_option("--delta", fm.delta, "ordering range")->capture_default_str();
  c_fm->add_option("-o,--output", fm.out_path, "pair JSON path")->capture_default_str();

  // classify
  ClassifyArgs cl;
  auto* c_cl = app.add_subcommand("classify", "predict classes with a learned pair");
  c_cl->add_option("pair", cl.pair_path, "pair JSON")->required();
  c_cl->add_option("data", cl.data_path, "samples CSV (optional label column)")->required();
  c_cl->add_option("--classifier", cl.classifier, "sgbn or svm")->capture_default_str();
  c_cl->add_option("--train1", cl.train1_path, "class-1 training CSV (svm)");
  c_cl->add_option("--train2", cl.train2_path, "class-2 training CSV (svm)");
  c_cl->add_option("--k-components", cl.k_components, "top correlated components (svm; 0 = all)")
      ->capture_default_str();
  c_cl->add_option("-o,--output", cl.out_path, "predictions CSV")->capture_default_str();

  // fisher-export
  std::string fe_pair, fe_data, fe_out = "fisher.csv";
  auto* c_fe = app.add_subcommand("fisher-export", "write per-sample gradient features as CSV");
  c_fe->add_option("pair", fe_pair, "pair JSON")->required();
  c_fe->add_option("data", fe_data, "samples CSV")->required();
  c_fe->add_option("-o,--output", fe_out, "output CSV")->capture_default_str();

  // sample
  std::string sm_network = "chain", sm_structure;
  int sm_m = 7, sm_n = 1000;
  std::string sm_out = "data.csv";
  auto* c_sm = app.add_subcommand("sample", "simulate standardized data from a benchmark network");
  c_sm->add_option("--network", sm_network, "built-in network name")->capture_default_str();
  c_sm->add_option("--m", sm_m, "nodes for the built-in network")->capture_default_str();
  c_sm->add_option("--structure", sm_structure, "structure JSON file (overrides --network)");
  c_sm->add_option("--n", sm_n, "samples")->capture_default_str();
  c_sm->add_option("-o,--output", sm_out, "output CSV")->capture_default_str();

  // eval-recovery
  EvalRecoveryArgs er;
  auto* c_er = app.add_subcommand("eval-recovery", "structure recovery errors over simulations");
  c_er->add_option("--network", er.network, "built-in network name")->capture_default_str();
  c_er->add_option("--m", er.m, "nodes for the built-in network")->capture_default_str();
  c_er->add_option("--structure", er.structure, "structure JSON file (overrides --network)");
  c_er->add_option("--n", er.n, "samples per simulation")->capture_default_str();
  c_er->add_option("--sims", er.sims, "simulations")->capture_default_str();
  c_er->add_option("--lambda1", er.lambda1, "sparsity weight")->capture_default_str();
  c_er->add_option("--tau", er.tau, "edge threshold")->capture_default_str();
  c_er->add_option("-o,--output", er.out_path, "summary CSV")->capture_default_str();

  // eval-permutation
  EvalPermutationArgs ep;
  auto* c_ep = app.add_subcommand("eval-permutation", "feature-ordering invariance of the fit");
  c_ep->add_option("data", ep.data_path, "standardized CSV")->required();
  c_ep->add_option("--trials", ep.trials, "random permutations")->capture_default_str();
  c_ep->add_option("--lambda1", ep.lambda1, "sparsity weight")->capture_default_str();
  c_ep->add_option("-o,--output", ep.out_path, "summary CSV")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*c_std) return cmd_standardize(std_in, std_out, common);
    if (*c_fs) return cmd_fit_single(fs, common);
    if (*c_fk) return cmd_fit_kl(fk, common);
    if (*c_fm) return cmd_fit_mm(fm, common);
    if (*c_cl) return cmd_classify(cl, common);
    if (*c_fe) return cmd_fisher_export(fe_pair, fe_data, fe_out, common);
    if (*c_sm) return cmd_sample(sm_network, sm_m, sm_structure, sm_n, sm_out, common);
    if (*c_er) return cmd_eval_recovery(er, common);
    if (*c_ep) return cmd_eval_permutation(ep, common);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
