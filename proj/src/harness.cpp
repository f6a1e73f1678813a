#include "decopt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "decopt/dual_algos.hpp"
#include "decopt/kernels.hpp"
#include "decopt/primal_algos.hpp"
#include "decopt/rng.hpp"
#include "decopt/sliding.hpp"

namespace decopt::harness {

using nlohmann::json;

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

template <typename T>
T field_or(const json& obj, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("field '" + key + "' has the wrong type");
  }
}

problems::ProblemInstance build_problem(const ProblemSpec& spec) {
  if (spec.m < 1 || spec.n < 1)
    throw ConfigError("problem.m and problem.n must be positive");
  if (spec.family == "quadratic")
    return problems::make_quadratic(spec.m, spec.n, spec.kappa, spec.seed);
  if (spec.family == "logistic")
    return problems::make_logistic(spec.m, spec.n, spec.samples_per_node,
                                   spec.reg_mu, spec.seed);
  if (spec.family == "l1_regression")
    return problems::make_nonsmooth(spec.m, spec.n,
                                    problems::NonsmoothKind::l1_regression,
                                    spec.seed, spec.reg_mu);
  if (spec.family == "hinge")
    return problems::make_nonsmooth(spec.m, spec.n,
                                    problems::NonsmoothKind::hinge, spec.seed,
                                    spec.reg_mu);
  throw ConfigError("problem.family '" + spec.family + "' is not known");
}

struct GraphBundle {
  graph::Graph base;
  Eigen::MatrixXd laplacian;
  Eigen::MatrixXd metropolis;
  std::optional<graph::GraphSequence> sequence;
};

GraphBundle build_graph(const GraphSpec& spec, int budget) {
  if (spec.m < 2) throw ConfigError("graph.m must be at least 2");
  GraphBundle bundle;
  bundle.base = graph::generate_graph(graph::family_from_string(spec.family),
                                      spec.m, spec.seed);
  bundle.laplacian = graph::build_laplacian(bundle.base);
  bundle.metropolis = graph::metropolis_mixing(bundle.base);
  if (spec.drop_prob > 0.0) {
    const int rounds = spec.rounds > 0 ? spec.rounds : std::max(2 * budget, 16);
    bundle.sequence = graph::generate_time_varying(
        bundle.base, rounds, spec.drop_prob, spec.window_b, spec.seed + 1);
  }
  return bundle;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << content;
}

std::string primal_trace_csv(const primal::RunRecord& record) {
  std::ostringstream os;
  primal::write_record_csv(record, os);
  return os.str();
}

std::string sliding_trace_csv(const sliding::SlidingRecord& record,
                              std::optional<double> reference) {
  std::ostringstream os;
  os << "schema_version,1\n";
  os << "iter,comm_rounds,grad_calls,f_residual,consensus_error,zo_calls,"
        "smooth_grad_calls\n";
  for (size_t i = 0; i < record.objective.size(); ++i) {
    const double resid =
        reference ? record.objective[i] - *reference : record.objective[i];
    os << (i + 1) << ',' << record.comm_rounds[i] << ','
       << record.nonsmooth_calls[i] << ',' << format_double(resid) << ",0,"
       << record.zo_calls[i] << ',' << record.smooth_calls[i] << '\n';
  }
  return os.str();
}

std::string dual_trace_csv(const dual::DualRunRecord& record) {
  std::ostringstream os;
  dual::write_dual_record_csv(record, os);
  return os.str();
}

consensus::NodeState initial_state(int m, int n, std::uint64_t seed) {
  Rng rng(seed);
  consensus::NodeState state(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) state(i, j) = rng.normal();
  return state;
}

}  // namespace

const std::vector<std::string>& known_algorithms() {
  static const std::vector<std::string> ids = {
      "dgd",     "extra",          "acc_dngd",
      "diging",  "dagd_consensus", "sliding",
      "spdstm",  "sstm_sc",        "consensus",
      "accelerated_consensus"};
  return ids;
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  cfg.seed = field_or<std::uint64_t>(root, "seed", 0);

  const json problem = root.value("problem", json::object());
  cfg.problem.family = field_or<std::string>(problem, "family", "quadratic");
  cfg.problem.m = field_or<int>(problem, "m", 4);
  cfg.problem.n = field_or<int>(problem, "n", 8);
  cfg.problem.kappa = field_or<double>(problem, "kappa", 10.0);
  cfg.problem.samples_per_node =
      field_or<int>(problem, "samples_per_node", 16);
  cfg.problem.reg_mu = field_or<double>(problem, "reg_mu", 0.0);
  cfg.problem.seed = field_or<std::uint64_t>(problem, "seed", 1);

  const json graph = root.value("graph", json::object());
  cfg.graph.family = field_or<std::string>(graph, "family", "path");
  cfg.graph.m = field_or<int>(graph, "m", cfg.problem.m);
  cfg.graph.drop_prob = field_or<double>(graph, "drop_prob", 0.0);
  cfg.graph.window_b = field_or<int>(graph, "window_b", 1);
  cfg.graph.rounds = field_or<int>(graph, "rounds", 0);
  cfg.graph.seed = field_or<std::uint64_t>(graph, "seed", 2);

  const json algo = root.value("algorithm", json::object());
  cfg.algorithm.id = field_or<std::string>(algo, "id", "extra");
  cfg.algorithm.budget = field_or<int>(algo, "budget", 1000);
  cfg.algorithm.step_size = field_or<double>(algo, "step_size", 0.0);
  cfg.algorithm.eta = field_or<double>(algo, "eta", 0.0);
  cfg.algorithm.consensus_t = field_or<int>(algo, "consensus_t", 0);
  cfg.algorithm.penalty_eps = field_or<double>(algo, "penalty_eps", 0.0);
  cfg.algorithm.c_constant = field_or<double>(algo, "c_constant", 0.1);
  cfg.algorithm.inner_cap = field_or<long>(algo, "inner_cap", 100000);
  cfg.algorithm.lifted = field_or<bool>(algo, "lifted", false);
  cfg.algorithm.sigma = field_or<double>(algo, "sigma", 0.0);
  cfg.algorithm.box_radius = field_or<double>(algo, "box_radius", 10.0);

  const json targets = root.value("targets", json::object());
  cfg.target_eps = field_or<double>(targets, "eps", 1e-6);
  if (targets.contains("reference_value"))
    cfg.reference_value = targets.at("reference_value").get<double>();

  // validation
  if (cfg.problem.m != cfg.graph.m)
    throw ConfigError("problem.m (" + std::to_string(cfg.problem.m) +
                      ") and graph.m (" + std::to_string(cfg.graph.m) +
                      ") must agree");
  if (cfg.target_eps <= 0.0) throw ConfigError("targets.eps must be positive");
  if (cfg.algorithm.budget < 1)
    throw ConfigError("algorithm.budget must be at least 1");
  const auto& ids = known_algorithms();
  if (std::find(ids.begin(), ids.end(), cfg.algorithm.id) == ids.end())
    throw ConfigError("algorithm.id '" + cfg.algorithm.id + "' is not known");
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read config file: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return from_json_text(ss.str());
}

std::string ExperimentConfig::to_json_text() const {
  json root;
  root["seed"] = seed;
  root["problem"] = {{"family", problem.family},
                     {"m", problem.m},
                     {"n", problem.n},
                     {"kappa", problem.kappa},
                     {"samples_per_node", problem.samples_per_node},
                     {"reg_mu", problem.reg_mu},
                     {"seed", problem.seed}};
  root["graph"] = {{"family", graph.family},
                   {"m", graph.m},
                   {"drop_prob", graph.drop_prob},
                   {"window_b", graph.window_b},
                   {"rounds", graph.rounds},
                   {"seed", graph.seed}};
  root["algorithm"] = {{"id", algorithm.id},
                       {"budget", algorithm.budget},
                       {"step_size", algorithm.step_size},
                       {"eta", algorithm.eta},
                       {"consensus_t", algorithm.consensus_t},
                       {"penalty_eps", algorithm.penalty_eps},
                       {"c_constant", algorithm.c_constant},
                       {"inner_cap", algorithm.inner_cap},
                       {"lifted", algorithm.lifted},
                       {"sigma", algorithm.sigma},
                       {"box_radius", algorithm.box_radius}};
  root["targets"]["eps"] = target_eps;
  if (reference_value) root["targets"]["reference_value"] = *reference_value;
  return root.dump(2);
}

RunOutcome run_experiment(const ExperimentConfig& config,
                          const std::string& out_dir, bool quiet) {
  const SeedSequence seeds(config.seed);
  const auto& algo = config.algorithm;
  RunOutcome outcome;
  json summary;
  summary["schema_version"] = 1;
  summary["algorithm"] = algo.id;
  summary["seed"] = config.seed;

  GraphBundle net = build_graph(config.graph, algo.budget);
  const auto lap_spec =
      graph::spectral_summary(net.laplacian, graph::MatrixKind::laplacian);
  summary["graph"] = {{"family", config.graph.family},
                      {"m", config.graph.m},
                      {"chi", lap_spec.chi}};

  if (algo.id == "consensus" || algo.id == "accelerated_consensus") {
    const auto state =
        initial_state(config.graph.m, config.problem.n, seeds.substream_seed(11));
    int rounds = -1;
    std::string trace;
    if (algo.id == "consensus") {
      consensus::MixingSource source(net.metropolis);
      auto [final_state, report] =
          consensus::run_consensus(source, state, algo.budget);
      rounds = consensus::rounds_to_relative_error(source, state,
                                                   config.target_eps,
                                                   algo.budget);
      std::ostringstream os;
      consensus::write_report_csv(report, os);
      trace = os.str();
      outcome.final_consensus_error = report.final_error;
      outcome.total_comm_rounds = report.comm_rounds;
    } else {
      rounds = consensus::accelerated_rounds_to_relative_error(
          net.laplacian, state, config.target_eps, algo.budget);
      std::uint64_t comm = 0;
      const auto final_state = consensus::accelerated_consensus(
          net.laplacian, state, rounds > 0 ? rounds : algo.budget, &comm);
      outcome.final_consensus_error = consensus::consensus_error(final_state);
      outcome.total_comm_rounds = comm;
      std::ostringstream os;
      os << "schema_version,1\nstep,error,ratio\n";
      trace = os.str();
    }
    outcome.rounds_to_target = rounds;
    outcome.iters_to_target = rounds;
    outcome.trace_csv = trace;
    summary["rounds_to_target"] = rounds;
    summary["final_consensus_error"] = outcome.final_consensus_error;
    summary["total_comm_rounds"] = outcome.total_comm_rounds;
    outcome.summary_json = summary.dump(2);
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      write_file(out_dir + "/trace.csv", outcome.trace_csv);
      write_file(out_dir + "/summary.json", outcome.summary_json);
    }
    if (!quiet) std::fputs((outcome.summary_json + "\n").c_str(), stdout);
    return outcome;
  }

  problems::ProblemInstance problem = build_problem(config.problem);
  const auto constants = problems::compute_constants(problem);

  if (algo.id == "sliding") {
    const double pen_eps =
        algo.penalty_eps > 0.0 ? algo.penalty_eps : config.target_eps;
    const double r_y = sliding::default_penalty_radius(
        problem.lipschitz_m, problem.node_count, lap_spec.lambda_min_plus);
    const auto penalty =
        sliding::make_penalty(problem, net.laplacian, r_y, pen_eps);
    const auto smooth = penalty.smooth_part();
    const auto nonsmooth = penalty.nonsmooth_part();
    // bounded box around the start keeps the sliding theory applicable
    problems::Domain box;
    box.kind = problems::DomainKind::box;
    box.box_lo = -algo.box_radius;
    box.box_hi = algo.box_radius;
    const auto geometry = sliding::Geometry::euclidean(
        box, penalty.total_dim());

    sliding::SlidingSchedule schedule;
    schedule.smooth_l = smooth.lipschitz;
    schedule.second_moment = nonsmooth.bound_m * nonsmooth.bound_m +
                             algo.sigma * algo.sigma;
    schedule.d_tilde = 0.75 * geometry.diameter_v() * geometry.diameter_v();
    schedule.c_constant = algo.c_constant;
    schedule.inner_cap = algo.inner_cap;
    // outer budget from the target accuracy
    schedule.outer_budget = std::max(
        1, (int)std::ceil(std::sqrt(12.0 * smooth.lipschitz *
                                    geometry.diameter_v() *
                                    geometry.diameter_v() /
                                    config.target_eps)));
    schedule.outer_budget = std::min(schedule.outer_budget, algo.budget);

    Eigen::VectorXd start = Eigen::VectorXd::Zero(penalty.total_dim());
    sliding::SlidingRecord record;
    if (algo.sigma > 0.0) {
      Rng rng(seeds.substream_seed(21));
      sliding::NonsmoothPart noisy = nonsmooth;
      noisy.sigma = algo.sigma;
      record = sliding::s_sliding(smooth, noisy, geometry, start, schedule, rng);
    } else {
      record = sliding::sliding(smooth, nonsmooth, geometry, start, schedule);
    }
    outcome.exit_code = record.diverged ? 2 : 0;
    outcome.trace_csv = sliding_trace_csv(record, config.reference_value);
    outcome.total_comm_rounds =
        record.comm_rounds.empty() ? 0 : record.comm_rounds.back();
    outcome.total_oracle_calls = record.total_nonsmooth();
    summary["smooth_grad_calls"] = record.total_smooth();
    summary["nonsmooth_calls"] = record.total_nonsmooth();
    summary["total_comm_rounds"] = outcome.total_comm_rounds;
    summary["final_objective"] =
        record.objective.empty() ? 0.0 : record.objective.back();
    summary["outer_budget"] = schedule.outer_budget;
    summary["diverged"] = record.diverged;
    outcome.summary_json = summary.dump(2);
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      write_file(out_dir + "/trace.csv", outcome.trace_csv);
      write_file(out_dir + "/summary.json", outcome.summary_json);
    }
    if (!quiet) std::fputs((outcome.summary_json + "\n").c_str(), stdout);
    return outcome;
  }

  if (algo.id == "spdstm" || algo.id == "sstm_sc") {
    dual::DualProblem dual_problem(problem, net.laplacian);
    Rng rng(seeds.substream_seed(31));
    dual::BatchSchedule batch;
    const auto mode =
        algo.lifted ? dual::LiftMode::lifted : dual::LiftMode::direct;
    dual::DualRunRecord record =
        algo.id == "spdstm"
            ? dual::spdstm(dual_problem, algo.budget, batch, rng, mode)
            : dual::sstm_sc(dual_problem, algo.budget, batch, rng, mode);
    outcome.trace_csv = dual_trace_csv(record);
    outcome.total_comm_rounds =
        record.comm_rounds.empty() ? 0 : record.comm_rounds.back();
    outcome.total_oracle_calls =
        record.conj_calls.empty() ? 0 : record.conj_calls.back();
    summary["total_comm_rounds"] = outcome.total_comm_rounds;
    summary["conj_calls"] = outcome.total_oracle_calls;
    summary["final_gap"] = record.gap.empty() ? 0.0 : record.gap.back();
    summary["final_grad_norm"] =
        record.grad_norm.empty() ? 0.0 : record.grad_norm.back();
    summary["lifted"] = algo.lifted;
    outcome.summary_json = summary.dump(2);
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      write_file(out_dir + "/trace.csv", outcome.trace_csv);
      write_file(out_dir + "/summary.json", outcome.summary_json);
    }
    if (!quiet) std::fputs((outcome.summary_json + "\n").c_str(), stdout);
    return outcome;
  }

  // iterative primal methods need a reference for the residual trace
  const auto reference = problems::solve_reference(
      problem, problem.smooth ? 1e-10 : 1e-4,
      problem.smooth ? 2000000 : 1000000);
  const auto start =
      initial_state(problem.node_count, problem.dim, seeds.substream_seed(41));

  primal::RunRecord record;
  if (algo.id == "dgd") {
    const double step =
        algo.step_size > 0.0 ? algo.step_size : 1.0 / (2.0 * constants.l_l);
    record = primal::dgd(problem, net.metropolis, step, start, algo.budget,
                         reference.f_star);
  } else if (algo.id == "extra") {
    const double step =
        algo.step_size > 0.0 ? algo.step_size : 1.0 / constants.l_l;
    record = primal::extra(problem, net.metropolis, step, start, algo.budget,
                           reference.f_star);
  } else if (algo.id == "acc_dngd") {
    const double eta =
        algo.eta > 0.0
            ? algo.eta
            : primal::tune_acc_dngd_eta(problem, net.metropolis, start);
    record = primal::acc_dngd(problem, net.metropolis, eta, start, algo.budget,
                              reference.f_star);
  } else if (algo.id == "diging") {
    const consensus::MixingSource source =
        net.sequence ? consensus::MixingSource(*net.sequence)
                     : consensus::MixingSource(net.metropolis);
    const double step =
        algo.step_size > 0.0 ? algo.step_size : 1.0 / (4.0 * constants.l_l);
    record = primal::diging(problem, source, step, start, algo.budget,
                            reference.f_star);
  } else if (algo.id == "dagd_consensus") {
    const consensus::MixingSource source =
        net.sequence ? consensus::MixingSource(*net.sequence)
                     : consensus::MixingSource(net.metropolis);
    int consensus_t = algo.consensus_t;
    if (consensus_t <= 0) {
      const auto contraction = consensus::estimate_contraction(
          source, net.sequence ? (int)net.sequence->graphs.size() : 1);
      const Eigen::VectorXd mean_start =
          start.colwise().mean().transpose();
      const double dist = (mean_start - reference.x_star).norm();
      Eigen::MatrixXd consensual(problem.node_count, problem.dim);
      consensual.rowwise() = reference.x_star.transpose();
      const double grad_at_opt =
          problem.stacked_gradient(consensual).norm();
      const auto params = primal::inexact_oracle_params(
          constants, problem.dim, config.target_eps, contraction, dist,
          grad_at_opt);
      consensus_t = params.consensus_t;
      summary["inexact_oracle"] = {{"delta", params.delta},
                                   {"delta_prime", params.delta_prime},
                                   {"consensus_t", params.consensus_t}};
    }
    record = primal::dagd_consensus(problem, source, 2.0 * constants.l_g,
                                    0.5 * constants.mu_g, start, consensus_t,
                                    algo.budget, reference.f_star);
  } else {
    throw ConfigError("algorithm.id '" + algo.id + "' is not known");
  }

  outcome.exit_code = record.diverged ? 2 : 0;
  outcome.trace_csv = primal_trace_csv(record);
  if (!record.f_residual.empty()) {
    outcome.final_f_residual = record.f_residual.back();
    outcome.final_consensus_error = record.consensus_err.back();
    outcome.total_comm_rounds = record.comm_rounds.back();
    outcome.total_oracle_calls = record.grad_calls.back();
  }
  const int hit = record.first_hit(config.target_eps);
  outcome.iters_to_target = hit;
  if (hit > 0) {
    outcome.rounds_to_target = (int)record.rounds_at(hit);
    outcome.oracle_to_target = record.grads_at(hit);
  }
  summary["diverged"] = record.diverged;
  summary["final_f_residual"] = outcome.final_f_residual;
  summary["final_consensus_error"] = outcome.final_consensus_error;
  summary["total_comm_rounds"] = outcome.total_comm_rounds;
  summary["total_grad_calls"] = outcome.total_oracle_calls;
  summary["iters_to_target"] = hit;
  summary["rounds_to_target"] = outcome.rounds_to_target;
  summary["reference_note"] = reference.method_note;
  outcome.summary_json = summary.dump(2);

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_file(out_dir + "/trace.csv", outcome.trace_csv);
    write_file(out_dir + "/summary.json", outcome.summary_json);
  }
  if (!quiet) std::fputs((outcome.summary_json + "\n").c_str(), stdout);
  return outcome;
}

double fit_loglog_slope(const std::vector<double>& xs,
                        const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("fit_loglog_slope: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = (int)xs.size();
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(xs[i]);
    const double ly = std::log(std::max(ys[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ScalingReport sweep(const ExperimentConfig& config_template,
                    const std::string& variable,
                    const std::vector<double>& values, int workers,
                    const std::string& out_dir) {
  if (values.size() < 3)
    throw ConfigError("sweep needs at least 3 values");
  if (variable != "eps" && variable != "chi" && variable != "kappa")
    throw ConfigError("sweep variable must be eps, chi or kappa");

  ScalingReport report;
  report.variable = variable;
  report.points.resize(values.size());

#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, workers))
  for (int i = 0; i < (int)values.size(); ++i) {
    SweepPoint& point = report.points[i];
    point.value = values[i];
    ExperimentConfig cfg = config_template;
    try {
      if (variable == "eps") {
        cfg.target_eps = values[i];
      } else if (variable == "kappa") {
        cfg.problem.kappa = values[i];
      } else {  // chi: path length
        cfg.graph.m = (int)values[i];
        cfg.problem.m = (int)values[i];
      }
      const auto outcome = run_experiment(cfg, "", true);
      if (outcome.exit_code != 0)
        throw std::runtime_error("member run diverged");

      if (variable == "chi") {
        const auto g = graph::generate_graph(
            graph::family_from_string(cfg.graph.family), cfg.graph.m,
            cfg.graph.seed);
        point.x = graph::spectral_summary(graph::build_laplacian(g),
                                          graph::MatrixKind::laplacian)
                      .chi;
      } else {
        point.x = values[i];
      }

      if (cfg.algorithm.id == "sliding") {
        // configured-for-target totals
        const auto summary = json::parse(outcome.summary_json);
        point.rounds_measure = summary.at("smooth_grad_calls").get<double>();
        point.oracle_measure = summary.at("nonsmooth_calls").get<double>();
        point.ok = true;
      } else if (cfg.algorithm.id == "consensus" ||
                 cfg.algorithm.id == "accelerated_consensus") {
        if (outcome.rounds_to_target < 0)
          throw std::runtime_error("target accuracy not reached in budget");
        point.rounds_measure = outcome.rounds_to_target;
        point.oracle_measure = outcome.rounds_to_target;
        point.ok = true;
      } else {
        if (outcome.iters_to_target < 0)
          throw std::runtime_error("target accuracy not reached in budget");
        point.rounds_measure = outcome.rounds_to_target;
        point.oracle_measure = (double)outcome.oracle_to_target;
        point.ok = true;
      }
    } catch (const std::exception& e) {
      point.ok = false;
      point.error = e.what();
    }
  }

  std::vector<double> xs, rounds, oracles;
  for (const auto& p : report.points) {
    if (!p.ok) {
      report.complete = false;
      continue;
    }
    xs.push_back(p.x);
    rounds.push_back(p.rounds_measure);
    oracles.push_back(p.oracle_measure);
  }
  if (xs.size() >= 2) {
    report.rounds_slope = fit_loglog_slope(xs, rounds);
    report.oracle_slope = fit_loglog_slope(xs, oracles);
  }
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_file(out_dir + "/sweep_report.json", report.to_json_text());
  }
  return report;
}

std::string ScalingReport::to_json_text() const {
  json root;
  root["schema_version"] = 1;
  root["variable"] = variable;
  root["rounds_slope"] = rounds_slope;
  root["oracle_slope"] = oracle_slope;
  root["complete"] = complete;
  root["points"] = json::array();
  for (const auto& p : points) {
    json jp;
    jp["value"] = p.value;
    jp["x"] = p.x;
    jp["rounds_measure"] = p.rounds_measure;
    jp["oracle_measure"] = p.oracle_measure;
    jp["ok"] = p.ok;
    if (!p.error.empty()) jp["error"] = p.error;
    root["points"].push_back(jp);
  }
  return root.dump(2);
}

}  // namespace decopt::harness
