#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "CLI11.hpp"
#include "cvo/dataset.hpp"
#include "cvo/errors.hpp"
#include "cvo/evaluation.hpp"
#include "cvo/parallel.hpp"
#include "cvo/registration.hpp"
#include "cvo/sensitivity.hpp"

namespace cvo::cli {

namespace {

using Setter = std::function<void(double)>;

std::map<std::string, Setter> param_table(SolverConfig& s, SelectionConfig& sel, double* assoc) {
  std::map<std::string, Setter> t{
      {"eps_transform", [&](double v) { s.eps_transform = v; }},
      {"eps_gradient", [&](double v) { s.eps_gradient = v; }},
      {"min_step", [&](double v) { s.min_step = v; }},
      {"max_iterations", [&](double v) { s.max_iterations = static_cast<int>(v); }},
      {"sigma", [&](double v) { s.kernel.sigma = v; }},
      {"sigma_c", [&](double v) { s.kernel.sigma_c = v; }},
      {"ell_c", [&](double v) { s.kernel.ell_c = v; }},
      {"sparsification_threshold", [&](double v) { s.kernel.tau = v; }},
      {"tau", [&](double v) { s.kernel.tau = v; }},
      {"ell_init", [&](double v) { s.ell_init = v; }},
      {"ell_min", [&](double v) { s.ell_min = v; }},
      {"ell_max", [&](double v) { s.ell_max = v; }},
      {"gamma_ell", [&](double v) { s.gamma_ell = v; }},
      {"lambda_ell", [&](double v) { s.lambda_ell = v; }},
      {"target_points", [&](double v) { sel.target_points = static_cast<int>(v); }},
      {"fallback_fraction", [&](double v) { sel.fallback_fraction = v; }},
      {"gradient_block", [&](double v) { sel.gradient_block = static_cast<int>(v); }},
      {"gradient_margin", [&](double v) { sel.gradient_margin = v; }},
      {"canny_low", [&](double v) { sel.canny_low = v; }},
      {"canny_high", [&](double v) { sel.canny_high = v; }},
      {"depth_min", [&](double v) { sel.depth_min = v; }},
      {"depth_max", [&](double v) { sel.depth_max = v; }},
  };
  if (assoc != nullptr) t["association_tolerance"] = [assoc](double v) { *assoc = v; };
  return t;
}

void apply(const std::string& assignment, SolverConfig& s, SelectionConfig& sel, double* assoc) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw InvalidConfig("--param expects key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  auto table = param_table(s, sel, assoc);
  const auto it = table.find(key);
  if (it == table.end()) throw InvalidConfig("unknown parameter '" + key + "'");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(raw, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != raw.size()) throw InvalidConfig("parameter '" + key + "': bad value '" + raw + "'");
  it->second(v);
}

void set_mode(SolverConfig& s, Mode mode) { s.adaptive = mode == Mode::kAdaptive; }

cv::Mat read_image(const std::filesystem::path& p, int flags) {
  cv::Mat m = cv::imread(p.string(), flags);
  if (m.empty()) throw MissingFile("cannot decode " + p.string());
  return m;
}

Frame frame_from_files(const std::filesystem::path& rgb, const std::filesystem::path& depth,
                       const CameraConfig& cam) {
  Frame f;
  cv::cvtColor(read_image(rgb, cv::IMREAD_COLOR), f.rgb, cv::COLOR_BGR2RGB);
  read_image(depth, cv::IMREAD_ANYDEPTH).convertTo(f.depth, CV_32FC1, 1.0 / cam.depth_scale);
  f.intrinsics = cam.intrinsics;
  f.validate();
  return f;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

void RunConfig::apply_param(const std::string& assignment) {
  apply(assignment, solver, selection, &association_tolerance);
}

void RunConfig::validate() const {
  solver.validate();
  selection.validate();
  if (!(association_tolerance > 0.0)) throw InvalidConfig("association_tolerance must be > 0");
}

void RunConfig::print(std::ostream& os) const {
  const auto& s = solver;
  os << "mode = " << (mode == Mode::kAdaptive ? "adaptive" : "fixed-ell") << '\n'
     << "eps_transform = " << s.eps_transform << '\n'
     << "eps_gradient = " << s.eps_gradient << '\n'
     << "min_step = " << s.min_step << '\n'
     << "max_iterations = " << s.max_iterations << '\n'
     << "sparsification_threshold = " << s.kernel.tau << '\n'
     << "ell_init = " << s.ell_init << '\n'
     << "sigma = " << s.kernel.sigma << '\n'
     << "ell_min = " << s.ell_min << '\n'
     << "ell_max = " << s.ell_max << '\n'
     << "ell_c = " << s.kernel.ell_c << '\n'
     << "sigma_c = " << s.kernel.sigma_c << '\n'
     << "gamma_ell = " << s.gamma_ell << '\n'
     << "lambda_ell = " << s.lambda_ell << '\n'
     << "target_points = " << selection.target_points << '\n'
     << "fallback_fraction = " << selection.fallback_fraction << '\n'
     << "association_tolerance = " << association_tolerance << '\n';
}

Mode parse_mode(const std::string& name) {
  if (name == "adaptive") return Mode::kAdaptive;
  if (name == "fixed-ell") return Mode::kFixedEll;
  throw InvalidConfig("unknown mode '" + name + "' (expected adaptive or fixed-ell)");
}

int run_sequence(RunConfig config, std::ostream& out, std::ostream& err) {
  std::vector<FramePair> pairs;
  SequenceIndex index;
  try {
    set_mode(config.solver, config.mode);
    config.validate();
    const CameraConfig camera = load_camera_config(config.intrinsics);
    index = load_sequence(config.dataset, camera);
    index.association_tolerance = config.association_tolerance;
    Association assoc = associate(index);
    if (assoc.unmatched_rgb > 0) {
      err << "warning: " << assoc.unmatched_rgb << " rgb images without a depth match were skipped\n";
    }
    pairs = std::move(assoc.pairs);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  if (config.max_frames > 0 && pairs.size() > config.max_frames) pairs.resize(config.max_frames);
  if (pairs.empty()) {
    err << "error: sequence has no associated rgb/depth pairs\n";
    return 1;
  }

  out << "# effective parameters\n";
  config.print(out);

  std::ofstream diag;
  if (config.diag) {
    diag.open(*config.diag);
    if (!diag) {
      err << "error: cannot write " << config.diag->string() << '\n';
      return 1;
    }
    diag << "frame,timestamp,points,iterations,final_ell,inner_product,cost,converged,warning,failed,wall_ms\n";
  }
  std::ofstream iter_diag;
  if (config.iter_diag) {
    iter_diag.open(*config.iter_diag);
    if (!iter_diag) {
      err << "error: cannot write " << config.iter_diag->string() << '\n';
      return 1;
    }
    iter_diag << "frame,iteration,ell,ell_max_current,ell_gradient,inner_product,cost,gradient_norm,step_norm\n";
  }
  diag << std::setprecision(10);
  iter_diag << std::setprecision(10);

  std::vector<Pose> relative;
  std::vector<double> stamps;
  std::optional<ColoredCloud> previous;
  Pose last_relative = Pose::identity();

  for (std::size_t k = 0; k < pairs.size(); ++k) {
    std::optional<ColoredCloud> current;
    double stamp = pairs[k].rgb.timestamp;
    try {
      current = make_cloud(load_frame(index, pairs[k]), config.selection);
    } catch (const InsufficientPoints& e) {
      err << "warning: frame " << k << ": " << e.what() << '\n';
    } catch (const Error& e) {
      err << "error: frame " << k << ": " << e.what() << '\n';
      return 1;
    }
    stamps.push_back(stamp);
    if (k == 0) {
      previous = std::move(current);
      continue;
    }

    const auto start = std::chrono::steady_clock::now();
    RegistrationResult result;
    bool failed = false;
    if (previous && current) {
      try {
        result = register_clouds(*previous, *current, config.solver, last_relative);
        last_relative = result.pose;
      } catch (const RegistrationFailed& e) {
        err << "warning: frame " << k << ": " << e.what() << "; carrying previous motion\n";
        failed = true;
      }
    } else {
      failed = true;
    }
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    relative.push_back(last_relative);

    if (diag.is_open()) {
      diag << k << ',' << std::fixed << std::setprecision(6) << stamp << std::defaultfloat
           << std::setprecision(10) << ',' << (current ? current->size() : 0) << ',' << result.iterations
           << ',' << result.final_ell << ',' << result.final_inner_product << ',' << result.final_cost << ','
           << result.converged << ',' << (result.tracking_warning || failed) << ',' << failed << ','
           << wall_ms << '\n';
    }
    if (iter_diag.is_open()) {
      for (const auto& r : result.trace) {
        iter_diag << k << ',' << r.iteration << ',' << r.ell << ',' << r.ell_max_current << ','
                  << r.ell_gradient << ',' << r.inner_product << ',' << r.cost << ',' << r.gradient_norm
                  << ',' << r.step_norm << '\n';
      }
    }
    if (result.tracking_warning) err << "warning: frame " << k << ": tracking is difficult\n";
    previous = std::move(current);
  }

  try {
    write_trajectory(accumulate(relative, stamps), config.out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  out << "wrote " << stamps.size() << " poses to " << config.out.string() << '\n';
  return 0;
}

int run_pair(const PairConfig& config, std::ostream& out, std::ostream& err) {
  try {
    SolverConfig solver = config.solver;
    set_mode(solver, config.mode);
    const CameraConfig camera = load_camera_config(config.intrinsics);
    const ColoredCloud X = make_cloud(frame_from_files(config.rgb1, config.depth1, camera), config.selection);
    const ColoredCloud Z = make_cloud(frame_from_files(config.rgb2, config.depth2, camera), config.selection);
    const RegistrationResult r = register_clouds(X, Z, solver);
    out << "pose: " << format_trajectory_line({0.0, r.pose}).substr(9) << '\n'
        << "iterations: " << r.iterations << '\n'
        << "converged: " << (r.converged ? "yes" : "no") << '\n'
        << "final_ell: " << r.final_ell << '\n'
        << "inner_product: " << r.final_inner_product << '\n'
        << "cost: " << r.final_cost << '\n'
        << "tracking_warning: " << (r.tracking_warning ? "yes" : "no") << '\n';
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int eval_rpe(const std::filesystem::path& estimated, const std::filesystem::path& groundtruth,
             double delta, const std::optional<std::filesystem::path>& residuals_csv,
             std::ostream& out, std::ostream& err) {
  try {
    const RpeResult r = rpe(read_trajectory(estimated), read_trajectory(groundtruth), delta);
    out << std::fixed << std::setprecision(4) << "trans_rmse: " << r.trans_rmse << " m/s\n"
        << "rot_rmse: " << r.rot_rmse << " deg/s\n"
        << "intervals: " << r.residuals.size() << '\n';
    out << std::defaultfloat;
    if (residuals_csv) {
      std::ofstream csv(*residuals_csv);
      if (!csv) throw MissingFile("cannot write " + residuals_csv->string());
      write_rpe_csv(r, csv);
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int sensitivity_table(const std::vector<int>& orders, const std::vector<double>& tolerances,
                      const std::optional<std::filesystem::path>& csv_path, std::ostream& out,
                      std::ostream& err) {
  try {
    const auto table = cutoff_table(orders, tolerances);
    if (csv_path) {
      std::ofstream csv(*csv_path);
      if (!csv) throw MissingFile("cannot write " + csv_path->string());
      write_cutoff_csv(csv, table);
    } else {
      write_cutoff_csv(out, table);
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Continuous RGB-D visual odometry with adaptive kernel length-scale"};
  app.require_subcommand(1);

  RunConfig run;
  std::string run_mode = "adaptive";
  std::vector<std::string> run_params;
  auto* run_cmd = app.add_subcommand("run", "Frame-to-frame odometry over a TUM-format sequence");
  run_cmd->add_option("--dataset", run.dataset, "Sequence root (rgb.txt, depth.txt)")->required();
  run_cmd->add_option("--intrinsics", run.intrinsics, "Camera config file")->required();
  run_cmd->add_option("--out", run.out, "Output trajectory (TUM format)");
  run_cmd->add_option("--diag", run.diag, "Per-frame diagnostics CSV");
  run_cmd->add_option("--iter-diag", run.iter_diag, "Per-iteration diagnostics CSV");
  run_cmd->add_option("--mode", run_mode, "adaptive | fixed-ell");
  run_cmd->add_option("--param", run_params, "Parameter override key=value (repeatable)");
  run_cmd->add_option("--max-frames", run.max_frames, "Stop after this many frames");

  PairConfig pair;
  std::string pair_mode = "adaptive";
  std::vector<std::string> pair_params;
  auto* pair_cmd = app.add_subcommand("pair", "Register a single pair of RGB-D frames");
  pair_cmd->add_option("--rgb1", pair.rgb1)->required();
  pair_cmd->add_option("--depth1", pair.depth1)->required();
  pair_cmd->add_option("--rgb2", pair.rgb2)->required();
  pair_cmd->add_option("--depth2", pair.depth2)->required();
  pair_cmd->add_option("--intrinsics", pair.intrinsics)->required();
  pair_cmd->add_option("--mode", pair_mode, "adaptive | fixed-ell");
  pair_cmd->add_option("--param", pair_params, "Parameter override key=value (repeatable)");

  std::filesystem::path est_path, gt_path;
  double delta = 1.0;
  std::optional<std::filesystem::path> residuals;
  auto* rpe_cmd = app.add_subcommand("rpe", "Relative pose error of an estimate against ground truth");
  rpe_cmd->add_option("--estimated", est_path)->required();
  rpe_cmd->add_option("--groundtruth", gt_path)->required();
  rpe_cmd->add_option("--delta", delta, "Interval length in seconds");
  rpe_cmd->add_option("--residuals", residuals, "Write per-interval residuals as CSV");

  std::string orders_arg = "2,4,6,8,10";
  std::string tolerances_arg = "1e-1,1e-2,1e-3,1e-4,1e-5,1e-6";
  std::optional<std::filesystem::path> sens_out;
  auto* sens_cmd = app.add_subcommand("sensitivity", "Kernel cutoff table per expansion order and tolerance");
  sens_cmd->add_option("--orders", orders_arg, "Comma-separated even orders");
  sens_cmd->add_option("--tolerances", tolerances_arg, "Comma-separated tolerances");
  sens_cmd->add_option("--out", sens_out, "CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code;
  }

  int status = 1;
  with_thread_limit(thread_count_from_env(), [&] {
    try {
      if (*run_cmd) {
        run.mode = parse_mode(run_mode);
        for (const auto& p : run_params) run.apply_param(p);
        status = run_sequence(run, out, err);
      } else if (*pair_cmd) {
        pair.mode = parse_mode(pair_mode);
        for (const auto& p : pair_params) apply(p, pair.solver, pair.selection, nullptr);
        status = run_pair(pair, out, err);
      } else if (*rpe_cmd) {
        status = eval_rpe(est_path, gt_path, delta, residuals, out, err);
      } else if (*sens_cmd) {
        std::vector<int> orders;
        std::vector<double> tolerances;
        for (const auto& s : split(orders_arg, ',')) orders.push_back(std::stoi(s));
        for (const auto& s : split(tolerances_arg, ',')) tolerances.push_back(std::stod(s));
        status = sensitivity_table(orders, tolerances, sens_out, out, err);
      }
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      status = 1;
    } catch (const std::invalid_argument& e) {
      err << "error: malformed number in argument list\n";
      status = 1;
    }
  });
  return status;
}

}  // namespace cvo::cli
