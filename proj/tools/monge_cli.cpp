#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "monge/dataio.hpp"
#include "monge/error.hpp"
#include "monge/experiments.hpp"
#include "monge/mapfile.hpp"

namespace fs = std::filesystem;
using namespace monge;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool is_csv(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".csv";
}

// CSV rows are treated as 1 x d signals; IDX files carry their own shape.
SignalStack load_stack(const fs::path& path) {
  if (is_csv(path)) {
    Matrix rows = read_sample_csv(path);
    const Shape shape{1, rows.cols()};
    return SignalStack(shape, std::move(rows));
  }
  return read_idx_images(path);
}

void save_stack(const SignalStack& stack, const fs::path& path) {
  if (is_csv(path)) {
    write_sample_csv(stack.data(), path);
  } else {
    write_idx_images(stack, path);
  }
}

unsigned thread_budget() {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MONGE_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || cap < 1) {
      throw UsageError("MONGE_THREADS must be a positive integer, got '" + std::string(env) + "'");
    }
    threads = std::min<unsigned>(threads, static_cast<unsigned>(cap));
  }
  return threads;
}

struct FitArgs {
  std::string source;
  std::string target;
  double alpha = 0.0;
  std::string mode = "linear";
  std::string out;
};

int cmd_map_fit(const FitArgs& a) {
  const SignalStack xs = load_stack(a.source);
  const SignalStack xt = load_stack(a.target);
  if (!(xs.shape() == xt.shape())) {
    throw Error(ErrorCode::ShapeMismatch, "source and target samples have different shapes");
  }
  if (a.mode == "linear") {
    const LinearMongeMap map = fit_empirical(xs.as_samples(), xt.as_samples(), a.alpha);
    save_map(map, a.out);
    std::cout << "linear map d=" << map.dim() << " ||A||=" << operator_norm(map) << " -> " << a.out << "\n";
  } else {
    const SpectralMongeMap map = fit_conv(xs, xt, a.alpha);
    save_map(map, a.out);
    std::cout << "conv map " << map.shape().rows << "x" << map.shape().cols
              << " max response=" << map.response().maxCoeff() << " -> " << a.out << "\n";
  }
  return 0;
}

SpectralMongeMap invert(const SpectralMongeMap& map) {
  if (!(map.response().minCoeff() > 0.0)) {
    throw Error(ErrorCode::ZeroSourceSpectrum, "map response vanishes; it has no inverse");
  }
  return SpectralMongeMap(map.shape(), map.response().cwiseInverse(), map.mean2(), map.mean1(), map.alpha());
}

struct ApplyArgs {
  std::string map;
  std::string input;
  std::string out;
  bool inverse = false;
};

int cmd_map_apply(const ApplyArgs& a) {
  const AnyMap any = load_map(a.map);
  const SignalStack input = load_stack(a.input);
  if (const auto* linear = std::get_if<LinearMongeMap>(&any)) {
    if (input.shape().size() != linear->dim()) {
      throw Error(ErrorCode::ShapeMismatch, "input dimension " + std::to_string(input.shape().size()) +
                                                " does not match map dimension " + std::to_string(linear->dim()));
    }
    const LinearMongeMap map = a.inverse ? inverse(*linear) : *linear;
    save_stack(SignalStack(input.shape(), map_rows(map, input.data())), a.out);
  } else {
    const auto& spectral = std::get<SpectralMongeMap>(any);
    if (input.shape().size() != spectral.dim()) {
      throw Error(ErrorCode::ShapeMismatch, "input size does not match the map's signal shape");
    }
    const SpectralMongeMap map = a.inverse ? invert(spectral) : spectral;
    save_stack(SignalStack(input.shape(), map_rows(map, input.data())), a.out);
  }
  std::cout << "mapped " << input.n() << " samples -> " << a.out << "\n";
  return 0;
}

struct ExperimentArgs {
  std::string kind;
  std::uint64_t seed = 0;
  int trials = 10;
  std::vector<long> dims = {2, 10, 50};
  std::vector<long> n_grid;
  std::vector<long> n_l_grid;
  std::optional<long> n_eval;
  std::optional<double> alpha;
  std::string out_dir = ".";
  std::string images;
  bool plots = false;
  bool use_true_map = false;
  long image_size = 28;
  int blur_length = 5;
  double blur_angle = 45.0;
};

ExperimentConfig make_config(const ExperimentArgs& a) {
  ExperimentConfig cfg;
  cfg.seed = a.seed;
  cfg.trials = a.trials;
  cfg.dims = a.dims;
  if (!a.n_grid.empty()) cfg.n_grid = a.n_grid;
  if (!a.n_l_grid.empty()) cfg.n_l_grid = a.n_l_grid;
  const bool conv = a.kind == "conv";
  cfg.n_eval = a.n_eval.value_or(conv ? 1000 : 100000);
  cfg.alpha = a.alpha.value_or(conv ? 1e-3 : 0.0);
  cfg.use_true_map = a.use_true_map;
  cfg.image_shape = Shape{a.image_size, a.image_size};
  cfg.blur_length = a.blur_length;
  cfg.blur_angle_deg = a.blur_angle;
  cfg.threads = thread_budget();
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

std::vector<long> dims_of(const std::vector<ResultRow>& rows) {
  std::vector<long> out;
  for (const ResultRow& r : rows) {
    if (std::find(out.begin(), out.end(), r.d) == out.end()) out.push_back(r.d);
  }
  return out;
}

PlotSeries series_of(const std::string& name, const std::vector<std::pair<double, double>>& pts) {
  PlotSeries s{name, {}, {}};
  for (const auto& [x, y] : pts) {
    s.x.push_back(x);
    s.y.push_back(y);
  }
  return s;
}

std::string slope_text(const std::vector<std::pair<double, double>>& pts) {
  std::ostringstream out;
  try {
    out << fit_loglog_slope(pts);
  } catch (const Error&) {
    out << "n/a";
  }
  return out.str();
}

int cmd_experiment(const ExperimentArgs& a) {
  const ExperimentConfig cfg = make_config(a);
  if (!a.images.empty() && a.kind != "conv") throw UsageError("--images only applies to --kind conv");

  std::optional<SignalStack> images;
  if (!a.images.empty()) images = read_idx_images(a.images);

  std::vector<ResultRow> rows;
  std::string metric;
  std::string x_label = "n";
  std::vector<std::pair<std::string, std::string>> plotted;  // (metric, legend prefix)
  if (a.kind == "mapping") {
    rows = run_mapping_convergence(cfg);
    plotted = {{"divergence_median", "d="}};
  } else if (a.kind == "da") {
    rows = run_da_convergence(cfg);
    plotted = {{"target_error_vs_n_median", "vs n, d="}, {"target_error_vs_nl_median", "vs n_l, d="}};
  } else {
    rows = run_conv_experiment(cfg, images);
    plotted = {{"conv_divergence_median", "conv, d="}, {"linear_divergence_median", "linear, d="}};
  }

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  const fs::path csv = dir / (a.kind + ".csv");
  write_csv(rows, csv);

  std::ostringstream summary;
  summary << a.kind << ":";
  std::vector<PlotSeries> series;
  for (long d : dims_of(rows)) {
    for (const auto& [m, prefix] : plotted) {
      // DA sweeps over n_l are keyed by n_l, not n.
      std::vector<std::pair<double, double>> pts;
      if (m == "target_error_vs_nl_median") {
        for (const ResultRow& r : rows) {
          if (r.d == d && r.metric == m && !r.trial) pts.emplace_back(static_cast<double>(*r.n_l), r.value);
        }
        std::sort(pts.begin(), pts.end());
      } else {
        pts = metric_series(rows, a.kind, d, m);
      }
      if (pts.empty()) continue;
      summary << " [" << prefix << d << " slope=" << slope_text(pts) << " last=" << pts.back().second << "]";
      series.push_back(series_of(prefix + std::to_string(d), pts));
    }
  }
  if (a.plots) {
    PlotOptions opt;
    opt.log_x = true;
    opt.log_y = a.kind != "da";
    opt.title = a.kind + " experiment (medians over trials)";
    opt.x_label = x_label;
    opt.y_label = a.kind == "da" ? "target error rate" : "mapping divergence";
    write_svg_lines(series, opt, dir / (a.kind + ".svg"));
  }
  summary << " -> " << csv.string();
  std::cout << summary.str() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian and convolutional Monge map estimation"};
  app.require_subcommand(1);

  FitArgs fit;
  CLI::App* fit_cmd = app.add_subcommand("map-fit", "Fit a linear or convolutional map between two samples");
  fit_cmd->add_option("--source", fit.source, "Source samples (CSV rows or IDX images)")->required();
  fit_cmd->add_option("--target", fit.target, "Target samples (CSV rows or IDX images)")->required();
  fit_cmd->add_option("--alpha", fit.alpha, "Covariance shrinkage in [0, 1]")->check(CLI::Range(0.0, 1.0));
  fit_cmd->add_option("--mode", fit.mode, "linear or conv")->check(CLI::IsMember({"linear", "conv"}));
  fit_cmd->add_option("--out", fit.out, "Output map file")->required();

  ApplyArgs apply;
  CLI::App* apply_cmd = app.add_subcommand("map-apply", "Apply a saved map (or its inverse) to samples");
  apply_cmd->add_option("--map", apply.map, "Map file")->required();
  apply_cmd->add_option("--input", apply.input, "Input samples (CSV or IDX)")->required();
  apply_cmd->add_option("--out", apply.out, "Output samples; format follows the extension")->required();
  apply_cmd->add_flag("--inverse", apply.inverse, "Apply the inverse map");

  ExperimentArgs exp;
  CLI::App* exp_cmd = app.add_subcommand("experiment", "Run a seeded Monte-Carlo experiment");
  exp_cmd->add_option("--kind", exp.kind, "mapping, da or conv")
      ->required()
      ->check(CLI::IsMember({"mapping", "da", "conv"}));
  exp_cmd->add_option("--seed", exp.seed, "Base seed");
  exp_cmd->add_option("--trials", exp.trials, "Trials per grid point")->check(CLI::PositiveNumber);
  exp_cmd->add_option("--dims", exp.dims, "Dimensions (mapping, da)")->delimiter(',');
  exp_cmd->add_option("--n-grid", exp.n_grid, "Sample sizes n")->delimiter(',');
  exp_cmd->add_option("--nl-grid", exp.n_l_grid, "Labeled sample sizes (da)")->delimiter(',');
  exp_cmd->add_option("--n-eval", exp.n_eval, "Evaluation sample size");
  exp_cmd->add_option("--alpha", exp.alpha, "Covariance shrinkage")->check(CLI::Range(0.0, 1.0));
  exp_cmd->add_option("--out-dir", exp.out_dir, "Output directory");
  exp_cmd->add_option("--images", exp.images, "IDX image file (conv)");
  exp_cmd->add_flag("--plots", exp.plots, "Also write an SVG plot");
  exp_cmd->add_flag("--use-true-map", exp.use_true_map, "Use the true map instead of the estimate (da)");
  exp_cmd->add_option("--image-size", exp.image_size, "Synthetic image side length (conv)")
      ->check(CLI::PositiveNumber);
  exp_cmd->add_option("--blur-length", exp.blur_length, "Motion blur length in pixels (conv)")
      ->check(CLI::PositiveNumber);
  exp_cmd->add_option("--blur-angle", exp.blur_angle, "Motion blur angle in degrees (conv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*fit_cmd) return cmd_map_fit(fit);
    if (*apply_cmd) return cmd_map_apply(apply);
    return cmd_experiment(exp);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
