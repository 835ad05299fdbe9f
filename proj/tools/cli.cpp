#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <type_traits>

#include "mpf/density_grid.hpp"
#include "mpf/error.hpp"
#include "mpf/evaluation.hpp"
#include "mpf/forest.hpp"
#include "mpf/serialize.hpp"
#include "mpf/synthetic.hpp"

namespace mpf::cli {

namespace {

using nlohmann::json;

template <typename T>
struct is_optional : std::false_type {};
template <typename T>
struct is_optional<std::optional<T>> : std::true_type {};

template <typename T>
T from_config(const json& value) {
  if constexpr (std::is_same_v<T, double>) {
    return number_from_json(value);
  } else if constexpr (std::is_same_v<T, std::string>) {
    return value.is_string() ? value.get<std::string>() : value.dump();
  } else {
    return value.get<T>();
  }
}

// A flag whose value may also come from the JSON config file.
struct Binding {
  CLI::Option* option;
  std::string key;
  std::function<void(const json&)> assign;
};

class Command {
 public:
  Command(CLI::App& app, const std::string& name, const std::string& help) : sub_(app.add_subcommand(name, help)) {
    sub_->add_option("--config", config_path_, "JSON config file; flags override its values");
  }

  template <typename T>
  CLI::Option* flag(const std::string& name, T& target, const std::string& help) {
    CLI::Option* opt = sub_->add_option(name, target, help);
    if constexpr (!is_optional<T>::value) opt->capture_default_str();
    bindings_.push_back({opt, name.substr(2), [&target](const json& v) {
                           if constexpr (is_optional<T>::value) {
                             target = from_config<typename T::value_type>(v);
                           } else {
                             target = from_config<T>(v);
                           }
                         }});
    return opt;
  }

  CLI::App* app() const { return sub_; }
  bool parsed() const { return sub_->parsed(); }

  // Fills flags absent from the command line from the config file. Keys may
  // sit at the top level or under the subcommand name; '-' and '_' are
  // interchangeable.
  void merge_config() {
    if (config_path_.empty()) return;
    const json doc = read_json_file(config_path_);
    if (!doc.is_object()) throw Error(ErrorCode::kInvalidConfig, config_path_ + ": config must be a JSON object");
    const json* section = doc.contains(sub_->get_name()) ? &doc.at(sub_->get_name()) : nullptr;
    for (const Binding& b : bindings_) {
      if (b.option->count() > 0) continue;
      std::string underscored = b.key;
      std::replace(underscored.begin(), underscored.end(), '-', '_');
      const json* found = nullptr;
      for (const json* scope : {section, &doc}) {
        if (!scope || found) continue;
        if (scope->contains(b.key)) found = &scope->at(b.key);
        else if (scope->contains(underscored)) found = &scope->at(underscored);
      }
      if (!found) continue;
      try {
        b.assign(*found);
      } catch (const json::exception& e) {
        throw Error(ErrorCode::kInvalidConfig, config_path_ + ": bad value for '" + b.key + "': " + e.what());
      }
    }
  }

 private:
  CLI::App* sub_;
  std::string config_path_;
  std::vector<Binding> bindings_;
};

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw Error(ErrorCode::kUsage, std::string(flag) + " is required");
}

struct ForestFlags {
  std::string kind = "streaming";
  std::size_t trees = 100;
  std::size_t max_depth = 10;
  double lifetime = std::numeric_limits<double>::infinity();
  double gamma = 1.0;
  std::uint64_t seed = 0;
  double epsilon = 0.01;
  double phi = 0.5;

  void add(Command& cmd) {
    cmd.flag("--kind", kind, "batch or streaming");
    cmd.flag("--trees", trees, "number of trees");
    cmd.flag("--max-depth", max_depth, "maximum absolute tree depth");
    cmd.flag("--lifetime", lifetime, "Mondrian lifetime budget (inf allowed)");
    cmd.flag("--gamma", gamma, "Polya prior strength");
    cmd.flag("--seed", seed, "64-bit random seed");
    cmd.flag("--epsilon", epsilon, "leaf-mass threshold for epsilon-anomalies");
    cmd.flag("--phi", phi, "fraction of trees that must agree");
  }

  ForestConfig config() const {
    ForestConfig c;
    c.kind = parse_model_kind(kind);
    c.n_trees = trees;
    c.tree.max_depth = max_depth;
    c.tree.lifetime = lifetime;
    c.tree.gamma = gamma;
    c.tree.seed = seed;
    c.epsilon = epsilon;
    c.phi = phi;
    c.validate();
    return c;
  }
};

// Writes to `path`, or to `fallback` when the path is empty.
void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error(ErrorCode::kIo, "cannot write " + path);
  body(file);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kUsage, "cannot parse '" + item + "' in list '" + text + "'");
    }
  }
  return out;
}

json point_json(std::span<const double> x) {
  json out = json::array();
  for (double v : x) out.push_back(v);
  return out;
}

void run_stream(Forest& forest, std::istream& ops, std::ostream& results, bool& failed) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ops, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json result;
    try {
      const json op = json::parse(line);
      const std::string kind = op.at("op").get<std::string>();
      result["op"] = kind;
      if (kind == "insert") {
        const auto z = op.at("point").get<std::vector<double>>();
        result["id"] = forest.insert(z);
      } else if (kind == "delete") {
        const auto id = op.at("id").get<PointId>();
        result["id"] = id;
        forest.remove(id);
      } else if (kind == "score") {
        const auto x = op.at("point").get<std::vector<double>>();
        if (x.size() != forest.dims()) throw Error(ErrorCode::kInvalidPoint, "point dimensionality mismatch");
        const ScoreReport r = forest.score(x);
        result["point"] = point_json(x);
        result["mass"] = r.mass;
        result["density"] = number_to_json(r.density);
        result["votes"] = r.votes;
        result["flag"] = r.flag;
      } else {
        throw Error(ErrorCode::kUsage, "unknown op '" + kind + "'");
      }
    } catch (const json::exception& e) {
      failed = true;
      result["line"] = line_no;
      result["error"] = std::string("parse-error: ") + e.what();
    } catch (const Error& e) {
      failed = true;
      result["line"] = line_no;
      result["error"] = e.what();
    }
    results << result.dump() << '\n';
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mondrian Polya forests: density estimation and anomaly scoring"};
  app.name("mpf");
  app.require_subcommand(1);

  // fit
  Command fit(app, "fit", "fit a forest on a CSV file and write a JSON snapshot");
  std::string fit_input, fit_out;
  std::optional<std::string> fit_label;
  ForestFlags fit_forest;
  fit.flag("--input", fit_input, "CSV of training rows");
  fit.flag("--label-col", fit_label, "label column to drop (name or 0-based index)");
  fit_forest.add(fit);
  fit.flag("--out", fit_out, "snapshot path");

  // score
  Command score(app, "score", "score rows against a fitted forest");
  std::string score_model, score_input, score_out;
  std::optional<std::string> score_label;
  std::optional<double> score_eps, score_phi;
  score.flag("--model", score_model, "forest snapshot");
  score.flag("--input", score_input, "CSV of rows to score");
  score.flag("--label-col", score_label, "label column to drop (name or 0-based index)");
  score.flag("--epsilon", score_eps, "override the snapshot epsilon");
  score.flag("--phi", score_phi, "override the snapshot phi");
  score.flag("--out", score_out, "output CSV (stdout when omitted)");

  // stream
  Command stream(app, "stream", "replay insert/delete/score operations against a streaming forest");
  std::string stream_model, stream_ops, stream_out, stream_results;
  stream.flag("--model", stream_model, "streaming forest snapshot");
  stream.flag("--ops", stream_ops, "JSON-lines operation log");
  stream.flag("--out", stream_out, "snapshot path for the updated forest");
  stream.flag("--results", stream_results, "JSON-lines results (stdout when omitted)");

  // eval-auc
  Command eval(app, "eval-auc", "fit on a labelled CSV and report ROC AUC");
  std::string eval_input, eval_metrics, eval_scale = "auto", eval_aggregate = "mass";
  std::optional<std::string> eval_label;
  std::size_t eval_shingle = 0;
  ForestFlags eval_forest;
  eval.flag("--input", eval_input, "labelled CSV");
  eval.flag("--label-col", eval_label, "label column (name or 0-based index)");
  eval.flag("--shingle", eval_shingle, "window width for univariate series (0 = off)");
  eval.flag("--scale-minmax", eval_scale, "auto, on or off (auto scales when D >= 50)");
  eval.flag("--aggregate", eval_aggregate, "mass, vote or density");
  eval_forest.add(eval);
  eval.flag("--metrics", eval_metrics, "metrics JSON path (stdout when omitted)");

  // synth
  Command synth(app, "synth", "generate a synthetic dataset");
  std::string synth_name, synth_out;
  std::size_t synth_inliers = 425, synth_outliers = 75;
  std::uint64_t synth_seed = 0;
  synth.flag("--name", synth_name, "generator name");
  synth.flag("--n-inliers", synth_inliers, "number of inliers");
  synth.flag("--n-outliers", synth_outliers, "number of uniform outliers");
  synth.flag("--seed", synth_seed, "random seed");
  synth.flag("--out", synth_out, "output CSV (stdout when omitted)");

  // density-grid
  Command grid(app, "density-grid", "evaluate forest density on a regular grid (D <= 2)");
  std::string grid_model, grid_out, grid_resolution = "100";
  std::optional<std::string> grid_bounds;
  grid.flag("--model", grid_model, "forest snapshot");
  grid.flag("--bounds", grid_bounds, "lo0,hi0[,lo1,hi1]; defaults to the model domain");
  grid.flag("--resolution", grid_resolution, "cells per axis, one value or one per axis");
  grid.flag("--out", grid_out, "output CSV (stdout when omitted)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream help_out, err_out;
    const int code = app.exit(e, help_out, err_out);
    out << help_out.str();
    err << err_out.str();
    return code == 0 ? 0 : 2;
  }

  try {
    if (fit.parsed()) {
      fit.merge_config();
      require(fit_input, "--input");
      require(fit_out, "--out");
      const Dataset data = load_csv(fit_input, fit_label);
      const Forest forest = Forest::fit(data.rows, fit_forest.config());
      save_forest(fit_out, forest);
    } else if (score.parsed()) {
      score.merge_config();
      require(score_model, "--model");
      require(score_input, "--input");
      Forest forest = load_forest(score_model);
      if (score_eps) forest.mutable_config().epsilon = *score_eps;
      if (score_phi) forest.mutable_config().phi = *score_phi;
      forest.config().validate();
      const Dataset data = load_csv(score_input, score_label);
      if (data.rows.cols() != forest.dims()) {
        throw Error(ErrorCode::kInvalidData, "input has " + std::to_string(data.rows.cols()) +
                                                 " columns but the model expects " + std::to_string(forest.dims()));
      }
      emit(score_out, out, [&](std::ostream& os) {
        os << std::setprecision(std::numeric_limits<double>::max_digits10);
        os << "point_index,mass_score,density,flag\n";
        for (std::size_t i = 0; i < data.rows.rows(); ++i) {
          const ScoreReport r = forest.score(data.rows.row(i));
          os << i << ',' << r.mass << ',' << r.density << ',' << (r.flag ? 1 : 0) << '\n';
        }
      });
    } else if (stream.parsed()) {
      stream.merge_config();
      require(stream_model, "--model");
      require(stream_ops, "--ops");
      Forest forest = load_forest(stream_model);
      if (forest.kind() != ModelKind::kStreaming) throw Error(ErrorCode::kUsage, "stream needs a streaming forest");
      std::ifstream ops(stream_ops);
      if (!ops) throw Error(ErrorCode::kIo, "cannot open " + stream_ops);
      bool failed = false;
      emit(stream_results, out, [&](std::ostream& os) { run_stream(forest, ops, os, failed); });
      if (!stream_out.empty()) save_forest(stream_out, forest);
      if (failed) {
        err << "error: some operations failed; see the results log\n";
        return 1;
      }
    } else if (eval.parsed()) {
      eval.merge_config();
      require(eval_input, "--input");
      if (!eval_label) throw Error(ErrorCode::kUsage, "--label-col is required");
      EvalOptions options;
      options.forest = eval_forest.config();
      options.shingle = eval_shingle;
      options.scale = parse_scale_mode(eval_scale);
      options.aggregate = parse_aggregate(eval_aggregate);
      const EvalResult r = evaluate_auc(load_csv(eval_input, eval_label), options);
      const json metrics = {{"auc", r.auc},
                            {"n", r.n_points},
                            {"d", r.dims},
                            {"n_anomalies", r.n_anomalies},
                            {"n_trees", r.n_trees},
                            {"seed", r.seed},
                            {"kind", eval_forest.kind},
                            {"aggregate", eval_aggregate},
                            {"runtime_seconds", r.runtime_seconds}};
      emit(eval_metrics, out, [&](std::ostream& os) { os << metrics.dump(2) << '\n'; });
    } else if (synth.parsed()) {
      synth.merge_config();
      require(synth_name, "--name");
      const Dataset data = gen_synthetic(synth_name, synth_inliers, synth_outliers, synth_seed);
      emit(synth_out, out, [&](std::ostream& os) { write_csv(os, data); });
    } else if (grid.parsed()) {
      grid.merge_config();
      require(grid_model, "--model");
      const Forest forest = load_forest(grid_model);
      if (forest.dims() > 2) {
        throw Error(ErrorCode::kUnsupportedDimension,
                    "density grids support 1 or 2 dimensions, got " + std::to_string(forest.dims()));
      }
      BoundingBox bounds;
      if (grid_bounds) {
        const std::vector<double> v = parse_list(*grid_bounds);
        if (v.size() != 2 * forest.dims()) {
          throw Error(ErrorCode::kUsage, "--bounds needs " + std::to_string(2 * forest.dims()) + " values");
        }
        std::vector<double> lo, hi;
        for (std::size_t d = 0; d < forest.dims(); ++d) {
          lo.push_back(v[2 * d]);
          hi.push_back(v[2 * d + 1]);
        }
        bounds = BoundingBox(lo, hi);
      } else {
        std::optional<BoundingBox> domain;
        for (std::size_t i = 0; i < forest.size(); ++i) {
          const std::optional<BoundingBox> b = forest.tree_domain(i);
          if (!b) continue;
          if (domain) domain->extend(*b);
          else domain = b;
        }
        if (!domain) throw Error(ErrorCode::kEmptyInput, "the model holds no points; pass --bounds");
        bounds = *domain;
      }
      std::vector<std::size_t> resolution;
      for (double r : parse_list(grid_resolution)) {
        if (!(r >= 1.0) || r != std::floor(r)) throw Error(ErrorCode::kUsage, "resolution must be positive integers");
        resolution.push_back(static_cast<std::size_t>(r));
      }
      const DensityGrid g = density_grid(forest, bounds, resolution);
      emit(grid_out, out, [&](std::ostream& os) { write_grid_csv(os, g); });
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::kUsage ? 2 : 1;
  }
  return 0;
}

}  // namespace mpf::cli
