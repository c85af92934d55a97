#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "flexbound/dataset.hpp"
#include "flexbound/decision.hpp"
#include "flexbound/errors.hpp"
#include "flexbound/imputation.hpp"
#include "flexbound/json_util.hpp"
#include "flexbound/model_io.hpp"
#include "flexbound/pipeline.hpp"
#include "flexbound/rationality.hpp"
#include "flexbound/rng.hpp"
#include "flexbound/signal.hpp"

namespace fb = flexbound;
using nlohmann::json;

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fb::DataError("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw fb::DataError(path + ": invalid JSON: " + e.what());
  }
}

json read_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fb::ConfigError("cannot open config file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw fb::ConfigError(path + ": invalid JSON: " + e.what());
  }
}

void write_json_file(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fb::DataError("cannot write file: " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw fb::DataError("write failed: " + path.string());
}

std::filesystem::path ensure_out_dir(const std::string& out) {
  std::filesystem::path dir = out.empty() ? "." : out;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw fb::DataError("cannot create output directory: " + dir.string());
  return dir;
}

fb::TrainConfig train_config_from(const json& j, fb::TrainConfig defaults) {
  defaults.learning_rate = fb::get_or(j, "learning_rate", defaults.learning_rate);
  defaults.epochs = fb::get_or(j, "epochs", defaults.epochs);
  defaults.batch_size = fb::get_or(j, "batch_size", defaults.batch_size);
  defaults.init_scale = fb::get_or(j, "init_scale", defaults.init_scale);
  defaults.early_stop_tol = fb::get_or(j, "early_stop_tol", defaults.early_stop_tol);
  return defaults;
}

fb::ga::GaConfig ga_config_from(const json& j, fb::ga::GaConfig defaults) {
  defaults.population_size = fb::get_or(j, "population_size", defaults.population_size);
  defaults.generations = fb::get_or(j, "generations", defaults.generations);
  defaults.crossover_rate = fb::get_or(j, "crossover_rate", defaults.crossover_rate);
  defaults.mutation_rate = fb::get_or(j, "mutation_rate", defaults.mutation_rate);
  defaults.mutation_sigma = fb::get_or(j, "mutation_sigma", defaults.mutation_sigma);
  defaults.tournament_size = fb::get_or(j, "tournament_size", defaults.tournament_size);
  defaults.elitism_count = fb::get_or(j, "elitism_count", defaults.elitism_count);
  defaults.check_operators();
  return defaults;
}

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON configuration file");
  cmd->add_option("--out", args.out_dir, "Output directory (default: current)");
  cmd->add_option("--seed", args.seed, "Seed override");
}

int cmd_train(const std::string& data, const std::string& target, const CommonArgs& args) {
  json cj = read_config(args.config_path);
  if (args.seed) cj["seed"] = *args.seed;
  const fb::PipelineConfig cfg = fb::PipelineConfig::from_json(cj);
  const fb::PipelineResult res = fb::run_pipeline(data, cfg, target);

  const auto dir = ensure_out_dir(args.out_dir);
  write_json_file(res.report.to_json(), dir / "report.json");
  fb::save_model(res.model, (dir / "model.json").string());

  std::cout << "mode=" << res.report.mode << " test_mse=" << res.report.test_mse;
  if (res.report.test_accuracy) std::cout << " test_accuracy=" << *res.report.test_accuracy;
  std::cout << "\nwrote " << (dir / "report.json").string() << " and "
            << (dir / "model.json").string() << "\n";
  return 0;
}

int cmd_impute(const std::string& data, const CommonArgs& args) {
  json cj = read_config(args.config_path);
  fb::check_keys(cj, {"method", "missing_tokens", "correlation", "ga", "seed"}, "config");
  const std::uint64_t seed = args.seed ? *args.seed : fb::get_or<std::uint64_t>(cj, "seed", 0);

  const fb::Dataset d = fb::load_csv(data);
  const auto method =
      fb::parse_impute_method(fb::get_or<std::string>(cj, "method", "correlation_machine"));

  fb::ImputerSpec spec;
  spec.method = method;
  std::optional<fb::TrainReport> train_report;
  if (method == fb::ImputeMethod::correlation_machine) {
    const json cc = cj.contains("correlation") ? cj.at("correlation") : json::object();
    fb::TrainConfig tc = train_config_from(cc, fb::TrainConfig{});
    tc.seed = fb::derive_seed(seed, 1);
    fb::ga::GaConfig gc = ga_config_from(cj.contains("ga") ? cj.at("ga") : json::object(),
                                         fb::ga::GaConfig{});
    gc.seed = fb::derive_seed(seed, 2);
    auto [trained_spec, rep] =
        fb::make_correlation_imputer(d, fb::get_or<fb::Index>(cc, "hidden_size", 0), tc, gc);
    spec = std::move(trained_spec);
    train_report = std::move(rep);
  }

  const fb::ImputationResult result = fb::impute_dataset(d, spec);
  const fb::InformationPowerReport info = fb::information_power_ratio(d);

  const auto dir = ensure_out_dir(args.out_dir);
  fb::write_csv(result.completed, (dir / "imputed.csv").string());

  json report;
  report["method"] = fb::to_string(method);
  report["seed"] = seed;
  report["filled_cells"] = json::array();
  for (const fb::FilledCell& f : result.filled_cells) {
    report["filled_cells"].push_back({{"row", f.row}, {"col", f.col}, {"value", f.value}});
  }
  report["row_errors"] = json::array();
  for (const fb::RowError& e : result.row_errors) {
    report["row_errors"].push_back({{"row", e.row}, {"error", e.error}});
  }
  report["information_power"] = {{"observed_power", info.observed_power},
                                 {"missing_power", info.missing_power},
                                 {"ratio", fb::json_ratio(info.ratio)}};
  if (train_report) {
    report["correlation_train"] = {{"epochs_run", train_report->epochs_run},
                                   {"final_loss", train_report->final_loss}};
  }
  write_json_file(report, dir / "impute_report.json");

  std::cout << "filled " << result.filled_cells.size() << " cells with "
            << fb::to_string(method) << "\nwrote " << (dir / "imputed.csv").string()
            << " and " << (dir / "impute_report.json").string() << "\n";
  return 0;
}

int cmd_decide(const std::string& spec_path, const CommonArgs& args) {
  const json sj = read_json_file(spec_path);
  fb::check_keys(sj, {"options"}, "utility spec");
  if (!sj.contains("options") || !sj.at("options").is_array()) {
    throw fb::DataError("utility spec: missing 'options' array");
  }
  fb::UtilitySpec spec;
  for (const json& o : sj.at("options")) {
    fb::check_keys(o, {"label", "impact", "probability"}, "option");
    fb::UtilityOption opt;
    opt.label = fb::get_or<std::string>(o, "label", "");
    if (!o.contains("impact") || !o.contains("probability")) {
      throw fb::DataError("option '" + opt.label + "': needs impact and probability");
    }
    opt.impact = o.at("impact").get<double>();
    opt.probability = o.at("probability").get<double>();
    spec.options.push_back(std::move(opt));
  }
  const fb::DecisionOutcome outcome = fb::choose_rational(spec);

  json out;
  out["chosen_label"] = outcome.chosen_label;
  out["chosen_index"] = outcome.chosen_index;
  out["expected_utilities"] = outcome.expected_utilities;
  const auto dir = ensure_out_dir(args.out_dir);
  write_json_file(out, dir / "decision.json");
  std::cout << "chose '" << outcome.chosen_label << "'\nwrote "
            << (dir / "decision.json").string() << "\n";
  return 0;
}

int cmd_analyze_rationality(const std::string& process_path, const CommonArgs& args) {
  const json pj = read_json_file(process_path);
  fb::check_keys(pj, {"name", "threshold", "steps"}, "process");
  fb::DecisionProcess process;
  process.name = fb::get_or<std::string>(pj, "name", "");
  if (!pj.contains("steps") || !pj.at("steps").is_array()) {
    throw fb::DataError("process: missing 'steps' array");
  }
  for (const json& s : pj.at("steps")) {
    fb::check_keys(s, {"label", "kind", "power"}, "step");
    fb::ProcessStep step;
    step.label = fb::get_or<std::string>(s, "label", "");
    step.kind = fb::parse_step_kind(fb::get_or<std::string>(s, "kind", ""));
    if (!s.contains("power")) throw fb::DataError("step '" + step.label + "': missing power");
    step.power = s.at("power").get<double>();
    process.steps.push_back(std::move(step));
  }
  const double threshold = fb::get_or(pj, "threshold", 1.0);
  const fb::RationalityReport report = fb::assess_satisficing(process, threshold);

  json out;
  out["name"] = process.name;
  out["rational_power"] = report.rational_power;
  out["irrational_power"] = report.irrational_power;
  out["ratio"] = fb::json_ratio(report.ratio);
  out["threshold"] = report.threshold;
  out["marginalizable"] = report.marginalizable;
  out["verdict"] = fb::to_string(report.verdict);
  const auto dir = ensure_out_dir(args.out_dir);
  write_json_file(out, dir / "rationality.json");
  std::cout << "verdict=" << fb::to_string(report.verdict) << "\nwrote "
            << (dir / "rationality.json").string() << "\n";
  return 0;
}

int cmd_transform(const std::string& data, const CommonArgs& args) {
  const json cj = read_config(args.config_path);
  fb::check_keys(cj, {"domain", "window_size", "hop"}, "config");
  const fb::Domain domain = fb::parse_domain(fb::get_or<std::string>(cj, "domain", "time"));
  fb::FeatureParams params;
  params.window_size = fb::get_or(cj, "window_size", params.window_size);
  params.hop = fb::get_or(cj, "hop", params.hop);

  const fb::Dataset d = fb::load_csv(data);
  if (!d.fully_observed()) {
    throw fb::DataError("transform: dataset has missing cells, impute first");
  }
  const fb::NormalizationParams nparams = fb::fit_normalization(d);
  const fb::Dataset dn = fb::normalize(d, nparams);
  const fb::Index flen = fb::feature_length(d.n_cols(), domain, params);
  fb::Mat features(d.n_rows(), flen);
  for (fb::Index r = 0; r < d.n_rows(); ++r) {
    features.row(r) = fb::extract_features(dn.values.row(r), domain, params);
  }
  std::vector<std::string> names;
  names.reserve(flen);
  for (fb::Index c = 0; c < flen; ++c) names.push_back("f" + std::to_string(c));

  const auto dir = ensure_out_dir(args.out_dir);
  fb::write_csv(fb::Dataset::from_matrix(features, names), (dir / "features.csv").string());
  std::cout << "wrote " << (dir / "features.csv").string() << " (" << d.n_rows() << " x "
            << flen << ", " << fb::to_string(domain) << ")\n";
  return 0;
}

int cmd_compare(const std::string& data, const std::string& target, const CommonArgs& args) {
  json cj = read_config(args.config_path);
  fb::check_keys(cj, {"bounded", "flexibly_bounded"}, "config");
  if (!cj.contains("bounded") || !cj.contains("flexibly_bounded")) {
    throw fb::ConfigError("compare config needs 'bounded' and 'flexibly_bounded' sections");
  }
  json bj = cj.at("bounded");
  json fj = cj.at("flexibly_bounded");
  bj["mode"] = "bounded";
  fj["mode"] = "flexibly_bounded";
  if (args.seed) {
    bj["seed"] = *args.seed;
    fj["seed"] = *args.seed;
  }
  const fb::PipelineConfig bounded = fb::PipelineConfig::from_json(bj);
  const fb::PipelineConfig flexible = fb::PipelineConfig::from_json(fj);
  const json report = fb::compare_modes(data, bounded, flexible, target);

  const auto dir = ensure_out_dir(args.out_dir);
  write_json_file(report, dir / "compare.json");
  std::cout << "metric=" << report.at("metric").get<std::string>()
            << " delta=" << report.at("delta").get<double>() << " winner="
            << report.at("winner").get<std::string>() << "\nwrote "
            << (dir / "compare.json").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flexbound: decision engine with signal-domain features, "
               "correlation-machine imputation and rationality analysis"};
  app.require_subcommand(1);

  CommonArgs train_args, impute_args, decide_args, rationality_args, transform_args,
      compare_args;
  std::string train_data, train_target;
  std::string impute_data;
  std::string decide_spec;
  std::string process_path;
  std::string transform_data;
  std::string compare_data, compare_target;

  CLI::App* train = app.add_subcommand("train", "Run the full pipeline and save the model");
  train->add_option("--data", train_data, "Input CSV")->required();
  train->add_option("--target", train_target, "Target column name")->required();
  add_common(train, train_args);

  CLI::App* impute = app.add_subcommand("impute", "Complete missing cells in a CSV");
  impute->add_option("--data", impute_data, "Input CSV")->required();
  add_common(impute, impute_args);

  CLI::App* decide = app.add_subcommand("decide", "Pick the option with maximal expected utility");
  decide->add_option("--spec", decide_spec, "Utility spec JSON")->required();
  add_common(decide, decide_args);

  CLI::App* rationality =
      app.add_subcommand("analyze-rationality", "Judge whether a process satisfices");
  rationality->add_option("--process", process_path, "Decision process JSON")->required();
  add_common(rationality, rationality_args);

  CLI::App* transform = app.add_subcommand("transform", "Extract feature matrices from a CSV");
  transform->add_option("--data", transform_data, "Input CSV")->required();
  add_common(transform, transform_args);

  CLI::App* compare =
      app.add_subcommand("compare", "Run bounded and flexibly-bounded pipelines side by side");
  compare->add_option("--data", compare_data, "Input CSV")->required();
  compare->add_option("--target", compare_target, "Target column name")->required();
  add_common(compare, compare_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (train->parsed()) return cmd_train(train_data, train_target, train_args);
    if (impute->parsed()) return cmd_impute(impute_data, impute_args);
    if (decide->parsed()) return cmd_decide(decide_spec, decide_args);
    if (rationality->parsed()) return cmd_analyze_rationality(process_path, rationality_args);
    if (transform->parsed()) return cmd_transform(transform_data, transform_args);
    if (compare->parsed()) return cmd_compare(compare_data, compare_target, compare_args);
  } catch (const fb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
