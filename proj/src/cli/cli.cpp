#include "doa/cli/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "doa/apps/training.hpp"
#include "doa/graph/traversal.hpp"
#include "doa/sim/run.hpp"

namespace doa::cli {

namespace {

using apps::AppId;
using apps::Paradigm;
using apps::Stage;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class E, std::size_t N>
std::vector<std::string> names(const std::array<E, N>& all) {
  std::vector<std::string> out;
  for (E e : all) out.emplace_back(apps::to_string(e));
  return out;
}

struct ScenarioFlags {
  Tick ticks = 100;
  std::uint64_t seed = 1;
  std::string params_path;

  void attach(CLI::App* cmd) {
    cmd->add_option("--ticks", ticks, "Number of simulated ticks")->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", seed, "Scenario seed");
    cmd->add_option("--params", params_path, "JSON file with generator parameter overrides")
        ->check(CLI::ExistingFile);
  }

  sim::Scenario scenario(AppId app) const {
    Document overrides = Document::object();
    if (!params_path.empty()) {
      std::ifstream in(params_path);
      try {
        overrides = Document::parse(in);
      } catch (const std::exception& e) {
        throw UsageError(params_path + ": " + e.what());
      }
    }
    try {
      return sim::Scenario::make(app, seed, ticks, overrides);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path);
}

apps::Models models_from_file(const std::string& path) {
  const Document doc = ml::load_model(path);
  apps::Models m;
  const auto type = doc.value("type", "");
  if (type == "linear") {
    m.wait_time = ml::linear_from_document(doc);
  } else if (type == "tree") {
    m.claim_router = ml::tree_from_document(doc);
  } else {
    throw std::runtime_error(path + ": model type '" + type + "' is not loadable by any app");
  }
  return m;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dataflow-oriented architecture toolkit", "doaflow"};
  app.require_subcommand(1);
  const auto app_names = names(apps::kAllApps);
  const auto stage_names = names(apps::kAllStages);
  const auto paradigm_names = names(apps::kAllParadigms);

  std::string app_name, paradigm_name, stage_name, stage_b, out_path, report_path, model_path;
  ScenarioFlags flags;

  auto* run_cmd = app.add_subcommand("run", "Run one application version on a scenario");
  run_cmd->add_option("app", app_name)->required()->check(CLI::IsMember(app_names));
  run_cmd->add_option("paradigm", paradigm_name)->required()->check(CLI::IsMember(paradigm_names));
  run_cmd->add_option("stage", stage_name)->required()->check(CLI::IsMember(stage_names));
  run_cmd->add_option("--report", report_path, "Also write the report to this file");
  run_cmd->add_option("--model", model_path, "Serialized model to load at an ml stage")
      ->check(CLI::ExistingFile);
  flags.attach(run_cmd);

  auto* graph_cmd = app.add_subcommand("graph", "Emit the FBP graph of a version as DOT");
  graph_cmd->add_option("app", app_name)->required()->check(CLI::IsMember(app_names));
  graph_cmd->add_option("stage", stage_name)->required()->check(CLI::IsMember(stage_names));
  graph_cmd->add_option("--out", out_path, "Write DOT to this file");

  auto* collect_cmd = app.add_subcommand("collect", "Run the data stage and write the dataset");
  collect_cmd->add_option("app", app_name)->required()->check(CLI::IsMember(app_names));
  collect_cmd->add_option("--out", out_path, "Dataset path (JSON Lines)")->required();
  collect_cmd->add_option("--paradigm", paradigm_name, "fbp (default) or soa")
      ->check(CLI::IsMember(paradigm_names));
  flags.attach(collect_cmd);

  auto* train_cmd = app.add_subcommand("train", "Fit the ml-stage model and serialize it");
  train_cmd->add_option("app", app_name)->required()->check(CLI::IsMember(app_names));
  train_cmd->add_option("--out", out_path, "Model path")->required();
  train_cmd->add_option("--paradigm", paradigm_name, "fbp (default) or soa")
      ->check(CLI::IsMember(paradigm_names));
  flags.attach(train_cmd);

  auto* diff_cmd = app.add_subcommand("diff", "Affected components between two stages");
  diff_cmd->add_option("app", app_name)->required()->check(CLI::IsMember(app_names));
  diff_cmd->add_option("stage_a", stage_name)->required()->check(CLI::IsMember(stage_names));
  diff_cmd->add_option("stage_b", stage_b)->required()->check(CLI::IsMember(stage_names));
  diff_cmd->add_option("--paradigm", paradigm_name)->required()->check(
      CLI::IsMember(paradigm_names));

  auto* equiv_cmd = app.add_subcommand("equiv", "Compare FBP and SOA min-stage outputs");
  equiv_cmd->add_option("app", app_name)->required()->check(CLI::IsMember(app_names));
  flags.attach(equiv_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    const AppId id = *apps::parse_app(app_name);
    const Paradigm paradigm = paradigm_name.empty() ? Paradigm::Fbp : *apps::parse_paradigm(paradigm_name);

    if (*run_cmd) {
      const Stage stage = *apps::parse_stage(stage_name);
      std::optional<apps::Models> models;
      if (!model_path.empty()) models = models_from_file(model_path);
      const auto result = sim::run_version(flags.scenario(id), paradigm, stage, models);
      const std::string text = result.report.dump();
      out << text;
      if (!report_path.empty()) write_file(report_path, text);
      return kExitOk;
    }
    if (*graph_cmd) {
      const std::string dot = export_dot(apps::build_fbp(id, *apps::parse_stage(stage_name)).graph);
      if (out_path.empty()) {
        out << dot;
      } else {
        write_file(out_path, dot);
      }
      return kExitOk;
    }
    if (*collect_cmd || *train_cmd) {
      if (!apps::has_offline_dataset(id)) {
        throw UsageError(app_name + " keeps its data online and writes no offline dataset");
      }
      const auto scenario = flags.scenario(id);
      if (*collect_cmd) {
        const auto result = sim::run_version(scenario, paradigm, Stage::Data);
        const std::size_t n = write_dataset(result.dataset, out_path);
        out << "wrote " << n << " rows to " << out_path << '\n';
      } else {
        const apps::Models m = sim::train_models(scenario, paradigm);
        ml::save_model(m.wait_time ? ml::to_document(*m.wait_time) : ml::to_document(*m.claim_router),
                       out_path);
        out << "wrote model to " << out_path << '\n';
      }
      return kExitOk;
    }
    if (*diff_cmd) {
      const auto a = apps::manifest(id, paradigm, *apps::parse_stage(stage_name));
      const auto b = apps::manifest(id, paradigm, *apps::parse_stage(stage_b));
      out << a.version_key << " -> " << b.version_key << '\n';
      out << metrics::format_diff(metrics::diff(a, b));
      return kExitOk;
    }
    if (*equiv_cmd) {
      const auto scenario = flags.scenario(id);
      const auto fbp = sim::run_version(scenario, Paradigm::Fbp, Stage::Min).report;
      const auto soa = sim::run_version(scenario, Paradigm::Soa, Stage::Min).report;
      out << "fbp " << fbp.digest << '\n' << "soa " << soa.digest << '\n';
      if (fbp.digest == soa.digest) {
        out << "MATCH\n";
        return kExitOk;
      }
      out << "MISMATCH\n";
      return kExitMismatch;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace doa::cli
