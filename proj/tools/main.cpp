#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include "pnml/dataset.hpp"
#include "pnml/experiment.hpp"
#include "pnml/format.hpp"

namespace {

using pnml::experiment::ConfigError;
using pnml::experiment::ExperimentConfig;

pnml::experiment::GridSpec parse_grid(const std::string& text) {
  const auto first = text.find(':');
  const auto second = text.find(':', first == std::string::npos ? first : first + 1);
  pnml::experiment::GridSpec grid;
  const std::string count_text = second == std::string::npos ? "" : text.substr(second + 1);
  if (first == std::string::npos || second == std::string::npos ||
      !pnml::try_parse_double(text.substr(0, first), grid.lo) ||
      !pnml::try_parse_double(text.substr(first + 1, second - first - 1), grid.hi)) {
    throw ConfigError("--grid expects lo:hi:count, got \"" + text + "\"");
  }
  try {
    grid.count = std::stoi(count_text);
  } catch (const std::exception&) {
    throw ConfigError("--grid count is not an integer: \"" + count_text + "\"");
  }
  return grid;
}

double parse_double_or_throw(const std::string& key, const std::string& text) {
  double value = 0.0;
  if (!pnml::try_parse_double(text, value)) {
    throw ConfigError("config key \"" + key + "\": not a number: \"" + text + "\"");
  }
  return value;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string::npos ? comma : comma - start);
    values.push_back(parse_double_or_throw(key, piece));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& text) {
  std::vector<int> values;
  for (double v : parse_double_list(key, text)) {
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
      throw ConfigError("config key \"" + key + "\": not an integer list: \"" + text + "\"");
    }
    values.push_back(i);
  }
  return values;
}

using Setter = std::function<void(const std::string&)>;

// key=value file, UTF-8, one pair per line; '#' starts a comment. Values are
// applied before flag parsing, so command-line flags win.
void load_config_file(const std::string& path, const std::map<std::string, Setter>& setters) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config file " + path + ": cannot open");
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config file " + path + ":" + std::to_string(line_no) +
                        ": expected key=value, got \"" + line + "\"");
    }
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError("config file " + path + ":" + std::to_string(line_no) +
                        ": unknown key \"" + key + "\"");
    }
    it->second(value);
  }
}

// Options shared by the sweep subcommands; each keeps its own defaults.
struct SweepOptions {
  ExperimentConfig cfg;
  std::string grid_text;
  std::string train_file;
  std::string config_file;

  void attach(CLI::App& cmd) {
    cmd.add_option("--n-train", cfg.n_train, "Number of training points to draw")
        ->capture_default_str();
    cmd.add_option("--degrees", cfg.degrees, "Polynomial degrees")
        ->delimiter(',')
        ->capture_default_str();
    cmd.add_option("--lambdas", cfg.lambdas, "Ridge regularization values")
        ->delimiter(',')
        ->capture_default_str();
    cmd.add_option("--sigma2", cfg.sigma2, "Gaussian noise variance of the model class")
        ->capture_default_str();
    cmd.add_option("--seed", cfg.seed, "RNG seed for the training sample")
        ->capture_default_str();
    cmd.add_option("--grid", grid_text, "Test sweep as lo:hi:count (default -1:1:201)");
    cmd.add_option("--out-dir", cfg.out_dir, "Output directory")->capture_default_str();
    cmd.add_option("--label-coeffs", cfg.label_coeffs,
                   "Label polynomial coefficients, constant first")
        ->delimiter(',')
        ->capture_default_str();
    cmd.add_option("--noise-sigma", cfg.noise_sigma, "Gaussian label noise (0 disables)")
        ->capture_default_str();
    cmd.add_option("--train", train_file, "Read training samples from a t,y CSV instead");
    cmd.add_option("--config", config_file,
                   "key=value file with defaults for the flags above; flags win");
  }

  std::map<std::string, Setter> setters() {
    return {
        {"n-train", [this](const std::string& v) {
           cfg.n_train = static_cast<int>(parse_double_or_throw("n-train", v));
         }},
        {"degrees", [this](const std::string& v) { cfg.degrees = parse_int_list("degrees", v); }},
        {"lambdas",
         [this](const std::string& v) { cfg.lambdas = parse_double_list("lambdas", v); }},
        {"sigma2",
         [this](const std::string& v) { cfg.sigma2 = parse_double_or_throw("sigma2", v); }},
        {"seed", [this](const std::string& v) {
           try {
             cfg.seed = std::stoull(v);
           } catch (const std::exception&) {
             throw ConfigError("config key \"seed\": not an integer: \"" + v + "\"");
           }
         }},
        {"grid", [this](const std::string& v) { grid_text = v; }},
        {"out-dir", [this](const std::string& v) { cfg.out_dir = v; }},
        {"label-coeffs", [this](const std::string& v) {
           cfg.label_coeffs = parse_double_list("label-coeffs", v);
         }},
        {"noise-sigma", [this](const std::string& v) {
           cfg.noise_sigma = parse_double_or_throw("noise-sigma", v);
         }},
        {"train", [this](const std::string& v) { train_file = v; }},
    };
  }

  ExperimentConfig finalize() {
    if (!grid_text.empty()) cfg.grid = parse_grid(grid_text);
    if (!train_file.empty()) cfg.train_file = train_file;
    return cfg;
  }
};

// --config must act before flag parsing; fish it out of argv by hand.
std::string find_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return "";
}

std::string find_subcommand(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (!arg.empty() && arg[0] != '-') return arg;
    if (arg == "--config") ++i;  // skip its value
  }
  return "";
}

void report_sweep(const pnml::experiment::SweepResult& result) {
  std::cout << result.predictions_csv.string() << "\n"
            << result.regret_csv.string() << "\n"
            << result.train_csv.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pNML linear regression: predictions, regret and learnable-space experiments"};
  app.require_subcommand(1);

  auto* fig1 = app.add_subcommand(
      "fig1", "Regularization sweep: fixed degree, one run per lambda");
  SweepOptions fig1_opts{pnml::experiment::reg_sweep_defaults(), "", "", ""};
  fig1_opts.attach(*fig1);

  auto* fig2 = app.add_subcommand(
      "fig2", "Degree sweep: fixed lambda, one run per polynomial degree");
  SweepOptions fig2_opts{pnml::experiment::degree_sweep_defaults(), "", "", ""};
  fig2_opts.attach(*fig2);

  auto* fit = app.add_subcommand("fit", "Score a test CSV against a training CSV");
  ExperimentConfig fit_cfg = pnml::experiment::score_defaults();
  std::string fit_train;
  std::string fit_test;
  std::string fit_config;
  fit->add_option("--train", fit_train, "Training dataset CSV (x0..x{M-1},y)");
  fit->add_option("--test", fit_test, "Test dataset CSV, labels ignored");
  fit->add_option("--lambdas", fit_cfg.lambdas, "Ridge regularization (single value)")
      ->delimiter(',')
      ->capture_default_str();
  fit->add_option("--sigma2", fit_cfg.sigma2, "Gaussian noise variance")->capture_default_str();
  fit->add_option("--out-dir", fit_cfg.out_dir, "Output directory")->capture_default_str();
  fit->add_option("--config", fit_config,
                  "key=value file with defaults for the flags above; flags win");
  const std::map<std::string, Setter> fit_setters = {
      {"train", [&](const std::string& v) { fit_train = v; }},
      {"test", [&](const std::string& v) { fit_test = v; }},
      {"lambdas", [&](const std::string& v) { fit_cfg.lambdas = parse_double_list("lambdas", v); }},
      {"sigma2", [&](const std::string& v) { fit_cfg.sigma2 = parse_double_or_throw("sigma2", v); }},
      {"out-dir", [&](const std::string& v) { fit_cfg.out_dir = v; }},
  };

  try {
    const std::string config_path = find_config_path(argc, argv);
    if (!config_path.empty()) {
      const std::string sub = find_subcommand(argc, argv);
      if (sub == "fig1") {
        load_config_file(config_path, fig1_opts.setters());
      } else if (sub == "fig2") {
        load_config_file(config_path, fig2_opts.setters());
      } else if (sub == "fit") {
        load_config_file(config_path, fit_setters);
      }
    }

    app.parse(argc, argv);
    if (fig1->parsed()) {
      report_sweep(pnml::experiment::run_reg_sweep(fig1_opts.finalize()));
    } else if (fig2->parsed()) {
      report_sweep(pnml::experiment::run_degree_sweep(fig2_opts.finalize()));
    } else if (fit->parsed()) {
      if (fit_train.empty() || fit_test.empty()) {
        throw ConfigError("fit requires --train and --test (flags or config file)");
      }
      const auto result = pnml::experiment::run_score(fit_cfg, fit_train, fit_test);
      std::cout << result.scores_csv.string() << "\n";
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const pnml::experiment::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const pnml::CsvError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
