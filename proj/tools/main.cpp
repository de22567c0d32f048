// cyclescope command line: lattice enumeration, Nash solving, session
// simulation, and the angular-momentum cycle analysis pipeline.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cyclescope/cycle_metrics.hpp"
#include "cyclescope/errors.hpp"
#include "cyclescope/game_model.hpp"
#include "cyclescope/ingest.hpp"
#include "cyclescope/report.hpp"
#include "cyclescope/simulator.hpp"
#include "cyclescope/state_space.hpp"
#include "cyclescope/textio.hpp"

namespace fs = std::filesystem;
using namespace cyclescope;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitParse = 3;
constexpr int kExitIo = 4;

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  return out;
}

void run_lattice(int n, bool csv, const std::string& out_file) {
  const auto states = enumerate_lattice(n);
  std::cout << "lattice: N=" << n << " states=" << states.size() << "\n";
  if (!out_file.empty()) {
    auto out = open_output(out_file);
    write_lattice_csv(out, states);
    out.flush();
    if (!out) throw IoError("write failed: " + out_file);
  } else if (csv) {
    write_lattice_csv(std::cout, states);
  }
}

void run_nash(const std::string& game_arg, const std::vector<double>& payoffs,
              const std::string& pay_scale) {
  GameSpec spec;
  if (game_arg == "custom") {
    if (payoffs.size() != 4) {
      throw ConfigError("--game custom requires --payoffs a b c d");
    }
    const PayScale scale = pay_scale == "high" ? PayScale::high : PayScale::low;
    spec = GameSpec::custom(payoffs[0], payoffs[1], payoffs[2], payoffs[3], scale);
  } else {
    int id = -1;
    try {
      id = std::stoi(game_arg);
    } catch (const std::exception&) {
      throw ConfigError("--game must be 0..3 or custom");
    }
    spec = GameSpec::from_id(id);
  }
  std::cout << "game " << game_arg << " payoffs: a=" << format_double(spec.a)
            << " b=" << format_double(spec.b) << " c=" << format_double(spec.c)
            << " d=" << format_double(spec.d) << "\n";
  const PayoffMatrix matrix = build_rpsd_matrix(spec);
  const auto equilibria = find_symmetric_nash(matrix);
  std::cout << "equilibria: " << equilibria.size() << "\n";
  for (const auto& sigma : equilibria) {
    std::cout << "equilibrium: " << format_double(sigma[0]) << ' '
              << format_double(sigma[1]) << ' ' << format_double(sigma[2]) << ' '
              << format_double(sigma[3])
              << " payoff=" << format_double(profile_payoff(matrix, sigma, sigma))
              << "\n";
  }
}

void run_simulate(const std::string& config_file, const std::string& out_flag,
                  std::optional<std::uint64_t> seed) {
  RunConfig cfg =
      config_file.empty() ? default_run_config() : load_run_config(config_file);
  if (cfg.mode != RunConfig::Mode::simulate) {
    throw ConfigError("simulate expects a simulate-mode config");
  }
  if (seed) {
    cfg.seed = *seed;
    for (auto& game : cfg.games) game.sim.seed = *seed;
  }
  const fs::path out_dir = !out_flag.empty() ? fs::path(out_flag) : fs::path(cfg.out_dir);
  if (out_dir.empty()) {
    throw ConfigError("no output directory (give --out or \"out\" in the config)");
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create directory " + out_dir.string() + ": " + ec.message());
  for (const auto& game : cfg.games) {
    const auto trajectories = run_sessions(game.sim, game.game);
    const fs::path path = out_dir / ("game" + std::to_string(game.game.game_id) + ".csv");
    auto out = open_output(path);
    write_states_csv(out, trajectories);
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
    std::cout << "simulated game " << game.game.game_id << ": " << game.sim.sessions
              << " sessions x " << game.sim.periods << " periods -> " << path.string()
              << "\n";
  }
}

int game_id_from_filename(const fs::path& path) {
  const std::string stem = path.stem().string();
  if (stem.rfind("game", 0) == 0 && stem.size() > 4 &&
      std::isdigit(static_cast<unsigned char>(stem[4]))) {
    return stem[4] - '0';
  }
  return -1;
}

std::vector<Trajectory> load_input(const InputSpec& input) {
  std::ifstream in(input.path);
  if (!in) throw IoError("cannot open input file: " + input.path.string());
  return input.format == InputSpec::Format::actions
             ? parse_actions(in, input.game_id)
             : parse_states(in, input.game_id);
}

std::vector<InputSpec> inputs_from_paths(const std::vector<std::string>& paths,
                                         InputSpec::Format format) {
  std::vector<InputSpec> inputs;
  for (const auto& raw : paths) {
    const fs::path path(raw);
    if (fs::is_directory(path)) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(path)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv" &&
            game_id_from_filename(entry.path()) >= 0) {
          files.push_back(entry.path());
        }
      }
      std::sort(files.begin(), files.end());
      if (files.empty()) {
        throw ConfigError("no game<id>*.csv files found in " + path.string());
      }
      for (const auto& file : files) {
        inputs.push_back({game_id_from_filename(file), file, format});
      }
    } else {
      const int game_id = game_id_from_filename(path);
      if (game_id < 0) {
        throw ConfigError("cannot infer game id from filename " + path.string() +
                          " (expected game<id>*.csv); use a config file instead");
      }
      inputs.push_back({game_id, path, format});
    }
  }
  return inputs;
}

void run_analyze(const std::vector<std::string>& in_paths, const std::string& config_file,
                 const std::string& reference_mode, const std::string& out_flag,
                 const std::string& format_name, double rounding_flag, int boundary_flag) {
  RunConfig cfg;
  if (!config_file.empty()) {
    cfg = load_run_config(config_file);
    if (cfg.mode != RunConfig::Mode::ingest) {
      throw ConfigError("analyze --config expects an ingest-mode config");
    }
  } else {
    cfg.mode = RunConfig::Mode::ingest;
  }
  if (!in_paths.empty()) {
    const auto format = format_name == "actions" ? InputSpec::Format::actions
                                                 : InputSpec::Format::states;
    const auto inferred = inputs_from_paths(in_paths, format);
    cfg.inputs.insert(cfg.inputs.end(), inferred.begin(), inferred.end());
  }
  if (cfg.inputs.empty()) throw ConfigError("analyze: no inputs given (--in or --config)");
  const fs::path out_dir = !out_flag.empty() ? fs::path(out_flag) : fs::path(cfg.out_dir);
  if (out_dir.empty()) {
    throw ConfigError("no output directory (give --out or \"out\" in the config)");
  }
  if (reference_mode == "sweep") cfg.sweep = true;
  if (rounding_flag > 0.0) cfg.rounding = rounding_flag;
  if (boundary_flag > 0) cfg.boundary_period = boundary_flag;

  std::vector<Trajectory> trajectories;
  for (const auto& input : cfg.inputs) {
    auto parsed = load_input(input);
    trajectories.insert(trajectories.end(), std::make_move_iterator(parsed.begin()),
                        std::make_move_iterator(parsed.end()));
  }

  const ReportBundle bundle = analyze(trajectories, cfg.reference, cfg.boundary_period);
  emit(bundle, trajectories, out_dir, cfg.rounding);
  const VerdictGrid grid = verdicts(bundle);
  std::cout << "analyze: " << trajectories.size() << " sessions -> " << out_dir.string()
            << "\n";
  std::cout << "verdicts: " << grid.matches << "/" << grid.cells.size() << " match\n";
  for (const auto& note : bundle.notes) std::cout << "note: " << note << "\n";

  if (cfg.sweep) {
    const int n = trajectories.front().population();
    const auto references = enumerate_lattice(n);
    const auto summary = reference_sweep_summary(trajectories, references);
    const fs::path path = out_dir / "reference_sweep.csv";
    auto out = open_output(path);
    write_sweep_csv(out, summary);
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
    std::cout << "reference sweep over " << references.size() << " states -> "
              << path.string() << "\n";
  }
}

void run_report(const fs::path& in_dir) {
  const fs::path path = in_dir / "report.json";
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(1, std::string("report.json: ") + e.what());
  }

  std::cout << "mean L per setting and game (x 1e-3)\n";
  std::cout << "  k game      Lx      Ly      Lz   marks\n";
  for (const auto& row : doc.at("table3")) {
    char line[160];
    std::snprintf(line, sizeof(line), "  %d %4d %7.1f %7.1f %7.1f   %s %s %s",
                  row.at("k").get<int>(), row.at("game").get<int>(),
                  row.at("L").at(0).get<double>() * 1e3,
                  row.at("L").at(1).get<double>() * 1e3,
                  row.at("L").at(2).get<double>() * 1e3,
                  row.at("mark").at(0).get<std::string>().c_str(),
                  row.at("mark").at(1).get<std::string>().c_str(),
                  row.at("mark").at(2).get<std::string>().c_str());
    std::cout << line << "\n";
  }
  std::cout << "cycle strength |L| (x 1e-3):";
  for (const auto& v : doc.at("table4").at("strength")) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), " %.1f", v.get<double>() * 1e3);
    std::cout << buf;
  }
  std::cout << "\npersistence (first/second half means x 1e-3)\n";
  for (const auto& row : doc.at("table5")) {
    char line[192];
    std::snprintf(line, sizeof(line),
                  "  game %d: %.1f -> %.1f (delta %.1f, p=%.3g, n=(%d, %d))",
                  row.at("game").get<int>(), row.at("first_mean").get<double>() * 1e3,
                  row.at("second_mean").get<double>() * 1e3,
                  row.at("delta").get<double>() * 1e3, row.at("p").get<double>(),
                  row.at("n1").get<int>(), row.at("n2").get<int>());
    std::cout << line << "\n";
  }
  const auto& verdict_doc = doc.at("verdicts");
  std::cout << "verdicts: " << verdict_doc.at("matches").get<int>() << "/"
            << verdict_doc.at("cells").size() << " match\n";
  for (const auto& note : doc.at("notes")) {
    std::cout << "note: " << note.get<std::string>() << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"angular-momentum cycle detection for RPSD game trajectories"};
  app.require_subcommand(1);

  auto* lattice_cmd = app.add_subcommand("lattice", "enumerate the social-state lattice");
  int lattice_n = 12;
  bool lattice_csv = false;
  std::string lattice_out;
  lattice_cmd->add_option("--n", lattice_n, "population size")->required();
  lattice_cmd->add_flag("--csv", lattice_csv, "write the state CSV to stdout");
  lattice_cmd->add_option("--out", lattice_out, "write the state CSV to a file");

  auto* nash_cmd = app.add_subcommand("nash", "symmetric Nash equilibria of a game");
  std::string nash_game = "0";
  std::vector<double> nash_payoffs;
  std::string nash_scale = "low";
  nash_cmd->add_option("--game", nash_game, "game id 0..3 or custom")->required();
  nash_cmd->add_option("--payoffs", nash_payoffs, "a b c d for --game custom")
      ->expected(4);
  nash_cmd->add_option("--pay-scale", nash_scale, "low or high (custom games)")
      ->check(CLI::IsMember({"low", "high"}));

  auto* sim_cmd = app.add_subcommand("simulate", "generate session trajectories");
  std::string sim_config;
  std::string sim_out;
  std::optional<std::uint64_t> sim_seed;
  sim_cmd->add_option("--config", sim_config, "JSON run configuration");
  sim_cmd->add_option("--out", sim_out, "output directory");
  sim_cmd->add_option("--seed", sim_seed, "override the configured seed");

  auto* analyze_cmd = app.add_subcommand("analyze", "compute the cycle report");
  std::vector<std::string> analyze_in;
  std::string analyze_config;
  std::string analyze_reference = "default";
  std::string analyze_out;
  std::string analyze_format = "states";
  double analyze_rounding = 0.0;
  int analyze_boundary = 0;
  analyze_cmd->add_option("--in", analyze_in, "input directory or game<id>*.csv files");
  analyze_cmd->add_option("--config", analyze_config, "ingest-mode JSON configuration");
  analyze_cmd->add_option("--reference", analyze_reference, "default or sweep")
      ->check(CLI::IsMember({"default", "sweep"}));
  analyze_cmd->add_option("--out", analyze_out, "output directory");
  analyze_cmd->add_option("--format", analyze_format, "states or actions")
      ->check(CLI::IsMember({"states", "actions"}));
  analyze_cmd->add_option("--rounding", analyze_rounding, "table rounding quantum");
  analyze_cmd->add_option("--boundary", analyze_boundary, "persistence split period");

  auto* report_cmd = app.add_subcommand("report", "print a report written by analyze");
  std::string report_in;
  report_cmd->add_option("--in", report_in, "directory containing report.json")->required();

  try {
    app.parse(argc, argv);
    if (lattice_cmd->parsed()) run_lattice(lattice_n, lattice_csv, lattice_out);
    if (nash_cmd->parsed()) run_nash(nash_game, nash_payoffs, nash_scale);
    if (sim_cmd->parsed()) run_simulate(sim_config, sim_out, sim_seed);
    if (analyze_cmd->parsed()) {
      run_analyze(analyze_in, analyze_config, analyze_reference, analyze_out,
                  analyze_format, analyze_rounding, analyze_boundary);
    }
    if (report_cmd->parsed()) run_report(report_in);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
