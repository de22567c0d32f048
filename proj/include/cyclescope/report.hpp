#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cyclescope/cycle_metrics.hpp"
#include "cyclescope/game_model.hpp"
#include "cyclescope/simulator.hpp"
#include "cyclescope/stats.hpp"

namespace cyclescope {

// Canonical per-transition rotation record. Every setting's (Lx, Ly, Lz)
// sample is read out of the stored bivector, so the four settings can never
// disagree about one transition.
struct TransitionRecord {
  std::string session_id;
  int t = 0;
  Bivector6 b;
};

struct Table3Row {
  int k = 1;
  int game_id = 0;
  MeanL mean;
  std::array<double, 3> p{1.0, 1.0, 1.0};
  std::array<stats::Mark, 3> mark{};
};

struct PairComparison {
  int game_row = 0;
  int game_col = 0;
  std::array<double, 3> z{};
  std::array<double, 3> p{1.0, 1.0, 1.0};
  std::array<stats::Mark, 3> mark{};
  std::array<char, 3> sign{'+', '+', '+'};
};

// Predicted strength order for one treatment pair (larger > smaller).
struct ArrowCheck {
  int larger = 0;
  int smaller = 0;
  bool holds = false;
};

struct Table4 {
  std::array<double, 4> strength{};        // |mean L| per game, k=1
  std::vector<PairComparison> comparisons; // ordered pairs, row < col
  std::array<ArrowCheck, 4> arrows{};      // 1>0, 1>3, 0>2, 3>2
};

struct Table5Row {
  int game_id = 0;
  PersistenceReport report;
  double secondary_first = 0.0;   // (lx+ly+lz)/sqrt(3) means per half
  double secondary_second = 0.0;
};

struct SessionSummary {
  std::string session_id;
  int game_id = 0;
  std::size_t periods = 0;
  double p_d = 0.0;  // average play of Dumb
  MeanL k1_mean;
};

struct PdRegression {
  char component = 'x';
  double slope = 0.0;
  double t = 0.0;
  double p = 1.0;
  std::size_t n = 0;
};

struct ReportBundle {
  std::array<double, 4> reference = kCentroid;
  int boundary_period = 0;
  std::array<std::vector<TransitionRecord>, 4> transitions;  // by game id
  std::vector<Table3Row> table3;                             // 16 rows, k-major
  Table4 table4;
  std::array<Table5Row, 4> table5;
  std::vector<SessionSummary> sessions;
  std::vector<PdRegression> pd_regression;  // empty if P_D is degenerate
  std::vector<std::string> notes;
};

struct VerdictCell {
  int k = 1;
  int game_id = 0;
  char component = 'x';
  double mean = 0.0;
  double p = 1.0;
  stats::Mark mark = stats::Mark::none;
  Sign expected = Sign::zero;
  bool match = false;
};

struct VerdictGrid {
  std::vector<VerdictCell> cells;  // always 48: k x game x component
  std::size_t matches = 0;
};

// Per-transition bivector records grouped by game id. Throws ConfigError if
// a trajectory's game id is outside 0..3.
std::array<std::vector<TransitionRecord>, 4> transitions_by_game(
    std::span<const Trajectory> trajectories, const std::array<double, 4>& reference);

// Full report from trajectories covering all four games. boundary_period 0
// picks half of the longest session. Throws ConfigError when a game group is
// missing.
ReportBundle analyze(std::span<const Trajectory> trajectories,
                     const std::array<double, 4>& reference,
                     int boundary_period = 0);

// Same computation from pre-built transition records (used to feed recorded
// game-level samples through the table pipeline). `sessions` may be empty,
// which skips the P_D regression.
ReportBundle analyze_transitions(std::array<std::vector<TransitionRecord>, 4> transitions,
                                 std::vector<SessionSummary> sessions,
                                 const std::array<double, 4>& reference,
                                 int boundary_period);

// 48-cell hypothesis grid. A cell matches when the expected '+'/'-' sign is
// significant at p < 0.05 in the right direction, or when an expected '0'
// fails to reject (p >= 0.05).
VerdictGrid verdicts(const ReportBundle& bundle);

// Writes table3.csv, table4.csv, table5.csv, verdicts.csv, samples.csv,
// trajectory_k{1..4}.csv and report.json under out_dir (created on demand).
// `rounding` is the quantum for the rounded table columns, default 1e-4
// (i.e. 0.1 in 1e-3 units).
void emit(const ReportBundle& bundle, std::span<const Trajectory> trajectories,
          const std::filesystem::path& out_dir, double rounding = 1e-4);

// Reference-robustness summary: game-level mean L (setting k=1) recomputed
// for every reference point, pooled over the game's sessions.
struct SweepSummary {
  int game_id = 0;
  char component = 'x';
  double default_mean = 0.0;  // mean under the centroid reference
  double frac_same_sign = 0.0;
  double min_mean = 0.0;
  double max_mean = 0.0;
};

std::vector<SweepSummary> reference_sweep_summary(
    std::span<const Trajectory> trajectories, std::span<const SocialState> references);

void write_sweep_csv(std::ostream& out, std::span<const SweepSummary> rows);

// ---- run configuration ----------------------------------------------------

struct SimGameConfig {
  GameSpec game;
  SimConfig sim;
};

struct InputSpec {
  enum class Format { states, actions };
  int game_id = -1;
  std::filesystem::path path;
  Format format = Format::states;
};

struct RunConfig {
  enum class Mode { simulate, ingest };
  Mode mode = Mode::simulate;
  std::array<double, 4> reference = kCentroid;
  bool sweep = false;
  double rounding = 1e-4;
  int boundary_period = 0;  // 0 = auto
  std::uint64_t seed = 0;
  std::string out_dir;  // default output directory; CLI --out overrides
  std::vector<SimGameConfig> games;
  std::vector<InputSpec> inputs;
};

// The four standard treatments with calibrated learning parameters. High-pay
// games get payoff_scale 2.5 (the 100 EF = $5 vs $2 conversion ratio).
RunConfig default_run_config(std::uint64_t seed = 0);

// Parses the JSON config document; unknown fields are rejected. The
// CYCLESCOPE_SEED environment variable, when set, overrides the seed.
RunConfig parse_run_config_text(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace cyclescope
