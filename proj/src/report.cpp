#include "cyclescope/report.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "cyclescope/errors.hpp"
#include "cyclescope/ingest.hpp"
#include "cyclescope/reference_tables.hpp"
#include "cyclescope/textio.hpp"

namespace cyclescope {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::array<char, 3> kComponents{'x', 'y', 'z'};

double vec_component(const Vec3& v, int i) { return i == 0 ? v.x : i == 1 ? v.y : v.z; }

// One-sample t against 0 that folds the degenerate cases into p-values the
// verdict grid can consume: constant-at-zero samples cannot reject, constant
// nonzero samples reject at the floor.
std::pair<double, double> safe_t_against_zero(const std::vector<double>& col) {
  if (col.size() < 2) return {1.0, 0.0};
  try {
    const auto r = stats::one_sample_t(col, 0.0);
    return {r.p_value, r.statistic};
  } catch (const std::domain_error&) {
    if (col.front() == 0.0) return {1.0, 0.0};
    return {1e-300, col.front() > 0.0 ? 1e300 : -1e300};
  }
}

std::array<std::vector<double>, 3> component_columns(
    const std::vector<TransitionRecord>& records, const Setting& k) {
  std::array<std::vector<double>, 3> cols;
  for (auto& c : cols) c.reserve(records.size());
  for (const auto& rec : records) {
    const Vec3 l = l_from_bivector(rec.b, k);
    cols[0].push_back(l.x);
    cols[1].push_back(l.y);
    cols[2].push_back(l.z);
  }
  return cols;
}

int max_periods(const std::vector<TransitionRecord>& records) {
  int max_t = 0;
  for (const auto& rec : records) max_t = std::max(max_t, rec.t);
  return max_t + 1;
}

Table5Row persistence_from_records(int game_id,
                                   const std::vector<TransitionRecord>& records,
                                   int boundary) {
  std::vector<double> first, second, sec_first, sec_second;
  const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
  for (const auto& rec : records) {
    if (rec.t == boundary) continue;  // the boundary-crossing transition is dropped
    const Vec3 l = l_from_bivector(rec.b, setting(1));
    auto& pool = rec.t < boundary ? first : second;
    pool.insert(pool.end(), {l.x, l.y, l.z});
    (rec.t < boundary ? sec_first : sec_second).push_back((l.x + l.y + l.z) * inv_sqrt3);
  }
  if (first.empty() || second.empty()) {
    throw std::domain_error("persistence: a half of game " + std::to_string(game_id) +
                            " has no samples");
  }
  Table5Row row;
  row.game_id = game_id;
  row.report.n1 = first.size();
  row.report.n2 = second.size();
  const auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  row.report.first_mean = mean(first);
  row.report.second_mean = mean(second);
  row.report.delta = row.report.second_mean - row.report.first_mean;
  row.report.p_value = stats::two_sample_t(first, second).p_value;
  row.secondary_first = mean(sec_first);
  row.secondary_second = mean(sec_second);
  return row;
}

char sign_char(double z) { return z < 0.0 ? '-' : '+'; }
char sign_text(Sign s) { return s == Sign::plus ? '+' : s == Sign::minus ? '-' : '0'; }

// ---- rounded table formatting ----------------------------------------------

int rounding_decimals(double quantum) {
  const double q_e3 = quantum * 1e3;
  const int d = static_cast<int>(std::ceil(-std::log10(q_e3) - 1e-9));
  return std::clamp(d, 0, 9);
}

// Value quantized to `quantum` and printed in 1e-3 units.
std::string format_e3(double v, double quantum) {
  double scaled = std::round(v / quantum) * (quantum * 1e3);
  if (scaled == 0.0) scaled = 0.0;  // normalize -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", rounding_decimals(quantum), scaled);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

// ---- config parsing ---------------------------------------------------------

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const char* where) {
  for (const auto& item : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* key) {
          return item.key() == key;
        }) == allowed.end()) {
      throw ConfigError(std::string(where) + ": unknown field '" + item.key() + "'");
    }
  }
}

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

std::array<double, 4> reference_from_json(const json& value) {
  if (value.is_string()) {
    if (value.get<std::string>() == "default") return kCentroid;
    throw ConfigError("reference: expected \"default\" or an array of 4 fractions");
  }
  if (!value.is_array() || value.size() != 4) {
    throw ConfigError("reference: expected \"default\" or an array of 4 fractions");
  }
  std::array<double, 4> ref{};
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    ref[i] = value.at(i).get<double>();
    if (!(ref[i] >= 0.0 && ref[i] <= 1.0)) {
      throw ConfigError("reference: components must be in [0, 1]");
    }
    sum += ref[i];
  }
  if (std::fabs(sum - 1.0) > 1e-9) throw ConfigError("reference: components must sum to 1");
  return ref;
}

SimGameConfig sim_game_from_json(const json& entry, std::uint64_t default_seed) {
  reject_unknown_keys(entry,
                      {"game_id", "a", "b", "c", "d", "pay_scale", "n_players",
                       "periods", "sessions", "rule", "lambda", "rho", "payoff_scale",
                       "seed", "full_information", "initial_state"},
                      "games entry");
  if (!entry.contains("game_id")) throw ConfigError("games entry: game_id is required");
  const int game_id = entry.at("game_id").get<int>();
  if (game_id < 0 || game_id > 3) throw ConfigError("games entry: game_id must be in 0..3");

  SimGameConfig cfg;
  const bool has_payoffs = entry.contains("a") || entry.contains("b") ||
                           entry.contains("c") || entry.contains("d");
  if (has_payoffs) {
    for (const char* key : {"a", "b", "c", "d"}) {
      if (!entry.contains(key)) {
        throw ConfigError("games entry: explicit payoffs need all of a, b, c, d");
      }
    }
    PayScale scale = PayScale::low;
    if (entry.contains("pay_scale")) {
      const auto text = entry.at("pay_scale").get<std::string>();
      if (text == "high") {
        scale = PayScale::high;
      } else if (text != "low") {
        throw ConfigError("games entry: pay_scale must be \"low\" or \"high\"");
      }
    }
    cfg.game = GameSpec::custom(entry.at("a").get<double>(), entry.at("b").get<double>(),
                                entry.at("c").get<double>(), entry.at("d").get<double>(),
                                scale, game_id);
  } else {
    if (entry.contains("pay_scale")) {
      throw ConfigError("games entry: pay_scale belongs to the explicit-payoff form");
    }
    cfg.game = GameSpec::from_id(game_id);
  }

  cfg.sim.n_players = get_or(entry, "n_players", cfg.sim.n_players);
  cfg.sim.periods = get_or(entry, "periods", cfg.sim.periods);
  cfg.sim.sessions = get_or(entry, "sessions", cfg.sim.sessions);
  cfg.sim.lambda = get_or(entry, "lambda", cfg.sim.lambda);
  cfg.sim.rho = get_or(entry, "rho", cfg.sim.rho);
  cfg.sim.payoff_scale =
      get_or(entry, "payoff_scale", cfg.game.pay_scale == PayScale::high ? 2.5 : 1.0);
  cfg.sim.full_information = get_or(entry, "full_information", cfg.sim.full_information);
  cfg.sim.seed = get_or(entry, "seed", default_seed);
  if (entry.contains("rule")) {
    const auto name = entry.at("rule").get<std::string>();
    const auto rule = rule_from_name(name);
    if (!rule) throw ConfigError("games entry: unknown rule '" + name + "'");
    cfg.sim.rule = *rule;
  }
  if (entry.contains("initial_state")) {
    const json& init = entry.at("initial_state");
    if (init.is_string()) {
      if (init.get<std::string>() != "uniform_random") {
        throw ConfigError("games entry: initial_state must be \"uniform_random\" or 4 counts");
      }
    } else if (init.is_array() && init.size() == 4) {
      cfg.sim.initial_state = make_state(init.at(0).get<int>(), init.at(1).get<int>(),
                                         init.at(2).get<int>(), init.at(3).get<int>());
    } else {
      throw ConfigError("games entry: initial_state must be \"uniform_random\" or 4 counts");
    }
  }
  cfg.sim.validate();
  return cfg;
}

std::optional<std::uint64_t> env_seed_override() {
  const char* text = std::getenv("CYCLESCOPE_SEED");
  if (text == nullptr) return std::nullopt;
  std::uint64_t value = 0;
  const char* end = text + std::string_view(text).size();
  const auto [ptr, ec] = std::from_chars(text, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("CYCLESCOPE_SEED is not an unsigned integer");
  }
  return value;
}

}  // namespace

std::array<std::vector<TransitionRecord>, 4> transitions_by_game(
    std::span<const Trajectory> trajectories, const std::array<double, 4>& reference) {
  std::array<std::vector<TransitionRecord>, 4> by_game;
  for (const auto& traj : trajectories) {
    if (traj.game_id < 0 || traj.game_id > 3) {
      throw ConfigError("trajectory '" + traj.session_id +
                        "': game_id must be in 0..3, got " + std::to_string(traj.game_id));
    }
    validate_trajectory(traj);
    auto& records = by_game[traj.game_id];
    for (std::size_t t = 0; t + 1 < traj.states.size(); ++t) {
      records.push_back({traj.session_id, static_cast<int>(t + 1),
                         bivector(traj.states[t].fractions(),
                                  traj.states[t + 1].fractions(), reference)});
    }
  }
  return by_game;
}

ReportBundle analyze_transitions(std::array<std::vector<TransitionRecord>, 4> transitions,
                                 std::vector<SessionSummary> sessions,
                                 const std::array<double, 4>& reference,
                                 int boundary_period) {
  for (int g = 0; g < 4; ++g) {
    if (transitions[g].empty()) {
      throw ConfigError("analyze: no transitions for game " + std::to_string(g));
    }
  }
  ReportBundle rb;
  rb.reference = reference;
  rb.transitions = std::move(transitions);
  rb.sessions = std::move(sessions);

  if (boundary_period == 0) {
    int periods = 0;
    for (const auto& records : rb.transitions) {
      periods = std::max(periods, max_periods(records));
    }
    boundary_period = periods / 2;
  }
  rb.boundary_period = boundary_period;

  // table 3: mean L per setting and game, with one-sample t-tests
  std::array<std::array<std::vector<double>, 3>, 4> k1_cols;
  for (int k = 1; k <= 4; ++k) {
    for (int g = 0; g < 4; ++g) {
      auto cols = component_columns(rb.transitions[g], setting(k));
      Table3Row row;
      row.k = k;
      row.game_id = g;
      row.mean.n = cols[0].size();
      for (int c = 0; c < 3; ++c) {
        double sum = 0.0;
        for (double v : cols[c]) sum += v;
        const double m = sum / static_cast<double>(cols[c].size());
        (c == 0 ? row.mean.lx : c == 1 ? row.mean.ly : row.mean.lz) = m;
        const auto [p, t] = safe_t_against_zero(cols[c]);
        row.p[c] = p;
        row.mark[c] = stats::stars(p);
      }
      rb.table3.push_back(row);
      if (k == 1) k1_cols[g] = std::move(cols);
    }
  }

  // table 4: strength and pairwise rank-sum comparisons on the k=1 samples
  for (int g = 0; g < 4; ++g) {
    rb.table4.strength[g] = strength(rb.table3[g].mean);
  }
  for (int row = 0; row < 4; ++row) {
    for (int col = row + 1; col < 4; ++col) {
      PairComparison cmp;
      cmp.game_row = row;
      cmp.game_col = col;
      for (int c = 0; c < 3; ++c) {
        const auto r = stats::rank_sum(k1_cols[row][c], k1_cols[col][c]);
        cmp.z[c] = r.statistic;
        cmp.p[c] = r.p_value;
        cmp.mark[c] = stats::stars(r.p_value);
        cmp.sign[c] = sign_char(r.statistic);
      }
      rb.table4.comparisons.push_back(cmp);
    }
  }
  const std::array<std::pair<int, int>, 4> arrow_pairs{{{1, 0}, {1, 3}, {0, 2}, {3, 2}}};
  for (std::size_t i = 0; i < arrow_pairs.size(); ++i) {
    const auto [larger, smaller] = arrow_pairs[i];
    rb.table4.arrows[i] = {larger, smaller,
                           rb.table4.strength[larger] > rb.table4.strength[smaller]};
  }

  // table 5: early/late persistence split on the combined scale
  for (int g = 0; g < 4; ++g) {
    rb.table5[g] = persistence_from_records(g, rb.transitions[g], boundary_period);
  }

  // bookkeeping notes where the data disagrees with the reference tables
  for (int g = 0; g < 4; ++g) {
    const int n = static_cast<int>(rb.transitions[g].size());
    if (n != kReferencePptCounts[g]) {
      rb.notes.push_back("game " + std::to_string(g) + ": pooled transition count " +
                         std::to_string(n) + " computed from data; reference tables record " +
                         std::to_string(kReferencePptCounts[g]));
    }
    const auto& ref_halves = kReferenceHalfCounts[g];
    if (static_cast<int>(rb.table5[g].report.n1) != ref_halves[0] ||
        static_cast<int>(rb.table5[g].report.n2) != ref_halves[1]) {
      rb.notes.push_back("game " + std::to_string(g) + ": half-split sample counts (" +
                         std::to_string(rb.table5[g].report.n1) + ", " +
                         std::to_string(rb.table5[g].report.n2) +
                         ") computed from data; reference tables record (" +
                         std::to_string(ref_halves[0]) + ", " +
                         std::to_string(ref_halves[1]) + ")");
    }
  }

  // session-level P_D regression
  if (rb.sessions.size() >= 3) {
    std::vector<double> p_d;
    p_d.reserve(rb.sessions.size());
    for (const auto& s : rb.sessions) p_d.push_back(s.p_d);
    for (int c = 0; c < 3; ++c) {
      std::vector<double> l;
      l.reserve(rb.sessions.size());
      for (const auto& s : rb.sessions) {
        l.push_back(c == 0 ? s.k1_mean.lx : c == 1 ? s.k1_mean.ly : s.k1_mean.lz);
      }
      try {
        const auto fit = stats::ols_slope(p_d, l);
        rb.pd_regression.push_back({kComponents[c], fit.slope, fit.t, fit.p_value, fit.n});
      } catch (const std::domain_error&) {
        rb.notes.push_back(std::string("P_D regression skipped for component ") +
                           kComponents[c] + ": P_D is constant across sessions");
        break;
      }
    }
  }

  return rb;
}

ReportBundle analyze(std::span<const Trajectory> trajectories,
                     const std::array<double, 4>& reference, int boundary_period) {
  auto transitions = transitions_by_game(trajectories, reference);
  std::vector<SessionSummary> sessions;
  sessions.reserve(trajectories.size());
  for (const auto& traj : trajectories) {
    SessionSummary s;
    s.session_id = traj.session_id;
    s.game_id = traj.game_id;
    s.periods = traj.periods();
    s.p_d = average_play(std::span(&traj, 1), Strategy::D);
    s.k1_mean = mean_L(trajectory_samples(traj, reference, setting(1)));
    sessions.push_back(std::move(s));
  }
  return analyze_transitions(std::move(transitions), std::move(sessions), reference,
                             boundary_period);
}

VerdictGrid verdicts(const ReportBundle& bundle) {
  VerdictGrid grid;
  grid.cells.reserve(48);
  for (const auto& row : bundle.table3) {
    for (int c = 0; c < 3; ++c) {
      VerdictCell cell;
      cell.k = row.k;
      cell.game_id = row.game_id;
      cell.component = kComponents[c];
      cell.mean = c == 0 ? row.mean.lx : c == 1 ? row.mean.ly : row.mean.lz;
      cell.p = row.p[c];
      cell.mark = row.mark[c];
      cell.expected = expected_sign(row.k, c);
      switch (cell.expected) {
        case Sign::plus: cell.match = cell.mean > 0.0 && cell.p < 0.05; break;
        case Sign::minus: cell.match = cell.mean < 0.0 && cell.p < 0.05; break;
        case Sign::zero: cell.match = cell.p >= 0.05; break;
      }
      grid.matches += cell.match ? 1 : 0;
      grid.cells.push_back(cell);
    }
  }
  return grid;
}

namespace {

ordered_json bundle_to_json(const ReportBundle& rb, const VerdictGrid& grid,
                            double rounding) {
  ordered_json j;
  j["reference"] = rb.reference;
  j["boundary_period"] = rb.boundary_period;
  j["rounding"] = rounding;
  j["notes"] = rb.notes;
  j["table3"] = ordered_json::array();
  for (const auto& row : rb.table3) {
    ordered_json r;
    r["k"] = row.k;
    r["game"] = row.game_id;
    r["n"] = row.mean.n;
    r["L"] = {row.mean.lx, row.mean.ly, row.mean.lz};
    r["p"] = row.p;
    r["mark"] = {stats::mark_text(row.mark[0]), stats::mark_text(row.mark[1]),
                 stats::mark_text(row.mark[2])};
    j["table3"].push_back(std::move(r));
  }
  j["table4"]["strength"] = rb.table4.strength;
  j["table4"]["comparisons"] = ordered_json::array();
  for (const auto& cmp : rb.table4.comparisons) {
    for (int c = 0; c < 3; ++c) {
      ordered_json r;
      r["row"] = cmp.game_row;
      r["col"] = cmp.game_col;
      r["component"] = std::string(1, kComponents[c]);
      r["sign"] = std::string(1, cmp.sign[c]);
      r["z"] = cmp.z[c];
      r["p"] = cmp.p[c];
      r["mark"] = stats::mark_text(cmp.mark[c]);
      j["table4"]["comparisons"].push_back(std::move(r));
    }
  }
  j["table4"]["arrows"] = ordered_json::array();
  for (const auto& arrow : rb.table4.arrows) {
    j["table4"]["arrows"].push_back(
        {{"larger", arrow.larger}, {"smaller", arrow.smaller}, {"holds", arrow.holds}});
  }
  j["table5"] = ordered_json::array();
  for (const auto& row : rb.table5) {
    ordered_json r;
    r["game"] = row.game_id;
    r["first_mean"] = row.report.first_mean;
    r["second_mean"] = row.report.second_mean;
    r["delta"] = row.report.delta;
    r["p"] = row.report.p_value;
    r["mark"] = stats::mark_text(stats::stars(row.report.p_value));
    r["n1"] = row.report.n1;
    r["n2"] = row.report.n2;
    r["secondary_projection"] = {{"first_mean", row.secondary_first},
                                 {"second_mean", row.secondary_second}};
    j["table5"].push_back(std::move(r));
  }
  j["sessions"] = ordered_json::array();
  for (const auto& s : rb.sessions) {
    ordered_json r;
    r["session_id"] = s.session_id;
    r["game"] = s.game_id;
    r["periods"] = s.periods;
    r["p_d"] = s.p_d;
    r["L"] = {s.k1_mean.lx, s.k1_mean.ly, s.k1_mean.lz};
    j["sessions"].push_back(std::move(r));
  }
  j["pd_regression"] = ordered_json::array();
  for (const auto& fit : rb.pd_regression) {
    ordered_json r;
    r["component"] = std::string(1, fit.component);
    r["slope"] = fit.slope;
    r["t"] = fit.t;
    r["p"] = fit.p;
    r["n"] = fit.n;
    j["pd_regression"].push_back(std::move(r));
  }
  j["verdicts"]["matches"] = grid.matches;
  j["verdicts"]["cells"] = ordered_json::array();
  for (const auto& cell : grid.cells) {
    ordered_json r;
    r["k"] = cell.k;
    r["game"] = cell.game_id;
    r["component"] = std::string(1, cell.component);
    r["mean"] = cell.mean;
    r["p"] = cell.p;
    r["mark"] = stats::mark_text(cell.mark);
    r["expected"] = std::string(1, sign_text(cell.expected));
    r["verdict"] = cell.match ? "match" : "mismatch";
    j["verdicts"]["cells"].push_back(std::move(r));
  }
  return j;
}

}  // namespace

void emit(const ReportBundle& bundle, std::span<const Trajectory> trajectories,
          const std::filesystem::path& out_dir, double rounding) {
  if (!(rounding > 0.0)) throw ConfigError("emit: rounding must be > 0");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create directory " + out_dir.string() + ": " + ec.message());

  const VerdictGrid grid = verdicts(bundle);

  {
    const auto path = out_dir / "table3.csv";
    auto out = open_out(path);
    out << "k,game,n,Lx,Ly,Lz,px,py,pz,mark_x,mark_y,mark_z\n";
    for (const auto& row : bundle.table3) {
      out << row.k << ',' << row.game_id << ',' << row.mean.n << ','
          << format_e3(row.mean.lx, rounding) << ',' << format_e3(row.mean.ly, rounding)
          << ',' << format_e3(row.mean.lz, rounding) << ',' << format_double(row.p[0])
          << ',' << format_double(row.p[1]) << ',' << format_double(row.p[2]) << ','
          << stats::mark_text(row.mark[0]) << ',' << stats::mark_text(row.mark[1]) << ','
          << stats::mark_text(row.mark[2]) << '\n';
    }
    finish(out, path);
  }
  {
    const auto path = out_dir / "table4.csv";
    auto out = open_out(path);
    out << "game,absL,vs_game,component,sign,z,p,mark\n";
    for (int g = 0; g < 4; ++g) {
      out << g << ',' << format_e3(bundle.table4.strength[g], rounding) << ",,,,,,\n";
    }
    for (const auto& cmp : bundle.table4.comparisons) {
      for (int c = 0; c < 3; ++c) {
        out << cmp.game_row << ",," << cmp.game_col << ',' << kComponents[c] << ','
            << cmp.sign[c] << ',' << format_double(cmp.z[c]) << ','
            << format_double(cmp.p[c]) << ',' << stats::mark_text(cmp.mark[c]) << '\n';
      }
    }
    finish(out, path);
  }
  {
    const auto path = out_dir / "table5.csv";
    auto out = open_out(path);
    out << "game,first,second,delta,p,mark,n1,n2\n";
    for (const auto& row : bundle.table5) {
      out << row.game_id << ',' << format_e3(row.report.first_mean, rounding) << ','
          << format_e3(row.report.second_mean, rounding) << ','
          << format_e3(row.report.delta, rounding) << ','
          << format_double(row.report.p_value) << ','
          << stats::mark_text(stats::stars(row.report.p_value)) << ',' << row.report.n1
          << ',' << row.report.n2 << '\n';
    }
    finish(out, path);
  }
  {
    const auto path = out_dir / "verdicts.csv";
    auto out = open_out(path);
    out << "k,game,component,mean,p,mark,expected,verdict\n";
    for (const auto& cell : grid.cells) {
      out << cell.k << ',' << cell.game_id << ',' << cell.component << ','
          << format_e3(cell.mean, rounding) << ',' << format_double(cell.p) << ','
          << stats::mark_text(cell.mark) << ',' << sign_text(cell.expected) << ','
          << (cell.match ? "match" : "mismatch") << '\n';
    }
    finish(out, path);
  }
  {
    // per-transition samples for every setting, rebuilt from the bivectors
    const auto path = out_dir / "samples.csv";
    auto out = open_out(path);
    std::vector<AngularSamples> groups;
    for (int g = 0; g < 4; ++g) {
      const auto& records = bundle.transitions[g];
      std::size_t begin = 0;
      while (begin < records.size()) {
        std::size_t end = begin;
        while (end < records.size() &&
               records[end].session_id == records[begin].session_id) {
          ++end;
        }
        for (int k = 1; k <= 4; ++k) {
          AngularSamples samples;
          samples.k = k;
          samples.reference = bundle.reference;
          samples.session_id = records[begin].session_id;
          samples.game_id = g;
          for (std::size_t i = begin; i < end; ++i) {
            const Vec3 l = l_from_bivector(records[i].b, setting(k));
            samples.samples.push_back({records[i].t, l.x, l.y, l.z});
          }
          groups.push_back(std::move(samples));
        }
        begin = end;
      }
    }
    write_samples_csv(out, groups);
    finish(out, path);
  }
  for (int k = 1; k <= 4; ++k) {
    const auto path = out_dir / ("trajectory_k" + std::to_string(k) + ".csv");
    auto out = open_out(path);
    out << "session_id,period,x,y,z\n";
    for (const auto& traj : trajectories) {
      for (std::size_t t = 0; t < traj.states.size(); ++t) {
        const Point3 p = project(traj.states[t].fractions(), setting(k));
        out << traj.session_id << ',' << (t + 1) << ',' << format_double(p.x) << ','
            << format_double(p.y) << ',' << format_double(p.z) << '\n';
      }
    }
    finish(out, path);
  }
  {
    const auto path = out_dir / "report.json";
    auto out = open_out(path);
    out << bundle_to_json(bundle, grid, rounding).dump(2) << '\n';
    finish(out, path);
  }
}

std::vector<SweepSummary> reference_sweep_summary(
    std::span<const Trajectory> trajectories, std::span<const SocialState> references) {
  std::map<int, std::vector<const Trajectory*>> by_game;
  for (const auto& traj : trajectories) by_game[traj.game_id].push_back(&traj);

  std::vector<SweepSummary> rows;
  for (const auto& [game_id, group] : by_game) {
    // pooled mean per reference: sample-count weighted combination of the
    // per-session sweeps
    std::vector<Vec3> sums(references.size());
    std::vector<std::size_t> counts(references.size(), 0);
    Vec3 default_sum{};
    std::size_t default_count = 0;
    for (const Trajectory* traj : group) {
      const ReferenceSweep sweep = reference_sweep(*traj, setting(1), references);
      for (std::size_t i = 0; i < references.size(); ++i) {
        const MeanL& m = sweep.means[i];
        sums[i] = sums[i] + static_cast<double>(m.n) * Vec3{m.lx, m.ly, m.lz};
        counts[i] += m.n;
      }
      const MeanL m = mean_L(trajectory_samples(*traj, kCentroid, setting(1)));
      default_sum = default_sum + static_cast<double>(m.n) * Vec3{m.lx, m.ly, m.lz};
      default_count += m.n;
    }
    for (int c = 0; c < 3; ++c) {
      SweepSummary row;
      row.game_id = game_id;
      row.component = kComponents[c];
      row.default_mean = vec_component(default_sum, c) / static_cast<double>(default_count);
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      std::size_t same = 0;
      for (std::size_t i = 0; i < references.size(); ++i) {
        const double m = vec_component(sums[i], c) / static_cast<double>(counts[i]);
        lo = std::min(lo, m);
        hi = std::max(hi, m);
        const auto sign = [](double v) { return v > 0.0 ? 1 : v < 0.0 ? -1 : 0; };
        if (sign(m) == sign(row.default_mean)) ++same;
      }
      row.frac_same_sign = static_cast<double>(same) / static_cast<double>(references.size());
      row.min_mean = lo;
      row.max_mean = hi;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepSummary> rows) {
  out << "game,component,default_mean,frac_same_sign,min_mean,max_mean\n";
  for (const auto& row : rows) {
    out << row.game_id << ',' << row.component << ',' << format_double(row.default_mean)
        << ',' << format_double(row.frac_same_sign) << ',' << format_double(row.min_mean)
        << ',' << format_double(row.max_mean) << '\n';
  }
}

RunConfig default_run_config(std::uint64_t seed) {
  RunConfig cfg;
  cfg.seed = env_seed_override().value_or(seed);
  for (int g = 0; g < 4; ++g) {
    SimGameConfig game;
    game.game = GameSpec::from_id(g);
    game.sim.seed = cfg.seed;
    game.sim.payoff_scale = game.game.pay_scale == PayScale::high ? 2.5 : 1.0;
    cfg.games.push_back(game);
  }
  return cfg;
}

RunConfig parse_run_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  reject_unknown_keys(doc,
                      {"mode", "seed", "reference", "sweep", "rounding",
                       "boundary_period", "out", "games", "inputs"},
                      "config");
  RunConfig cfg;
  const auto mode = get_or<std::string>(doc, "mode", "simulate");
  if (mode == "simulate") {
    cfg.mode = RunConfig::Mode::simulate;
  } else if (mode == "ingest") {
    cfg.mode = RunConfig::Mode::ingest;
  } else {
    throw ConfigError("mode must be \"simulate\" or \"ingest\"");
  }
  cfg.seed = env_seed_override().value_or(get_or<std::uint64_t>(doc, "seed", 0));
  if (doc.contains("reference")) cfg.reference = reference_from_json(doc.at("reference"));
  cfg.sweep = get_or(doc, "sweep", false);
  cfg.rounding = get_or(doc, "rounding", 1e-4);
  if (!(cfg.rounding > 0.0)) throw ConfigError("rounding must be > 0");
  cfg.boundary_period = get_or(doc, "boundary_period", 0);
  if (cfg.boundary_period < 0) throw ConfigError("boundary_period must be >= 0");
  cfg.out_dir = get_or<std::string>(doc, "out", "");

  if (doc.contains("games")) {
    if (cfg.mode != RunConfig::Mode::simulate) {
      throw ConfigError("games is only valid in simulate mode");
    }
    if (!doc.at("games").is_array() || doc.at("games").empty()) {
      throw ConfigError("games must be a non-empty array");
    }
    for (const auto& entry : doc.at("games")) {
      cfg.games.push_back(sim_game_from_json(entry, cfg.seed));
    }
  } else if (cfg.mode == RunConfig::Mode::simulate) {
    cfg.games = default_run_config(cfg.seed).games;
  }

  if (doc.contains("inputs")) {
    if (cfg.mode != RunConfig::Mode::ingest) {
      throw ConfigError("inputs is only valid in ingest mode");
    }
    for (const auto& entry : doc.at("inputs")) {
      reject_unknown_keys(entry, {"game_id", "path", "format"}, "inputs entry");
      InputSpec input;
      if (!entry.contains("game_id") || !entry.contains("path")) {
        throw ConfigError("inputs entry: game_id and path are required");
      }
      input.game_id = entry.at("game_id").get<int>();
      if (input.game_id < 0 || input.game_id > 3) {
        throw ConfigError("inputs entry: game_id must be in 0..3");
      }
      input.path = entry.at("path").get<std::string>();
      const auto format = get_or<std::string>(entry, "format", "states");
      if (format == "states") {
        input.format = InputSpec::Format::states;
      } else if (format == "actions") {
        input.format = InputSpec::Format::actions;
      } else {
        throw ConfigError("inputs entry: format must be \"states\" or \"actions\"");
      }
      cfg.inputs.push_back(std::move(input));
    }
  }
  if (cfg.mode == RunConfig::Mode::ingest && cfg.inputs.empty()) {
    throw ConfigError("ingest mode requires at least one inputs entry");
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed reading config file: " + path.string());
  return parse_run_config_text(buffer.str());
}

}  // namespace cyclescope
