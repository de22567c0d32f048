#include "cyclescope/ingest.hpp"

#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "cyclescope/textio.hpp"

namespace cyclescope {
namespace {

bool valid_label(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

int parse_int_field(std::string_view field, std::size_t line, const char* what) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(line, std::string(what) + " is not an integer: '" +
                               std::string(field) + "'");
  }
  return value;
}

std::string parse_label_field(std::string_view field, std::size_t line,
                              const char* what) {
  if (!valid_label(field)) {
    throw ParseError(line, std::string(what) + " must match [A-Za-z0-9_-]+, got '" +
                               std::string(field) + "'");
  }
  return std::string(field);
}

void expect_header(std::string_view got, std::string_view want) {
  const auto fields = split_csv(got);
  const auto expected = split_csv(want);
  if (fields != expected) {
    throw ParseError(1, "expected header '" + std::string(want) + "'");
  }
}

// Reads `in` line by line, skipping blank lines, and calls row(fields, line).
template <class RowFn>
void for_each_row(std::istream& in, std::string_view header, std::size_t n_fields,
                  RowFn&& row) {
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    if (!saw_header) {
      expect_header(text, header);
      saw_header = true;
      continue;
    }
    const auto fields = split_csv(text);
    if (fields.size() != n_fields) {
      throw ParseError(line_no, "expected " + std::to_string(n_fields) +
                                    " fields, got " + std::to_string(fields.size()));
    }
    row(fields, line_no);
  }
  if (!saw_header) throw ParseError(1, "empty input, expected header '" +
                                           std::string(header) + "'");
}

// Checks that `periods` (period -> first line seen) runs 1..T without gaps.
void check_contiguous(const std::string& session,
                      const std::map<int, std::size_t>& periods) {
  int expected = 1;
  for (const auto& [period, line] : periods) {
    if (period < 1) {
      throw ParseError(line, "session '" + session + "': period must be >= 1");
    }
    if (period != expected) {
      throw ParseError(line, "session '" + session + "': missing period " +
                                 std::to_string(expected));
    }
    ++expected;
  }
}

}  // namespace

std::vector<Trajectory> parse_actions(std::istream& in, int game_id) {
  struct SessionData {
    std::map<int, std::map<std::string, Strategy>> periods;
    std::map<int, std::size_t> first_line;
  };
  std::vector<std::string> order;
  std::map<std::string, SessionData> sessions;

  for_each_row(in, "session_id,period,subject_id,action", 4,
               [&](const std::vector<std::string_view>& f, std::size_t line) {
                 const std::string session = parse_label_field(f[0], line, "session_id");
                 const int period = parse_int_field(f[1], line, "period");
                 const std::string subject = parse_label_field(f[2], line, "subject_id");
                 if (f[3].size() != 1 || !strategy_from_char(f[3][0])) {
                   throw ParseError(line, "unknown action token '" + std::string(f[3]) +
                                              "' (expected R, P, S or D)");
                 }
                 const Strategy action = *strategy_from_char(f[3][0]);
                 if (!sessions.contains(session)) order.push_back(session);
                 auto& data = sessions[session];
                 data.first_line.try_emplace(period, line);
                 const auto [it, inserted] = data.periods[period].emplace(subject, action);
                 if (!inserted) {
                   throw ParseError(line, "duplicate subject '" + subject +
                                              "' in session '" + session + "' period " +
                                              std::to_string(period));
                 }
               });

  std::vector<Trajectory> out;
  for (const auto& session : order) {
    const auto& data = sessions.at(session);
    check_contiguous(session, data.first_line);
    Trajectory traj;
    traj.session_id = session;
    traj.game_id = game_id;
    const std::size_t n_subjects = data.periods.begin()->second.size();
    for (const auto& [period, actions] : data.periods) {
      if (actions.size() != n_subjects) {
        throw ParseError(data.first_line.at(period),
                         "session '" + session + "' period " + std::to_string(period) +
                             ": " + std::to_string(actions.size()) + " subjects, expected " +
                             std::to_string(n_subjects));
      }
      SocialState state;
      for (const auto& [subject, action] : actions) {
        ++state.counts[index_of(action)];
      }
      traj.states.push_back(state);
    }
    out.push_back(std::move(traj));
  }
  return out;
}

std::vector<Trajectory> parse_states(std::istream& in, int game_id) {
  struct SessionData {
    std::map<int, SocialState> states;
    std::map<int, std::size_t> first_line;
  };
  std::vector<std::string> order;
  std::map<std::string, SessionData> sessions;

  for_each_row(in, "session_id,period,n_R,n_P,n_S,n_D", 6,
               [&](const std::vector<std::string_view>& f, std::size_t line) {
                 const std::string session = parse_label_field(f[0], line, "session_id");
                 const int period = parse_int_field(f[1], line, "period");
                 SocialState state;
                 static constexpr const char* names[4] = {"n_R", "n_P", "n_S", "n_D"};
                 for (int i = 0; i < 4; ++i) {
                   const int v = parse_int_field(f[2 + i], line, names[i]);
                   if (v < 0) {
                     throw ParseError(line, std::string(names[i]) + " is negative");
                   }
                   state.counts[i] = v;
                 }
                 if (!sessions.contains(session)) order.push_back(session);
                 auto& data = sessions[session];
                 if (!data.first_line.try_emplace(period, line).second) {
                   throw ParseError(line, "duplicate period " + std::to_string(period) +
                                              " in session '" + session + "'");
                 }
                 if (!data.states.empty() &&
                     state.population() != data.states.begin()->second.population()) {
                   throw ParseError(line, "row sums to " + std::to_string(state.population()) +
                                              ", expected population " +
                                              std::to_string(data.states.begin()->second.population()));
                 }
                 data.states.emplace(period, state);
               });

  std::vector<Trajectory> out;
  for (const auto& session : order) {
    const auto& data = sessions.at(session);
    check_contiguous(session, data.first_line);
    Trajectory traj;
    traj.session_id = session;
    traj.game_id = game_id;
    for (const auto& [period, state] : data.states) traj.states.push_back(state);
    out.push_back(std::move(traj));
  }
  return out;
}

void write_states_csv(std::ostream& out, std::span<const Trajectory> trajectories) {
  out << "session_id,period,n_R,n_P,n_S,n_D\n";
  for (const auto& traj : trajectories) {
    for (std::size_t t = 0; t < traj.states.size(); ++t) {
      const auto& c = traj.states[t].counts;
      out << traj.session_id << ',' << (t + 1) << ',' << c[0] << ',' << c[1] << ','
          << c[2] << ',' << c[3] << '\n';
    }
  }
}

}  // namespace cyclescope
