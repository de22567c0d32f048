#include <sstream>

#include "doctest.h"

#include "cyclescope/ingest.hpp"
#include "cyclescope/rng.hpp"

using namespace cyclescope;

namespace {

std::vector<Trajectory> parse_actions_text(const std::string& text, int game_id = -1) {
  std::istringstream in(text);
  return parse_actions(in, game_id);
}

std::vector<Trajectory> parse_states_text(const std::string& text, int game_id = -1) {
  std::istringstream in(text);
  return parse_states(in, game_id);
}

}  // namespace

TEST_CASE("action rows aggregate into states") {
  std::string text = "session_id,period,subject_id,action\n";
  const char* actions = "RRRRRRPPSSSD";  // 6 R, 2 P, 3 S, 1 D
  for (int subject = 0; subject < 12; ++subject) {
    text += "s1,1,p" + std::to_string(subject) + "," + actions[subject] + "\n";
  }
  const auto trajs = parse_actions_text(text, 2);
  REQUIRE(trajs.size() == 1);
  CHECK(trajs[0].session_id == "s1");
  CHECK(trajs[0].game_id == 2);
  REQUIRE(trajs[0].states.size() == 1);
  CHECK(trajs[0].states[0] == make_state(6, 2, 3, 1));
}

TEST_CASE("action parsing errors carry line numbers") {
  SUBCASE("missing period") {
    const std::string text =
        "session_id,period,subject_id,action\n"
        "s1,1,a,R\ns1,1,b,P\n"
        "s1,2,a,R\ns1,2,b,P\n"
        "s1,4,a,R\ns1,4,b,P\n";
    try {
      parse_actions_text(text);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("missing period 3") != std::string::npos);
      CHECK(e.line() == 6);  // first row of period 4
    }
  }
  SUBCASE("unknown action token") {
    const std::string text = "session_id,period,subject_id,action\ns1,1,a,R\ns1,1,b,X\n";
    try {
      parse_actions_text(text);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("unknown action token 'X'") != std::string::npos);
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("duplicate subject in a period") {
    const std::string text =
        "session_id,period,subject_id,action\ns1,1,a,R\ns1,1,a,P\n";
    CHECK_THROWS_AS(parse_actions_text(text), ParseError);
  }
  SUBCASE("inconsistent subject count") {
    const std::string text =
        "session_id,period,subject_id,action\n"
        "s1,1,a,R\ns1,1,b,P\n"
        "s1,2,a,R\n";
    try {
      parse_actions_text(text);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("expected 2") != std::string::npos);
    }
  }
  SUBCASE("bad header") {
    CHECK_THROWS_AS(parse_actions_text("period,subject_id,action\n"), ParseError);
  }
  SUBCASE("bad field count") {
    CHECK_THROWS_AS(parse_actions_text("session_id,period,subject_id,action\ns1,1,a\n"),
                    ParseError);
  }
}

TEST_CASE("state rows parse directly") {
  const std::string text =
      "session_id,period,n_R,n_P,n_S,n_D\n"
      "s1,1,12,0,0,0\n"
      "s1,2,0,12,0,0\n";
  const auto trajs = parse_states_text(text, 1);
  REQUIRE(trajs.size() == 1);
  CHECK(trajs[0].ppt_count() == 1);
  CHECK(trajs[0].states[0] == make_state(12, 0, 0, 0));
  CHECK(trajs[0].states[1] == make_state(0, 12, 0, 0));
}

TEST_CASE("state parsing errors") {
  const std::string header = "session_id,period,n_R,n_P,n_S,n_D\n";
  SUBCASE("row sum mismatch") {
    try {
      parse_states_text(header + "s1,1,12,0,0,0\ns1,2,11,0,0,0\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("sums to 11") != std::string::npos);
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("negative count") {
    CHECK_THROWS_AS(parse_states_text(header + "s1,1,-1,13,0,0\n"), ParseError);
  }
  SUBCASE("non-integer count") {
    CHECK_THROWS_AS(parse_states_text(header + "s1,1,1.5,10.5,0,0\n"), ParseError);
  }
  SUBCASE("duplicate period") {
    CHECK_THROWS_AS(parse_states_text(header + "s1,1,12,0,0,0\ns1,1,0,12,0,0\n"),
                    ParseError);
  }
  SUBCASE("bad label") {
    CHECK_THROWS_AS(parse_states_text(header + "bad session,1,12,0,0,0\n"), ParseError);
  }
}

TEST_CASE("whitespace and CRLF tolerance") {
  const std::string text =
      "session_id, period, n_R, n_P, n_S, n_D\r\n"
      " s1 , 1 , 6, 2, 3, 1 \r\n"
      "\r\n"
      "s1,2, 6,2,3,1\r\n";
  const auto trajs = parse_states_text(text);
  REQUIRE(trajs.size() == 1);
  CHECK(trajs[0].states.size() == 2);
  CHECK(trajs[0].states[0] == make_state(6, 2, 3, 1));
}

TEST_CASE("multiple sessions keep input order and per-session periods") {
  const std::string text =
      "session_id,period,n_R,n_P,n_S,n_D\n"
      "b,1,1,1,1,1\n"
      "a,1,2,2,0,0\n"
      "b,2,0,2,1,1\n"
      "a,2,0,0,2,2\n";
  const auto trajs = parse_states_text(text);
  REQUIRE(trajs.size() == 2);
  CHECK(trajs[0].session_id == "b");
  CHECK(trajs[1].session_id == "a");
  CHECK(trajs[0].states[1] == make_state(0, 2, 1, 1));
}

TEST_CASE("canonical round-trip is byte identical") {
  const std::string canonical =
      "session_id,period,n_R,n_P,n_S,n_D\n"
      "s1,1,6,2,3,1\n"
      "s1,2,5,3,3,1\n"
      "s2,1,0,0,6,6\n"
      "s2,2,1,1,5,5\n";
  const auto trajs = parse_states_text(canonical);
  std::ostringstream out;
  write_states_csv(out, trajs);
  CHECK(out.str() == canonical);
}

TEST_CASE("action aggregation equals the corresponding state file") {
  RngStream rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    std::string actions = "session_id,period,subject_id,action\n";
    std::string states = "session_id,period,n_R,n_P,n_S,n_D\n";
    const int periods = 2 + static_cast<int>(rng.below(6));
    for (int t = 1; t <= periods; ++t) {
      int counts[4] = {0, 0, 0, 0};
      for (int subject = 0; subject < 8; ++subject) {
        const int a = static_cast<int>(rng.below(4));
        ++counts[a];
        actions += "s,";
        actions += std::to_string(t) + ",u" + std::to_string(subject) + ",";
        actions += "RPSD"[a];
        actions += "\n";
      }
      states += "s," + std::to_string(t) + "," + std::to_string(counts[0]) + "," +
                std::to_string(counts[1]) + "," + std::to_string(counts[2]) + "," +
                std::to_string(counts[3]) + "\n";
    }
    const auto from_actions = parse_actions_text(actions, 0);
    const auto from_states = parse_states_text(states, 0);
    REQUIRE(from_actions.size() == 1);
    REQUIRE(from_states.size() == 1);
    CHECK(from_actions[0].states == from_states[0].states);
  }
}
