#include <doctest.h>

#include <random>

#include "qmoves/errors.hpp"
#include "qmoves/path/control_path.hpp"
#include "qmoves/path/play_record.hpp"

using namespace qmoves;

namespace {

ControlPath random_path(std::mt19937_64& rng, const TweezerSpec& spec, int n) {
  std::uniform_real_distribution<double> dt(0.001, 0.05);
  std::uniform_real_distribution<double> x(spec.x_min, spec.x_max);
  std::uniform_real_distribution<double> a(0.0, spec.depth_max);
  std::vector<ControlSample> s;
  double t = 0.0;
  for (int i = 0; i < n; ++i) {
    s.push_back({t, x(rng), a(rng)});
    t += dt(rng);
  }
  return ControlPath(s, PathOrigin::human);
}

void check_invariants(const ControlPath& p, const TweezerSpec& spec) {
  REQUIRE(p.size() >= 2);
  CHECK(p[0].t == 0.0);
  for (std::size_t i = 1; i < p.size(); ++i) CHECK(p[i].t > p[i - 1].t);
  CHECK_NOTHROW(p.check_bounds(spec));
}

PlayRecord sample_record() {
  PlayRecord r;
  r.level_id = "tutorial_01";
  r.user_id = "ada";
  r.timestamp_ms = 1'700'000'000'123;
  r.client_version = "web-2.1";
  r.path = ControlPath({{0, -0.5, 160}, {0.1, -0.25, 150.5}, {0.3, 0.0, 0}}, PathOrigin::edited);
  r.score.fidelity = 0.8731;
  r.score.time_used = 0.3;
  r.score.time_penalty = 0.05;
  r.score.bonus_points = 25;
  r.score.total_score = 854;
  r.score.stars = 2;
  r.score.feedback_trace = {0.1, 0.5, 0.8731};
  return r;
}

}  // namespace

TEST_CASE("control path structural invariants") {
  CHECK_THROWS_AS(ControlPath({{0, 0, 0}}), ArgumentError);
  CHECK_THROWS_AS(ControlPath({{0.1, 0, 0}, {0.2, 0, 0}}), ArgumentError);
  CHECK_THROWS_AS(ControlPath({{0, 0, 0}, {0, 0.1, 0}}), ArgumentError);
  CHECK_THROWS_AS(ControlPath({{0, 0, 0}, {0.1, NAN, 0}}), ArgumentError);
  const ControlPath p({{0, 0, 0}, {1, 0.5, 100}});
  CHECK(p.duration() == 1.0);
  TweezerSpec narrow;
  narrow.x_max = 0.4;
  CHECK_THROWS_AS(p.check_bounds(narrow), BoundsError);
}

TEST_CASE("interpolation") {
  const ControlPath p({{0, -0.2, 10}, {0.5, 0.4, 110}, {1.0, 0.4, 0}});
  CHECK(p.at(0.25).x0 == doctest::Approx(0.1));
  CHECK(p.at(0.25).A == doctest::Approx(60));
  CHECK(p.at(0.5).x0 == 0.4);
  CHECK(p.at(-1).x0 == -0.2);
  CHECK(p.at(7).A == 0.0);
  PathCursor cursor(p);
  for (double t : {0.0, 0.1, 0.5, 0.75, 1.0, 2.0}) CHECK(cursor.at(t) == p.at(t));
}

TEST_CASE("resample") {
  SUBCASE("uniform path at its own rate is unchanged") {
    std::vector<ControlSample> s;
    for (int k = 0; k <= 20; ++k) s.push_back({k / 40.0, 0.01 * k, 5.0 * k});
    const ControlPath p(s);
    CHECK(resample(p, 40.0) == p);
  }
  SUBCASE("duration preserved and midpoint of a ramp is the mean") {
    const ControlPath ramp({{0, -0.3, 20}, {0.37, 0.5, 140}});
    const auto r = resample(ramp, 100.0);
    CHECK(r.duration() == 0.37);
    CHECK(r.size() == 38);
    const auto mid = resample(ControlPath({{0, -0.3, 20}, {1.0, 0.5, 140}}), 2.0);
    REQUIRE(mid.size() == 3);
    CHECK(mid[1].x0 == doctest::Approx(0.1));
    CHECK(mid[1].A == doctest::Approx(80));
  }
  CHECK_THROWS_AS(resample(ControlPath({{0, 0, 0}, {1, 0, 0}}), 0.0), ArgumentError);
}

TEST_CASE("move_point") {
  const TweezerSpec spec;
  const ControlPath p({{0, 0, 0}, {0.1, 0.1, 10}, {0.2, 0.2, 20}, {0.3, 0.3, 30}});
  CHECK(move_point(p, 2, p[2], spec) == p);
  const auto moved = move_point(p, 2, {0.2, -0.4, 20}, spec);
  CHECK(moved[2].x0 == -0.4);
  for (std::size_t i : {0u, 1u, 3u}) CHECK(moved[i] == p[i]);
  CHECK_THROWS_AS(move_point(p, 2, {0.05, 0.2, 20}, spec), ArgumentError);
  CHECK_THROWS_AS(move_point(p, 2, {0.3, 0.2, 20}, spec), ArgumentError);
  CHECK_THROWS_AS(move_point(p, 0, {0.01, 0, 0}, spec), ArgumentError);
  CHECK_THROWS_AS(move_point(p, 4, {0.4, 0, 0}, spec), ArgumentError);
  CHECK_THROWS_AS(move_point(p, 1, {0.1, 0, 500}, spec), BoundsError);
}

TEST_CASE("stretch_time") {
  std::mt19937_64 rng(7);
  const auto p = random_path(rng, TweezerSpec{}, 30);
  CHECK(stretch_time(p, 1.0) == p);
  const auto back = stretch_time(stretch_time(p, 2.0), 0.5);
  REQUIRE(back.size() == p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(std::abs(back[i].t - p[i].t) < 1e-12);
    CHECK(back[i].x0 == p[i].x0);
    CHECK(back[i].A == p[i].A);
  }
  CHECK(stretch_time(p, 3.0).duration() == doctest::Approx(3 * p.duration()));
  CHECK_THROWS_AS(stretch_time(p, 0.0), ArgumentError);
}

TEST_CASE("smooth") {
  SUBCASE("constant path is a fixed point") {
    std::vector<ControlSample> s;
    for (int k = 0; k < 12; ++k) s.push_back({0.01 * k, 0.123456789, 77.7});
    const ControlPath p(s);
    CHECK(smooth(p) == p);
    CHECK(smooth(smooth(p, 3), 7) == p);
  }
  SUBCASE("fully locked mask is the identity") {
    std::mt19937_64 rng(3);
    const auto p = random_path(rng, TweezerSpec{}, 20);
    CHECK(smooth(p, 5, LockMask({{0.0, p.duration()}})) == p);
  }
  SUBCASE("triangle spike") {
    // Window 3 over x0 = 0, 0, 1, 0, 0 gives 0, 1/3, 1/3, 1/3, 0 by hand.
    const ControlPath spike({{0, 0, 50}, {0.1, 0, 50}, {0.2, 1, 50}, {0.3, 0, 50}, {0.4, 0, 50}});
    const auto s = smooth(spike, 3);
    CHECK(s[0].x0 == 0.0);
    CHECK(s[1].x0 == doctest::Approx(1.0 / 3));
    CHECK(s[2].x0 == doctest::Approx(1.0 / 3));
    CHECK(s[3].x0 == doctest::Approx(1.0 / 3));
    CHECK(s[4].x0 == 0.0);
    CHECK(position_total_variation(s) == doctest::Approx(2.0 / 3));
    CHECK(position_total_variation(s) <= position_total_variation(spike));
  }
  SUBCASE("locked samples stay, neighbours still see them") {
    const ControlPath p({{0, 0, 0}, {0.1, 0, 0}, {0.2, 0.9, 0}, {0.3, 0, 0}, {0.4, 0, 0}});
    const auto s = smooth(p, 3, LockMask({{0.15, 0.25}}));
    CHECK(s[2].x0 == 0.9);
    CHECK(s[1].x0 == doctest::Approx(0.3));
  }
  const ControlPath p({{0, 0, 0}, {1, 0, 0}});
  CHECK_THROWS_AS(smooth(p, 4), ArgumentError);
  CHECK_THROWS_AS(smooth(p, 1), ArgumentError);
}

TEST_CASE("lock mask validation") {
  const ControlPath p({{0, 0, 0}, {1, 0, 0}});
  CHECK_THROWS_AS(LockMask({{0.5, 0.2}}), ArgumentError);
  CHECK_THROWS_AS(LockMask({{0.1, 0.4}, {0.3, 0.6}}), ArgumentError);
  CHECK_THROWS_AS(LockMask({{0.5, 1.5}}).check(p), ArgumentError);
  const LockMask m({{0.6, 0.8}, {0.1, 0.2}});
  CHECK(m.locked(0.15));
  CHECK(m.locked(0.8));
  CHECK_FALSE(m.locked(0.5));
}

TEST_CASE("editors never emit invalid paths") {
  std::mt19937_64 rng(2024);
  TweezerSpec spec;
  spec.x_min = -0.7;
  spec.x_max = 0.7;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_path(rng, spec, 3 + int(unit(rng) * 40));
    check_invariants(resample(p, 10 + unit(rng) * 500), spec);
    check_invariants(stretch_time(p, 0.1 + 3 * unit(rng)), spec);
    const double lo = unit(rng) * p.duration();
    const LockMask mask({{lo, lo + (p.duration() - lo) * unit(rng)}});
    const int window = 3 + 2 * int(unit(rng) * 4);
    const auto s = smooth(p, window, mask);
    check_invariants(s, spec);
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(s[i].t == p[i].t);
      if (mask.locked(p[i].t)) CHECK(s[i] == p[i]);
    }
    const std::size_t idx = std::size_t(unit(rng) * (p.size() - 1));
    ControlSample target = p[idx];
    target.x0 = spec.x_min + unit(rng) * (spec.x_max - spec.x_min);
    check_invariants(move_point(p, idx, target, spec), spec);
  }
}

TEST_CASE("play record round trip") {
  const PlayRecord r = sample_record();
  const auto bytes = encode_play(r);
  CHECK(bytes[0] == kPlayRecordVersion);
  const PlayRecord back = decode_play(bytes);
  CHECK(back == r);
  CHECK(back.path.origin() == PathOrigin::edited);
  CHECK(encode_play(back) == bytes);

  PlayRecord died = r;
  died.score.died = true;
  died.score.death_time = 0.125;
  died.score.death_zone = 1;
  died.score.total_score = 0;
  died.score.stars = 0;
  CHECK(decode_play(encode_play(died)) == died);
}

TEST_CASE("play record decoding is strict") {
  const auto bytes = encode_play(sample_record());
  for (std::size_t cut : {std::size_t(0), std::size_t(1), std::size_t(5), bytes.size() / 2, bytes.size() - 1}) {
    std::vector<std::uint8_t> truncated(bytes.begin(), bytes.begin() + long(cut));
    CHECK_THROWS_AS(decode_play(truncated), ParseError);
  }
  auto trailing = bytes;
  trailing.push_back(0);
  CHECK_THROWS_AS(decode_play(trailing), ParseError);

  auto future = bytes;
  future[0] = 2;
  try {
    decode_play(future);
    FAIL("expected UnsupportedVersionError");
  } catch (const UnsupportedVersionError& e) {
    CHECK(e.version == 2);
  }
}

TEST_CASE("play batch container") {
  std::vector<PlayRecord> records;
  for (int i = 0; i < 5; ++i) {
    auto r = sample_record();
    r.user_id = "user" + std::to_string(i);
    r.score.total_score = 100 * i;
    records.push_back(r);
  }
  const auto batch = encode_play_batch(records);
  CHECK(decode_play_batch(batch) == records);
  CHECK(decode_play_batch({}).empty());

  auto partial = batch;
  partial.resize(partial.size() - 3);
  std::size_t complete = 0;
  const auto frames = split_play_batch(partial, &complete);
  CHECK(frames.size() == 4);
  CHECK(complete < partial.size());
  CHECK(decode_play(frames[3]) == records[3]);
  CHECK_THROWS_AS(decode_play_batch(partial), ParseError);
}

TEST_CASE("path csv") {
  const ControlPath p({{0, -0.5, 160}, {0.125, 0.1, 160}, {0.25, 0.1, 0}});
  const auto text = format_path_csv(p);
  CHECK(text.rfind("t,x0,A\n", 0) == 0);
  CHECK(parse_path_csv(text) == ControlPath(p.samples(), PathOrigin::reference));
  CHECK(parse_path_csv("0,1,1\n0.5,1,1\n", PathOrigin::human).size() == 2);
  CHECK_THROWS_AS(parse_path_csv("t,x0,A\n0,1\n"), ParseError);
  CHECK_THROWS_AS(parse_path_csv("0,0,0\n0,0,0\n"), ParseError);
}
