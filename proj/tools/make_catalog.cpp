// Writes the built-in level catalog: level files, reference paths and the
// manifest. Reference hold times for tunneling levels come from the
// eigensolver, so regenerate after changing the numerics.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include "qmoves/level/catalog.hpp"
#include "qmoves/level/scoring.hpp"
#include "qmoves/path/play_record.hpp"
#include "qmoves/quantum.hpp"

using namespace qmoves;

namespace {

constexpr double kSampleStep = 0.01;
constexpr double kRamp = 0.03;
constexpr double kKick = 0.08;

StaticFeature well(double center, double depth, double width = 0.05) {
  return {StaticFeature::Kind::well, center, depth, width};
}

StaticFeature barrier(double center, double height, double width) {
  return {StaticFeature::Kind::barrier, center, height, width};
}

// Reflecting walls just inside the periodic boundary.
void add_walls(Level& level) {
  level.static_potential.push_back(barrier(-0.9, 400, 0.04));
  level.static_potential.push_back(barrier(0.9, 400, 0.04));
}

Level base(std::string id, std::string title, std::vector<SkillTag> tags) {
  Level l;
  l.id = std::move(id);
  l.title = std::move(title);
  l.skill_tags = std::move(tags);
  l.tweezer = {0.05, 160.0, -0.8, 0.8};
  return l;
}

// Minimum-jerk segments sampled every kSampleStep.
class PathBuilder {
 public:
  explicit PathBuilder(ControlSample start) { samples_.push_back({0.0, start.x0, start.A}); }

  PathBuilder& move(double x0, double A, double duration) {
    const ControlSample from = samples_.back();
    const int n = std::max(1, int(std::ceil(duration / kSampleStep - 1e-9)));
    for (int i = 1; i <= n; ++i) {
      const double tau = double(i) / n;
      const double s = tau * tau * tau * (10 - 15 * tau + 6 * tau * tau);
      samples_.push_back({from.t + duration * tau, from.x0 + (x0 - from.x0) * s, from.A + (A - from.A) * s});
    }
    return *this;
  }

  PathBuilder& hold(double duration) {
    const ControlSample last = samples_.back();
    samples_.push_back({last.t + duration, last.x0, last.A});
    return *this;
  }

  ControlPath build() const { return ControlPath(samples_, PathOrigin::reference); }

 private:
  std::vector<ControlSample> samples_;
};

// Half the tunneling period between a static well and the tweezer parked at
// (x0, A), from the two lowest eigenvalues of the combined landscape.
double tunneling_half_period(const Level& level, double x0, double A) {
  const SimConfig config;
  const auto pairs = eigenstates(landscape(level, {0.0, x0, A}, config), config, 2);
  return std::numbers::pi / (pairs[1].energy - pairs[0].energy);
}

struct Design {
  Level level;
  std::string section;
  Tier tier;
  ControlPath reference;
};

Design transport(std::string id, std::string title, std::string section, Tier tier, double from, double to,
                 double A, double move_time, double duration_max, std::vector<SkillTag> tags) {
  Level l = base(std::move(id), std::move(title), std::move(tags));
  l.initial_trap = Trap::tweezer(from, A);
  l.target_trap = Trap::tweezer(to, A);
  l.duration_max = duration_max;
  add_walls(l);
  auto ref = PathBuilder(l.start_sample()).move(to, A, move_time).build();
  return {l, std::move(section), tier, ref};
}

// Atom starts in static well 0 at `well_x`; the tweezer parks `sep` away on the
// inner side at resonant depth, waits half a tunneling period, then kicks away
// at target depth so the atom cannot tunnel back, and carries it to the target.
Design tunnel_fetch(Level l, std::string section, Tier tier, double well_x, double depth, double sep,
                    double retreat_time) {
  const double side = well_x > l.target_trap.x0 ? -1.0 : 1.0;
  const double park = well_x + side * sep;
  const double hold = tunneling_half_period(l, park, depth);
  auto ref = PathBuilder(l.start_sample())
                 .move(park, 0.0, 0.1)
                 .move(park, depth, kRamp)
                 .hold(hold - kRamp)
                 .move(park + side * 0.1, l.target_trap.A, kKick)
                 .move(l.target_trap.x0, l.target_trap.A, retreat_time)
                 .build();
  return {l, std::move(section), tier, ref};
}

std::vector<Design> designs() {
  std::vector<Design> out;
  using enum SkillTag;
  const auto tut = Tier::tutorial;

  // Tutorials.
  {
    auto d = transport("tutorial_01", "First Steps", "tutorial", tut, -0.4, 0.4, 160, 0.5, 2.0, {});
    d.level.display_mode = DisplayMode::ball;
    d.level.time_penalty_weight = 0.1;
    out.push_back(d);
  }
  {
    auto d = transport("tutorial_02", "Gentle Stop", "tutorial", tut, -0.6, 0.6, 160, 0.6, 1.5, {deceleration});
    d.level.display_mode = DisplayMode::ball;
    out.push_back(d);
  }
  {
    Level l = base("tutorial_03", "Deep Breath", {stabilization});
    l.display_mode = DisplayMode::ball;
    l.initial_trap = Trap::tweezer(0.0, 60);
    l.target_trap = Trap::tweezer(0.0, 160);
    l.duration_max = 1.0;
    add_walls(l);
    out.push_back({l, "tutorial", tut, PathBuilder(l.start_sample()).move(0.0, 160, 0.3).build()});
  }
  {
    auto d = transport("tutorial_04", "Collector", "tutorial", tut, -0.5, 0.5, 160, 0.6, 1.5, {});
    d.level.bonus_pickups = {{0.0, 0.05, 50}};
    out.push_back(d);
  }
  {
    Level l = base("tutorial_05", "Drop Off", {stabilization});
    l.static_potential = {well(0.4, 100)};
    l.initial_trap = Trap::tweezer(-0.4, 160);
    l.target_trap = Trap::static_well(0);
    l.duration_max = 1.5;
    add_walls(l);
    auto ref = PathBuilder(l.start_sample()).move(0.4, 160, 0.5).move(0.4, 0, 0.2).build();
    out.push_back({l, "tutorial", tut, ref});
  }
  {
    Level l = base("tutorial_06", "Pick Up", {stabilization});
    l.static_potential = {well(-0.4, 100)};
    l.initial_trap = Trap::static_well(0);
    l.target_trap = Trap::tweezer(0.4, 160);
    l.duration_max = 1.5;
    add_walls(l);
    auto ref = PathBuilder(l.start_sample()).move(-0.4, 0, 0.1).move(-0.4, 160, 0.2).move(0.4, 160, 0.5).build();
    out.push_back({l, "tutorial", tut, ref});
  }
  {
    auto d = transport("tutorial_07", "Zone of Death", "tutorial", tut, -0.4, 0.3, 160, 0.6, 1.5, {deceleration});
    d.level.death_zones = {{0.6, 0.85}};
    out.push_back(d);
  }

  // Cool lab: deceleration.
  const auto bsc = Tier::bachelor;
  const auto msc = Tier::master;
  {
    auto d = transport("cool_b1", "Quick Step", "cool", bsc, -0.3, 0.3, 160, 0.3, 0.6, {deceleration});
    d.level.time_penalty_weight = 0.4;
    out.push_back(d);
  }
  out.push_back(transport("cool_b2", "Long Haul", "cool", bsc, -0.7, 0.7, 160, 0.6, 1.0, {deceleration}));
  out.push_back(transport("cool_b3", "Shallow Carry", "cool", bsc, -0.5, 0.5, 60, 0.8, 1.2, {deceleration}));
  {
    auto d = transport("cool_b4", "Brake Zone", "cool", bsc, -0.6, 0.35, 160, 0.6, 1.0, {deceleration});
    d.level.death_zones = {{0.65, 0.85}};
    out.push_back(d);
  }
  {
    auto d = transport("cool_m1", "Express", "cool", msc, -0.7, 0.7, 160, 0.4, 0.5, {deceleration});
    d.level.time_penalty_weight = 0.4;
    d.level.star_thresholds = {0.6, 0.85, 0.97};
    out.push_back(d);
  }
  {
    auto d = transport("cool_m2", "Tight Corridor", "cool", msc, -0.35, 0.35, 160, 0.4, 0.7, {deceleration});
    d.level.death_zones = {{-0.85, -0.65}, {0.65, 0.85}};
    d.level.star_thresholds = {0.6, 0.85, 0.97};
    out.push_back(d);
  }

  // Tunneling lab.
  {
    Level l = base("tunnel_b1", "First Tunnel", {tunneling});
    l.static_potential = {well(0.3, 120)};
    l.initial_trap = Trap::static_well(0);
    l.target_trap = Trap::tweezer(-0.4, 160);
    l.duration_max = 1.0;
    add_walls(l);
    out.push_back(tunnel_fetch(l, "tunneling", bsc, 0.3, 120, 0.25, 0.4));
  }
  {
    Level l = base("tunnel_b2", "Wide Gap", {tunneling});
    l.static_potential = {well(0.4, 120)};
    l.initial_trap = Trap::static_well(0);
    l.target_trap = Trap::tweezer(-0.3, 160);
    l.duration_max = 1.2;
    add_walls(l);
    out.push_back(tunnel_fetch(l, "tunneling", bsc, 0.4, 120, 0.3, 0.4));
  }
  {
    Level l = base("tunnel_b3", "Shallow Source", {tunneling});
    l.static_potential = {well(-0.35, 100)};
    l.initial_trap = Trap::static_well(0);
    l.target_trap = Trap::tweezer(0.4, 160);
    l.duration_max = 1.0;
    add_walls(l);
    out.push_back(tunnel_fetch(l, "tunneling", bsc, -0.35, 100, 0.25, 0.4));
  }
  {
    Level l = base("tunnel_b4", "Deep Source", {tunneling});
    l.static_potential = {well(0.45, 160)};
    l.initial_trap = Trap::static_well(0);
    l.target_trap = Trap::tweezer(-0.3, 160);
    l.duration_max = 1.2;
    add_walls(l);
    out.push_back(tunnel_fetch(l, "tunneling", bsc, 0.45, 160, 0.3, 0.4));
  }
  {
    Level l = base("tunnel_m1", "Guarded Well", {tunneling});
    l.static_potential = {well(0.15, 120)};
    l.initial_trap = Trap::static_well(0);
    l.target_trap = Trap::tweezer(-0.45, 160);
    l.death_zones = {{-0.85, -0.7}};
    l.duration_max = 0.9;
    l.star_thresholds = {0.6, 0.85, 0.97};
    add_walls(l);
    out.push_back(tunnel_fetch(l, "tunneling", msc, 0.15, 120, 0.25, 0.35));
  }
  {
    Level l = base("tunnel_m2", "Far Fetch", {tunneling});
    l.static_potential = {well(0.55, 120)};
    l.initial_trap = Trap::static_well(0);
    l.target_trap = Trap::tweezer(-0.6, 160);
    l.duration_max = 1.0;
    l.time_penalty_weight = 0.3;
    l.star_thresholds = {0.6, 0.85, 0.97};
    add_walls(l);
    out.push_back(tunnel_fetch(l, "tunneling", msc, 0.55, 120, 0.25, 0.5));
  }

  // Control lab: stabilization.
  {
    Level l = base("control_b1", "Soften", {stabilization});
    l.initial_trap = Trap::tweezer(0.0, 160);
    l.target_trap = Trap::tweezer(0.0, 40);
    l.duration_max = 1.0;
    add_walls(l);
    out.push_back({l, "control", bsc, PathBuilder(l.start_sample()).move(0.0, 40, 0.4).build()});
  }
  {
    Level l = base("control_b2", "Tighten Up", {stabilization});
    l.initial_trap = Trap::tweezer(-0.3, 40);
    l.target_trap = Trap::tweezer(0.3, 160);
    l.duration_max = 1.2;
    add_walls(l);
    out.push_back({l, "control", bsc, PathBuilder(l.start_sample()).move(-0.3, 160, 0.2).move(0.3, 160, 0.5).build()});
  }
  {
    Level l = base("control_b3", "Hand Off", {stabilization});
    l.static_potential = {well(0.2, 100)};
    l.initial_trap = Trap::tweezer(-0.3, 160);
    l.target_trap = Trap::static_well(0);
    l.duration_max = 1.2;
    add_walls(l);
    out.push_back({l, "control", bsc, PathBuilder(l.start_sample()).move(0.2, 160, 0.5).move(0.2, 0, 0.3).build()});
  }
  {
    Level l = base("control_b4", "Lift Off", {stabilization});
    l.static_potential = {well(0.0, 80)};
    l.initial_trap = Trap::static_well(0);
    l.target_trap = Trap::tweezer(0.0, 160);
    l.duration_max = 1.0;
    add_walls(l);
    out.push_back({l, "control", bsc, PathBuilder(l.start_sample()).move(0.0, 160, 0.3).build()});
  }
  {
    Level l = base("control_m1", "Soft Landing", {stabilization});
    l.static_potential = {well(0.1, 50, 0.08)};
    l.initial_trap = Trap::tweezer(-0.4, 160);
    l.target_trap = Trap::static_well(0);
    l.death_zones = {{0.55, 0.85}};
    l.duration_max = 1.2;
    l.star_thresholds = {0.6, 0.85, 0.97};
    add_walls(l);
    out.push_back({l, "control", msc, PathBuilder(l.start_sample()).move(0.1, 160, 0.5).move(0.1, 0, 0.4).build()});
  }
  {
    Level l = base("control_m2", "Balancing Act", {stabilization, deceleration});
    l.initial_trap = Trap::tweezer(-0.5, 160);
    l.target_trap = Trap::tweezer(0.5, 50);
    l.bonus_pickups = {{0.0, 0.05, 100}};
    l.duration_max = 1.2;
    l.star_thresholds = {0.6, 0.85, 0.97};
    add_walls(l);
    out.push_back({l, "control", msc, PathBuilder(l.start_sample()).move(0.5, 160, 0.6).move(0.5, 50, 0.3).build()});
  }

  // Scientific levels.
  {
    Level l = base("bring_home_water_fast", "Bring Home Water Fast", {tunneling});
    l.static_potential = {well(0.5, 120)};
    l.initial_trap = Trap::static_well(0);
    l.target_trap = Trap::tweezer(-0.5, 160);
    l.duration_max = 1.0;
    add_walls(l);
    out.push_back(tunnel_fetch(l, "scientific", Tier::scientific, 0.5, 120, 0.25, 0.4));
  }
  {
    Level l = base("qcomp_transport", "Qubit Shuttle", {deceleration, stabilization});
    l.static_potential = {well(-0.5, 100), well(0.5, 105)};
    l.initial_trap = Trap::static_well(0);
    l.target_trap = Trap::static_well(1);
    l.duration_max = 1.2;
    l.star_thresholds = {0.7, 0.9, 0.99};
    add_walls(l);
    auto ref = PathBuilder(l.start_sample())
                   .move(-0.5, 0, 0.1)
                   .move(-0.5, 160, 0.15)
                   .move(0.5, 160, 0.5)
                   .move(0.5, 0, 0.15)
                   .build();
    out.push_back({l, "scientific", Tier::scientific, ref});
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the built-in level catalog"};
  std::string out_dir;
  bool report = false;
  app.add_option("out_dir", out_dir, "Directory to write")->required();
  app.add_flag("--report", report, "Score every reference path and print the result");
  CLI11_PARSE(app, argc, argv);
  std::setvbuf(stdout, nullptr, _IOLBF, 0);

  std::filesystem::create_directories(out_dir);
  std::string manifest = "# id section tier\n";
  int failures = 0;
  for (const auto& d : designs()) {
    d.level.validate();
    d.reference.check_bounds(d.level.tweezer);
    const std::string text = serialize_level(d.level);
    const std::string csv = format_path_csv(d.reference);
    write_file_bytes(out_dir + "/" + d.level.id + ".qmlevel", {text.begin(), text.end()});
    write_file_bytes(out_dir + "/" + d.level.id + ".ref.csv", {csv.begin(), csv.end()});
    manifest += d.level.id + " " + d.section + " " + std::string(to_string(d.tier)) + "\n";
    if (report) {
      std::fprintf(stderr, "scoring %s\n", d.level.id.c_str());
      const auto r = score_play(d.level, d.reference);
      std::printf("%-22s F=%.4f stars=%d score=%ld died=%d duration=%.3f\n", d.level.id.c_str(), r.fidelity,
                  r.stars, r.total_score, int(r.died), d.reference.duration());
      if (r.stars < 1) ++failures;
    }
  }
  write_file_bytes(out_dir + "/catalog.txt", {manifest.begin(), manifest.end()});
  return failures == 0 ? 0 : 1;
}
