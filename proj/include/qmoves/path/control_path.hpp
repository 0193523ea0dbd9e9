#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "qmoves/quantum/potential.hpp"

namespace qmoves {

enum class PathOrigin : std::uint8_t { human, local_opt, stochastic_opt, hybrid, reference, edited };

std::string_view to_string(PathOrigin origin);
PathOrigin path_origin_from_string(std::string_view name);

/// Time-ordered tweezer control samples; the unit of a play.
///
/// Construction enforces the structural invariants (at least two samples,
/// first time zero, strictly increasing times). Position and depth bounds
/// depend on the level and are checked with `check_bounds`.
class ControlPath {
 public:
  ControlPath() = default;
  explicit ControlPath(std::vector<ControlSample> samples, PathOrigin origin = PathOrigin::human);

  const std::vector<ControlSample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  const ControlSample& operator[](std::size_t i) const { return samples_[i]; }
  PathOrigin origin() const { return origin_; }
  void set_origin(PathOrigin origin) { origin_ = origin; }
  double duration() const { return samples_.empty() ? 0.0 : samples_.back().t; }

  /// Piecewise-linear interpolation; clamps to the end values outside [0, duration].
  ControlSample at(double t) const;

  void check_bounds(const TweezerSpec& spec) const;

  bool operator==(const ControlPath&) const = default;

 private:
  std::vector<ControlSample> samples_;
  PathOrigin origin_ = PathOrigin::human;
};

/// Sequential interpolation for monotonically increasing query times.
class PathCursor {
 public:
  explicit PathCursor(const ControlPath& path) : path_(&path) {}
  ControlSample at(double t);

 private:
  const ControlPath* path_;
  std::size_t segment_ = 0;
};

/// Locked time intervals that editing tools must leave untouched.
class LockMask {
 public:
  struct Interval {
    double lo;
    double hi;
    bool operator==(const Interval&) const = default;
  };

  LockMask() = default;
  explicit LockMask(std::vector<Interval> intervals);

  /// Validates against a path: intervals disjoint and within its duration.
  void check(const ControlPath& path) const;
  bool locked(double t) const;
  const std::vector<Interval>& intervals() const { return intervals_; }

 private:
  std::vector<Interval> intervals_;
};

// FineTune editors. Each returns a path satisfying the invariants or throws.

/// Uniform grid k/rate plus the original end time; linear interpolation.
ControlPath resample(const ControlPath& path, double rate);

ControlPath move_point(const ControlPath& path, std::size_t index, const ControlSample& sample,
                       const TweezerSpec& spec);

ControlPath stretch_time(const ControlPath& path, double factor);

/// Centered moving average of x0 and A over `window` samples, truncated at the
/// ends. Locked samples and both endpoints keep their values but still feed
/// their neighbours' averages.
ControlPath smooth(const ControlPath& path, int window = 5, const LockMask& lock = {});

/// Sum of |x0[i+1] - x0[i]|.
double position_total_variation(const ControlPath& path);

}  // namespace qmoves
