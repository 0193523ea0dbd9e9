#include "qmoves/path/control_path.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace qmoves {

namespace {
constexpr std::array<std::string_view, 6> kOriginNames = {
    "human", "local_opt", "stochastic_opt", "hybrid", "reference", "edited"};
}

std::string_view to_string(PathOrigin origin) {
  return kOriginNames.at(static_cast<std::size_t>(origin));
}

PathOrigin path_origin_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kOriginNames.size(); ++i)
    if (kOriginNames[i] == name) return static_cast<PathOrigin>(i);
  throw ArgumentError("unknown path origin '" + std::string(name) + "'");
}

ControlPath::ControlPath(std::vector<ControlSample> samples, PathOrigin origin)
    : samples_(std::move(samples)), origin_(origin) {
  if (samples_.size() < 2) throw ArgumentError("control path needs at least two samples");
  if (samples_.front().t != 0.0) throw ArgumentError("control path must start at t = 0");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (!std::isfinite(s.t) || !std::isfinite(s.x0) || !std::isfinite(s.A))
      throw ArgumentError("control sample " + std::to_string(i) + " is not finite");
    if (i > 0 && !(s.t > samples_[i - 1].t))
      throw ArgumentError("control sample times must be strictly increasing (index " +
                          std::to_string(i) + ")");
  }
}

ControlSample ControlPath::at(double t) const {
  if (t <= samples_.front().t) return {t, samples_.front().x0, samples_.front().A};
  if (t >= samples_.back().t) return {t, samples_.back().x0, samples_.back().A};
  auto hi = std::upper_bound(samples_.begin(), samples_.end(), t,
                             [](double v, const ControlSample& s) { return v < s.t; });
  const auto& b = *hi;
  const auto& a = *(hi - 1);
  const double w = (t - a.t) / (b.t - a.t);
  return {t, a.x0 + w * (b.x0 - a.x0), a.A + w * (b.A - a.A)};
}

void ControlPath::check_bounds(const TweezerSpec& spec) const {
  for (const auto& s : samples_) check_sample_bounds(spec, s);
}

ControlSample PathCursor::at(double t) {
  const auto& s = path_->samples();
  if (t <= s.front().t) return {t, s.front().x0, s.front().A};
  if (t >= s.back().t) return {t, s.back().x0, s.back().A};
  if (s[segment_].t > t) segment_ = 0;
  while (s[segment_ + 1].t <= t) ++segment_;
  const auto& a = s[segment_];
  const auto& b = s[segment_ + 1];
  const double w = (t - a.t) / (b.t - a.t);
  return {t, a.x0 + w * (b.x0 - a.x0), a.A + w * (b.A - a.A)};
}

LockMask::LockMask(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  std::sort(intervals_.begin(), intervals_.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (!(intervals_[i].lo <= intervals_[i].hi))
      throw ArgumentError("lock interval has lo > hi");
    if (i > 0 && !(intervals_[i].lo > intervals_[i - 1].hi))
      throw ArgumentError("lock intervals overlap");
  }
}

void LockMask::check(const ControlPath& path) const {
  for (const auto& iv : intervals_)
    if (iv.lo < 0.0 || iv.hi > path.duration())
      throw ArgumentError("lock interval outside the path duration");
}

bool LockMask::locked(double t) const {
  return std::any_of(intervals_.begin(), intervals_.end(),
                     [t](const Interval& iv) { return t >= iv.lo && t <= iv.hi; });
}

ControlPath resample(const ControlPath& path, double rate) {
  if (!(rate > 0.0)) throw ArgumentError("resample rate must be positive");
  const double duration = path.duration();
  std::vector<ControlSample> out;
  PathCursor cursor(path);
  for (long k = 0;; ++k) {
    const double t = k / rate;
    // Grid points within a relative 1e-9 step of the end collapse onto it.
    if (t >= duration - 1e-9 / rate) break;
    out.push_back(cursor.at(t));
  }
  const auto& last = path.samples().back();
  out.push_back(last);
  return ControlPath(std::move(out), path.origin());
}

ControlPath move_point(const ControlPath& path, std::size_t index, const ControlSample& sample,
                       const TweezerSpec& spec) {
  if (index >= path.size()) throw ArgumentError("move_point index out of range");
  check_sample_bounds(spec, sample);
  auto samples = path.samples();
  if (index == 0 && sample.t != 0.0) throw ArgumentError("the first sample must stay at t = 0");
  if (index > 0 && !(sample.t > samples[index - 1].t))
    throw ArgumentError("moved sample would precede its predecessor");
  if (index + 1 < samples.size() && !(sample.t < samples[index + 1].t))
    throw ArgumentError("moved sample would follow its successor");
  samples[index] = sample;
  return ControlPath(std::move(samples), path.origin());
}

ControlPath stretch_time(const ControlPath& path, double factor) {
  if (!(factor > 0.0)) throw ArgumentError("stretch factor must be positive");
  auto samples = path.samples();
  for (auto& s : samples) s.t *= factor;
  return ControlPath(std::move(samples), path.origin());
}

ControlPath smooth(const ControlPath& path, int window, const LockMask& lock) {
  if (window < 3 || window % 2 == 0) throw ArgumentError("smoothing window must be odd and >= 3");
  lock.check(path);
  const auto& in = path.samples();
  auto out = in;
  const long n = static_cast<long>(in.size());
  const long half = window / 2;
  for (long i = 1; i + 1 < n; ++i) {
    if (lock.locked(in[i].t)) continue;
    const long lo = std::max(0L, i - half);
    const long hi = std::min(n - 1, i + half);
    // Offsets from the centre sample keep constant runs bit-identical.
    double dx = 0.0, da = 0.0;
    for (long j = lo; j <= hi; ++j) {
      dx += in[j].x0 - in[i].x0;
      da += in[j].A - in[i].A;
    }
    const double count = double(hi - lo + 1);
    out[i].x0 = in[i].x0 + dx / count;
    out[i].A = in[i].A + da / count;
  }
  return ControlPath(std::move(out), path.origin());
}

double position_total_variation(const ControlPath& path) {
  double tv = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) tv += std::abs(path[i].x0 - path[i - 1].x0);
  return tv;
}

}  // namespace qmoves
