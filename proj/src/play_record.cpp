#include "qmoves/path/play_record.hpp"

#include <bit>
#include <charconv>
#include <fstream>
#include <sstream>

namespace qmoves {

namespace {

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) { put(v, 4); }
  void i32(std::int32_t v) { put(static_cast<std::uint32_t>(v), 4); }
  void i64(std::int64_t v) { put(static_cast<std::uint64_t>(v), 8); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.insert(out_.end(), s.begin(), s.end());
  }
  void section(const Writer& body) {
    u32(static_cast<std::uint32_t>(body.out_.size()));
    out_.insert(out_.end(), body.out_.begin(), body.out_.end());
  }
  std::vector<std::uint8_t>& bytes() { return out_; }

 private:
  void put(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  Reader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::int32_t i32() { return static_cast<std::int32_t>(static_cast<std::uint32_t>(get(4))); }
  std::int64_t i64() { return static_cast<std::int64_t>(get(8)); }
  double f64() { return std::bit_cast<double>(get(8)); }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(reinterpret_cast<const char*>(data_ + pos_), n);
    pos_ += n;
    return s;
  }
  Reader section(const char* name) {
    const std::uint32_t n = u32();
    if (n > size_ - pos_) throw ParseError(std::string("truncated ") + name + " section");
    Reader r(data_ + pos_, n);
    pos_ += n;
    return r;
  }
  void finish(const char* name) const {
    if (pos_ != size_) throw ParseError(std::string("trailing bytes in ") + name);
  }
  std::size_t remaining() const { return size_ - pos_; }

 private:
  void need(std::size_t n) const {
    if (n > size_ - pos_) throw ParseError("truncated play record");
  }
  std::uint64_t get(int n) {
    need(n);
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= std::uint64_t(data_[pos_ + i]) << (8 * i);
    pos_ += n;
    return v;
  }
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

bool read_flag(Reader& r) {
  const auto b = r.u8();
  if (b > 1) throw ParseError("flag byte must be 0 or 1");
  return b == 1;
}

}  // namespace

std::vector<std::uint8_t> encode_play(const PlayRecord& record) {
  Writer meta;
  meta.str(record.level_id);
  meta.str(record.user_id);
  meta.i64(record.timestamp_ms);
  meta.str(record.client_version);
  meta.u8(static_cast<std::uint8_t>(record.path.origin()));

  Writer path;
  path.u32(static_cast<std::uint32_t>(record.path.size()));
  for (const auto& s : record.path.samples()) {
    path.f64(s.t);
    path.f64(s.x0);
    path.f64(s.A);
  }

  const auto& sc = record.score;
  Writer score;
  score.f64(sc.fidelity);
  score.f64(sc.time_used);
  score.f64(sc.time_penalty);
  score.i32(sc.bonus_points);
  score.i64(sc.total_score);
  score.u8(static_cast<std::uint8_t>(sc.stars));
  score.u8(sc.died ? 1 : 0);
  score.f64(sc.death_time);
  score.i32(sc.death_zone);
  score.u32(static_cast<std::uint32_t>(sc.feedback_trace.size()));
  for (double v : sc.feedback_trace) score.f64(v);

  Writer out;
  out.u8(kPlayRecordVersion);
  out.section(meta);
  out.section(path);
  out.section(score);
  return std::move(out.bytes());
}

PlayRecord decode_play(const std::vector<std::uint8_t>& bytes) {
  if (bytes.empty()) throw ParseError("empty play record");
  Reader in(bytes.data(), bytes.size());
  const auto version = in.u8();
  if (version != kPlayRecordVersion) throw UnsupportedVersionError(version);

  PlayRecord record;
  Reader meta = in.section("meta");
  record.level_id = meta.str();
  record.user_id = meta.str();
  record.timestamp_ms = meta.i64();
  record.client_version = meta.str();
  const auto origin = meta.u8();
  if (origin > static_cast<std::uint8_t>(PathOrigin::edited)) throw ParseError("unknown path origin");
  meta.finish("meta section");

  Reader path = in.section("path");
  const std::uint32_t count = path.u32();
  if (std::size_t(count) * 24 != path.remaining()) throw ParseError("path section length mismatch");
  std::vector<ControlSample> samples(count);
  for (auto& s : samples) {
    s.t = path.f64();
    s.x0 = path.f64();
    s.A = path.f64();
  }
  path.finish("path section");
  try {
    record.path = ControlPath(std::move(samples), static_cast<PathOrigin>(origin));
  } catch (const ArgumentError& e) {
    throw ParseError(std::string("invalid control path: ") + e.what());
  }

  Reader score = in.section("score");
  auto& sc = record.score;
  sc.fidelity = score.f64();
  sc.time_used = score.f64();
  sc.time_penalty = score.f64();
  sc.bonus_points = score.i32();
  sc.total_score = score.i64();
  sc.stars = score.u8();
  sc.died = read_flag(score);
  sc.death_time = score.f64();
  sc.death_zone = score.i32();
  const std::uint32_t n = score.u32();
  if (std::size_t(n) * 8 != score.remaining()) throw ParseError("score section length mismatch");
  sc.feedback_trace.resize(n);
  for (auto& v : sc.feedback_trace) v = score.f64();
  score.finish("score section");

  in.finish("play record");
  return record;
}

std::vector<std::uint8_t> encode_play_batch(const std::vector<PlayRecord>& records) {
  Writer out;
  for (const auto& r : records) {
    Writer body;
    body.bytes() = encode_play(r);
    out.section(body);
  }
  return std::move(out.bytes());
}

std::vector<std::vector<std::uint8_t>> split_play_batch(const std::vector<std::uint8_t>& bytes,
                                                        std::size_t* complete_bytes) {
  std::vector<std::vector<std::uint8_t>> out;
  std::size_t pos = 0;
  while (bytes.size() - pos >= 4) {
    std::uint32_t n = 0;
    for (int i = 0; i < 4; ++i) n |= std::uint32_t(bytes[pos + i]) << (8 * i);
    if (n > bytes.size() - pos - 4) break;
    out.emplace_back(bytes.begin() + pos + 4, bytes.begin() + pos + 4 + n);
    pos += 4 + n;
  }
  if (complete_bytes) {
    *complete_bytes = pos;
  } else if (pos != bytes.size()) {
    throw ParseError("truncated play batch");
  }
  return out;
}

std::vector<PlayRecord> decode_play_batch(const std::vector<std::uint8_t>& bytes) {
  std::vector<PlayRecord> out;
  for (const auto& frame : split_play_batch(bytes)) out.push_back(decode_play(frame));
  return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
}

PlayRecord load_play_file(const std::string& path) { return decode_play(read_file_bytes(path)); }

ControlPath parse_path_csv(const std::string& text, PathOrigin origin) {
  std::vector<ControlSample> samples;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line_no == 1 && line.rfind("t,", 0) == 0) continue;
    double v[3];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int i = 0; i < 3; ++i) {
      auto [ptr, ec] = std::from_chars(p, end, v[i]);
      if (ec != std::errc()) throw ParseError("expected t,x0,A", line_no);
      p = ptr;
      if (i < 2) {
        if (p == end || *p != ',') throw ParseError("expected t,x0,A", line_no);
        ++p;
      }
    }
    if (p != end) throw ParseError("trailing characters after t,x0,A", line_no);
    samples.push_back({v[0], v[1], v[2]});
  }
  try {
    return ControlPath(std::move(samples), origin);
  } catch (const ArgumentError& e) {
    throw ParseError(e.what());
  }
}

std::string format_path_csv(const ControlPath& path) {
  std::string out = "t,x0,A\n";
  char buf[64];
  for (const auto& s : path.samples()) {
    const double values[3] = {s.t, s.x0, s.A};
    for (int i = 0; i < 3; ++i) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, values[i]);
      out.append(buf, end);
      out.push_back(i == 2 ? '\n' : ',');
    }
  }
  return out;
}

}  // namespace qmoves
