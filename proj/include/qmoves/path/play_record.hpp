#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmoves/level/scoring.hpp"
#include "qmoves/path/control_path.hpp"

namespace qmoves {

/// One stored game: the full control path plus its score.
struct PlayRecord {
  std::string level_id;
  std::string user_id;
  std::int64_t timestamp_ms = 0;  // Unix epoch, UTC
  std::string client_version;
  ControlPath path;
  ScoreReport score;

  bool operator==(const PlayRecord&) const = default;
};

/// Binary `.qmplay` layout, little-endian:
///
///   u8  version (= 1)
///   u32 length, meta section:  str level_id, str user_id, i64 timestamp_ms,
///                              str client_version, u8 origin
///   u32 length, path section:  u32 count, count x (f64 t, f64 x0, f64 A)
///   u32 length, score section: f64 fidelity, f64 time_used, f64 time_penalty,
///                              i32 bonus_points, i64 total_score, u8 stars,
///                              u8 died, f64 death_time, i32 death_zone,
///                              u32 count, count x f64 feedback
///
/// where str is u32 byte length followed by UTF-8 bytes. Decoding accepts only
/// this exact layout, so encode(decode(bytes)) == bytes.
inline constexpr std::uint8_t kPlayRecordVersion = 1;

std::vector<std::uint8_t> encode_play(const PlayRecord& record);
PlayRecord decode_play(const std::vector<std::uint8_t>& bytes);

/// Batch container: concatenation of (u32 length, encoded record).
std::vector<std::uint8_t> encode_play_batch(const std::vector<PlayRecord>& records);
std::vector<PlayRecord> decode_play_batch(const std::vector<std::uint8_t>& bytes);

/// Splits a batch into raw record payloads without decoding them. A trailing
/// partial frame is reported through `complete_bytes` rather than thrown.
std::vector<std::vector<std::uint8_t>> split_play_batch(const std::vector<std::uint8_t>& bytes,
                                                        std::size_t* complete_bytes = nullptr);

std::vector<std::uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes);

PlayRecord load_play_file(const std::string& path);

/// Plain `t,x0,A` CSV (header optional) as a control path.
ControlPath parse_path_csv(const std::string& text, PathOrigin origin = PathOrigin::reference);
std::string format_path_csv(const ControlPath& path);

}  // namespace qmoves
