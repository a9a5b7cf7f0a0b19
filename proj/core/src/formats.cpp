// src/formats.cpp

// Copyright 2026  The Storyalign Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "storyalign/dataio.hpp"
#include "storyalign/error.hpp"

namespace storyalign {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail_line(std::size_t line, const char* code,
                            const std::string& what) {
  throw Error(code, "line " + std::to_string(line) + ": " + what);
}

json parse_line(const std::string& text, std::size_t line) {
  json record = json::parse(text, nullptr, false);
  if (record.is_discarded() || !record.is_object()) {
    fail_line(line, errc::kParse, "not a JSON object");
  }
  return record;
}

const json& field(const json& record, const char* name, std::size_t line) {
  auto it = record.find(name);
  if (it == record.end()) {
    fail_line(line, errc::kParse, std::string("missing field \"") + name +
                                      "\"");
  }
  return *it;
}

std::string get_string(const json& record, const char* name,
                       std::size_t line) {
  const json& v = field(record, name, line);
  if (!v.is_string()) {
    fail_line(line, errc::kParse, std::string("field \"") + name +
                                      "\" must be a string");
  }
  return v.get<std::string>();
}

double get_number(const json& record, const char* name, std::size_t line) {
  const json& v = field(record, name, line);
  if (!v.is_number()) {
    fail_line(line, errc::kParse, std::string("field \"") + name +
                                      "\" must be a number");
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    fail_line(line, errc::kNonFinite, std::string("field \"") + name +
                                          "\" is not finite");
  }
  return d;
}

std::size_t get_index(const json& record, const char* name,
                      std::size_t line) {
  const json& v = field(record, name, line);
  if (!v.is_number_unsigned()) {
    fail_line(line, errc::kParse, std::string("field \"") + name +
                                      "\" must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

TimeInterval get_interval(const json& record, std::size_t line) {
  const double start = get_number(record, "start", line);
  const double end = get_number(record, "end", line);
  try {
    return TimeInterval(start, end);
  } catch (const Error& e) {
    fail_line(line, errc::kValidation, e.what());
  }
}

// Streams records line by line; blank lines are ignored.
template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) continue;
    fn(parse_line(text, line), line);
  }
}

// Tracks per-video index contiguity while a file is streamed.
class ContiguityCheck {
 public:
  void expect(const std::string& video_id, std::size_t idx,
              std::size_t line) {
    const std::size_t want = next_[video_id];
    if (idx != want) {
      fail_line(line, errc::kValidation,
                "video \"" + video_id + "\": expected index " +
                    std::to_string(want) + ", got " + std::to_string(idx));
    }
    next_[video_id] = want + 1;
  }

 private:
  std::map<std::string, std::size_t> next_;
};

void require_ordered(const std::string& video_id, const TimeInterval& prev,
                     const TimeInterval& cur, std::size_t line) {
  if (cur.start < prev.end) {
    fail_line(line, errc::kValidation,
              "video \"" + video_id +
                  "\": spans must be sorted and non-overlapping");
  }
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::vector<SentenceRecord> parse_annotations(std::istream& in) {
  std::vector<SentenceRecord> out;
  ContiguityCheck contiguous;
  for_each_line(in, [&](const json& record, std::size_t line) {
    SentenceRecord s;
    s.video_id = get_string(record, "video_id", line);
    s.language = get_string(record, "lang", line);
    s.sentence_index = get_index(record, "idx", line);
    s.text = get_string(record, "text", line);
    contiguous.expect(s.video_id, s.sentence_index, line);

    const bool unmatched =
        record.contains("unmatched") && record["unmatched"].is_boolean() &&
        record["unmatched"].get<bool>();
    if (unmatched) {
      if (record.contains("start") || record.contains("end")) {
        fail_line(line, errc::kValidation,
                  "unmatched record must not carry start/end");
      }
    } else {
      s.gold = get_interval(record, line);
    }
    out.push_back(std::move(s));
  });
  return out;
}

void write_annotations(std::ostream& out,
                       const std::vector<SentenceRecord>& records) {
  for (const SentenceRecord& s : records) {
    json record;
    record["video_id"] = s.video_id;
    record["lang"] = s.language;
    record["idx"] = s.sentence_index;
    record["text"] = s.text;
    if (s.gold.has_value()) {
      record["start"] = s.gold->start;
      record["end"] = s.gold->end;
    } else {
      record["unmatched"] = true;
    }
    out << record.dump() << '\n';
  }
}

std::vector<ClipRecord> parse_clips(std::istream& in) {
  std::vector<ClipRecord> out;
  ContiguityCheck contiguous;
  std::map<std::string, TimeInterval> last;
  for_each_line(in, [&](const json& record, std::size_t line) {
    ClipRecord c;
    c.video_id = get_string(record, "video_id", line);
    c.clip_index = get_index(record, "idx", line);
    c.interval = get_interval(record, line);
    contiguous.expect(c.video_id, c.clip_index, line);
    if (auto it = last.find(c.video_id); it != last.end()) {
      require_ordered(c.video_id, it->second, c.interval, line);
    }
    last[c.video_id] = c.interval;
    out.push_back(std::move(c));
  });
  return out;
}

void write_clips(std::ostream& out, const std::vector<ClipRecord>& clips) {
  for (const ClipRecord& c : clips) {
    json record;
    record["video_id"] = c.video_id;
    record["idx"] = c.clip_index;
    record["start"] = c.interval.start;
    record["end"] = c.interval.end;
    out << record.dump() << '\n';
  }
}

std::vector<SubtitleSegment> parse_subtitles(std::istream& in) {
  std::vector<SubtitleSegment> out;
  ContiguityCheck contiguous;
  std::map<std::string, TimeInterval> last;
  for_each_line(in, [&](const json& record, std::size_t line) {
    SubtitleSegment seg;
    seg.video_id = get_string(record, "video_id", line);
    seg.sentence_index = get_index(record, "idx", line);
    seg.interval = get_interval(record, line);
    seg.text = get_string(record, "text", line);
    contiguous.expect(seg.video_id, seg.sentence_index, line);
    if (auto it = last.find(seg.video_id); it != last.end()) {
      require_ordered(seg.video_id, it->second, seg.interval, line);
    }
    last[seg.video_id] = seg.interval;
    out.push_back(std::move(seg));
  });
  return out;
}

void write_subtitles(std::ostream& out,
                     const std::vector<SubtitleSegment>& segments) {
  for (const SubtitleSegment& seg : segments) {
    json record;
    record["video_id"] = seg.video_id;
    record["idx"] = seg.sentence_index;
    record["start"] = seg.interval.start;
    record["end"] = seg.interval.end;
    record["text"] = seg.text;
    out << record.dump() << '\n';
  }
}

std::vector<VideoManifest> parse_manifests(std::istream& in) {
  std::vector<VideoManifest> out;
  for_each_line(in, [&](const json& record, std::size_t line) {
    VideoManifest m;
    m.video_id = get_string(record, "video_id", line);
    m.language = get_string(record, "lang", line);
    m.movie_name = get_string(record, "movie_name", line);
    m.duration = get_number(record, "duration", line);
    if (m.duration < 0.0) {
      fail_line(line, errc::kValidation, "duration must be non-negative");
    }
    out.push_back(std::move(m));
  });
  return out;
}

void write_manifests(std::ostream& out,
                     const std::vector<VideoManifest>& manifests) {
  for (const VideoManifest& m : manifests) {
    json record;
    record["video_id"] = m.video_id;
    record["lang"] = m.language;
    record["movie_name"] = m.movie_name;
    record["duration"] = m.duration;
    out << record.dump() << '\n';
  }
}

// --- feature binary ----------------------------------------------------------

namespace {

constexpr char kMagic[5] = {'M', 'S', 'Y', 'M', '1'};
constexpr std::uint64_t kMaxElements = 1ull << 31;

std::uint32_t read_u32_le(std::istream& in) {
  unsigned char bytes[4];
  in.read(reinterpret_cast<char*>(bytes), 4);
  if (!in) {
    throw Error(errc::kTruncated, "file ends inside the header");
  }
  return static_cast<std::uint32_t>(bytes[0]) |
         static_cast<std::uint32_t>(bytes[1]) << 8 |
         static_cast<std::uint32_t>(bytes[2]) << 16 |
         static_cast<std::uint32_t>(bytes[3]) << 24;
}

void write_u32_le(std::ostream& out, std::uint32_t v) {
  const unsigned char bytes[4] = {
      static_cast<unsigned char>(v & 0xff),
      static_cast<unsigned char>((v >> 8) & 0xff),
      static_cast<unsigned char>((v >> 16) & 0xff),
      static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

float float_from_le(const unsigned char* bytes) {
  const std::uint32_t u = static_cast<std::uint32_t>(bytes[0]) |
                          static_cast<std::uint32_t>(bytes[1]) << 8 |
                          static_cast<std::uint32_t>(bytes[2]) << 16 |
                          static_cast<std::uint32_t>(bytes[3]) << 24;
  float f;
  std::memcpy(&f, &u, 4);
  return f;
}

void float_to_le(float f, unsigned char* bytes) {
  std::uint32_t u;
  std::memcpy(&u, &f, 4);
  bytes[0] = static_cast<unsigned char>(u & 0xff);
  bytes[1] = static_cast<unsigned char>((u >> 8) & 0xff);
  bytes[2] = static_cast<unsigned char>((u >> 16) & 0xff);
  bytes[3] = static_cast<unsigned char>((u >> 24) & 0xff);
}

}  // namespace

FeatureMatrix read_feature_matrix(std::istream& in) {
  char magic[5];
  in.read(magic, 5);
  if (!in || std::memcmp(magic, kMagic, 5) != 0) {
    throw Error(errc::kBadMagic, "not a feature matrix file");
  }
  const std::uint32_t rows = read_u32_le(in);
  const std::uint32_t dim = read_u32_le(in);
  if (rows == 0 || dim == 0) {
    throw Error(errc::kValidation, "feature matrix must be at least 1x1");
  }
  const std::uint64_t elements =
      static_cast<std::uint64_t>(rows) * static_cast<std::uint64_t>(dim);
  if (elements > kMaxElements) {
    throw Error(errc::kValidation, "implausibly large feature matrix header");
  }

  std::vector<float> values(elements);
  std::vector<unsigned char> payload(elements * 4);
  in.read(reinterpret_cast<char*>(payload.data()),
          static_cast<std::streamsize>(payload.size()));
  if (static_cast<std::uint64_t>(in.gcount()) != payload.size()) {
    throw Error(errc::kTruncated,
                "header declares " + std::to_string(elements) +
                    " values but the payload is shorter");
  }
  for (std::uint64_t k = 0; k < elements; ++k) {
    values[k] = float_from_le(payload.data() + k * 4);
    if (!std::isfinite(values[k])) {
      throw Error(errc::kNonFinite,
                  "value at flat index " + std::to_string(k) +
                      " is not finite");
    }
  }
  if (in.peek() != std::istream::traits_type::eof()) {
    throw Error(errc::kValidation, "trailing bytes after the payload");
  }
  return FeatureMatrix(rows, dim, std::move(values));
}

FeatureMatrix read_feature_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(errc::kInputNotFound, "cannot open \"" + path + "\"");
  }
  return read_feature_matrix(in);
}

void write_feature_matrix(std::ostream& out, const FeatureMatrix& m) {
  for (float v : m.values) {
    if (!std::isfinite(v)) {
      throw Error(errc::kNonFinite, "refusing to write non-finite value");
    }
  }
  out.write(kMagic, 5);
  write_u32_le(out, static_cast<std::uint32_t>(m.count));
  write_u32_le(out, static_cast<std::uint32_t>(m.dim));
  std::vector<unsigned char> payload(m.values.size() * 4);
  for (std::size_t k = 0; k < m.values.size(); ++k) {
    float_to_le(m.values[k], payload.data() + k * 4);
  }
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size()));
  if (!out) {
    throw Error(errc::kIo, "write failed");
  }
}

void write_feature_matrix(const std::string& path, const FeatureMatrix& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(errc::kIo, "cannot create \"" + path + "\"");
  }
  write_feature_matrix(out, m);
}

// --- similarity CSV ----------------------------------------------------------

SimilarityMatrix parse_similarity_csv(std::istream& in) {
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty() && in.peek() == std::istream::traits_type::eof()) break;

    std::size_t col = 0;
    std::size_t begin = 0;
    for (;;) {
      const std::size_t comma = text.find(',', begin);
      const std::size_t end =
          comma == std::string::npos ? text.size() : comma;
      double v = 0.0;
      const char* first = text.data() + begin;
      const char* last = text.data() + end;
      auto res = std::from_chars(first, last, v);
      if (res.ec != std::errc() || res.ptr != last) {
        fail_line(line, errc::kParse,
                  "column " + std::to_string(col + 1) +
                      ": not a number: \"" +
                      std::string(first, last) + "\"");
      }
      if (!std::isfinite(v)) {
        fail_line(line, errc::kNonFinite,
                  "column " + std::to_string(col + 1) + ": non-finite value");
      }
      values.push_back(v);
      ++col;
      if (comma == std::string::npos) break;
      begin = comma + 1;
    }

    if (rows == 0) {
      cols = col;
    } else if (col != cols) {
      fail_line(line, errc::kValidation,
                "ragged row: expected " + std::to_string(cols) +
                    " columns, got " + std::to_string(col));
    }
    ++rows;
  }
  if (rows == 0 || cols == 0) {
    throw Error(errc::kValidation, "similarity CSV is empty");
  }
  return SimilarityMatrix(rows, cols, std::move(values));
}

void write_similarity_csv(std::ostream& out, const SimilarityMatrix& sim) {
  for (std::size_t i = 0; i < sim.clip_count; ++i) {
    for (std::size_t j = 0; j < sim.sentence_count; ++j) {
      if (j > 0) out << ',';
      out << format_double(sim.at(i, j));
    }
    out << '\n';
  }
}

}  // namespace storyalign
