#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "vpr/errors.hpp"
#include "vpr/image_io.hpp"
#include "vpr/journey.hpp"
#include "vpr/text.hpp"

namespace vpr {

constexpr int kFrameWidth = 208;
constexpr int kFrameHeight = 117;

/// Journey metadata parsed from a manifest header line of the form
/// `journey=J,corridor=C,device=D,pass=N,ticks=rel/path.csv`.
struct ManifestHeader {
  std::string journey_id;
  std::string corridor_id;
  std::string device_id;
  int pass_number = 0;
  std::string ticks_path;  // relative to the manifest's directory
};

struct ManifestRow {
  int index = 0;
  std::int64_t timestamp_ms = 0;
  std::string image_path;  // relative to the manifest's directory
};

struct Manifest {
  ManifestHeader header;
  std::vector<ManifestRow> rows;
  std::filesystem::path dir;  // directory the relative paths resolve against
};

inline ManifestHeader parse_manifest_header(const std::string& line, const std::string& origin) {
  ManifestHeader h;
  std::map<std::string, std::string> kv;
  for (const auto& field : split(line, ',')) {
    auto eq = field.find('=');
    if (eq == std::string::npos) throw DataError("bad manifest header field '" + field + "' in " + origin);
    kv[std::string(trim(field.substr(0, eq)))] = std::string(trim(field.substr(eq + 1)));
  }
  for (const char* key : {"journey", "corridor", "device", "pass", "ticks"})
    if (!kv.count(key)) throw DataError(std::string("manifest header missing '") + key + "' in " + origin);
  h.journey_id = kv["journey"];
  h.corridor_id = kv["corridor"];
  h.device_id = kv["device"];
  h.ticks_path = kv["ticks"];
  try {
    h.pass_number = std::stoi(kv["pass"]);
  } catch (const std::exception&) {
    throw DataError("manifest pass is not an integer in " + origin);
  }
  return h;
}

inline Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest: " + path.string());
  Manifest m;
  m.dir = path.parent_path();
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty manifest: " + path.string());
  m.header = parse_manifest_header(std::string(trim(line)), path.string());
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    auto parts = split(line, ',');
    if (parts.size() != 3)
      throw DataError("manifest row needs 3 fields at " + path.string() + ":" + std::to_string(line_no));
    ManifestRow row;
    try {
      row.index = std::stoi(std::string(trim(parts[0])));
      row.timestamp_ms = std::stoll(std::string(trim(parts[1])));
    } catch (const std::exception&) {
      throw DataError("bad manifest row at " + path.string() + ":" + std::to_string(line_no));
    }
    row.image_path = std::string(trim(parts[2]));
    if (row.image_path.empty())
      throw DataError("empty image path at " + path.string() + ":" + std::to_string(line_no));
    m.rows.push_back(std::move(row));
  }
  if (m.rows.empty()) throw DataError("manifest has no frame rows: " + path.string());
  for (size_t i = 0; i < m.rows.size(); ++i) {
    if (m.rows[i].index != int(i))
      throw DataError("manifest frame indices must start at 0 and be contiguous: " + path.string());
    if (i > 0 && m.rows[i].timestamp_ms <= m.rows[i - 1].timestamp_ms)
      throw DataError("manifest timestamps must strictly increase: " + path.string());
  }
  return m;
}

inline void write_manifest(const std::filesystem::path& path, const Manifest& m) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write manifest: " + path.string());
  out << "journey=" << m.header.journey_id << ",corridor=" << m.header.corridor_id << ",device="
      << m.header.device_id << ",pass=" << m.header.pass_number << ",ticks=" << m.header.ticks_path << "\n";
  for (const auto& row : m.rows)
    out << row.index << "," << row.timestamp_ms << "," << row.image_path << "\n";
  if (!out) throw DataError("short write: " + path.string());
}

/// Tick rows are `timestamp_ms,distance_cm`; blank lines and '#' comments allowed.
inline GroundTruthTrack read_ticks(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open tick file: " + path.string());
  GroundTruthTrack track;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto parts = split(line, ',');
    if (parts.size() != 2)
      throw DataError("tick row needs 2 fields at " + path.string() + ":" + std::to_string(line_no));
    try {
      track.ticks.emplace_back(std::stoll(std::string(trim(parts[0]))), std::stod(std::string(trim(parts[1]))));
    } catch (const std::exception&) {
      throw DataError("bad tick row at " + path.string() + ":" + std::to_string(line_no));
    }
  }
  try {
    track.validate();
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return track;
}

inline void write_ticks(const std::filesystem::path& path, const GroundTruthTrack& track) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write tick file: " + path.string());
  for (const auto& [ts, cm] : track.ticks) out << ts << "," << format_fixed(cm, 2) << "\n";
  if (!out) throw DataError("short write: " + path.string());
}

/// Load a journey: decode every frame, resize to the working 208x117
/// resolution, and align wheel-odometer ticks to frame timestamps.
inline Journey load_journey(const std::filesystem::path& manifest_path, bool load_pixels = true) {
  Manifest m = read_manifest(manifest_path);
  GroundTruthTrack track = read_ticks(m.dir / m.header.ticks_path);
  Journey j;
  j.journey_id = m.header.journey_id;
  j.corridor_id = m.header.corridor_id;
  j.device_id = m.header.device_id;
  j.pass_number = m.header.pass_number;
  j.frame_timestamps.reserve(m.rows.size());
  j.frame_paths.reserve(m.rows.size());
  for (const auto& row : m.rows) {
    j.frame_timestamps.push_back(row.timestamp_ms);
    j.frame_paths.push_back((m.dir / row.image_path).string());
  }
  j.positions_cm = align_ground_truth(j.frame_timestamps, track);
  j.length_cm = track.ticks.back().second;
  if (load_pixels) {
    j.frames.reserve(m.rows.size());
    for (size_t i = 0; i < m.rows.size(); ++i) {
      RgbImage img = read_image(j.frame_paths[i]);
      if (img.height != kFrameHeight || img.width != kFrameWidth)
        img = resize_area(img, kFrameHeight, kFrameWidth);
      Frame f;
      f.index = int(i);
      f.timestamp_ms = j.frame_timestamps[i];
      f.width = img.width;
      f.height = img.height;
      f.planes = std::move(img.planes);
      j.frames.push_back(std::move(f));
    }
  }
  j.validate();
  return j;
}

/// Find every `*.manifest` under `root` (sorted by path for stable order)
/// and load each journey.
inline Corpus scan_corpus(const std::filesystem::path& root, bool load_pixels = true) {
  if (!std::filesystem::exists(root)) throw DataError("corpus root does not exist: " + root.string());
  std::vector<std::filesystem::path> manifests;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root))
    if (entry.is_regular_file() && entry.path().extension() == ".manifest") manifests.push_back(entry.path());
  if (manifests.empty()) throw DataError("no .manifest files under " + root.string());
  std::sort(manifests.begin(), manifests.end());
  Corpus corpus;
  corpus.journeys.reserve(manifests.size());
  for (const auto& p : manifests) corpus.journeys.push_back(load_journey(p, load_pixels));
  corpus.validate();
  return corpus;
}

}  // namespace vpr
