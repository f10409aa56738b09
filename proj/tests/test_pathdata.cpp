// Path data: manifests, odometer ticks, ground-truth alignment, synthetic
// corridor rendering, journey persistence and corpus scanning.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "vpr/errors.hpp"
#include "vpr/image_io.hpp"
#include "vpr/journey.hpp"
#include "vpr/manifest.hpp"
#include "vpr/synth.hpp"

#include "helpers.hpp"

using namespace vpr;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Manifests
// ---------------------------------------------------------------------------

TEST_CASE("manifest header parses all keyed fields", "[unit_pathdata]") {
  auto h = parse_manifest_header("journey=j1, corridor=hall, device=cam0, pass=2, ticks=t.csv", "test");
  CHECK(h.journey_id == "j1");
  CHECK(h.corridor_id == "hall");
  CHECK(h.device_id == "cam0");
  CHECK(h.pass_number == 2);
  CHECK(h.ticks_path == "t.csv");
}

TEST_CASE("manifest header rejects missing or malformed fields", "[unit_pathdata]") {
  CHECK_THROWS_AS(parse_manifest_header("journey=j1,corridor=hall,device=cam0,pass=2", "t"), DataError);
  CHECK_THROWS_AS(parse_manifest_header("journey=j1,corridor,device=d,pass=1,ticks=t", "t"), DataError);
  CHECK_THROWS_AS(parse_manifest_header("journey=j1,corridor=c,device=d,pass=two,ticks=t", "t"),
                  DataError);
}

TEST_CASE("manifest write/read round trip preserves header and rows", "[unit_pathdata]") {
  testutil::TempDir tmp;
  Manifest m;
  m.header = {"jx", "hall", "cam1", 3, "ticks.csv"};
  m.rows = {{0, 0, "frames/f0.ppm"}, {1, 150, "frames/f1.ppm"}, {2, 305, "frames/f2.ppm"}};
  auto path = tmp / "journey.manifest";
  write_manifest(path, m);
  Manifest back = read_manifest(path);
  CHECK(back.header.journey_id == "jx");
  CHECK(back.header.pass_number == 3);
  CHECK(back.dir == tmp.path());
  REQUIRE(back.rows.size() == 3);
  CHECK(back.rows[1].timestamp_ms == 150);
  CHECK(back.rows[2].image_path == "frames/f2.ppm");
}

TEST_CASE("manifest reading rejects structural defects", "[unit_pathdata]") {
  testutil::TempDir tmp;
  auto write = [&](const std::string& name, const std::string& content) {
    auto p = tmp / name;
    std::ofstream out(p);
    out << content;
    return p;
  };
  const std::string header = "journey=j,corridor=c,device=d,pass=0,ticks=t.csv\n";
  CHECK_THROWS_AS(read_manifest(tmp / "absent.manifest"), DataError);
  CHECK_THROWS_AS(read_manifest(write("empty.manifest", "")), DataError);
  CHECK_THROWS_AS(read_manifest(write("norows.manifest", header)), DataError);
  CHECK_THROWS_AS(read_manifest(write("fields.manifest", header + "0,0\n")), DataError);
  CHECK_THROWS_AS(read_manifest(write("gap.manifest", header + "0,0,a.ppm\n2,10,b.ppm\n")), DataError);
  CHECK_THROWS_AS(read_manifest(write("ts.manifest", header + "0,10,a.ppm\n1,10,b.ppm\n")), DataError);
  CHECK_THROWS_AS(read_manifest(write("noimg.manifest", header + "0,0, \n")), DataError);
  CHECK_THROWS_AS(read_manifest(write("badnum.manifest", header + "zero,0,a.ppm\n")), DataError);
}

// ---------------------------------------------------------------------------
// Odometer ticks
// ---------------------------------------------------------------------------

TEST_CASE("tick files round trip at centimetre precision", "[unit_pathdata]") {
  testutil::TempDir tmp;
  GroundTruthTrack track;
  track.ticks = {{0, 0.0}, {812, 10.0}, {1633, 20.0}, {2100, 25.5}};
  auto path = tmp / "ticks.csv";
  write_ticks(path, track);
  GroundTruthTrack back = read_ticks(path);
  REQUIRE(back.ticks.size() == 4);
  for (size_t i = 0; i < 4; ++i) {
    CHECK(back.ticks[i].first == track.ticks[i].first);
    CHECK(back.ticks[i].second == track.ticks[i].second);
  }
}

TEST_CASE("tick reader skips comments and blank lines", "[unit_pathdata]") {
  testutil::TempDir tmp;
  auto path = tmp / "ticks.csv";
  {
    std::ofstream out(path);
    out << "# odometer log\n\n0,0.00\n\n500, 10.00\n# trailing comment\n1000,20.00\n";
  }
  GroundTruthTrack t = read_ticks(path);
  REQUIRE(t.ticks.size() == 3);
  CHECK(t.ticks[1].second == 10.0);
}

TEST_CASE("tick reader enforces track validity", "[unit_pathdata]") {
  testutil::TempDir tmp;
  auto write = [&](const std::string& name, const std::string& content) {
    auto p = tmp / name;
    std::ofstream out(p);
    out << content;
    return p;
  };
  CHECK_THROWS_AS(read_ticks(tmp / "absent.csv"), DataError);
  CHECK_THROWS_AS(read_ticks(write("one.csv", "0,0.0\n")), DataError);
  CHECK_THROWS_AS(read_ticks(write("tsdup.csv", "0,0.0\n0,10.0\n")), DataError);
  CHECK_THROWS_AS(read_ticks(write("back.csv", "0,10.0\n500,5.0\n")), DataError);
  CHECK_THROWS_AS(read_ticks(write("short.csv", "0\n500,10.0\n")), DataError);
  CHECK_THROWS_AS(read_ticks(write("alpha.csv", "0,zero\n500,10.0\n")), DataError);
}

TEST_CASE("track validation mirrors the reader's rules", "[unit_pathdata]") {
  GroundTruthTrack ok;
  ok.ticks = {{0, 0.0}, {100, 10.0}};
  CHECK_NOTHROW(ok.validate());
  GroundTruthTrack flat;
  flat.ticks = {{0, 0.0}, {100, 0.0}};
  CHECK_NOTHROW(flat.validate());  // distances may repeat (standing still)
}

// ---------------------------------------------------------------------------
// Ground-truth alignment
// ---------------------------------------------------------------------------

TEST_CASE("alignment is exact on ticks, linear between, clamped outside", "[unit_pathdata]") {
  GroundTruthTrack track;
  track.ticks = {{1000, 0.0}, {2000, 10.0}, {4000, 20.0}};
  auto pos = align_ground_truth({500, 1000, 1500, 2000, 3000, 4000, 9000}, track);
  REQUIRE(pos.size() == 7);
  CHECK(pos[0] == 0.0);   // before the first tick
  CHECK(pos[1] == 0.0);   // exactly on a tick
  CHECK(pos[2] == 5.0);   // midpoint
  CHECK(pos[3] == 10.0);
  CHECK(pos[4] == 15.0);  // halfway through a 2 s segment
  CHECK(pos[5] == 20.0);
  CHECK(pos[6] == 20.0);  // after the last tick
}

TEST_CASE("alignment validates the track first", "[unit_pathdata]") {
  GroundTruthTrack bad;
  bad.ticks = {{0, 0.0}};
  CHECK_THROWS_AS(align_ground_truth({0}, bad), DataError);
}

// ---------------------------------------------------------------------------
// Synthetic corridors
// ---------------------------------------------------------------------------

TEST_CASE("corridor synthesis is deterministic in spec and seed", "[unit_pathdata]") {
  auto spec = testutil::small_corridor();
  auto a = synthesize_corridor(spec, 7);
  auto b = synthesize_corridor(spec, 7);
  REQUIRE(a.size() == b.size());
  for (size_t p = 0; p < a.size(); ++p) {
    const Journey &ja = a[p].journey, &jb = b[p].journey;
    REQUIRE(ja.frame_count() == jb.frame_count());
    CHECK(ja.frame_timestamps == jb.frame_timestamps);
    CHECK(ja.positions_cm == jb.positions_cm);
    for (size_t f = 0; f < ja.frames.size(); ++f)
      for (int c = 0; c < 3; ++c)
        CHECK(ja.frames[f].planes[size_t(c)].values == jb.frames[f].planes[size_t(c)].values);
  }
  auto c = synthesize_corridor(spec, 8);
  CHECK(a[0].journey.frames[0].planes[0].values != c[0].journey.frames[0].planes[0].values);
}

TEST_CASE("synthesized journeys carry consistent identity and geometry", "[unit_pathdata]") {
  auto spec = testutil::small_corridor("wing", 3);
  spec.devices = {"camA", "camB"};
  auto passes = synthesize_corridor(spec, 11);
  REQUIRE(passes.size() == 3);
  for (int p = 0; p < 3; ++p) {
    const Journey& j = passes[size_t(p)].journey;
    CHECK(j.journey_id == "wing_p" + std::to_string(p));
    CHECK(j.corridor_id == "wing");
    CHECK(j.pass_number == p);
    CHECK(j.device_id == (p % 2 == 0 ? "camA" : "camB"));
    CHECK(j.length_cm == 600.0);
    CHECK(j.frame_count() > 10);
    CHECK(j.pixels_loaded());
    CHECK(j.positions_cm.front() < 50.0);
    CHECK(j.positions_cm.back() > 500.0);
    const auto& ticks = passes[size_t(p)].track.ticks;
    CHECK(ticks.front().second == 0.0);
    CHECK(ticks.back().second == 600.0);
    for (size_t i = 0; i < ticks.size(); ++i) CHECK(ticks[i].second == 10.0 * double(i));
  }
}

TEST_CASE("passes of one corridor differ but share the wall", "[unit_pathdata]") {
  auto spec = testutil::small_corridor();
  auto passes = synthesize_corridor(spec, 3);
  REQUIRE(passes.size() == 2);
  // Per-pass speed profiles give distinct trajectories, and gain/noise give
  // distinct pixels even at the shared start position.
  CHECK(passes[0].journey.positions_cm != passes[1].journey.positions_cm);
  CHECK(passes[0].journey.frames[0].planes[0].values != passes[1].journey.frames[0].planes[0].values);
}

TEST_CASE("blank walls render featureless frames", "[unit_pathdata]") {
  auto spec = testutil::small_corridor();
  spec.texture_richness = 0.0;
  spec.noise_level = 0.0;
  auto passes = synthesize_corridor(spec, 5);
  const Plane& p0 = passes[0].journey.frames[0].planes[0];
  for (float v : p0.values) CHECK(v == p0.values[0]);
}

TEST_CASE("corridor specs validate their parameters", "[unit_pathdata]") {
  auto bad = testutil::small_corridor();
  bad.passes = 0;
  CHECK_THROWS_AS(synthesize_corridor(bad, 1), DataError);
  bad = testutil::small_corridor();
  bad.length_cm = 0;
  CHECK_THROWS_AS(bad.validate(), DataError);
  bad = testutil::small_corridor();
  bad.speed_max_cm_s = bad.speed_min_cm_s - 1;
  CHECK_THROWS_AS(bad.validate(), DataError);
  bad = testutil::small_corridor();
  bad.devices.clear();
  CHECK_THROWS_AS(bad.validate(), DataError);
  bad = testutil::small_corridor();
  bad.noise_level = -0.1;
  CHECK_THROWS_AS(bad.validate(), DataError);
}

// ---------------------------------------------------------------------------
// Journey persistence
// ---------------------------------------------------------------------------

TEST_CASE("written journeys reload bitwise-identical", "[unit_pathdata]") {
  testutil::TempDir tmp;
  auto spec = testutil::small_corridor();
  auto passes = synthesize_corridor(spec, 13);
  auto manifest_path = write_journey(tmp.path(), passes[0]);
  Journey back = load_journey(manifest_path);
  const Journey& orig = passes[0].journey;
  CHECK(back.journey_id == orig.journey_id);
  CHECK(back.corridor_id == orig.corridor_id);
  CHECK(back.device_id == orig.device_id);
  CHECK(back.pass_number == orig.pass_number);
  CHECK(back.length_cm == orig.length_cm);
  CHECK(back.frame_timestamps == orig.frame_timestamps);
  // Tick distances are exact at two decimals and timestamps are integers,
  // so interpolated positions reproduce exactly.
  CHECK(back.positions_cm == orig.positions_cm);
  REQUIRE(back.frames.size() == orig.frames.size());
  for (size_t f = 0; f < back.frames.size(); ++f)
    for (int c = 0; c < 3; ++c)
      CHECK(back.frames[f].planes[size_t(c)].values == orig.frames[f].planes[size_t(c)].values);
}

TEST_CASE("journeys without pixels cannot be written", "[unit_pathdata]") {
  testutil::TempDir tmp;
  SyntheticJourney sj;
  sj.journey = testutil::positions_journey("nopix", 5, 100.0);
  sj.track.ticks = {{0, 0.0}, {400, 100.0}};
  CHECK_THROWS_AS(write_journey(tmp.path(), sj), DataError);
}

TEST_CASE("metadata-only loading skips pixel decode", "[unit_pathdata]") {
  testutil::TempDir tmp;
  auto passes = synthesize_corridor(testutil::small_corridor(), 17);
  auto manifest_path = write_journey(tmp.path(), passes[0]);
  Journey meta = load_journey(manifest_path, false);
  CHECK_FALSE(meta.pixels_loaded());
  CHECK(meta.frames.empty());
  CHECK(meta.frame_count() == passes[0].journey.frame_count());
  CHECK(meta.positions_cm == passes[0].journey.positions_cm);
  REQUIRE_FALSE(meta.frame_paths.empty());
  CHECK(fs::exists(meta.frame_paths[0]));
}

TEST_CASE("oversized source frames are resized to the working resolution", "[unit_pathdata]") {
  testutil::TempDir tmp;
  RgbImage big;
  big.width = 2 * kFrameWidth;
  big.height = 2 * kFrameHeight;
  for (auto& p : big.planes) p = testutil::random_plane(big.height, big.width, 91);
  write_ppm((tmp / "big.ppm").string(), big);
  {
    std::ofstream out(tmp / "journey.manifest");
    out << "journey=jr,corridor=c,device=d,pass=0,ticks=ticks.csv\n0,0,big.ppm\n1,400,big.ppm\n";
    std::ofstream ticks(tmp / "ticks.csv");
    ticks << "0,0.0\n400,10.0\n";
  }
  Journey j = load_journey(tmp / "journey.manifest");
  REQUIRE(j.frames.size() == 2);
  CHECK(j.frames[0].width == kFrameWidth);
  CHECK(j.frames[0].height == kFrameHeight);
  CHECK(j.positions_cm == std::vector<double>{0.0, 10.0});
}

// ---------------------------------------------------------------------------
// Corpus scanning
// ---------------------------------------------------------------------------

TEST_CASE("scan_corpus finds every manifest in stable order", "[unit_pathdata]") {
  testutil::TempDir tmp;
  write_synthetic_corpus(tmp.path(), {testutil::small_corridor("a_hall"), testutil::small_corridor("b_hall")},
                         23);
  Corpus corpus = scan_corpus(tmp.path());
  REQUIRE(corpus.journeys.size() == 4);
  CHECK(corpus.journeys[0].journey_id == "a_hall_p0");
  CHECK(corpus.journeys[1].journey_id == "a_hall_p1");
  CHECK(corpus.journeys[2].journey_id == "b_hall_p0");
  CHECK(corpus.journeys[3].journey_id == "b_hall_p1");
  auto ids = corpus.corridor_ids();
  REQUIRE(ids.size() == 2);
  CHECK(ids[0] == "a_hall");
  CHECK(corpus.corridor("a_hall").size() == 2);
  REQUIRE(corpus.find("b_hall", 1) != nullptr);
  CHECK(corpus.find("b_hall", 1)->journey_id == "b_hall_p1");
  CHECK(corpus.find("b_hall", 9) == nullptr);
}

TEST_CASE("scan_corpus reports missing or empty roots", "[unit_pathdata]") {
  testutil::TempDir tmp;
  CHECK_THROWS_AS(scan_corpus(tmp / "nothing_here"), DataError);
  fs::create_directory(tmp / "hollow");
  CHECK_THROWS_AS(scan_corpus(tmp / "hollow"), DataError);
}

// ---------------------------------------------------------------------------
// Journey / corpus invariants
// ---------------------------------------------------------------------------

TEST_CASE("journey validation catches structural defects", "[unit_pathdata]") {
  Journey j = testutil::positions_journey("jv", 5, 100.0);
  CHECK_NOTHROW(j.validate());
  Journey no_id = j;
  no_id.journey_id.clear();
  CHECK_THROWS_AS(no_id.validate(), DataError);
  Journey mismatch = j;
  mismatch.positions_cm.pop_back();
  CHECK_THROWS_AS(mismatch.validate(), DataError);
  Journey bad_ts = j;
  bad_ts.frame_timestamps[2] = bad_ts.frame_timestamps[1];
  CHECK_THROWS_AS(bad_ts.validate(), DataError);
  Journey beyond = j;
  beyond.positions_cm.back() = beyond.length_cm + 1.0;
  CHECK_THROWS_AS(beyond.validate(), DataError);
  Journey backwards = j;
  backwards.positions_cm[3] = backwards.positions_cm[2] - 5.0;
  CHECK_THROWS_AS(backwards.validate(), DataError);
}

TEST_CASE("corpus validation rejects duplicate journey ids", "[unit_pathdata]") {
  Corpus corpus;
  corpus.journeys.push_back(testutil::positions_journey("dup", 3, 50.0));
  corpus.journeys.push_back(testutil::positions_journey("dup", 3, 50.0));
  CHECK_THROWS_AS(corpus.validate(), DataError);
}

TEST_CASE("grayscale is the channel mean", "[unit_pathdata]") {
  Frame f = testutil::constant_frame(4, 4, 0.f);
  f.planes[0] = Plane(4, 4, 0.3f);
  f.planes[1] = Plane(4, 4, 0.6f);
  f.planes[2] = Plane(4, 4, 0.9f);
  Plane g = f.grayscale();
  for (float v : g.values) CHECK(v == (0.3f + 0.6f + 0.9f) / 3.f);
}
