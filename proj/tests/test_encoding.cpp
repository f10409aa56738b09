// Vector quantization and frame encodings: training-set sampling, k-means,
// nearest-center search, histogram/VLAD/direct codes, and their archives.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "vpr/descriptor.hpp"
#include "vpr/encode.hpp"
#include "vpr/errors.hpp"
#include "vpr/kmeans.hpp"
#include "vpr/rng.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

using namespace vpr;

namespace {

std::vector<float> random_vectors(size_t n, int dim, uint64_t seed) {
  Rng rng(seed);
  std::vector<float> data(n * size_t(dim));
  for (float& v : data) v = float(rng.uniform());
  return data;
}

DescriptorSet set_from_rows(Method method, int frame_index, size_t n, std::vector<float> data) {
  DescriptorSet set;
  set.method = method;
  set.frame_index = frame_index;
  set.support = method_support(method);
  set.dim = method_dim(method);
  set.grid.assign(n, {0, 0});
  set.data = std::move(data);
  set.validate();
  return set;
}

DescriptorSet random_method_set(Method method, int frame_index, size_t n, uint64_t seed) {
  return set_from_rows(method, frame_index, n, random_vectors(n, method_dim(method), seed));
}

// A bare codebook with random finite centers; bypasses training so encoding
// behavior can be pinned against hand-placed descriptors.
Codebook make_codebook(int K, int dim, uint64_t seed) {
  Codebook cb;
  cb.K = K;
  cb.dim = dim;
  cb.seed = seed;
  cb.centers = random_vectors(size_t(K), dim, seed);
  cb.validate();
  return cb;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return bytes;
}

void spit(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(bytes.data(), std::streamsize(bytes.size()));
  REQUIRE(out.good());
}

}  // namespace

TEST_CASE("nearest-center search equals a brute-force double scan", "[unit_encoding]") {
  const int K = 64, dim = 16;
  std::vector<float> centers = random_vectors(size_t(K), dim, 101);
  // Plant an exact duplicate pair so the tie rule (lowest index) is exercised.
  std::memcpy(centers.data() + 9 * dim, centers.data() + 5 * dim, size_t(dim) * sizeof(float));

  const size_t n = 1000;
  std::vector<float> points = random_vectors(n, dim, 202);
  // A few probes sit exactly on centers, including the duplicated one.
  std::memcpy(points.data() + 0 * dim, centers.data() + 17 * dim, size_t(dim) * sizeof(float));
  std::memcpy(points.data() + 1 * dim, centers.data() + 9 * dim, size_t(dim) * sizeof(float));

  NearestCenterIndex index(centers.data(), K, dim);
  std::vector<int> idx(n);
  std::vector<double> d2(n);
  index.assign(points.data(), n, idx.data(), d2.data(), 1);

  for (size_t i = 0; i < n; ++i) {
    auto [ref_k, ref_d2] = oracle::nearest_center_ref(points.data() + i * dim, centers.data(), K, dim);
    CHECK(idx[i] == ref_k);
    CHECK(d2[i] == ref_d2);  // bitwise: same double accumulation order
  }
  CHECK(idx[0] == 17);
  CHECK(d2[0] == 0.0);
  CHECK(idx[1] == 5);  // duplicate centers 5 and 9: ties resolve to the lowest
  CHECK(d2[1] == 0.0);

  std::vector<int> idx_par(n);
  std::vector<double> d2_par(n);
  index.assign(points.data(), n, idx_par.data(), d2_par.data(), 3);
  CHECK(idx_par == idx);
  CHECK(d2_par == d2);

  Codebook cb;
  cb.K = K;
  cb.dim = dim;
  cb.centers = centers;
  CHECK(assign_to_centers(points.data(), n, cb) == idx);
}

TEST_CASE("k-means recovers exactly duplicated points with zero distortion", "[unit_encoding]") {
  // Six distinct points on an integer lattice, ten exact copies each. Small
  // integers keep every float/double step exact, so both logged distortions
  // must be identically zero and the centers must equal the points bitwise.
  const int K = 6, dim = 5, copies = 10;
  Rng rng(33);
  std::vector<std::vector<float>> points(K, std::vector<float>(dim));
  for (int k = 0; k < K; ++k) {
    points[k][0] = float(2 * k);  // coordinate 0 separates the points
    for (int j = 1; j < dim; ++j) points[k][j] = float(rng.uniform_index(16));
  }

  TrainingSet train;
  train.dim = dim;
  train.journey_ids = {"lattice"};
  for (int c = 0; c < copies; ++c) {
    for (int k = 0; k < K; ++k) {
      train.data.insert(train.data.end(), points[k].begin(), points[k].end());
      train.provenance.push_back(0);
    }
  }
  REQUIRE(train.count() == size_t(K * copies));

  Codebook cb = train_codebook(train, Method::SIFT, K, 5, "", 1, 50);
  REQUIRE(cb.distortion_log.size() == 2);
  CHECK(cb.distortion_log[0] == 0.0);
  CHECK(cb.distortion_log[1] == 0.0);

  // Every input point appears as a center, each exactly once.
  std::vector<bool> used(size_t(K), false);
  for (int k = 0; k < K; ++k) {
    bool found = false;
    for (int c = 0; c < K && !found; ++c) {
      if (used[size_t(c)]) continue;
      if (std::memcmp(points[k].data(), cb.center(c), size_t(dim) * sizeof(float)) == 0) {
        used[size_t(c)] = true;
        found = true;
      }
    }
    CHECK(found);
  }
}

TEST_CASE("k-means distortion log never increases", "[unit_encoding]") {
  for (int run = 0; run < 50; ++run) {
    TrainingSet train;
    train.dim = 8;
    train.journey_ids = {"fuzz"};
    train.data = random_vectors(240, train.dim, 9000 + uint64_t(run));
    train.provenance.assign(240, 0);

    Codebook cb = train_codebook(train, Method::SIFT, 10, 1000 + uint64_t(run));
    REQUIRE(cb.distortion_log.size() >= 1);
    for (size_t i = 0; i + 1 < cb.distortion_log.size(); ++i) {
      double before = cb.distortion_log[i], after = cb.distortion_log[i + 1];
      CHECK(after <= before * (1.0 + 1e-12) + 1e-12);
    }
    CHECK(cb.distortion_log.back() <= cb.distortion_log.front() * (1.0 + 1e-12) + 1e-12);
  }
}

TEST_CASE("k-means is deterministic and independent of worker count", "[unit_encoding]") {
  TrainingSet train;
  train.dim = 12;
  train.journey_ids = {"par"};
  train.data = random_vectors(300, train.dim, 404);
  train.provenance.assign(300, 0);

  Codebook serial = train_codebook(train, Method::ST_GAUSS, 8, 77, "hall_p1", 1);
  Codebook threaded = train_codebook(train, Method::ST_GAUSS, 8, 77, "hall_p1", 3);
  CHECK(serial.centers == threaded.centers);
  CHECK(serial.distortion_log == threaded.distortion_log);
  CHECK(serial.excluded_journey_id == "hall_p1");
  CHECK(serial.seed == 77);

  Codebook reseeded = train_codebook(train, Method::ST_GAUSS, 8, 78, "hall_p1", 1);
  CHECK(reseeded.centers != serial.centers);
}

TEST_CASE("k-means rejects impossible requests", "[unit_encoding]") {
  TrainingSet train;
  train.dim = 4;
  train.journey_ids = {"tiny"};
  train.data = random_vectors(5, train.dim, 1);
  train.provenance.assign(5, 0);

  CHECK_THROWS_AS(train_codebook(train, Method::SIFT, 0, 1), DataError);
  CHECK_THROWS_AS(train_codebook(train, Method::SIFT, -3, 1), DataError);
  CHECK_THROWS_AS(train_codebook(train, Method::SIFT, 6, 1), DataError);  // 5 vectors < K
  CHECK_NOTHROW(train_codebook(train, Method::SIFT, 5, 1));
}

TEST_CASE("training sets sample dumps reproducibly with provenance", "[unit_encoding]") {
  testutil::TempDir tmp;
  const int dim = method_dim(Method::SIFT);

  // Rows are tagged: data[0] = journey slot, data[1] = running row number,
  // so provenance and ordering can be audited after sampling.
  auto write_dump = [&](const std::string& name, const std::vector<size_t>& record_rows,
                        float journey_tag) {
    std::filesystem::path path = tmp / name;
    DescriptorDumpWriter writer(path.string());
    float row_no = 0.f;
    int frame = 0;
    for (size_t rows : record_rows) {
      std::vector<float> data(rows * size_t(dim), 0.25f);
      for (size_t r = 0; r < rows; ++r) {
        data[r * size_t(dim) + 0] = journey_tag;
        data[r * size_t(dim) + 1] = row_no;
        row_no += 1.f;
      }
      writer.append(set_from_rows(Method::SIFT, frame++, rows, std::move(data)));
    }
    writer.close();
    return path.string();
  };

  std::vector<std::pair<std::string, std::string>> dumps = {
      {"j0", write_dump("j0.desc", {30, 20}, 0.f)},
      {"j1", write_dump("j1.desc", {25}, 1.f)},
      {"j2", write_dump("j2.desc", {0, 15}, 2.f)},
  };

  SECTION("a large cap keeps every row in dump order") {
    TrainingSet set = build_training_set(dumps, 1000, 42);
    REQUIRE(set.dim == dim);
    REQUIRE(set.count() == 90);
    REQUIRE(set.journey_ids == std::vector<std::string>{"j0", "j1", "j2"});
    float prev_row = -1.f;
    uint32_t prev_journey = 0;
    for (size_t i = 0; i < set.count(); ++i) {
      uint32_t j = set.provenance[i];
      CHECK(set.row(i)[0] == float(j));
      if (j != prev_journey) prev_row = -1.f;
      CHECK(set.row(i)[1] > prev_row);
      prev_row = set.row(i)[1];
      CHECK(j >= prev_journey);
      prev_journey = j;
    }
  }

  SECTION("a small cap subsamples deterministically in the seed") {
    TrainingSet a = build_training_set(dumps, 40, 7);
    TrainingSet b = build_training_set(dumps, 40, 7);
    TrainingSet c = build_training_set(dumps, 40, 8);
    REQUIRE(a.count() == 40);
    CHECK(a.data == b.data);
    CHECK(a.provenance == b.provenance);
    CHECK(a.data != c.data);
    // Selection sampling preserves source order even when subsampling.
    for (size_t i = 0; i + 1 < a.count(); ++i) CHECK(a.provenance[i] <= a.provenance[i + 1]);
  }

  SECTION("dumps with no descriptors at all are rejected") {
    std::vector<std::pair<std::string, std::string>> empty_only = {
        {"jempty", write_dump("jempty.desc", {0, 0}, 3.f)}};
    CHECK_THROWS_AS(build_training_set(empty_only, 100, 1), DataError);
  }

  SECTION("dumps of different descriptor dimensions cannot be mixed") {
    std::filesystem::path other = tmp / "other.desc";
    {
      DescriptorDumpWriter writer(other.string());
      writer.append(random_method_set(Method::ST_GAUSS, 0, 4, 5));
      writer.close();
    }
    std::vector<std::pair<std::string, std::string>> mixed = dumps;
    mixed.emplace_back("jother", other.string());
    CHECK_THROWS_AS(build_training_set(mixed, 100, 1), DataError);
  }
}

TEST_CASE("codebook files round-trip and reject corruption", "[unit_encoding]") {
  testutil::TempDir tmp;
  Codebook cb = make_codebook(4, 7, 0xabcULL);
  cb.method = Method::ST_GABOR;
  cb.excluded_journey_id = "hall_p2";

  std::filesystem::path path = tmp / "code.book";
  write_codebook(path.string(), cb);
  Codebook back = read_codebook(path.string());
  CHECK(back.method == cb.method);
  CHECK(back.K == cb.K);
  CHECK(back.dim == cb.dim);
  CHECK(back.seed == cb.seed);
  CHECK(back.excluded_journey_id == cb.excluded_journey_id);
  CHECK(back.centers == cb.centers);

  std::string bytes = slurp(path);
  REQUIRE(bytes.size() > 40);

  std::filesystem::path bad = tmp / "bad.book";
  std::string wrong_magic = bytes;
  wrong_magic[0] = 'X';
  spit(bad, wrong_magic);
  CHECK_THROWS_AS(read_codebook(bad.string()), DataError);

  spit(bad, bytes.substr(0, 14));  // mid-header
  CHECK_THROWS_AS(read_codebook(bad.string()), DataError);

  spit(bad, bytes.substr(0, bytes.size() - 8));  // mid-centers
  CHECK_THROWS_AS(read_codebook(bad.string()), DataError);

  CHECK_THROWS_AS(read_codebook((tmp / "absent.book").string()), DataError);
}

TEST_CASE("hard-assignment histograms are unit-L1 and flag empty frames", "[unit_encoding]") {
  Codebook cb = make_codebook(8, 16, 77);
  NearestCenterIndex index(cb);

  SECTION("descriptors pinned to one center give an exact one-hot code") {
    std::vector<float> data;
    for (int i = 0; i < 8; ++i)
      data.insert(data.end(), cb.center(3), cb.center(3) + cb.dim);
    DescriptorSet set;
    set.dim = cb.dim;
    set.frame_index = 42;
    set.grid.assign(8, {0, 0});
    set.data = std::move(data);

    FrameCode code = encode_bow(set, cb, index);
    CHECK(code.encoding == Encoding::HA);
    CHECK(code.frame_index == 42);
    CHECK_FALSE(code.zero);
    REQUIRE(code.values.size() == 8);
    for (size_t k = 0; k < 8; ++k) CHECK(code.values[k] == (k == 3 ? 1.0 : 0.0));
  }

  SECTION("random frames match an assignment-count oracle") {
    DescriptorSet set;
    set.dim = cb.dim;
    set.frame_index = 3;
    set.grid.assign(24, {0, 0});
    set.data = random_vectors(24, cb.dim, 909);

    FrameCode code = encode_bow(set, cb, index);
    std::vector<int> counts(8, 0);
    for (size_t i = 0; i < 24; ++i)
      counts[size_t(oracle::nearest_center_ref(set.vec(i), cb.centers.data(), cb.K, cb.dim).first)]++;
    double inv = 1.0 / 24.0;
    double l1 = 0.0;
    for (size_t k = 0; k < 8; ++k) {
      CHECK(code.values[k] == double(counts[k]) * inv);
      l1 += code.values[k];
    }
    CHECK(std::fabs(l1 - 1.0) <= 1e-12);
  }

  SECTION("a frame with no descriptors is zero-flagged") {
    DescriptorSet set;
    set.dim = cb.dim;
    set.frame_index = 9;
    FrameCode code = encode_bow(set, cb, index);
    CHECK(code.zero);
    REQUIRE(code.values.size() == 8);
    for (double v : code.values) CHECK(v == 0.0);
  }

  SECTION("dimension mismatches are rejected") {
    DescriptorSet set;
    set.dim = cb.dim + 1;
    set.grid.assign(2, {0, 0});
    set.data.assign(size_t(2 * set.dim), 0.5f);
    CHECK_THROWS_AS(encode_bow(set, cb, index), DataError);
  }
}

TEST_CASE("VLAD vanishes at the centroids and flags the zero code", "[unit_encoding]") {
  Codebook cb = make_codebook(8, 16, 131);
  NearestCenterIndex index(cb);

  DescriptorSet set;
  set.dim = cb.dim;
  set.frame_index = 4;
  set.grid.assign(10, {0, 0});
  for (int i = 0; i < 10; ++i)
    set.data.insert(set.data.end(), cb.center(i % 8), cb.center(i % 8) + cb.dim);

  std::vector<double> raw = encode_vlad_raw(set, cb, index);
  REQUIRE(raw.size() == size_t(cb.K) * size_t(cb.dim));
  for (double v : raw) CHECK(v == 0.0);  // residuals are exact zeros

  FrameCode code = encode_vlad(set, cb, index);
  CHECK(code.zero);
  for (double v : code.values) CHECK(v == 0.0);

  DescriptorSet empty;
  empty.dim = cb.dim;
  FrameCode empty_code = encode_vlad(empty, cb, index);
  CHECK(empty_code.zero);
  REQUIRE(empty_code.values.size() == raw.size());
}

TEST_CASE("VLAD residual sums are additive over descriptor subsets", "[unit_encoding]") {
  Codebook cb = make_codebook(8, 16, 132);
  NearestCenterIndex index(cb);
  DescriptorSet full;
  full.dim = cb.dim;
  full.grid.assign(40, {0, 0});
  full.data = random_vectors(40, cb.dim, 515);

  DescriptorSet head, tail;
  head.dim = tail.dim = cb.dim;
  head.grid.assign(17, {0, 0});
  tail.grid.assign(23, {0, 0});
  head.data.assign(full.data.begin(), full.data.begin() + 17 * cb.dim);
  tail.data.assign(full.data.begin() + 17 * cb.dim, full.data.end());

  std::vector<double> whole = encode_vlad_raw(full, cb, index);
  std::vector<double> part_a = encode_vlad_raw(head, cb, index);
  std::vector<double> part_b = encode_vlad_raw(tail, cb, index);
  REQUIRE(whole.size() == part_a.size());
  for (size_t i = 0; i < whole.size(); ++i) {
    double sum = part_a[i] + part_b[i];
    CHECK(std::fabs(whole[i] - sum) <= 1e-8 * std::max(1.0, std::fabs(whole[i])));
  }
}

TEST_CASE("VLAD codes are unit-L2 after the signed square root", "[unit_encoding]") {
  Codebook cb = make_codebook(8, 16, 133);
  NearestCenterIndex index(cb);
  DescriptorSet set;
  set.dim = cb.dim;
  set.frame_index = 6;
  set.grid.assign(30, {0, 0});
  set.data = random_vectors(30, cb.dim, 616);

  FrameCode code = encode_vlad(set, cb, index);
  CHECK(code.encoding == Encoding::VLAD);
  CHECK(code.frame_index == 6);
  CHECK_FALSE(code.zero);
  REQUIRE(code.values.size() == size_t(cb.K) * size_t(cb.dim));
  double norm2 = 0.0;
  for (double v : code.values) norm2 += v * v;
  CHECK(std::fabs(norm2 - 1.0) <= 1e-12);

  // Hand-checkable signed square root: one residual of -4 becomes -2, then
  // global L2 normalization leaves exactly -1.
  Codebook tiny;
  tiny.K = 2;
  tiny.dim = 2;
  tiny.centers = {0.f, 0.f, 10.f, 10.f};
  NearestCenterIndex tiny_index(tiny);
  DescriptorSet one;
  one.dim = 2;
  one.grid.assign(1, {0, 0});
  one.data = {-4.f, 0.f};
  FrameCode signed_code = encode_vlad(one, tiny, tiny_index);
  REQUIRE(signed_code.values.size() == 4);
  CHECK(signed_code.values[0] == -1.0);
  CHECK(signed_code.values[1] == 0.0);
  CHECK(signed_code.values[2] == 0.0);
  CHECK(signed_code.values[3] == 0.0);
}

TEST_CASE("direct codes normalize the single frame vector", "[unit_encoding]") {
  DescriptorSet set;
  set.dim = 5;
  set.frame_index = 11;
  set.grid.assign(1, {0, 0});
  set.data = {3.f, 0.f, 4.f, 0.f, 0.f};

  FrameCode code = encode_direct(set);
  CHECK(code.encoding == Encoding::DIRECT);
  CHECK(code.frame_index == 11);
  CHECK_FALSE(code.zero);
  REQUIRE(code.values.size() == 5);
  CHECK(code.values[0] == Catch::Approx(0.6).margin(1e-12));
  CHECK(code.values[2] == Catch::Approx(0.8).margin(1e-12));
  CHECK(code.values[1] == 0.0);

  DescriptorSet zero;
  zero.dim = 3;
  zero.grid.assign(1, {0, 0});
  zero.data = {0.f, 0.f, 0.f};
  FrameCode zero_code = encode_direct(zero);
  CHECK(zero_code.zero);

  DescriptorSet none;
  none.dim = 3;
  CHECK_THROWS_AS(encode_direct(none), DataError);
  DescriptorSet two;
  two.dim = 3;
  two.grid.assign(2, {0, 0});
  two.data.assign(6, 1.f);
  CHECK_THROWS_AS(encode_direct(two), DataError);
}

TEST_CASE("frame-code archives round-trip bitwise", "[unit_encoding]") {
  testutil::TempDir tmp;
  Rng rng(88);
  std::vector<FrameCode> codes(3);
  for (size_t i = 0; i < codes.size(); ++i) {
    codes[i].encoding = Encoding::VLAD;
    codes[i].frame_index = int(i * 2);
    codes[i].values.resize(6);
    for (double& v : codes[i].values) v = rng.uniform() - 0.5;
  }
  codes[1].zero = true;
  std::fill(codes[1].values.begin(), codes[1].values.end(), 0.0);

  std::filesystem::path path = tmp / "codes.bin";
  write_frame_codes(path.string(), codes, Method::ST_GABOR);
  Method method = Method::SIFT;
  std::vector<FrameCode> back = read_frame_codes(path.string(), &method);
  CHECK(method == Method::ST_GABOR);
  REQUIRE(back.size() == codes.size());
  for (size_t i = 0; i < codes.size(); ++i) {
    CHECK(back[i].encoding == codes[i].encoding);
    CHECK(back[i].frame_index == codes[i].frame_index);
    CHECK(back[i].zero == codes[i].zero);
    CHECK(back[i].values == codes[i].values);
  }

  SECTION("an empty archive still records its method") {
    std::filesystem::path empty_path = tmp / "empty.bin";
    write_frame_codes(empty_path.string(), {}, Method::LW_COLOR);
    Method m = Method::SIFT;
    CHECK(read_frame_codes(empty_path.string(), &m).empty());
    CHECK(m == Method::LW_COLOR);
  }

  SECTION("mixed widths cannot be written") {
    std::vector<FrameCode> ragged = codes;
    ragged[2].values.resize(5);
    CHECK_THROWS_AS(write_frame_codes((tmp / "ragged.bin").string(), ragged, Method::SIFT), DataError);
  }

  SECTION("corrupt archives are rejected") {
    std::string bytes = slurp(path);
    std::filesystem::path bad = tmp / "bad.bin";

    std::string wrong_magic = bytes;
    wrong_magic[2] = 'x';
    spit(bad, wrong_magic);
    CHECK_THROWS_AS(read_frame_codes(bad.string()), DataError);

    spit(bad, bytes.substr(0, 13));  // mid-header
    CHECK_THROWS_AS(read_frame_codes(bad.string()), DataError);

    spit(bad, bytes.substr(0, bytes.size() - 4));  // mid-payload
    CHECK_THROWS_AS(read_frame_codes(bad.string()), DataError);

    CHECK_THROWS_AS(read_frame_codes((tmp / "absent.bin").string()), DataError);
  }
}

TEST_CASE("encode_dump encodes every record and guards the codebook", "[unit_encoding]") {
  testutil::TempDir tmp;
  std::filesystem::path dump = tmp / "sift.desc";
  DescriptorSet frame0 = random_method_set(Method::SIFT, 0, 5, 21);
  DescriptorSet frame1 = random_method_set(Method::SIFT, 1, 0, 22);
  DescriptorSet frame2 = random_method_set(Method::SIFT, 2, 3, 23);
  {
    DescriptorDumpWriter writer(dump.string());
    writer.append(frame0);
    writer.append(frame1);
    writer.append(frame2);
    writer.close();
  }
  Codebook cb = make_codebook(4, method_dim(Method::SIFT), 55);
  NearestCenterIndex index(cb);

  std::vector<FrameCode> ha = encode_dump(dump.string(), Encoding::HA, &cb);
  REQUIRE(ha.size() == 3);
  CHECK(ha[0].values == encode_bow(frame0, cb, index).values);
  CHECK(ha[1].zero);
  CHECK(ha[2].values == encode_bow(frame2, cb, index).values);
  CHECK(ha[0].frame_index == 0);
  CHECK(ha[2].frame_index == 2);

  std::vector<FrameCode> vlad = encode_dump(dump.string(), Encoding::VLAD, &cb);
  REQUIRE(vlad.size() == 3);
  CHECK(vlad[0].values.size() == size_t(cb.K) * size_t(cb.dim));
  CHECK(vlad[0].values == encode_vlad(frame0, cb, index).values);
  CHECK(vlad[1].zero);

  CHECK_THROWS_AS(encode_dump(dump.string(), Encoding::HA, nullptr), DataError);

  std::filesystem::path direct_dump = tmp / "lw.desc";
  {
    DescriptorDumpWriter writer(direct_dump.string());
    writer.append(random_method_set(Method::LW_COLOR, 0, 1, 31));
    writer.append(random_method_set(Method::LW_COLOR, 1, 1, 32));
    writer.close();
  }
  std::vector<FrameCode> direct = encode_dump(direct_dump.string(), Encoding::DIRECT, nullptr);
  REQUIRE(direct.size() == 2);
  for (const FrameCode& code : direct) {
    CHECK(code.encoding == Encoding::DIRECT);
    double norm2 = 0.0;
    for (double v : code.values) norm2 += v * v;
    CHECK(std::fabs(norm2 - 1.0) <= 1e-12);
  }
  // DIRECT encoding requires one descriptor per frame record.
  CHECK_THROWS_AS(encode_dump(dump.string(), Encoding::DIRECT, nullptr), DataError);

  CHECK(encoding_from_name("HA") == Encoding::HA);
  CHECK(encoding_from_name("VLAD") == Encoding::VLAD);
  CHECK(encoding_from_name("DIRECT") == Encoding::DIRECT);
  CHECK(std::string(encoding_name(Encoding::HA)) == "HA");
  CHECK_THROWS_AS(encoding_from_name("BOW"), DataError);
}
