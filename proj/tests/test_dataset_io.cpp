#include <gtest/gtest.h>

#include <fstream>

#include "enrich/dataset_io.hpp"
#include "enrich/errors.hpp"
#include "enrich/png_io.hpp"
#include "support.hpp"

using namespace enrich;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(DepthUnits, MillimeterRules) {
  EXPECT_EQ(mm_to_depth(5000), 5.0);
  const std::uint16_t q = depth_to_mm(1.2345);
  EXPECT_TRUE(q == 1234 || q == 1235);
  EXPECT_EQ(depth_to_mm(70.0), 65535);
  EXPECT_EQ(depth_to_mm(0.0), 0);
  EXPECT_EQ(depth_to_mm(-1.0), 0);
  for (std::uint32_t mm = 0; mm <= 65535; mm += 7) EXPECT_EQ(depth_to_mm(mm_to_depth(mm)), mm);
}

TEST(StorePair, RoundTripRecoversValues) {
  fixtures::TempDir dir("io");
  const RgbdPair p = fixtures::synthetic_pair(64, 48, 5);
  const PairPaths paths = store_pair(dir.path(), p.rgb, p.depth_m, "kitchen", "kitchen_0001", "00042", std::nullopt);
  EXPECT_EQ(paths.rgb, fs::path("kitchen/kitchen_0001/00042_rgb.png"));
  EXPECT_EQ(paths.depth, fs::path("kitchen/kitchen_0001/00042_depth.png"));
  DatasetManifest m;
  m.root = dir.path();
  ManifestEntry e{"kitchen", "kitchen_0001", "00042", paths.rgb, paths.depth};
  const RgbdPair back = load_pair(m, e, 64, 48);
  EXPECT_EQ(back.rgb, p.rgb);
  EXPECT_EQ(back.depth_m, p.depth_m);
  EXPECT_EQ(back.source_id, "kitchen/kitchen_0001/00042");

  // Storing what was loaded reproduces the bytes.
  fixtures::TempDir dir2("io2");
  store_pair(dir2.path(), back.rgb, back.depth_m, "kitchen", "kitchen_0001", "00042", std::nullopt);
  EXPECT_EQ(slurp(dir.path() / paths.rgb), slurp(dir2.path() / paths.rgb));
  EXPECT_EQ(slurp(dir.path() / paths.depth), slurp(dir2.path() / paths.depth));
}

TEST(StorePair, AugmentedSuffixAndSidecar) {
  fixtures::TempDir dir("io_aug");
  const RgbdPair p = fixtures::synthetic_pair(16, 12, 1);
  const PairPaths a = store_pair(dir.path(), p.rgb, p.depth_m, "office", "office_3", "00007", 12, "{}\n");
  EXPECT_EQ(a.rgb.filename(), "00007_aug12_rgb.png");
  EXPECT_EQ(a.depth.filename(), "00007_aug12_depth.png");
  EXPECT_EQ(a.scene_json.filename(), "00007_aug12_scene.json");
  EXPECT_EQ(read_text_file(dir.path() / a.scene_json), "{}\n");
  const std::string first = slurp(dir.path() / a.rgb);
  store_pair(dir.path(), p.rgb, p.depth_m, "office", "office_3", "00007", 12, "{}\n");
  EXPECT_EQ(slurp(dir.path() / a.rgb), first);
}

TEST(StorePair, SaturatesDepth) {
  fixtures::TempDir dir("io_sat");
  RgbImage rgb(2, 1, 3);
  DepthImage d(2, 1, 1, 70.0);
  d.at(1, 0) = 0.0;
  const PairPaths p = store_pair(dir.path(), rgb, d, "c", "s", "n", std::nullopt);
  const Image<std::uint16_t> mm = read_png_gray16(dir.path() / p.depth);
  EXPECT_EQ(mm.at(0, 0), 65535);
  EXPECT_EQ(mm.at(1, 0), 0);
}

TEST(LoadPair, ErrorsNameTheEntry) {
  fixtures::TempDir dir("io_err");
  DatasetManifest m;
  m.root = dir.path();
  ManifestEntry missing{"bath", "bath_1", "00001", "bath/bath_1/00001_rgb.png", "bath/bath_1/00001_depth.png"};
  try {
    load_pair(m, missing, 16, 12);
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("bath/bath_1/00001"), std::string::npos);
  }
  const RgbdPair p = fixtures::synthetic_pair(16, 12, 2);
  const PairPaths paths = store_pair(dir.path(), p.rgb, p.depth_m, "bath", "bath_1", "00002", std::nullopt);
  ManifestEntry e{"bath", "bath_1", "00002", paths.rgb, paths.depth};
  EXPECT_THROW(load_pair(m, e, 640, 480), IoError);
  {
    std::ofstream corrupt(dir.path() / paths.depth, std::ios::binary | std::ios::trunc);
    corrupt << "not a png";
  }
  EXPECT_THROW(load_pair(m, e, 16, 12), IoError);
}

TEST(Manifest, SaveLoadRoundTrip) {
  fixtures::TempDir dir("manifest");
  const DatasetManifest m = fixtures::write_synthetic_dataset(dir.path(), 5, 2, 16, 12, 4);
  EXPECT_EQ(m.entries.size(), 7u);
  EXPECT_EQ(m.indices(Split::Train).size(), 5u);
  EXPECT_EQ(m.indices(Split::Test).size(), 2u);
  EXPECT_EQ(m.root, dir.path());
  for (const ManifestEntry& e : m.entries) EXPECT_NO_THROW(load_pair(m, e, 16, 12));
  std::ofstream(dir.path() / "bad.json") << "{\"entries\": [{\"category\": 1}]}";
  EXPECT_THROW(DatasetManifest::load(dir.path() / "bad.json"), ParseError);
  EXPECT_THROW(DatasetManifest::load(dir.path() / "absent.json"), IoError);
}

TEST(PngIo, Gray16AndRgbRoundTrip) {
  fixtures::TempDir dir("png");
  Image<std::uint16_t> g(7, 5, 1);
  for (std::size_t i = 0; i < g.data().size(); ++i) g.data()[i] = static_cast<std::uint16_t>(i * 1871);
  write_png_gray16(dir.path() / "g.png", g);
  EXPECT_EQ(read_png_gray16(dir.path() / "g.png"), g);
  RgbImage c(5, 3, 3);
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] = static_cast<std::uint8_t>(i * 37);
  write_png_rgb(dir.path() / "c.png", c);
  EXPECT_EQ(read_png_rgb(dir.path() / "c.png"), c);
  EXPECT_THROW(read_png_gray16(dir.path() / "c.png"), IoError);
}
