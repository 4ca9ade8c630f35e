#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "bvg/io.hpp"
#include "test_util.hpp"

using namespace bvg;
namespace fs = std::filesystem;

namespace {

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("bvg_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path path(const std::string& name) const { return dir_ / name; }

  fs::path dir_;
};

}  // namespace

TEST_F(IoTest, BvgfRoundTripIsBitExact) {
  const Image u = bvg::testing::random_image(Grid::covering(13, 7, -0.3, 1.7, 0.25), 1, -1e3, 1e3);
  write_bvgf(path("u.bvgf"), u);
  const Image v = read_bvgf(path("u.bvgf"));
  EXPECT_EQ(v.grid(), u.grid());
  for (std::size_t k = 0; k < u.size(); ++k) EXPECT_EQ(v[k], u[k]);
}

TEST_F(IoTest, BvgfRejectsTruncatedFiles) {
  write_bvgf(path("u.bvgf"), Image(Grid::covering(4, 4, 0, 1, 0), 1.0));
  const std::string bytes = read_file(path("u.bvgf"));
  write_file_atomic(path("cut.bvgf"), std::string_view(bytes).substr(0, bytes.size() - 3));
  EXPECT_THROW(read_bvgf(path("cut.bvgf")), IoError);
  write_file_atomic(path("bad.bvgf"), "NOPE");
  EXPECT_THROW(read_bvgf(path("bad.bvgf")), IoError);
}

TEST_F(IoTest, MissingFileIsAnIoError) {
  EXPECT_THROW(read_image(path("absent.pgm")), IoError);
  EXPECT_THROW(read_bvgf(path("absent.bvgf")), IoError);
}

TEST_F(IoTest, PgmRoundTripWithinQuantisation) {
  const Image u = bvg::testing::random_image(Grid::covering(21, 11, 0, 1, 0), 2, 0.0, 1.0);
  for (int depth : {8, 16}) {
    PgmWriteOptions o;
    o.bit_depth = depth;
    write_pgm(path("u.pgm"), u, o);
    const PgmImage p = read_pgm(path("u.pgm"));
    const double step = 1.0 / ((1 << depth) - 1);
    EXPECT_TRUE(p.has_grid);
    EXPECT_EQ(p.image.grid(), u.grid());
    EXPECT_LE(max_abs_diff(p.image, u), 0.5 * step + 1e-12) << depth;
  }
}

TEST_F(IoTest, PgmRestoresSignedValues) {
  const Image u = bvg::testing::random_image(Grid::covering(9, 9, 0, 1, 0), 3, -2.0, 5.0);
  PgmWriteOptions o;
  o.bit_depth = 16;
  const PgmMapping m = write_pgm(path("s.pgm"), u, o);
  EXPECT_DOUBLE_EQ(m.lo, u.min());
  EXPECT_DOUBLE_EQ(m.hi, u.max());
  const Image back = read_image(path("s.pgm"));
  EXPECT_LE(max_abs_diff(back, u), 0.5 * (m.hi - m.lo) / 65535.0 + 1e-12);
  // Without restoring, gray levels are normalised to [0, 1].
  const PgmImage raw = read_pgm(path("s.pgm"));
  EXPECT_GE(raw.image.min(), 0.0);
  EXPECT_LE(raw.image.max(), 1.0);
}

TEST_F(IoTest, ForeignPgmGetsTheDefaultGrid) {
  {
    std::ofstream out(path("plain.pgm"), std::ios::binary);
    out << "P5\n# made elsewhere\n4 2\n255\n";
    const unsigned char px[8] = {0, 51, 102, 153, 204, 255, 0, 0};
    out.write(reinterpret_cast<const char*>(px), 8);
  }
  const PgmImage p = read_pgm(path("plain.pgm"));
  EXPECT_FALSE(p.has_grid);
  EXPECT_EQ(p.image.width(), 4u);
  EXPECT_EQ(p.image.height(), 2u);
  EXPECT_DOUBLE_EQ(p.image.spacing(), 0.25);
  EXPECT_DOUBLE_EQ(p.image.grid().x0, 0.125);
  EXPECT_DOUBLE_EQ(p.image.at(1, 0), 0.2);
  EXPECT_DOUBLE_EQ(p.image.at(1, 1), 1.0);
}

TEST_F(IoTest, MalformedPgmIsAnIoError) {
  write_file_atomic(path("a.pgm"), "P2\n2 2\n255\n0 0 0 0\n");
  EXPECT_THROW(read_pgm(path("a.pgm")), IoError);
  write_file_atomic(path("b.pgm"), "P5\n2 2\n255\nab");
  EXPECT_THROW(read_pgm(path("b.pgm")), IoError);
}

TEST_F(IoTest, AtomicWriteLeavesNoTemporaries) {
  write_file_atomic(path("x.txt"), "first");
  write_file_atomic(path("x.txt"), "second");
  EXPECT_EQ(read_file(path("x.txt")), "second");
  EXPECT_EQ(std::distance(fs::directory_iterator(dir_), fs::directory_iterator{}), 1);
  EXPECT_THROW(write_file_atomic(path("no/such/dir/x.txt"), "x"), IoError);
}
