#include <gtest/gtest.h>

#include <sstream>

#include "l1pca/io.hpp"
#include "oracles.hpp"

using namespace l1pca;

TEST(Io, CsvRoundTripIsExact) {
  const Matrix M = oracle::gaussian(3, 5, 1) * 1e3;
  std::stringstream ss;
  io::write_matrix_csv(ss, M);
  const Matrix back = io::read_matrix_csv(ss);
  EXPECT_EQ(back, M);
}

TEST(Io, CsvCommentsAndBlankLines) {
  std::istringstream in("# header\n1, 2 ,3\n\n  # more\n+4,-5,6e1\n");
  const Matrix M = io::read_matrix_csv(in);
  ASSERT_EQ(M.rows(), 2);
  ASSERT_EQ(M.cols(), 3);
  EXPECT_EQ(M(1, 0), 4.0);
  EXPECT_EQ(M(1, 2), 60.0);
}

TEST(Io, CsvErrors) {
  std::istringstream ragged("1,2\n3\n");
  EXPECT_THROW(io::read_matrix_csv(ragged), io::FormatError);
  std::istringstream bad("1,x\n");
  EXPECT_THROW(io::read_matrix_csv(bad), io::FormatError);
  std::istringstream empty("# nothing\n");
  EXPECT_THROW(io::read_matrix_csv(empty), io::FormatError);
  std::istringstream inf("1,inf\n");
  EXPECT_THROW(io::read_matrix_csv(inf), io::FormatError);
  EXPECT_THROW(io::read_matrix_csv(std::string("/nonexistent/file.csv")), io::FormatError);
}

TEST(Io, FormatDoubleRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) EXPECT_EQ(std::stod(io::format_double(x)), x);
}

TEST(Io, PgmRoundTripBothEncodings) {
  io::GrayImage img{3, 4, {}};
  for (int i = 0; i < 12; ++i) img.pixels.push_back(static_cast<std::uint8_t>(i * 20));
  for (bool binary : {true, false}) {
    std::stringstream ss;
    io::write_pgm(ss, img, binary);
    const io::GrayImage back = io::read_pgm(ss);
    EXPECT_EQ(back.rows, 3);
    EXPECT_EQ(back.cols, 4);
    EXPECT_EQ(back.pixels, img.pixels);
  }
}

TEST(Io, PgmHeaderComments) {
  std::istringstream in("P2\n# comment\n2 1\n255\n7 255\n");
  const io::GrayImage img = io::read_pgm(in);
  EXPECT_EQ(img.at(0, 1), 255);
}

TEST(Io, PgmErrors) {
  std::istringstream magic("P6\n1 1\n255\n");
  EXPECT_THROW(io::read_pgm(magic), io::FormatError);
  std::istringstream depth("P2\n1 1\n65535\n0\n");
  EXPECT_THROW(io::read_pgm(depth), io::FormatError);
  std::istringstream truncated("P5\n4 4\n255\nab");
  EXPECT_THROW(io::read_pgm(truncated), io::FormatError);
}

TEST(Io, CsvTable) {
  io::CsvTable t({"a", "b"});
  t.row(std::vector<double>{1.5, 2.0}).row(std::vector<std::string>{"x", "y"});
  std::ostringstream out;
  t.write(out);
  EXPECT_EQ(out.str(), "a,b\n1.5,2\nx,y\n");
  EXPECT_THROW(t.row(std::vector<double>{1.0}), std::invalid_argument);
}
