#include "genlasso/errors.hpp"
#include "genlasso/matrix_io.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace genlasso;

namespace {

Matrix parse(const std::string& text) {
  std::istringstream in(text);
  return parse_matrix(in);
}

}  // namespace

TEST(MatrixIo, ParsesIdentity) {
  EXPECT_EQ(parse("2 2\n1 0\n0 1\n"), Matrix::Identity(2, 2));
  EXPECT_EQ(parse("\n2 1\n  3.5\n\n-1e-3\n").col(0), (Vector(2) << 3.5, -1e-3).finished());
}

TEST(MatrixIo, RejectsMalformedInput) {
  EXPECT_THROW(parse("2 3\n1 2 3\n4 5\n"), InputError);
  EXPECT_THROW(parse("1 2\n1 x\n"), InputError);
  EXPECT_THROW(parse("2 1\n1\n"), InputError);
  EXPECT_THROW(parse("1 1\n1\n2\n"), InputError);
  EXPECT_THROW(parse("1\n1\n"), InputError);
  EXPECT_THROW(parse("-1 2\n"), InputError);
  EXPECT_THROW(read_matrix("/nonexistent/path.mat"), InputError);
}

TEST(MatrixIo, RoundTripIsExact) {
  std::mt19937_64 rng(111);
  const auto dir = std::filesystem::temp_directory_path() / "genlasso_io_test";
  std::filesystem::create_directories(dir);
  for (int t = 0; t < 20; ++t) {
    Matrix a = genlasso::testing::gaussian(rng, 1 + t % 5, 1 + t % 7);
    a(0, 0) *= 1e-300;
    if (a.size() > 1) a(a.rows() - 1, a.cols() - 1) *= 1e300;
    const std::string path = (dir / "m.mat").string();
    write_matrix(path, a);
    EXPECT_EQ(read_matrix(path), a);
  }
  const Vector v = genlasso::testing::gaussian_vector(rng, 6);
  write_vector((dir / "v.vec").string(), v);
  EXPECT_EQ(read_vector((dir / "v.vec").string()), v);
  std::ofstream((dir / "row.vec").string()) << "1 3\n1 2 3\n";
  EXPECT_EQ(read_vector((dir / "row.vec").string()), (Vector(3) << 1, 2, 3).finished());
  EXPECT_THROW(read_vector((dir / "m.mat").string()), InputError);
  std::filesystem::remove_all(dir);
}

TEST(MatrixIo, FormatDouble) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}
