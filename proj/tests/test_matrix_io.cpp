#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "irnn/matrix_io.hpp"

using namespace irnn;

TEST(MatrixIo, FormatAndParse) {
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(parse_double("2.5e-3"), 2.5e-3);
    EXPECT_THROW(parse_double("2.5x"), PreconditionError);
    EXPECT_THROW(parse_index("-"), PreconditionError);
}

TEST(MatrixIo, TripletRoundTrip) {
    Matrix M(3, 4);
    M.setRandom();
    const CompletionProblem p(ObservationMask(3, 4, {{2, 3}, {0, 1}, {1, 1}}), M);
    std::stringstream ss;
    write_triplet_csv(ss, p);
    const CompletionProblem q = read_triplet_csv(ss);
    EXPECT_EQ(q.rows(), 3);
    EXPECT_EQ(q.cols(), 4);
    EXPECT_EQ(q.mask().coordinates(), p.mask().coordinates());
    EXPECT_EQ(q.observed(), p.observed());
}

TEST(MatrixIo, TripletUnsortedInputKeepsValuesAligned) {
    std::stringstream ss("# shape 2 2\nrow,col,value\n1,1,4\n0,0,1\n1,0,3\n");
    const CompletionProblem p = read_triplet_csv(ss);
    EXPECT_EQ(p.observed()(1, 1), 4);
    EXPECT_EQ(p.observed()(0, 0), 1);
    EXPECT_EQ(p.observed()(1, 0), 3);
}

TEST(MatrixIo, TripletErrors) {
    std::stringstream no_shape("row,col,value\n0,0,1\n");
    EXPECT_THROW(read_triplet_csv(no_shape), PreconditionError);
    std::stringstream oob("# shape 2 2\nrow,col,value\n2,0,1\n");
    EXPECT_THROW(read_triplet_csv(oob), PreconditionError);
    std::stringstream with_shape("row,col,value\n0,0,1\n");
    EXPECT_EQ(read_triplet_csv(with_shape, Shape{3, 3}).rows(), 3);
}

TEST(MatrixIo, DenseRoundTripIsExact) {
    Matrix M(2, 3);
    M << 0.1, -1e-300, 3, 1.0 / 3, 2e10, -0.0;
    const auto path = std::filesystem::temp_directory_path() / "irnn_dense_test.csv";
    save_dense_csv(path, M);
    EXPECT_EQ(load_dense_csv(path), M);
    std::filesystem::remove(path);
}
