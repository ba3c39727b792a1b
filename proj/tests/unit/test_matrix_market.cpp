#include "ddilu/matrix_market.hpp"

#include "support/fixtures.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

namespace ddilu {
namespace {

TEST(MatrixMarket, RoundTripIsExact) {
    std::mt19937_64 rng(42);
    const CsrMatrix A = test::random_dd(25, 4, rng);
    std::stringstream ss;
    write_matrix_market(A, ss);
    EXPECT_EQ(read_matrix_market(ss), A);
}

TEST(MatrixMarket, RoundTripThroughFile) {
    const auto A = test::tridiagonal(6, 2.5);
    const auto path = std::filesystem::temp_directory_path() / "ddilu_mm_roundtrip.mtx";
    write_matrix_market(A, path);
    EXPECT_EQ(read_matrix_market(path), A);
    std::filesystem::remove(path);
}

TEST(MatrixMarket, OneBasedIndicesMapToZeroBased) {
    std::istringstream in("%%MatrixMarket matrix coordinate real general\n"
                          "% comment\n"
                          "2 3 2\n"
                          "1 1 5.0\n"
                          "2 3 -1.5\n");
    const auto A = read_matrix_market(in);
    EXPECT_EQ(A.n_rows(), 2);
    EXPECT_EQ(A.n_cols(), 3);
    EXPECT_EQ(A.at(0, 0), 5.0);
    EXPECT_EQ(A.at(1, 2), -1.5);
}

TEST(MatrixMarket, SymmetricHeaderIsExpanded) {
    // k = 4 stored entries, 2 on the diagonal -> 2k - 2 = 6 in memory
    std::istringstream in("%%MatrixMarket matrix coordinate real symmetric\n"
                          "3 3 4\n"
                          "1 1 2.0\n"
                          "2 1 -1.0\n"
                          "3 2 -1.0\n"
                          "3 3 2.0\n");
    const auto A = read_matrix_market(in);
    EXPECT_EQ(A.nnz(), 6);
    EXPECT_EQ(A.at(0, 1), -1.0);
    EXPECT_EQ(A.at(1, 0), -1.0);
    EXPECT_EQ(A.at(1, 2), -1.0);
}

TEST(MatrixMarket, MalformedInputsAreRejected) {
    const char* cases[] = {
        "",
        "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n",
        "%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n",
        "%%MatrixMarket matrix coordinate real skew-symmetric\n1 1 0\n",
        "%%MatrixMarket matrix coordinate real general\n2 2\n",
        "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n",
        "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n",
        "not a header\n",
    };
    for (const char* text : cases) {
        std::istringstream in(text);
        EXPECT_THROW(read_matrix_market(in), MatrixMarketError) << text;
    }
}

TEST(MatrixMarket, MissingFileIsAnError) {
    EXPECT_THROW(read_matrix_market(std::filesystem::path("/nonexistent/none.mtx")),
                 MatrixMarketError);
}

} // namespace
} // namespace ddilu
