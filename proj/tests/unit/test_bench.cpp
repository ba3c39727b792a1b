#include "ddilu/bench.hpp"

#include "ddilu/matrix_market.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ddilu {
namespace {

RunConfig small_config(PrecondKind k, index_t p) {
    RunConfig c;
    c.problem = parse_problem("poisson2d", "16");
    c.domains = p;
    c.precond = k;
    return c;
}

TEST(Bench, SmallPoissonConverges) {
    const auto rec = run(small_config(PrecondKind::bj, 1));
    EXPECT_TRUE(rec.completed());
    EXPECT_EQ(rec.n, 256);
    EXPECT_EQ(rec.nnz, 256 * 5 - 4 * 16);
    EXPECT_TRUE(rec.report.converged);
    EXPECT_LE(rec.report.iterations, 40);
    EXPECT_LE(rec.report.final_relres, 1e-8);
}

TEST(Bench, IdentityNeedsOneIteration) {
    const auto path = std::filesystem::temp_directory_path() / "ddilu_bench_identity.mtx";
    std::vector<Triplet> t;
    for (index_t i = 0; i < 10; ++i) t.push_back({i, i, 1.0});
    write_matrix_market(CsrMatrix::from_triplets(10, 10, std::move(t)), path);
    RunConfig c;
    c.problem = parse_problem("mtx:" + path.string(), "");
    c.precond = PrecondKind::none;
    const auto rec = run(c);
    std::filesystem::remove(path);
    EXPECT_EQ(rec.report.iterations, 1);
    EXPECT_TRUE(rec.report.converged);
    EXPECT_LE(rec.report.final_relres, 1e-15);
}

TEST(Bench, RunsAreDeterministicExceptForTimings) {
    for (auto k : {PrecondKind::bj, PrecondKind::schur, PrecondKind::rap_milu}) {
        auto c = small_config(k, 4);
        c.history = true;
        const auto a = run(c), b = run(c);
        EXPECT_EQ(a.report.iterations, b.report.iterations);
        EXPECT_EQ(a.report.residual_history, b.report.residual_history);
        EXPECT_EQ(a.report.final_relres, b.report.final_relres);
    }
}

TEST(Bench, HistoryStartsAtOneAndEndsBelowTolerance) {
    auto c = small_config(PrecondKind::schur, 4);
    c.history = true;
    const auto rec = run(c);
    ASSERT_EQ(rec.report.residual_history.size(),
              static_cast<std::size_t>(rec.report.iterations + 1));
    EXPECT_DOUBLE_EQ(rec.report.residual_history.front(), 1.0);
    EXPECT_LE(rec.report.residual_history.back(), c.rtol);
}

TEST(Bench, TileDomainsBuildsOneBoxPerDomain) {
    RunConfig c = small_config(PrecondKind::bj, 1);
    tile_domains(c, {8, 8, 1}, 4);
    EXPECT_EQ(c.domains, 4);
    EXPECT_EQ(c.problem.dims.nx, 16);
    EXPECT_EQ(c.problem.dims.ny, 16);
    EXPECT_EQ(partition_name(c), "boxes:2x2x1");
    const auto rec = run(c);
    EXPECT_EQ(rec.n, 256);
    EXPECT_TRUE(rec.report.converged);
    EXPECT_EQ(to_json({rec})["runs"][0]["partition"], "boxes:2x2x1");

    RunConfig mismatch = small_config(PrecondKind::bj, 3);
    mismatch.boxes = BoxCounts{2, 2, 1};
    EXPECT_THROW(run(mismatch), std::invalid_argument);
    EXPECT_THROW(tile_domains(c, {1, 1, 1}, 2), std::invalid_argument);
}

TEST(Bench, SweepRecordsErrorsAndContinues) {
    auto bad = small_config(PrecondKind::bj, 1);
    bad.problem = parse_problem("mtx:/nonexistent/ddilu.mtx", "");
    auto too_many = small_config(PrecondKind::bj, 1000);
    const auto recs = sweep({small_config(PrecondKind::bj, 1), bad, too_many,
                             small_config(PrecondKind::rap_milu, 4)});
    ASSERT_EQ(recs.size(), 4u);
    EXPECT_TRUE(recs[0].completed());
    EXPECT_FALSE(recs[1].completed());
    EXPECT_FALSE(recs[1].error.empty());
    EXPECT_FALSE(recs[2].completed());
    EXPECT_TRUE(recs[3].completed());
    EXPECT_TRUE(recs[3].report.converged);
}

TEST(Bench, CsvLayout) {
    auto bad = small_config(PrecondKind::bj, 1);
    bad.problem = parse_problem("mtx:/nonexistent/ddilu.mtx", "");
    const auto recs = sweep({small_config(PrecondKind::bj, 4), bad});
    std::ostringstream out;
    write_csv(recs, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, kCsvHeader);
    std::getline(in, line);
    EXPECT_EQ(line.rfind("poisson2d,256,4,bj,ilu0,", 0), 0u) << line;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 10);
    EXPECT_EQ(line.back(), ',');  // empty error field
    std::getline(in, line);
    EXPECT_EQ(line.rfind("mtx:/nonexistent/ddilu.mtx,", 0), 0u) << line;
    EXPECT_FALSE(std::getline(in, line));
}

TEST(Bench, JsonFields) {
    auto c = small_config(PrecondKind::schur, 4);
    const auto j = to_json({run(c)});
    ASSERT_TRUE(j.contains("runs"));
    const auto& row = j["runs"].at(0);
    for (const char* key : {"problem", "n", "nnz", "p", "precond", "fill", "restart", "rtol",
                            "max_iters", "inner_iters", "threads", "seed", "rhs", "partition", "its", "converged",
                            "setup_s", "solve_s", "final_relres", "error"}) {
        EXPECT_TRUE(row.contains(key)) << key;
    }
    EXPECT_EQ(row["precond"], "schur");
    EXPECT_EQ(row["rhs"], "ones");
    EXPECT_EQ(row["partition"], "rows");
    EXPECT_TRUE(row["error"].is_null());
    EXPECT_TRUE(row["final_relres"].is_number());
    EXPECT_FALSE(row.contains("residual_history"));

    c.history = true;
    const auto h = to_json({run(c)})["runs"].at(0);
    EXPECT_EQ(h["residual_history"].size(), static_cast<std::size_t>(h["its"].get<int>() + 1));
    EXPECT_EQ(h["cycle_starts"].at(0), 0);
}

TEST(Bench, EmbeddedSchemaMatchesSchemaFile) {
    std::ifstream in(std::string(DDILU_SOURCE_DIR) + "/schema/report.schema.json");
    ASSERT_TRUE(in);
    const auto file = nlohmann::json::parse(in);
    EXPECT_EQ(file, nlohmann::json::parse(kReportSchema));
}

} // namespace
} // namespace ddilu
