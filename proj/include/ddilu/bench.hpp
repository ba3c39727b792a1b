/// @file bench.hpp
/// @brief End-to-end benchmark runs: build, partition, precondition, solve,
/// report.

#ifndef DDILU_BENCH_HPP
#define DDILU_BENCH_HPP

#include "ddilu/factor.hpp"
#include "ddilu/krylov.hpp"
#include "ddilu/ordering.hpp"
#include "ddilu/precond.hpp"
#include "ddilu/problems.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace ddilu {

struct RunConfig {
    ProblemSpec problem;
    index_t domains = 1;
    PrecondKind precond = PrecondKind::bj;
    FillRule fill = FillRule::ilu0();
    RhsKind rhs = RhsKind::ones;
    int restart = 50;
    double rtol = 1e-8;
    int max_iters = 20000;
    int inner_iters = 3;
    int threads = 1;
    bool history = false;
    /// Box decomposition of the problem grid; without it a grid problem is
    /// cut into contiguous row runs (see partition()).
    std::optional<BoxCounts> boxes;
    /// Kept in the report for reproducibility; every partitioner here is
    /// deterministic, so the value does not change any result.
    unsigned seed = 0;
};

struct RunRecord {
    RunConfig config;
    index_t n = 0;
    index_t nnz = 0;
    SolveReport report;
    /// Empty when the run completed (converged or not).
    std::string error;

    bool completed() const { return error.empty(); }
};

/// Makes cfg a weak-scaling run: p domains, each a box of `per_domain`
/// points tiled by box_counts(per_domain, p).
void tile_domains(RunConfig& cfg, const GridDims& per_domain, index_t p);

/// "boxes:PXxPYxPZ", "rows" (grid problem) or "bfs" (matrix file).
std::string partition_name(const RunConfig& cfg);

/// Throws on invalid configuration or I/O errors; nonconvergence is reported.
RunRecord run(const RunConfig& cfg);

/// One record per config, in order; a failing run records its error and the
/// sweep continues.
std::vector<RunRecord> sweep(const std::vector<RunConfig>& cfgs);

inline constexpr std::string_view kCsvHeader =
    "problem,n,p,precond,fill,its,converged,setup_s,solve_s,final_relres,error";

void write_csv(const std::vector<RunRecord>& records, std::ostream& out);
nlohmann::json to_json(const std::vector<RunRecord>& records);

/// JSON Schema (draft 7) that to_json output conforms to.
extern const char* const kReportSchema;

} // namespace ddilu

#endif // DDILU_BENCH_HPP
