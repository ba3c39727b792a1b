#include "ddilu/bench.hpp"

#include "ddilu/ordering.hpp"
#include "ddilu/sparse_ops.hpp"
#include "ddilu/vector_ops.hpp"

#include <chrono>
#include <charconv>
#include <exception>

namespace ddilu {

const char* const kReportSchema = R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "type": "object",
  "required": ["runs"],
  "additionalProperties": false,
  "properties": {
    "runs": {
      "type": "array",
      "items": {
        "type": "object",
        "additionalProperties": false,
        "required": ["problem", "n", "nnz", "p", "precond", "fill", "restart", "rtol",
                     "max_iters", "inner_iters", "threads", "seed", "rhs", "partition", "its", "converged",
                     "setup_s", "solve_s", "final_relres", "error"],
        "properties": {
          "problem": {"type": "string"},
          "n": {"type": "integer", "minimum": 0},
          "nnz": {"type": "integer", "minimum": 0},
          "p": {"type": "integer", "minimum": 1},
          "precond": {"enum": ["none", "bj", "l1bj", "schur", "rap", "rap-milu"]},
          "fill": {"type": "string"},
          "restart": {"type": "integer", "minimum": 1},
          "rtol": {"type": "number", "exclusiveMinimum": 0},
          "max_iters": {"type": "integer", "minimum": 0},
          "inner_iters": {"type": "integer", "minimum": 0},
          "threads": {"type": "integer", "minimum": 1},
          "seed": {"type": "integer", "minimum": 0},
          "rhs": {"enum": ["ones", "a-ones"]},
          "partition": {"type": "string", "pattern": "^(rows|bfs|boxes:[0-9]+x[0-9]+x[0-9]+)$"},
          "its": {"type": "integer", "minimum": 0},
          "converged": {"type": "boolean"},
          "setup_s": {"type": "number", "minimum": 0},
          "solve_s": {"type": "number", "minimum": 0},
          "final_relres": {"type": ["number", "null"]},
          "error": {"type": ["string", "null"]},
          "residual_history": {"type": "array", "items": {"type": "number"}},
          "cycle_starts": {"type": "array", "items": {"type": "integer", "minimum": 0}}
        }
      }
    }
  }
})";

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Shortest round-trip representation, independent of the global locale.
std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + '"';
}

} // namespace

void tile_domains(RunConfig& cfg, const GridDims& per_domain, index_t p) {
    if (cfg.problem.kind == ProblemKind::file) {
        throw std::invalid_argument("tile_domains: needs a generated problem");
    }
    const auto counts = box_counts(per_domain, p);
    if (!counts) {
        throw std::invalid_argument("tile_domains: per-domain grid too small for " +
                                    std::to_string(p) + " domains");
    }
    cfg.domains = p;
    cfg.boxes = *counts;
    cfg.problem.dims = {per_domain.nx * (*counts)[0], per_domain.ny * (*counts)[1],
                        per_domain.nz * (*counts)[2]};
}

std::string partition_name(const RunConfig& cfg) {
    if (cfg.boxes) {
        const auto& b = *cfg.boxes;
        return "boxes:" + std::to_string(b[0]) + "x" + std::to_string(b[1]) + "x" +
               std::to_string(b[2]);
    }
    return cfg.problem.kind == ProblemKind::file ? "bfs" : "rows";
}

RunRecord run(const RunConfig& cfg) {
    if (cfg.domains < 1) {
        throw std::invalid_argument("run: domains must be >= 1");
    }
    RunRecord rec;
    rec.config = cfg;

    const auto t0 = std::chrono::steady_clock::now();
    const Problem prob = build_problem(cfg.problem);
    const CsrMatrix& A = prob.A;
    if (!A.is_square()) {
        throw DimensionError("run: matrix is not square");
    }
    rec.n = A.n_rows();
    rec.nnz = A.nnz();
    const std::vector<double> b = make_rhs(A, cfg.rhs);

    std::vector<index_t> owner;
    if (cfg.boxes) {
        const auto& b = *cfg.boxes;
        if (!prob.grid || b[0] * b[1] * b[2] != cfg.domains) {
            throw std::invalid_argument("run: box counts need a grid problem and must multiply to p");
        }
        owner = partition_boxes(*prob.grid, b);
    } else {
        owner = partition(A, cfg.domains, prob.grid);
    }
    const DomainLayout layout = classify_and_order(A, owner);
    const auto M = make_preconditioner(cfg.precond, A, layout,
                                       {cfg.fill, cfg.inner_iters, cfg.threads});
    const double setup = seconds_since(t0);

    KrylovConfig kc;
    kc.restart = cfg.restart;
    kc.rtol = cfg.rtol;
    kc.max_iters = cfg.max_iters;
    kc.record_history = cfg.history;
    const LinearOperator op = [&A](std::span<const double> x, std::span<double> y) {
        spmv(A, x, y);
    };
    SolveResult res = fgmres(op, M ? M->as_operator() : LinearOperator{}, b, {}, kc);
    rec.report = std::move(res.report);
    rec.report.setup_seconds = setup;

    std::vector<double> r = spmv(A, res.x);
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = b[i] - r[i];
    }
    const double bn = norm2(b);
    rec.report.final_relres = bn > 0.0 ? norm2(r) / bn : norm2(r);
    return rec;
}

std::vector<RunRecord> sweep(const std::vector<RunConfig>& cfgs) {
    std::vector<RunRecord> out;
    out.reserve(cfgs.size());
    for (const auto& cfg : cfgs) {
        try {
            out.push_back(run(cfg));
        } catch (const std::exception& e) {
            RunRecord rec;
            rec.config = cfg;
            rec.error = e.what();
            if (rec.error.empty()) {
                rec.error = "unknown error";
            }
            out.push_back(std::move(rec));
        }
    }
    return out;
}

void write_csv(const std::vector<RunRecord>& records, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const auto& rec : records) {
        const auto& c = rec.config;
        const auto& rp = rec.report;
        out << csv_field(c.problem.name()) << ',' << rec.n << ',' << c.domains << ','
            << to_string(c.precond) << ',' << csv_field(c.fill.name()) << ',' << rp.iterations
            << ',' << (rp.converged ? "true" : "false") << ',' << format_double(rp.setup_seconds)
            << ',' << format_double(rp.solve_seconds) << ','
            << (rec.completed() ? format_double(rp.final_relres) : "") << ','
            << csv_field(rec.error) << '\n';
    }
}

nlohmann::json to_json(const std::vector<RunRecord>& records) {
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& rec : records) {
        const auto& c = rec.config;
        const auto& rp = rec.report;
        nlohmann::json row = {
            {"problem", c.problem.name()},
            {"n", rec.n},
            {"nnz", rec.nnz},
            {"p", c.domains},
            {"precond", to_string(c.precond)},
            {"fill", c.fill.name()},
            {"restart", c.restart},
            {"rtol", c.rtol},
            {"max_iters", c.max_iters},
            {"inner_iters", c.inner_iters},
            {"threads", c.threads},
            {"seed", c.seed},
            {"rhs", to_string(c.rhs)},
            {"partition", partition_name(c)},
            {"its", rp.iterations},
            {"converged", rp.converged},
            {"setup_s", rp.setup_seconds},
            {"solve_s", rp.solve_seconds},
            {"final_relres", nullptr},
            {"error", nullptr},
        };
        if (rec.completed()) {
            row["final_relres"] = rp.final_relres;
        } else {
            row["error"] = rec.error;
        }
        if (c.history) {
            row["residual_history"] = rp.residual_history;
            row["cycle_starts"] = rp.cycle_starts;
        }
        runs.push_back(std::move(row));
    }
    return {{"runs", std::move(runs)}};
}

} // namespace ddilu
