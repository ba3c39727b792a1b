// Benchmark driver: one run per (domains, precond) pair, reported as CSV or JSON.

#include "ddilu/bench.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

std::array<double, 3> parse_velocity(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 3) {
        throw std::invalid_argument("--velocity needs three components");
    }
    std::array<double, 3> v{};
    for (std::size_t i = 0; i < 3; ++i) {
        std::istringstream in(parts[i]);
        in.imbue(std::locale::classic());
        if (!(in >> v[i]) || !in.eof()) {
            throw std::invalid_argument("bad velocity component '" + parts[i] + "'");
        }
    }
    return v;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Domain-decomposition ILU preconditioner benchmark"};

    std::string problem = "poisson2d";
    std::string size = "64";
    std::string per_domain;
    std::string domains = "1";
    std::string precond = "bj";
    std::string fill = "ilu0";
    std::string velocity = "1,1,1";
    std::string rhs = "ones";
    std::string output = "csv";
    ddilu::RunConfig base;

    app.add_option("--problem", problem, "poisson2d | poisson3d | convdiff3d | mtx:<path>");
    app.add_option("--size", size, "Grid extents NX[,NY[,NZ]]");
    app.add_option("--size-per-domain", per_domain,
                   "Grid extents per domain (weak scaling); overrides --size");
    app.add_option("--domains", domains, "Domain count P, or a comma list for a sweep");
    app.add_option("--precond", precond,
                   "bj | l1bj | schur | rap | rap-milu | none, or a comma list");
    app.add_option("--fill", fill, "ilu0 | iluk:K | ilut:TAU,MAXFILL");
    app.add_option("--velocity", velocity, "Convection velocity bx,by,bz (convdiff3d)");
    app.add_option("--rhs", rhs, "ones (b = 1) | a-ones (b = A 1)")
        ->check(CLI::IsMember({"ones", "a-ones"}));
    app.add_option("--restart", base.restart, "FGMRES restart length")->check(CLI::PositiveNumber);
    app.add_option("--rtol", base.rtol, "Relative residual tolerance")->check(CLI::PositiveNumber);
    app.add_option("--max-iters", base.max_iters, "Iteration cap")->check(CLI::NonNegativeNumber);
    app.add_option("--inner-iters", base.inner_iters, "GMRES steps on the reduced system")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--threads", base.threads, "Worker threads for per-domain work")
        ->check(CLI::PositiveNumber);
    app.add_option("--output", output, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--history", base.history, "Include residual histories (json)");

    CLI11_PARSE(app, argc, argv);

    std::vector<ddilu::RunConfig> cfgs;
    try {
        base.fill = ddilu::FillRule::parse(fill);
        base.rhs = ddilu::parse_rhs_kind(rhs);
        for (const auto& p_text : split(domains, ',')) {
            const auto p = static_cast<ddilu::index_t>(std::stol(p_text));
            ddilu::RunConfig cfg = base;
            cfg.domains = p;
            if (!per_domain.empty()) {
                cfg.problem = ddilu::parse_problem(problem, per_domain);
                if (cfg.problem.kind == ddilu::ProblemKind::file) {
                    throw std::invalid_argument("--size-per-domain needs a generated problem");
                }
                ddilu::tile_domains(cfg, cfg.problem.dims, p);
            } else {
                cfg.problem = ddilu::parse_problem(problem, size);
            }
            cfg.problem.velocity = parse_velocity(velocity);
            for (const auto& name : split(precond, ',')) {
                cfg.precond = ddilu::parse_precond_kind(name);
                cfgs.push_back(cfg);
            }
        }
        if (cfgs.empty()) {
            throw std::invalid_argument("nothing to run");
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    const auto records = ddilu::sweep(cfgs);
    if (output == "json") {
        std::cout << ddilu::to_json(records).dump(2) << '\n';
    } else {
        ddilu::write_csv(records, std::cout);
    }
    for (const auto& rec : records) {
        if (!rec.completed()) {
            std::cerr << "error: " << rec.error << '\n';
            return 1;
        }
    }
    return 0;
}
