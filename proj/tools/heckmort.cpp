#include <cstdio>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "heckmort/acceptance.hpp"
#include "heckmort/cache.hpp"
#include "heckmort/dsl.hpp"
#include "heckmort/master.hpp"
#include "heckmort/replay.hpp"
#include "heckmort/runner.hpp"
#include "heckmort/serialize.hpp"

namespace {

using namespace heckmort;

constexpr int kExitVerified = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;
constexpr int kExitEngine = 3;

Exponent checked_order(std::int64_t order) {
    if (order <= 0) throw std::invalid_argument("order must be positive");
    return Exponent(order);
}

int cmd_verify(const std::string& file, std::int64_t order, const std::string& json_path,
               int jobs, const std::string& cache_dir, bool no_cache) {
    RunConfig cfg;
    cfg.order = checked_order(order);
    cfg.jobs = jobs;
    cfg.cache_dir = cache_dir;
    cfg.use_cache = !no_cache;
    auto reports = run_verify_file(file, cfg);
    for (const auto& r : reports) std::printf("%s\n", report_to_text(r).c_str());
    if (!json_path.empty()) {
        std::ofstream out(json_path, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + json_path);
        out << reports_to_json(reports);
    }
    std::printf("%zu equation(s), %s\n", reports.size(),
                all_verified(reports) ? "all verified" : "NOT all verified");
    return all_verified(reports) ? kExitVerified : kExitMismatch;
}

int cmd_series(const std::string& expr, std::int64_t order, const std::string& format) {
    QSeries s = evaluate(parse_expression(expr), checked_order(order));
    if (format == "json")
        std::printf("%s\n", series_to_json(s).c_str());
    else
        std::printf("%s\n", s.str().c_str());
    return kExitVerified;
}

int cmd_master(std::int64_t n, std::int64_t p, const std::string& xs, const std::string& ys,
               std::int64_t order) {
    MasterParams mp{n, p};
    Specialization spec{parse_monomial(xs), parse_monomial(ys)};
    auto rep = verify_master(mp, spec, checked_order(order));
    if (rep.verified()) {
        std::printf("ok        double sum matches assembly plus correction  [checked to q^%s]\n",
                    rep.checked_to.str().c_str());
        return kExitVerified;
    }
    if (rep.first_mismatch) {
        const auto& m = *rep.first_mismatch;
        std::printf("MISMATCH  at q^%s: lhs %s, rhs %s\n", m.exp.str().c_str(),
                    m.lhs.get_str().c_str(), m.rhs.get_str().c_str());
    } else {
        std::printf("UNDECIDED  [horizon %s short of the requested order]\n",
                    rep.checked_to.str().c_str());
    }
    return kExitMismatch;
}

int cmd_replay(std::int64_t n, std::int64_t p, const std::string& xs, const std::string& ys,
               std::int64_t order) {
    MasterParams mp{n, p};
    Specialization spec{parse_monomial(xs), parse_monomial(ys)};
    auto stages = replay_proof(mp, spec, checked_order(order));
    bool all_ok = true;
    for (const auto& stage : stages) {
        bool ok = stage.report.verified();
        all_ok = all_ok && ok;
        std::printf("%s  %-48s [checked to q^%s]\n", ok ? "ok      " : "MISMATCH",
                    stage.label.c_str(), stage.report.checked_to.str().c_str());
    }
    std::printf("%zu stage(s), %s\n", stages.size(), all_ok ? "all verified" : "NOT all verified");
    return all_ok ? kExitVerified : kExitMismatch;
}

int cmd_selftest() {
    auto results = run_acceptance();
    bool all_ok = true;
    for (const auto& r : results) {
        all_ok = all_ok && r.passed;
        std::printf("%s\n", format_result(r).c_str());
    }
    std::printf("%zu check(s), %s\n", results.size(), all_ok ? "all passed" : "NOT all passed");
    return all_ok ? kExitVerified : kExitMismatch;
}

int cmd_cache_clear(const std::string& cache_dir) {
    SeriesCache cache(cache_dir.empty() ? std::filesystem::path() : std::filesystem::path(cache_dir));
    std::size_t removed = cache.clear();
    std::printf("removed %zu cached series from %s\n", removed, cache.directory().c_str());
    return kExitVerified;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact q-series engine: theta products, Appell sums, double-sum identities"};
    app.require_subcommand(1);

    std::string file, expr, json_path, cache_dir, xs, ys;
    std::string format = "text";
    std::int64_t order = 60;
    std::int64_t n = 1, p = 1;
    int jobs = 1;
    bool no_cache = false;

    auto* verify = app.add_subcommand("verify", "verify every equation in a file");
    verify->add_option("--file", file, "equation file, one identity per line")->required();
    verify->add_option("--order", order, "truncation order (default 60)");
    verify->add_option("--json", json_path, "write the JSON report array here");
    verify->add_option("--jobs", jobs, "equations verified concurrently");
    verify->add_option("--cache-dir", cache_dir, "series cache directory");
    verify->add_flag("--no-cache", no_cache, "skip the on-disk series cache");

    auto* series = app.add_subcommand("series", "expand one expression");
    series->add_option("--expr", expr, "expression to expand")->required();
    series->add_option("--order", order, "truncation order (default 60)");
    series->add_option("--format", format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    auto* master = app.add_subcommand("master", "check the double-sum master identity");
    master->add_option("--n", n, "first parameter")->required();
    master->add_option("--p", p, "second parameter (coprime to n)")->required();
    master->add_option("--x", xs, "monomial for x, e.g. q^1 or -c2*q^3/2")->required();
    master->add_option("--y", ys, "monomial for y")->required();
    master->add_option("--order", order, "truncation order (default 60)");

    auto* replay = app.add_subcommand("replay", "replay the derivation stage by stage");
    replay->add_option("--n", n, "first parameter (odd)")->required();
    replay->add_option("--p", p, "second parameter (coprime to n)")->required();
    replay->add_option("--x", xs, "monomial for x (inside the convergence window)")->required();
    replay->add_option("--y", ys, "monomial for y")->required();
    replay->add_option("--order", order, "truncation order (default 60)");

    auto* selftest = app.add_subcommand("selftest", "run the full release gate");

    auto* cache = app.add_subcommand("cache", "series cache maintenance");
    cache->require_subcommand(1);
    auto* cache_clear = cache->add_subcommand("clear", "delete every cached series");
    cache_clear->add_option("--cache-dir", cache_dir, "series cache directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (verify->parsed()) return cmd_verify(file, order, json_path, jobs, cache_dir, no_cache);
        if (series->parsed()) return cmd_series(expr, order, format);
        if (master->parsed()) return cmd_master(n, p, xs, ys, order);
        if (replay->parsed()) return cmd_replay(n, p, xs, ys, order);
        if (selftest->parsed()) return cmd_selftest();
        if (cache->parsed() && cache_clear->parsed()) return cmd_cache_clear(cache_dir);
    } catch (const ParseError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return kExitUsage;
    } catch (const EngineError& e) {
        std::fprintf(stderr, "engine error [%s]: %s\n", error_kind_name(e.kind()), e.what());
        return kExitEngine;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitEngine;
    }
    return kExitUsage;
}
