#include "heckmort/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "heckmort/cache.hpp"

namespace heckmort {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

QSeries evaluate_side(const AstPtr& side, const RunConfig& cfg, const SeriesCache& cache) {
    if (!cfg.use_cache) return evaluate(side, cfg.order);
    std::uint64_t key = ast_hash(side);
    if (auto hit = cache.load(key, cfg.order)) return *hit;
    QSeries s = evaluate(side, cfg.order);
    cache.store(key, cfg.order, s);
    return s;
}

bool blank_or_comment(const std::string& line) {
    for (char ch : line) {
        if (ch == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(ch))) return false;
    }
    return true;
}

}  // namespace

void validate(const RunConfig& cfg) {
    if (!(cfg.order > Exponent(0)))
        throw std::invalid_argument("run config: order must be positive");
    if (cfg.jobs < 1) throw std::invalid_argument("run config: jobs must be at least 1");
}

EquationReport verify_equation(const Equation& eq, const RunConfig& cfg) {
    validate(cfg);
    SeriesCache cache(cfg.cache_dir);
    auto t0 = Clock::now();
    QSeries lhs = evaluate_side(eq.lhs, cfg, cache);
    QSeries rhs = evaluate_side(eq.rhs, cfg, cache);
    VerificationReport rep = compare_at(lhs, rhs, cfg.order);
    rep.elapsed_ms = ms_since(t0);
    return {print_equation(eq), rep};
}

std::vector<EquationReport> run_verify_lines(const std::vector<std::string>& lines,
                                             const RunConfig& cfg) {
    validate(cfg);
    std::vector<Equation> equations;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (blank_or_comment(lines[i])) continue;
        try {
            equations.push_back(parse_equation(lines[i]));
        } catch (const ParseError& e) {
            throw ParseError(e.reason(), static_cast<int>(i + 1), e.column(), e.expected());
        }
    }

    std::vector<EquationReport> reports(equations.size());
    std::vector<std::exception_ptr> failures(equations.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= equations.size()) return;
            try {
                reports[i] = verify_equation(equations[i], cfg);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    std::size_t width = std::min(static_cast<std::size_t>(cfg.jobs),
                                 std::max<std::size_t>(equations.size(), 1));
    if (width <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < width; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (auto& f : failures)
        if (f) std::rethrow_exception(f);
    return reports;
}

std::vector<EquationReport> run_verify_text(const std::string& text, const RunConfig& cfg) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return run_verify_lines(lines, cfg);
}

std::vector<EquationReport> run_verify_file(const std::string& path, const RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return run_verify_lines(lines, cfg);
}

bool all_verified(const std::vector<EquationReport>& reports) {
    for (const auto& r : reports)
        if (!r.report.verified()) return false;
    return true;
}

std::string report_to_text(const EquationReport& r) {
    std::ostringstream out;
    switch (r.report.status) {
        case VerifyStatus::Verified:
            out << "ok        " << r.identity << "  [checked to q^" << r.report.checked_to.str()
                << "]";
            break;
        case VerifyStatus::Mismatch: {
            const auto& m = *r.report.first_mismatch;
            out << "MISMATCH  " << r.identity << "  at q^" << m.exp.str() << ": lhs "
                << m.lhs.get_str() << ", rhs " << m.rhs.get_str();
            break;
        }
        case VerifyStatus::Inconclusive:
            out << "UNDECIDED " << r.identity << "  [horizon " << r.report.checked_to.str()
                << " short of the requested order]";
            break;
    }
    return out.str();
}

std::string reports_to_json(const std::vector<EquationReport>& reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) {
        nlohmann::json obj;
        obj["identity"] = r.identity;
        obj["status"] = verify_status_name(r.report.status);
        obj["checked_order"] = {r.report.checked_to.num(), r.report.checked_to.den()};
        if (r.report.first_mismatch) {
            const auto& m = *r.report.first_mismatch;
            obj["first_mismatch"] = {
                {"exponent", {m.exp.num(), m.exp.den()}},
                {"lhs", m.lhs.get_str()},
                {"rhs", m.rhs.get_str()},
            };
        } else {
            obj["first_mismatch"] = nullptr;
        }
        obj["elapsed_ms"] = r.report.elapsed_ms;
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

}  // namespace heckmort
