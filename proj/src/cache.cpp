#include "heckmort/cache.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "heckmort/serialize.hpp"

namespace heckmort {

namespace fs = std::filesystem;

fs::path SeriesCache::default_directory() {
    if (const char* dir = std::getenv("HECKMORT_CACHE_DIR"); dir && *dir) return fs::path(dir);
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg)
        return fs::path(xdg) / "heckmort";
    if (const char* home = std::getenv("HOME"); home && *home)
        return fs::path(home) / ".cache" / "heckmort";
    return fs::path(".heckmort-cache");
}

SeriesCache::SeriesCache(fs::path dir) : dir_(dir.empty() ? default_directory() : std::move(dir)) {}

fs::path SeriesCache::entry_path(std::uint64_t key, const Exponent& order) const {
    char name[64];
    std::snprintf(name, sizeof(name), "%016llx_%lld_%lld.json",
                  static_cast<unsigned long long>(key),
                  static_cast<long long>(order.num()), static_cast<long long>(order.den()));
    return dir_ / name;
}

std::optional<QSeries> SeriesCache::load(std::uint64_t key, const Exponent& order) const {
    std::ifstream in(entry_path(key, order));
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof()) return std::nullopt;
    try {
        return series_from_json(buf.str());
    } catch (const std::exception&) {
        return std::nullopt;  // a corrupt entry is a miss, not a failure
    }
}

void SeriesCache::store(std::uint64_t key, const Exponent& order, const QSeries& series) const {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    fs::path target = entry_path(key, order);
    std::ostringstream suffix;
    suffix << ".tmp." << std::this_thread::get_id();
    fs::path tmp = target;
    tmp += suffix.str();
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) return;  // an unwritable cache degrades to a no-op
        out << series_to_json(series);
        if (!out.good()) {
            out.close();
            fs::remove(tmp, ec);
            return;
        }
    }
    fs::rename(tmp, target, ec);
    if (ec) fs::remove(tmp, ec);
}

std::size_t SeriesCache::clear() const {
    std::error_code ec;
    std::size_t removed = 0;
    if (!fs::is_directory(dir_, ec)) return 0;
    for (const auto& entry : fs::directory_iterator(dir_, ec)) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().extension() != ".json") continue;
        std::error_code rec;
        if (fs::remove(entry.path(), rec)) ++removed;
    }
    return removed;
}

}  // namespace heckmort
