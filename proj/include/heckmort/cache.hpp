#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "heckmort/qseries.hpp"

namespace heckmort {

/// On-disk store of evaluated series, one file per (expression hash, order).
/// Files hold the canonical JSON form, are written atomically (temp file plus
/// rename), and are only ever removed by clear(). Concurrent readers are safe;
/// concurrent writers of the same key race benignly because both write the
/// same bytes.
class SeriesCache {
public:
    /// Resolution order: HECKMORT_CACHE_DIR, then XDG_CACHE_HOME/heckmort,
    /// then ~/.cache/heckmort, falling back to ./.heckmort-cache.
    static std::filesystem::path default_directory();

    /// An empty path selects default_directory(). The directory is created
    /// lazily on the first store.
    explicit SeriesCache(std::filesystem::path dir = {});

    const std::filesystem::path& directory() const { return dir_; }

    std::optional<QSeries> load(std::uint64_t key, const Exponent& order) const;
    void store(std::uint64_t key, const Exponent& order, const QSeries& series) const;

    /// Removes every cache entry; returns how many files were deleted.
    std::size_t clear() const;

private:
    std::filesystem::path dir_;

    std::filesystem::path entry_path(std::uint64_t key, const Exponent& order) const;
};

}  // namespace heckmort
