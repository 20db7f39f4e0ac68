#pragma once

#include <cstdint>
#include <filesystem>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "gdicke/disorder.hpp"

namespace gdicke {

// Canonical text of everything the coupling tables depend on: the
// electromagnetic and cloud parameters, the grid and the quadrature
// tolerances. n_emitters and broadening are left out on purpose because the
// tables do not depend on them; they enter only when the saddle-point
// equations are assembled.
std::string stats_key(const SystemParams& p, const FrequencyGrid& grid, const DisorderOptions& opt);

// 64-bit FNV-1a of `text` as 16 lowercase hex digits.
std::string key_hash(const std::string& text);

// Content-addressed store of CouplingStats. Within one process every key is
// computed at most once; with a directory the tables also persist as JSON
// files named by the key hash, each carrying its full key for verification.
class StatsCache {
public:
    explicit StatsCache(std::optional<std::filesystem::path> dir = std::nullopt);

    CouplingStats get_or_compute(const SystemParams& p, GridPtr grid, const DisorderOptions& opt = {});

    std::uint64_t hits() const;      // served from memory or disk
    std::uint64_t misses() const;    // computed
    std::uint64_t disk_hits() const;
    const std::optional<std::filesystem::path>& directory() const { return dir_; }

private:
    CouplingStats load_or_compute(const std::string& key, const SystemParams& p, GridPtr grid,
                                  const DisorderOptions& opt);

    std::optional<std::filesystem::path> dir_;
    mutable std::mutex mu_;
    std::mutex writer_;
    std::map<std::string, std::shared_future<CouplingStats>> memo_;
    std::uint64_t hits_ = 0, misses_ = 0, disk_hits_ = 0;
};

CouplingStats cache_get_or_compute(const SystemParams& p, GridPtr grid, StatsCache& cache,
                                   const DisorderOptions& opt = {});

// Serialised form used by the cache; exposed for tests.
std::string stats_to_json(const CouplingStats& s, const std::string& key);
// Throws std::runtime_error on malformed input or when the stored key differs.
CouplingStats stats_from_json(const std::string& text, const std::string& expected_key);

}  // namespace gdicke
