#include "gdicke/cache.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "gdicke/format.hpp"

namespace gdicke {

namespace {
constexpr int payload_version = 1;
}

std::string stats_key(const SystemParams& p, const FrequencyGrid& grid, const DisorderOptions& opt) {
    std::ostringstream k;
    auto put = [&](const char* name, double v) { k << name << '=' << format_double(v) << ';'; };
    k << "gdicke-stats;library=" << GDICKE_VERSION << ";payload=" << payload_version << ';';
    put("cloud_width", p.cloud_width);
    put("height", p.height);
    put("fermi_energy", p.fermi_energy);
    put("transition_freq", p.transition_freq);
    put("gamma0", p.gamma0);
    put("relax_time", p.relax_time);
    put("eps_above", p.eps_above);
    put("eps_below", p.eps_below);
    put("grid.cutoff", grid.cutoff());
    put("grid.points", static_cast<double>(grid.size()));
    put("grid.stretch", grid.stretch());
    put("em.rel_tol", opt.em.rel_tol);
    put("em.abs_tol", opt.em.abs_tol);
    put("em.sp_splits", opt.em.sp_splits);
    put("em.decay_floor", opt.em.decay_floor);
    put("em.max_intervals", static_cast<double>(opt.em.max_intervals));
    put("outer_rel_tol", opt.outer_rel_tol);
    put("inner_rel_tol", opt.inner_rel_tol);
    return k.str();
}

std::string key_hash(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = hex[h & 0xf];
        h >>= 4;
    }
    return out;
}

std::string stats_to_json(const CouplingStats& s, const std::string& key) {
    using nlohmann::json;
    auto split = [](const std::vector<cplx>& v, json& re, json& im) {
        re = json::array();
        im = json::array();
        for (const auto& c : v) {
            re.push_back(c.real());
            im.push_back(c.imag());
        }
    };
    json j;
    j["format"] = "gdicke-coupling-stats";
    j["version"] = payload_version;
    j["key"] = key;
    j["grid"] = {{"cutoff", s.grid->cutoff()}, {"points", s.grid->size()}, {"stretch", s.grid->stretch()}};
    split(s.h1.values, j["h1_re"], j["h1_im"]);
    split(s.h2.values, j["h2_re"], j["h2_im"]);
    j["abs2"] = s.abs2;
    split(s.square, j["square_re"], j["square_im"]);
    return j.dump();
}

CouplingStats stats_from_json(const std::string& text, const std::string& expected_key) {
    using nlohmann::json;
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != "gdicke-coupling-stats") throw std::runtime_error("not a stats payload");
    if (j.at("version").get<int>() != payload_version) throw std::runtime_error("payload version mismatch");
    if (j.at("key").get<std::string>() != expected_key) throw std::runtime_error("stored key differs");
    const auto& g = j.at("grid");
    GridPtr grid = make_grid(g.at("cutoff").get<double>(), g.at("points").get<std::size_t>(),
                             g.at("stretch").get<double>());
    const std::size_t n = grid->size();
    auto join = [n](const json& re, const json& im) {
        const auto r = re.get<std::vector<double>>();
        const auto i = im.get<std::vector<double>>();
        if (r.size() != n || i.size() != n) throw std::runtime_error("array length mismatch");
        std::vector<cplx> v(n);
        for (std::size_t k = 0; k < n; ++k) v[k] = cplx(r[k], i[k]);
        return v;
    };
    CouplingStats s;
    s.grid = grid;
    s.h1 = ComplexSpectrum(grid, join(j.at("h1_re"), j.at("h1_im")));
    s.h2 = ComplexSpectrum(grid, join(j.at("h2_re"), j.at("h2_im")));
    s.abs2 = j.at("abs2").get<std::vector<double>>();
    if (s.abs2.size() != n) throw std::runtime_error("array length mismatch");
    s.square = join(j.at("square_re"), j.at("square_im"));
    return s;
}

StatsCache::StatsCache(std::optional<std::filesystem::path> dir) : dir_(std::move(dir)) {
    if (dir_) std::filesystem::create_directories(*dir_);
}

std::uint64_t StatsCache::hits() const {
    std::lock_guard lk(mu_);
    return hits_;
}
std::uint64_t StatsCache::misses() const {
    std::lock_guard lk(mu_);
    return misses_;
}
std::uint64_t StatsCache::disk_hits() const {
    std::lock_guard lk(mu_);
    return disk_hits_;
}

CouplingStats StatsCache::load_or_compute(const std::string& key, const SystemParams& p, GridPtr grid,
                                          const DisorderOptions& opt) {
    std::filesystem::path file;
    if (dir_) {
        file = *dir_ / ("stats-" + key_hash(key) + ".json");
        std::ifstream in(file, std::ios::binary);
        if (in) {
            std::ostringstream buf;
            buf << in.rdbuf();
            try {
                CouplingStats s = stats_from_json(buf.str(), key);
                if (*s.grid == *grid) {
                    s.grid = grid;
                    s.h1.grid = grid;
                    s.h2.grid = grid;
                    std::lock_guard lk(mu_);
                    ++hits_;
                    ++disk_hits_;
                    return s;
                }
                std::cerr << "warning: cache entry " << file << " has a different grid; recomputing\n";
            } catch (const std::exception& e) {
                std::cerr << "warning: cache entry " << file << " is unusable (" << e.what() << "); recomputing\n";
            }
        }
    }
    CouplingStats s = compute_stats(p, grid, opt);
    {
        std::lock_guard lk(mu_);
        ++misses_;
    }
    if (dir_) {
        std::lock_guard lk(writer_);
        const auto tmp = file.string() + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw std::runtime_error("cannot write cache file " + tmp);
            out << stats_to_json(s, key);
            if (!out) throw std::runtime_error("failed writing cache file " + tmp);
        }
        std::filesystem::rename(tmp, file);
    }
    return s;
}

CouplingStats StatsCache::get_or_compute(const SystemParams& p, GridPtr grid, const DisorderOptions& opt) {
    p.validate();
    const std::string key = stats_key(p, *grid, opt);
    std::promise<CouplingStats> promise;
    std::shared_future<CouplingStats> fut;
    bool owner = false;
    {
        std::lock_guard lk(mu_);
        auto it = memo_.find(key);
        if (it != memo_.end()) {
            fut = it->second;
            ++hits_;
        } else {
            fut = promise.get_future().share();
            memo_.emplace(key, fut);
            owner = true;
        }
    }
    if (owner) {
        try {
            promise.set_value(load_or_compute(key, p, grid, opt));
        } catch (...) {
            promise.set_exception(std::current_exception());
            std::lock_guard lk(mu_);
            memo_.erase(key);
        }
    }
    CouplingStats s = fut.get();
    s.grid = grid;
    s.h1.grid = grid;
    s.h2.grid = grid;
    return s;
}

CouplingStats cache_get_or_compute(const SystemParams& p, GridPtr grid, StatsCache& cache,
                                   const DisorderOptions& opt) {
    return cache.get_or_compute(p, std::move(grid), opt);
}

}  // namespace gdicke
