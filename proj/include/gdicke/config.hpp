#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gdicke/model.hpp"

namespace gdicke {

// Frequency grid as a function of the system: cutoff = cutoff_factor * omega_z.
struct GridSettings {
    double cutoff_factor = 10;
    std::size_t points = 2049;
    double stretch = FrequencyGrid::default_stretch;

    void validate() const;
    GridPtr make(const SystemParams& p) const;
};

// Names of the SystemParams fields, in declaration order.
const std::vector<std::string_view>& param_names();
bool is_param_name(std::string_view name);
double get_param(const SystemParams& p, std::string_view name);
void set_param(SystemParams& p, std::string_view name, double value);

// Flat `key = value` text. Blank lines and lines starting with '#' are
// ignored; later assignments of the same key win.
class Config {
public:
    static Config parse(std::istream& in, const std::string& source = "<input>");
    static Config parse_text(std::string_view text, const std::string& source = "<input>");
    static Config load(const std::string& path);

    void set(const std::string& key, const std::string& value) { entries_[key] = value; }
    // Applies a `key=value` override as given on the command line.
    void set_assignment(std::string_view assignment);
    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    const std::map<std::string, std::string>& entries() const { return entries_; }

    std::optional<std::string> get_string(const std::string& key) const;
    std::optional<double> get_double(const std::string& key) const;
    std::optional<std::int64_t> get_int(const std::string& key) const;

    // Throws DomainError naming the first key not accepted by `known`.
    template <class Pred>
    void require_known(Pred known) const {
        for (const auto& [k, v] : entries_)
            if (!known(k)) throw DomainError("unknown configuration key '" + k + "'");
    }

    SystemParams params(SystemParams base = {}) const;
    GridSettings grid(GridSettings base = {}) const;

private:
    std::map<std::string, std::string> entries_;
};

// Keys understood by the command-line tool besides the SystemParams names.
bool is_known_config_key(std::string_view key);

}  // namespace gdicke
