#include "gdicke/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace gdicke {

void GridSettings::validate() const {
    if (!(cutoff_factor > 0) || !std::isfinite(cutoff_factor))
        throw DomainError("grid.cutoff_factor must be positive");
    if (points < 17 || points % 2 == 0) throw DomainError("grid.points must be odd and at least 17");
    if (!(stretch > 0) || !std::isfinite(stretch)) throw DomainError("grid.stretch must be positive");
}

GridPtr GridSettings::make(const SystemParams& p) const {
    validate();
    return make_grid(cutoff_factor * p.transition_freq, points, stretch);
}

namespace {

using Member = double SystemParams::*;
struct Field {
    std::string_view name;
    Member member;
};

const std::array<Field, 10>& fields() {
    static const std::array<Field, 10> f{{
        {"n_emitters", &SystemParams::n_emitters},
        {"cloud_width", &SystemParams::cloud_width},
        {"height", &SystemParams::height},
        {"fermi_energy", &SystemParams::fermi_energy},
        {"transition_freq", &SystemParams::transition_freq},
        {"gamma0", &SystemParams::gamma0},
        {"broadening", &SystemParams::broadening},
        {"relax_time", &SystemParams::relax_time},
        {"eps_above", &SystemParams::eps_above},
        {"eps_below", &SystemParams::eps_below},
    }};
    return f;
}

Member member_of(std::string_view name) {
    for (const auto& f : fields())
        if (f.name == name) return f.member;
    throw DomainError("unknown system parameter '" + std::string(name) + "'");
}

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<std::string_view>& param_names() {
    static const std::vector<std::string_view> names = [] {
        std::vector<std::string_view> v;
        for (const auto& f : fields()) v.push_back(f.name);
        return v;
    }();
    return names;
}

bool is_param_name(std::string_view name) {
    const auto& n = param_names();
    return std::find(n.begin(), n.end(), name) != n.end();
}

double get_param(const SystemParams& p, std::string_view name) { return p.*member_of(name); }

void set_param(SystemParams& p, std::string_view name, double value) { p.*member_of(name) = value; }

Config Config::parse(std::istream& in, const std::string& source) {
    Config c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string_view::npos)
            throw DomainError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string_view key = trim(t.substr(0, eq));
        std::string_view value = trim(t.substr(eq + 1));
        // Trailing comments are allowed after whitespace.
        const auto hash = value.find(" #");
        if (hash != std::string_view::npos) value = trim(value.substr(0, hash));
        if (key.empty()) throw DomainError(source + ":" + std::to_string(lineno) + ": empty key");
        c.entries_[std::string(key)] = std::string(value);
    }
    return c;
}

Config Config::parse_text(std::string_view text, const std::string& source) {
    std::istringstream in{std::string(text)};
    return parse(in, source);
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open configuration file '" + path + "'");
    return parse(in, path);
}

void Config::set_assignment(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) throw DomainError("expected key=value, got '" + std::string(assignment) + "'");
    const auto key = trim(assignment.substr(0, eq));
    if (key.empty()) throw DomainError("empty key in '" + std::string(assignment) + "'");
    entries_[std::string(key)] = std::string(trim(assignment.substr(eq + 1)));
}

std::optional<std::string> Config::get_string(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::optional<double> Config::get_double(const std::string& key) const {
    const auto s = get_string(key);
    if (!s) return std::nullopt;
    double v = 0;
    const char* b = s->data();
    const char* e = b + s->size();
    const auto r = std::from_chars(b, e, v);
    if (r.ec != std::errc() || r.ptr != e) throw DomainError("key '" + key + "': '" + *s + "' is not a number");
    return v;
}

std::optional<std::int64_t> Config::get_int(const std::string& key) const {
    const auto s = get_string(key);
    if (!s) return std::nullopt;
    std::int64_t v = 0;
    const char* b = s->data();
    const char* e = b + s->size();
    const auto r = std::from_chars(b, e, v);
    if (r.ec != std::errc() || r.ptr != e) throw DomainError("key '" + key + "': '" + *s + "' is not an integer");
    return v;
}

SystemParams Config::params(SystemParams base) const {
    for (const auto& f : fields())
        if (auto v = get_double(std::string(f.name))) base.*f.member = *v;
    return base;
}

GridSettings Config::grid(GridSettings base) const {
    if (auto v = get_double("grid.cutoff_factor")) base.cutoff_factor = *v;
    if (auto v = get_int("grid.points")) {
        if (*v < 0) throw DomainError("grid.points must be positive");
        base.points = static_cast<std::size_t>(*v);
    }
    if (auto v = get_double("grid.stretch")) base.stretch = *v;
    return base;
}

bool is_known_config_key(std::string_view key) {
    static const std::array<std::string_view, 22> extra{
        "grid.cutoff_factor", "grid.points",     "grid.stretch",      "axis1.param",  "axis1.min",
        "axis1.max",          "axis1.points",    "axis1.scale",       "axis2.param",  "axis2.min",
        "axis2.max",          "axis2.points",    "axis2.scale",       "saddle.normal_search",
        "seed",               "threads",         "cache_dir",         "out",          "oracle.samples",
        "oracle.omega",       "oracle.omega_p",  "boundary.pairs"};
    return is_param_name(key) || std::find(extra.begin(), extra.end(), key) != extra.end();
}

}  // namespace gdicke
