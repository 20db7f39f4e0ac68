// Command-line front end: spectra, point, diagram, boundary and oracle runs.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "gdicke/format.hpp"
#include "gdicke/io.hpp"

namespace {

using namespace gdicke;

constexpr int exit_usage = 1;
constexpr int exit_sweep_failed = 2;
constexpr int exit_runtime = 3;

struct Globals {
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> cache_dir;
    std::optional<unsigned> threads;
    std::optional<std::string> out;
    std::string format;  // csv, json, or empty to infer from --out
};

struct Run {
    Config config;
    RunInfo info;
    std::optional<std::string> out;
    std::string format;
    unsigned threads = 1;
    std::unique_ptr<StatsCache> cache;
};

Run prepare(const Globals& g, const std::string& command) {
    Run r;
    if (!g.config_path.empty()) r.config = Config::load(g.config_path);
    for (const auto& o : g.overrides) r.config.set_assignment(o);
    r.config.require_known([](const std::string& k) { return is_known_config_key(k); });

    if (g.seed)
        r.info.seed = g.seed;
    else if (auto s = r.config.get_int("seed"))
        r.info.seed = static_cast<std::uint64_t>(*s);
    r.info.command = command;

    std::optional<std::string> dir = g.cache_dir;
    if (!dir) dir = r.config.get_string("cache_dir");
    if (!dir)
        if (const char* env = std::getenv("GDICKE_CACHE_DIR"); env && *env) dir = env;
    r.cache = std::make_unique<StatsCache>(dir && !dir->empty() ? std::optional<std::filesystem::path>(*dir)
                                                                 : std::nullopt);

    if (g.threads) {
        r.threads = *g.threads;
    } else if (auto t = r.config.get_int("threads")) {
        if (*t < 0) throw DomainError("threads must be nonnegative");
        r.threads = static_cast<unsigned>(*t);
    }
    if (r.threads == 0) r.threads = std::max(1u, std::thread::hardware_concurrency());

    r.out = g.out ? g.out : r.config.get_string("out");
    r.format = g.format;
    if (r.format.empty()) r.format = r.out && r.out->ends_with(".json") ? "json" : "csv";
    return r;
}

void emit(const Run& r, const std::string& text) {
    if (r.out && *r.out != "-")
        write_file(*r.out, text);
    else
        std::cout << text << std::flush;
}

void point_settings(const Config& c, GridSettings& grid, SaddleOptions& saddle) {
    grid = c.grid();
    grid.validate();
    if (auto ns = c.get_string("saddle.normal_search")) {
        if (*ns == "above_band")
            saddle.normal_search = NormalSearch::above_band;
        else if (*ns != "below_edge")
            throw DomainError("saddle.normal_search must be 'below_edge' or 'above_band'");
    }
}

int cmd_point(Run& r, bool spectra) {
    const SystemParams p = r.config.params();
    p.validate();
    GridSettings grid;
    SaddleOptions saddle;
    point_settings(r.config, grid, saddle);
    const CouplingStats stats = r.cache->get_or_compute(p, grid.make(p));
    const PhasePoint pt = classify_phase(stats, p, saddle);
    std::ostringstream os;
    if (spectra) {
        const SpectraTable t = make_spectra(stats, pt, grid);
        if (r.format == "json")
            write_spectra_json(os, t, r.info);
        else
            write_spectra_csv(os, t);
    } else if (r.format == "json") {
        write_point_json(os, pt, grid, r.info);
    } else {
        const auto& s = pt.solution;
        write_csv_row(os, {"field", "value"});
        write_csv_row(os, {"phase", std::string(phase_name(s.phase))});
        write_csv_row(os, {"lambda_c", format_double(s.lambda_c)});
        write_csv_row(os, {"q_ea", format_double(s.q_ea)});
        write_csv_row(os, {"psi_c", format_double(s.psi_c)});
        write_csv_row(os, {"lambda_sg", format_double(pt.candidates.lambda_sg)});
        write_csv_row(os, {"lambda_sr", pt.candidates.lambda_sr ? format_double(*pt.candidates.lambda_sr) : ""});
        write_csv_row(os, {"sr_criterion", pt.sr_criterion ? "1" : "0"});
        write_csv_row(os, {"s_value", format_double(s.residuals.s_value)});
        write_csv_row(os, {"qcq_backsub", format_double(s.residuals.qcq_backsub)});
        write_csv_row(os, {"constraint_full", format_double(s.residuals.constraint_full)});
    }
    emit(r, os.str());
    return 0;
}

std::vector<std::pair<Phase, Phase>> boundary_pairs(const Config& c) {
    const std::string text = c.get_string("boundary.pairs").value_or("normal:spin_glass,spin_glass:superradiant");
    std::vector<std::pair<Phase, Phase>> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw DomainError("boundary.pairs entries look like 'normal:spin_glass'");
        out.emplace_back(phase_from_name(item.substr(0, colon)), phase_from_name(item.substr(colon + 1)));
    }
    return out;
}

int cmd_diagram(Run& r, bool boundaries) {
    const SweepSpec spec = sweep_from_config(r.config);
    const SweepRuntime rt{r.threads, r.cache.get()};
    PhaseDiagram d = run_sweep(spec, rt);
    if (d.failed_cells() > 0)
        std::cerr << "warning: " << d.failed_cells() << " of " << d.cells.size() << " cells failed\n";
    if (d.failed()) {
        std::ostringstream os;
        write_diagram_csv(os, d);
        emit(r, os.str());
        std::cerr << "error: more than 20% of the cells failed\n";
        return exit_sweep_failed;
    }
    std::ostringstream os;
    if (boundaries) {
        std::vector<Boundary> bs;
        for (const auto& [a, b] : boundary_pairs(r.config)) {
            bs.push_back(refine_boundary(d, a, b, rt));
            if (a != Phase::normal && b != Phase::normal) {
                Boundary an = analytic_sg_sr_boundary(d, rt);
                an.notice = an.notice.empty() ? "analytic" : "analytic: " + an.notice;
                bs.push_back(std::move(an));
            }
        }
        if (r.format == "json")
            write_boundaries_json(os, spec, bs, r.info);
        else
            write_boundaries_csv(os, spec, bs);
    } else if (r.format == "json") {
        write_diagram_json(os, d, r.info);
    } else {
        write_diagram_csv(os, d);
    }
    emit(r, os.str());
    return 0;
}

std::vector<double> number_list(const std::string& text, const std::string& key) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(parse_double(item));
    if (v.empty()) throw DomainError(key + " is empty");
    return v;
}

int cmd_oracle(Run& r) {
    const SystemParams p = r.config.params();
    p.validate();
    const auto samples = r.config.get_int("oracle.samples").value_or(100000);
    if (samples < 2) throw DomainError("oracle.samples must be at least 2");
    const auto omegas = number_list(r.config.get_string("oracle.omega").value_or("0,0.1,0.3"), "oracle.omega");
    std::vector<double> omega_p;
    if (auto s = r.config.get_string("oracle.omega_p")) {
        omega_p = number_list(*s, "oracle.omega_p");
        if (omega_p.size() != omegas.size()) throw DomainError("oracle.omega_p must match oracle.omega in length");
    } else {
        for (double w : omegas) omega_p.push_back(-w);
    }
    const std::uint64_t seed = r.info.seed.value_or(1);
    r.info.seed = seed;
    std::vector<OracleResult> res;
    for (std::size_t i = 0; i < omegas.size(); ++i)
        res.push_back(monte_carlo_oracle(omegas[i], omega_p[i], p, static_cast<std::size_t>(samples), seed));
    std::ostringstream os;
    if (r.format == "json") {
        write_oracle_json(os, res, p, r.info);
    } else {
        write_csv_row(os, {"omega", "omega_p", "samples", "mean_re", "mean_im", "mean_re_stderr", "mean_im_stderr",
                           "cov_11", "cov_12", "cov_21", "cov_22"});
        for (const auto& o : res)
            write_csv_row(os, {format_double(o.omega), format_double(o.omega_p), std::to_string(o.samples),
                               format_double(o.mean.real()), format_double(o.mean.imag()),
                               format_double(o.mean_stderr.real()), format_double(o.mean_stderr.imag()),
                               format_double(o.cov[0][0]), format_double(o.cov[0][1]), format_double(o.cov[1][0]),
                               format_double(o.cov[1][1])});
    }
    emit(r, os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase diagrams of emitters coupled through graphene plasmons"};
    app.set_version_flag("--version", GDICKE_VERSION);
    app.require_subcommand(1);
    Globals g;
    app.add_option("-c,--config", g.config_path, "key = value configuration file")->check(CLI::ExistingFile);
    app.add_option("-s,--set", g.overrides, "override a configuration key, as key=value (repeatable)");
    app.add_option("--seed", g.seed, "random seed (oracle sampling; recorded in manifests)");
    app.add_option("--cache-dir", g.cache_dir, "directory for persisted coupling tables");
    app.add_option("--threads", g.threads, "worker threads, 0 for all cores");
    app.add_option("-o,--out", g.out, "output file, '-' for stdout");
    app.add_option("--format", g.format, "csv or json (default: from --out extension, else csv)")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* spectra = app.add_subcommand("spectra", "h1, h2, covariance diagonal and A_SR versus frequency at one point");
    auto* point = app.add_subcommand("point", "classify a single parameter point");
    auto* diagram = app.add_subcommand("diagram", "two-dimensional phase sweep");
    auto* boundary = app.add_subcommand("boundary", "sweep, then refine phase boundaries by bisection");
    auto* oracle = app.add_subcommand("oracle", "Monte-Carlo check of the disorder averages");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : exit_usage;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        Run r = prepare(g, command);
        if (*spectra) return cmd_point(r, true);
        if (*point) return cmd_point(r, false);
        if (*diagram) return cmd_diagram(r, false);
        if (*boundary) return cmd_diagram(r, true);
        if (*oracle) return cmd_oracle(r);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
    return exit_usage;
}
