#include "gdicke/io.hpp"

#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "gdicke/format.hpp"

namespace gdicke {

using ojson = nlohmann::ordered_json;

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    q += '"';
    return q;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << csv_field(fields[i]);
    }
    out << '\n';
}

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    char c;
    while (in.get(c)) {
        any = true;
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get();
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            row.push_back(std::move(field));
            field.clear();
            rows.push_back(std::move(row));
            row.clear();
            any = false;
        } else if (c == '\r' && in.peek() == '\n') {
            continue;
        } else {
            field += c;
        }
    }
    if (quoted) throw DomainError("CSV input ends inside a quoted field");
    if (any) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

const std::vector<std::string> residual_columns{
    "s_value",   "normalization", "normalization_imag", "qcq_backsub",     "constraint_full",
    "det_l0_re", "det_l0_im",     "root_iterations",    "monotone"};

std::string fmt(double v) { return format_double(v); }

std::string opt_fmt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::optional<double> opt_parse(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return parse_double(s);
}

int parse_int(const std::string& s) {
    const double v = parse_double(s);
    if (v != static_cast<int>(v)) throw DomainError("expected an integer, got '" + s + "'");
    return static_cast<int>(v);
}

bool parse_bool(const std::string& s) {
    if (s == "1") return true;
    if (s == "0") return false;
    throw DomainError("expected 0 or 1, got '" + s + "'");
}

ojson params_json(const SystemParams& p) {
    ojson j = ojson::object();
    for (auto name : param_names()) j[std::string(name)] = get_param(p, name);
    return j;
}

ojson grid_json(const GridSettings& g, const SystemParams& p) {
    return ojson{{"cutoff_factor", g.cutoff_factor},
                 {"cutoff", g.cutoff_factor * p.transition_freq},
                 {"points", g.points},
                 {"stretch", g.stretch}};
}

ojson axis_json(const Axis& a) {
    return ojson{{"param", a.param},
                 {"min", a.min},
                 {"max", a.max},
                 {"points", a.points},
                 {"scale", std::string(scale_name(a.scale))}};
}

ojson header_json(const std::string& kind, const RunInfo& info) {
    ojson j;
    j["format"] = "gdicke-" + kind;
    j["version"] = GDICKE_VERSION;
    if (info.seed)
        j["seed"] = *info.seed;
    else
        j["seed"] = nullptr;
    if (!info.command.empty()) j["command"] = info.command;
    return j;
}

ojson residuals_json(const SaddleResiduals& r) {
    return ojson{{"s_value", r.s_value},
                 {"normalization", r.normalization},
                 {"normalization_imag", r.normalization_imag},
                 {"qcq_backsub", r.qcq_backsub},
                 {"constraint_full", r.constraint_full},
                 {"det_l0_re", r.det_l0_re},
                 {"det_l0_im", r.det_l0_im},
                 {"root_iterations", r.root_iterations},
                 {"monotone", r.monotone}};
}

std::string pair_label(const Boundary& b) {
    return std::string(phase_name(b.a)) + "/" + std::string(phase_name(b.b));
}

}  // namespace

std::vector<std::string> diagram_csv_header(const SweepSpec& spec) {
    std::vector<std::string> h{spec.axis1.param, spec.axis2.param, "phase",     "lambda_c",
                               "q_ea",           "psi_c",          "lambda_sg", "lambda_sr",
                               "sr_criterion"};
    h.insert(h.end(), residual_columns.begin(), residual_columns.end());
    h.push_back("status");
    h.push_back("error");
    return h;
}

void write_diagram_csv(std::ostream& out, const PhaseDiagram& d) {
    write_csv_row(out, diagram_csv_header(d.spec));
    for (const auto& c : d.cells) {
        std::vector<std::string> row{fmt(c.x1), fmt(c.x2)};
        if (c.ok) {
            const auto& r = c.residuals;
            for (auto s : {std::string(phase_name(c.phase)), fmt(c.lambda_c), fmt(c.q_ea), fmt(c.psi_c),
                           fmt(c.lambda_sg), opt_fmt(c.lambda_sr), std::string(c.sr_criterion ? "1" : "0"),
                           fmt(r.s_value), fmt(r.normalization), fmt(r.normalization_imag), fmt(r.qcq_backsub),
                           fmt(r.constraint_full), fmt(r.det_l0_re), fmt(r.det_l0_im),
                           std::to_string(r.root_iterations), std::string(r.monotone ? "1" : "0"),
                           std::string("ok"), std::string()})
                row.push_back(std::move(s));
        } else {
            row.resize(row.size() + 7 + residual_columns.size());
            row.push_back("failed");
            row.push_back(c.error);
        }
        write_csv_row(out, row);
    }
}

std::vector<CellResult> read_diagram_csv(std::istream& in, const SweepSpec& spec) {
    const auto rows = read_csv(in);
    const auto header = diagram_csv_header(spec);
    if (rows.empty() || rows.front() != header) throw DomainError("diagram CSV header does not match the sweep");
    std::vector<CellResult> cells;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const auto& f = rows[k];
        if (f.size() != header.size())
            throw DomainError("diagram CSV row " + std::to_string(k + 1) + " has " + std::to_string(f.size()) +
                              " fields, expected " + std::to_string(header.size()));
        CellResult c;
        c.x1 = parse_double(f[0]);
        c.x2 = parse_double(f[1]);
        const std::string& status = f[f.size() - 2];
        c.error = f.back();
        if (status == "failed") {
            c.ok = false;
        } else if (status == "ok") {
            c.ok = true;
            c.phase = phase_from_name(f[2]);
            c.lambda_c = parse_double(f[3]);
            c.q_ea = parse_double(f[4]);
            c.psi_c = parse_double(f[5]);
            c.lambda_sg = parse_double(f[6]);
            c.lambda_sr = opt_parse(f[7]);
            c.sr_criterion = parse_bool(f[8]);
            auto& r = c.residuals;
            r.s_value = parse_double(f[9]);
            r.normalization = parse_double(f[10]);
            r.normalization_imag = parse_double(f[11]);
            r.qcq_backsub = parse_double(f[12]);
            r.constraint_full = parse_double(f[13]);
            r.det_l0_re = parse_double(f[14]);
            r.det_l0_im = parse_double(f[15]);
            r.root_iterations = parse_int(f[16]);
            r.monotone = parse_bool(f[17]);
        } else {
            throw DomainError("diagram CSV row " + std::to_string(k + 1) + " has unknown status '" + status + "'");
        }
        cells.push_back(std::move(c));
    }
    return cells;
}

void write_diagram_json(std::ostream& out, const PhaseDiagram& d, const RunInfo& info) {
    const auto& s = d.spec;
    ojson j = header_json("phase-diagram", info);
    j["params"] = params_json(s.fixed);
    j["grid"] = grid_json(s.grid, s.fixed);
    j["axes"] = ojson::array({axis_json(s.axis1), axis_json(s.axis2)});
    j["normal_search"] = s.saddle.normal_search == NormalSearch::below_edge ? "below_edge" : "above_band";
    j["failed_cells"] = d.failed_cells();
    ojson cells = ojson::array();
    for (const auto& c : d.cells) {
        ojson e{{"x1", c.x1}, {"x2", c.x2}, {"ok", c.ok}};
        if (c.ok) {
            e["phase"] = std::string(phase_name(c.phase));
            e["lambda_c"] = c.lambda_c;
            e["q_ea"] = c.q_ea;
            e["psi_c"] = c.psi_c;
            e["lambda_sg"] = c.lambda_sg;
            if (c.lambda_sr)
                e["lambda_sr"] = *c.lambda_sr;
            else
                e["lambda_sr"] = nullptr;
            e["sr_criterion"] = c.sr_criterion;
            e["residuals"] = residuals_json(c.residuals);
        } else {
            e["error"] = c.error;
        }
        cells.push_back(std::move(e));
    }
    j["cells"] = std::move(cells);
    ojson bounds = ojson::array();
    for (const auto& b : d.boundaries) {
        ojson e{{"pair", pair_label(b)}, {"points", b.points}};
        if (!b.notice.empty()) e["notice"] = b.notice;
        bounds.push_back(std::move(e));
    }
    j["boundaries"] = std::move(bounds);
    out << j.dump(1) << '\n';
}

void write_boundaries_csv(std::ostream& out, const SweepSpec& spec, const std::vector<Boundary>& bs) {
    write_csv_row(out, {"pair", spec.axis1.param, spec.axis2.param, "notice"});
    for (const auto& b : bs) {
        if (b.points.empty()) write_csv_row(out, {pair_label(b), "", "", b.notice});
        for (const auto& p : b.points) write_csv_row(out, {pair_label(b), fmt(p[0]), fmt(p[1]), b.notice});
    }
}

void write_boundaries_json(std::ostream& out, const SweepSpec& spec, const std::vector<Boundary>& bs,
                           const RunInfo& info) {
    ojson j = header_json("phase-boundaries", info);
    j["params"] = params_json(spec.fixed);
    j["grid"] = grid_json(spec.grid, spec.fixed);
    j["axes"] = ojson::array({axis_json(spec.axis1), axis_json(spec.axis2)});
    ojson arr = ojson::array();
    for (const auto& b : bs) {
        ojson e{{"pair", pair_label(b)}, {"points", b.points}};
        e["notice"] = b.notice;
        arr.push_back(std::move(e));
    }
    j["boundaries"] = std::move(arr);
    out << j.dump(1) << '\n';
}

SpectraTable make_spectra(const CouplingStats& stats, const PhasePoint& pt, const GridSettings& grid) {
    SpectraTable t;
    t.params = pt.params;
    t.grid = grid;
    t.phase = pt.solution.phase;
    t.lambda_c = pt.solution.lambda_c;
    const ComplexSpectrum a = spectral_response(pt.solution);
    const auto w = stats.grid->points();
    for (std::size_t i = stats.grid->zero_index(); i < w.size(); ++i) {
        t.omega.push_back(w[i]);
        t.a_sr.push_back(a[i].real());
        t.re_h1.push_back(stats.h1[i].real());
        t.im_h1.push_back(stats.h1[i].imag());
        t.re_h2.push_back(stats.h2[i].real());
        t.im_h2.push_back(stats.h2[i].imag());
        const Matrix2 m = stats.cov(i);
        t.m11.push_back(m[0][0]);
        t.m22.push_back(m[1][1]);
    }
    return t;
}

void write_spectra_csv(std::ostream& out, const SpectraTable& t) {
    write_csv_row(out, {"omega", "A_SR", "Im_h1", "Im_h2", "Re_h1", "Re_h2", "M11", "M22"});
    for (std::size_t i = 0; i < t.omega.size(); ++i)
        write_csv_row(out, {fmt(t.omega[i]), fmt(t.a_sr[i]), fmt(t.im_h1[i]), fmt(t.im_h2[i]), fmt(t.re_h1[i]),
                            fmt(t.re_h2[i]), fmt(t.m11[i]), fmt(t.m22[i])});
}

void write_spectra_json(std::ostream& out, const SpectraTable& t, const RunInfo& info) {
    ojson j = header_json("spectra", info);
    j["params"] = params_json(t.params);
    j["grid"] = grid_json(t.grid, t.params);
    j["phase"] = std::string(phase_name(t.phase));
    j["lambda_c"] = t.lambda_c;
    j["omega"] = t.omega;
    j["A_SR"] = t.a_sr;
    j["Im_h1"] = t.im_h1;
    j["Im_h2"] = t.im_h2;
    j["Re_h1"] = t.re_h1;
    j["Re_h2"] = t.re_h2;
    j["M11"] = t.m11;
    j["M22"] = t.m22;
    out << j.dump(1) << '\n';
}

void write_point_json(std::ostream& out, const PhasePoint& pt, const GridSettings& grid, const RunInfo& info) {
    ojson j = header_json("phase-point", info);
    j["params"] = params_json(pt.params);
    j["grid"] = grid_json(grid, pt.params);
    const auto& s = pt.solution;
    j["phase"] = std::string(phase_name(s.phase));
    j["lambda_c"] = s.lambda_c;
    j["q_ea"] = s.q_ea;
    j["psi_c"] = s.psi_c;
    ojson cand;
    cand["lambda_sg"] = pt.candidates.lambda_sg;
    if (pt.candidates.lambda_sr)
        cand["lambda_sr"] = *pt.candidates.lambda_sr;
    else
        cand["lambda_sr"] = nullptr;
    if (pt.candidates.lambda_normal)
        cand["lambda_normal"] = *pt.candidates.lambda_normal;
    else
        cand["lambda_normal"] = nullptr;
    j["candidates"] = std::move(cand);
    j["sr_criterion"] = pt.sr_criterion;
    j["residuals"] = residuals_json(s.residuals);
    out << j.dump(1) << '\n';
}

void write_oracle_json(std::ostream& out, const std::vector<OracleResult>& results, const SystemParams& p,
                       const RunInfo& info) {
    ojson j = header_json("oracle", info);
    j["params"] = params_json(p);
    ojson arr = ojson::array();
    for (const auto& r : results) {
        arr.push_back(ojson{{"omega", r.omega},
                            {"omega_p", r.omega_p},
                            {"samples", r.samples},
                            {"mean_re", r.mean.real()},
                            {"mean_im", r.mean.imag()},
                            {"mean_re_stderr", r.mean_stderr.real()},
                            {"mean_im_stderr", r.mean_stderr.imag()},
                            {"cov", r.cov},
                            {"cov_stderr", r.cov_stderr}});
    }
    j["records"] = std::move(arr);
    out << j.dump(1) << '\n';
}

void write_file(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp + "': " + std::strerror(errno));
        out << text;
        out.flush();
        if (!out) throw std::runtime_error("write to '" + tmp + "' failed: " + std::strerror(errno));
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw std::runtime_error("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

}  // namespace gdicke
