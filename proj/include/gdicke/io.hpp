#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gdicke/sweep.hpp"

namespace gdicke {

// RFC 4180 text with LF record separators. Fields containing a comma, a
// quote, CR or LF are quoted, with embedded quotes doubled.
std::string csv_field(std::string_view s);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);
// Parses a whole document. Throws DomainError on an unterminated quote.
std::vector<std::vector<std::string>> read_csv(std::istream& in);

// Run-level metadata that goes into JSON manifests.
struct RunInfo {
    std::optional<std::uint64_t> seed;
    std::string command;
};

std::vector<std::string> diagram_csv_header(const SweepSpec& spec);
void write_diagram_csv(std::ostream& out, const PhaseDiagram& d);
// Reads rows written by write_diagram_csv back into cells; the header must
// match `spec`.
std::vector<CellResult> read_diagram_csv(std::istream& in, const SweepSpec& spec);
void write_diagram_json(std::ostream& out, const PhaseDiagram& d, const RunInfo& info = {});

void write_boundaries_csv(std::ostream& out, const SweepSpec& spec, const std::vector<Boundary>& b);
void write_boundaries_json(std::ostream& out, const SweepSpec& spec, const std::vector<Boundary>& b,
                           const RunInfo& info = {});

// Per-frequency curves at one parameter point, nonnegative frequencies only.
struct SpectraTable {
    SystemParams params;
    GridSettings grid;
    Phase phase = Phase::normal;
    double lambda_c = 0;
    std::vector<double> omega;
    std::vector<double> a_sr;   // -2 Im Q_cq
    std::vector<double> re_h1, im_h1, re_h2, im_h2;
    std::vector<double> m11, m22;  // per-bond covariance diagonal at (w, -w)
};

SpectraTable make_spectra(const CouplingStats& stats, const PhasePoint& pt, const GridSettings& grid);
void write_spectra_csv(std::ostream& out, const SpectraTable& t);
void write_spectra_json(std::ostream& out, const SpectraTable& t, const RunInfo& info = {});

void write_point_json(std::ostream& out, const PhasePoint& pt, const GridSettings& grid, const RunInfo& info = {});

void write_oracle_json(std::ostream& out, const std::vector<OracleResult>& results, const SystemParams& p,
                       const RunInfo& info = {});

// Writes `text` to `path` through a temporary file; I/O errors propagate
// as std::runtime_error carrying the system message.
void write_file(const std::string& path, const std::string& text);

}  // namespace gdicke
