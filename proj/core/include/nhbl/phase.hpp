#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nhbl/btp.hpp"
#include "nhbl/winding.hpp"

namespace nhbl {

/// Locates every BTP, attaches w_I and w_II from loops built by make_loop,
/// and classifies each point. Output is sorted by (kx, ky).
std::vector<Btp> characterize_btps(const ModelParams& params, int samples = kDefaultLoopSamples);

struct SignedCharge {
    Momentum k;
    double w2 = 0.0;
};

/// Winding content of one parameter point.
///
/// Counts are taken over |w_I| = 0, 1/2 and 1 respectively. Two
/// signatures are topologically equal when their counts and the ordered
/// (w_I, w_II) sequences agree; see topology_key(). phase_label() also
/// includes BTP positions rounded to 1e-6.
struct ConfigurationSignature {
    int count_zero = 0;
    int count_half = 0;
    int count_one = 0;
    int n_btps = 0;
    bool boundary = false;
    double total_w1 = 0.0;
    std::vector<Btp> btps;

    [[nodiscard]] std::vector<SignedCharge> signed_w2() const;
    [[nodiscard]] std::string topology_key() const;
    [[nodiscard]] std::string phase_label() const;
    /// FNV-1a of the ordered w_II sequence.
    [[nodiscard]] std::uint64_t w2_hash() const;
};

/// True when some level c_s is within 1e-9 of -1, 0 or 1, or gamma = 0.
bool on_merger_line(const ModelParams& params);

ConfigurationSignature signature(const ModelParams& params, int samples = kDefaultLoopSamples);

enum class TableType { I, II, III, IV, V, None };

std::string_view to_string(TableType t);

/// Exact match of the count triple against {4,0,0} I, {0,0,8} II,
/// {0,16,0} III, {4,8,0} IV, {8,0,0} V.
TableType table1_type(const ConfigurationSignature& sig);

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

/// Parses "lo:hi".
Range parse_range(std::string_view text);

struct PhaseCell {
    double gamma = 0.0;
    double T = 0.0;
    bool on_candidate_line = false; ///< within 1e-6 of a candidate transition line
    std::optional<ConfigurationSignature> sig;
    std::string error;
};

/// Row-major over T (outer) and gamma (inner).
struct PhaseGrid {
    Range gamma_range;
    Range T_range;
    int n_gamma = 0;
    int n_T = 0;
    ModelParams base;
    std::vector<PhaseCell> cells;

    [[nodiscard]] const PhaseCell& at(int ig, int iT) const { return cells[static_cast<std::size_t>(iT * n_gamma + ig)]; }
    [[nodiscard]] double cell_width() const;
};

/// Evaluates the signature at `resolution` nodes per axis (endpoints
/// included; a degenerate range gives a single node). Cells on candidate
/// lines are still evaluated and carry on_candidate_line. Per-cell errors
/// are stored in the cell. `threads` = 0 picks the hardware concurrency;
/// the result never depends on it.
PhaseGrid scan_phase_diagram(Range gamma_range, Range T_range, int resolution, const ModelParams& base,
                             unsigned threads = 0, int samples = kDefaultLoopSamples);

/// Lines where BTPs merge or split: gamma = 0, T = +-gamma, T +- gamma = +-2J.
struct CandidateLine {
    std::string name;
    double a = 0.0; ///< a gamma + b T + c = 0
    double b = 0.0;
    double c = 0.0;

    [[nodiscard]] double distance(double gamma, double T) const;
};

std::vector<CandidateLine> candidate_lines(double J);

struct BoundaryEdge {
    int ig_a = 0, iT_a = 0;
    int ig_b = 0, iT_b = 0;
    double gamma = 0.0; ///< edge midpoint
    double T = 0.0;
    std::string nearest_line;
    double line_distance = 0.0;
    bool consistent = false;
};

struct BoundaryReport {
    std::vector<BoundaryEdge> edges;
    std::size_t inconsistent = 0;

    [[nodiscard]] bool consistent() const { return inconsistent == 0; }
};

/// Edges between neighbouring cells with different topology keys. Every
/// edge is checked to lie within one cell width of a candidate line.
BoundaryReport detect_boundaries(const PhaseGrid& grid);

} // namespace nhbl
