#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli_args.hpp"
#include "nhbl/dispersion.hpp"
#include "nhbl/error.hpp"
#include "nhbl/field_export.hpp"
#include "nhbl/phase.hpp"
#include "nhbl/realspace.hpp"
#include "nhbl/report.hpp"

namespace {

using namespace nhbl;
using cli::Format;

constexpr int kExitCheckFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitNumerical = 3;

struct Config {
    ModelParams p;
    int grid = 128;
    int samples = kDefaultLoopSamples;
    double tol = 1e-9;
    double loop_radius = 0.0;
    std::string gamma_range = "-2:2";
    std::string T_range = "-2:2";
    int res = 41;
    std::string format;
    std::string out;
    std::string kx, ky;
    std::string field = "F";
    bool ring = false;
    int N = 6;
    std::string branch;
    int arrows = 32;
    unsigned threads = 0;
};

void add_model(CLI::App* app, Config& c) {
    app->add_option("--J", c.p.J, "intralayer hopping")->capture_default_str();
    app->add_option("--T", c.p.T, "interlayer hopping")->capture_default_str();
    app->add_option("--t", c.p.t, "staggered diagonal coupling")->capture_default_str();
    app->add_option("--gamma", c.p.gamma, "gain/loss")->capture_default_str();
    app->add_option("--tol", c.tol, "tolerance (EP detection, symmetry residual)")->capture_default_str();
    app->add_option("--format", c.format, "json|csv|svg (default from --out extension, else per command)");
    app->add_option("--out", c.out, "output path (default: standard output)");
}

void emit(const Config& c, const std::string& content) {
    if (c.out.empty()) {
        std::cout << content;
        std::cout.flush();
    } else {
        write_file_atomic(c.out, content);
    }
}

Json params_json(const ModelParams& p) {
    return Json{{"J", round12(p.J)}, {"T", round12(p.T)}, {"t", round12(p.t)}, {"gamma", round12(p.gamma)}};
}

std::optional<Momentum> probe(const Config& c) {
    if (c.kx.empty() && c.ky.empty()) {
        return std::nullopt;
    }
    if (c.kx.empty() || c.ky.empty()) {
        throw InvalidInput("--kx and --ky go together");
    }
    return Momentum{cli::parse_angle(c.kx), cli::parse_angle(c.ky)};
}

int cmd_btps(const Config& c) {
    const Format f = cli::resolve_format(c.format, c.out, Format::json);
    if (c.ring) {
        if (c.p.t != 0.0 || c.p.gamma == 0.0) {
            throw InvalidInput("--ring needs t = 0 and gamma != 0");
        }
        Json doc = document();
        doc["params"] = params_json(c.p);
        Json rings = Json::array();
        for (int s : {1, -1}) {
            const EpRing r = trace_ep_ring(c.p, s, c.samples);
            Json verts = Json::array();
            for (const Momentum& k : r.vertices) {
                verts.push_back(Json::array({round12(k.kx), round12(k.ky)}));
            }
            rings.push_back(Json{{"branch", s}, {"level", round12(r.level)}, {"vertices", std::move(verts)}});
        }
        doc["rings"] = std::move(rings);
        emit(c, dump(doc));
        return 0;
    }
    const ConfigurationSignature sig = signature(c.p, c.samples);
    if (f == Format::csv) {
        std::ostringstream s;
        s << "kx,ky,branch,kind,wI,wII\n";
        for (const Btp& b : sig.btps) {
            s << format_number(b.k.kx) << ',' << format_number(b.k.ky) << ',' << to_string(b.branch) << ','
              << (b.kind ? to_string(*b.kind) : "") << ',' << format_number(b.w1.value_or(NAN)) << ','
              << format_number(b.w2.value_or(NAN)) << '\n';
        }
        emit(c, s.str());
        return 0;
    }
    if (f != Format::json) {
        throw InvalidInput("btps writes json or csv");
    }
    Json doc = document();
    doc["params"] = params_json(c.p);
    const Json body = to_json(sig);
    for (const auto& [k, v] : body.items()) {
        doc[k] = v;
    }
    if (sig.btps.empty()) {
        doc["note"] = "gapped";
        doc["minGap"] = round12(min_gap(c.p, c.grid));
    }
    emit(c, dump(doc));
    return 0;
}

int cmd_winding(const Config& c) {
    const auto center = probe(c);
    if (!center) {
        throw InvalidInput("winding needs --kx and --ky");
    }
    FieldKind field;
    if (c.field == "F") {
        field = FieldKind::F;
    } else if (c.field == "E") {
        field = FieldKind::E;
    } else {
        throw InvalidInput("--field must be F or E");
    }
    Branch start = Branch::plus;
    if (c.branch == "minus" || c.branch == "-1") {
        start = Branch::minus;
    } else if (!c.branch.empty() && c.branch != "plus" && c.branch != "+1" && c.branch != "1") {
        throw InvalidInput("--branch must be plus or minus");
    }
    Loop loop{*center, kMaxLoopRadius, c.samples};
    if (c.loop_radius > 0.0) {
        loop.radius = c.loop_radius;
    } else {
        try {
            loop = make_loop(*center, locate_btps(c.p), c.samples);
        } catch (const RingRegime&) {
            // No isolated points to keep clear of; use the default radius.
        }
    }
    const WindingResult r = winding_number(c.p, loop, field, start);
    Json doc = document();
    doc["params"] = params_json(c.p);
    const Json body = to_json(r);
    for (const auto& [k, v] : body.items()) {
        doc[k] = v;
    }
    emit(c, dump(doc));
    return 0;
}

int cmd_scan(const Config& c) {
    const Format f = cli::resolve_format(c.format, c.out, Format::csv);
    const PhaseGrid grid = scan_phase_diagram(parse_range(c.gamma_range), parse_range(c.T_range), c.res, c.p, c.threads,
                                              c.samples);
    if (f == Format::csv) {
        std::ostringstream s;
        write_scan_csv(s, grid);
        emit(c, s.str());
        return 0;
    }
    if (f != Format::json) {
        throw InvalidInput("scan writes csv or json");
    }
    Json doc = document();
    doc["params"] = params_json(c.p);
    Json cells = Json::array();
    for (const PhaseCell& cell : grid.cells) {
        Json j{{"gamma", round12(cell.gamma)}, {"T", round12(cell.T)}, {"onCandidateLine", cell.on_candidate_line}};
        if (cell.sig) {
            j["signature"] = to_json(*cell.sig);
        } else {
            j["error"] = cell.error;
        }
        cells.push_back(std::move(j));
    }
    doc["cells"] = std::move(cells);
    const BoundaryReport rep = detect_boundaries(grid);
    doc["boundaryEdges"] = rep.edges.size();
    doc["inconsistentEdges"] = rep.inconsistent;
    emit(c, dump(doc));
    return 0;
}

int cmd_dispersion(const Config& c) {
    const Format f = cli::resolve_format(c.format, c.out, Format::json);
    std::vector<Btp> btps = characterize_btps(c.p, c.samples);
    if (const auto k = probe(c)) {
        std::erase_if(btps, [&](const Btp& b) { return torus_distance(b.k, *k) > 1e-6; });
        if (btps.empty()) {
            throw InvalidInput("no band touching at the given --kx --ky");
        }
    }
    const std::vector<double> q = default_offsets();
    std::vector<RayReport> reports;
    std::vector<DispersionSample> samples;
    bool ok = true;
    for (const Btp& b : btps) {
        for (const Direction& d : case_directions(*b.kind, b.k)) {
            reports.push_back(analyze_ray(c.p, b, d, q));
            samples.push_back(sample_dispersion(c.p, b.k, d, q));
            if (reports.back().expected && !reports.back().passes()) {
                ok = false;
            }
        }
    }
    if (f == Format::csv) {
        std::ostringstream s;
        write_dispersion_csv(s, samples);
        emit(c, s.str());
    } else if (f == Format::json) {
        Json doc = document();
        doc["params"] = params_json(c.p);
        Json rays = Json::array();
        for (const RayReport& r : reports) {
            rays.push_back(to_json(r));
        }
        doc["rays"] = std::move(rays);
        doc["pass"] = ok;
        emit(c, dump(doc));
    } else {
        throw InvalidInput("dispersion writes json or csv");
    }
    return ok ? 0 : kExitCheckFailed;
}

int cmd_symmetry(const Config& c) {
    const Format f = cli::resolve_format(c.format, c.out, Format::json);
    const auto rows = symmetry_residuals(c.p, c.grid);
    bool ok = true;
    for (const auto& r : rows) {
        ok = ok && r.max_residual <= c.tol;
    }
    if (f == Format::csv) {
        std::ostringstream s;
        s << "relation,maxResidual\n";
        for (const auto& r : rows) {
            s << r.relation << ',' << format_number(r.max_residual) << '\n';
        }
        emit(c, s.str());
    } else if (f == Format::json) {
        Json doc = document();
        doc["params"] = params_json(c.p);
        doc["grid"] = c.grid;
        doc["tol"] = round12(c.tol);
        doc["residuals"] = to_json(rows);
        doc["pass"] = ok;
        emit(c, dump(doc));
    } else {
        throw InvalidInput("symmetry writes json or csv");
    }
    return ok ? 0 : kExitCheckFailed;
}

int cmd_realspace(const Config& c) {
    const Format f = cli::resolve_format(c.format, c.out, Format::json);
    const LatticeSize size(c.N);
    const ComplexMatrix H = build_realspace(c.p, size);
    if (f == Format::csv) {
        std::ostringstream s;
        write_matrix_csv(s, H, 1e-15);
        emit(c, s.str());
        return 0;
    }
    if (f != Format::json) {
        throw InvalidInput("realspace writes json or csv");
    }
    const ComplexMatrix U = build_momentum_basis(size);
    const BlockCheck check = block_check(H, U, c.p);
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(H, false);
    std::vector<cplx> direct(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
    const double spectral = multiset_distance(direct, bloch_spectrum(c.p, size));
    constexpr double limit = 1e-10;
    const bool ok = check.offblock < limit && check.blockdev < limit && spectral < limit;
    Json doc = document();
    doc["params"] = params_json(c.p);
    doc["N"] = c.N;
    doc["offblock"] = round12(check.offblock);
    doc["blockdev"] = round12(check.blockdev);
    doc["swapped"] = check.swapped;
    doc["spectralDistance"] = round12(spectral);
    doc["pass"] = ok;
    emit(c, dump(doc));
    return ok ? 0 : kExitCheckFailed;
}

int cmd_ring(const Config& c) {
    const Format f = cli::resolve_format(c.format, c.out, Format::csv);
    std::vector<int> branches{1, -1};
    if (c.branch == "1" || c.branch == "+1" || c.branch == "plus") {
        branches = {1};
    } else if (c.branch == "-1" || c.branch == "minus") {
        branches = {-1};
    } else if (!c.branch.empty()) {
        throw InvalidInput("--branch must be +1 or -1");
    }
    std::vector<EpRing> rings;
    for (int s : branches) {
        rings.push_back(trace_ep_ring(c.p, s, c.samples));
    }
    if (f != Format::csv) {
        throw InvalidInput("ring writes csv");
    }
    std::ostringstream s;
    write_ring_csv(s, rings);
    emit(c, s.str());
    return 0;
}

int cmd_field_export(const Config& c) {
    const Format f = cli::resolve_format(c.format, c.out, Format::svg);
    std::vector<Btp> btps;
    try {
        btps = locate_btps(c.p);
    } catch (const RingRegime&) {
        // Rings are not marked; the density still shows them.
    }
    if (f == Format::csv) {
        std::ostringstream s;
        write_field_csv(s, sample_f_field(c.p, c.grid));
        emit(c, s.str());
        return 0;
    }
    if (f != Format::svg) {
        throw InvalidInput("field-export writes svg or csv");
    }
    SvgOptions opt;
    opt.density_grid = c.grid;
    opt.arrow_grid = c.arrows;
    emit(c, render_field_svg(c.p, btps, opt));
    if (!c.out.empty()) {
        std::filesystem::path csv = c.out;
        csv.replace_extension(".csv");
        std::ostringstream s;
        write_field_csv(s, sample_f_field(c.p, c.grid));
        write_file_atomic(csv, s.str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Band touchings, winding numbers and phase scans of the non-Hermitian bilayer square lattice"};
    app.require_subcommand(1);
    Config c;
    std::function<int(const Config&)> run;

    auto sub = [&](const char* name, const char* help, int (*fn)(const Config&)) {
        CLI::App* s = app.add_subcommand(name, help);
        add_model(s, c);
        s->callback([&run, fn] { run = fn; });
        return s;
    };

    auto* btps = sub("btps", "locate, wind and classify band touchings", cmd_btps);
    btps->add_option("--samples", c.samples, "loop samples")->capture_default_str();
    btps->add_option("--grid", c.grid, "grid for the gap search")->capture_default_str();
    btps->add_flag("--ring", c.ring, "trace exceptional rings (t = 0)");

    auto* wind = sub("winding", "winding number around a probe point", cmd_winding);
    wind->add_option("--kx", c.kx, "loop center kx (radians, pi allowed)")->required();
    wind->add_option("--ky", c.ky, "loop center ky (radians, pi allowed)")->required();
    wind->add_option("--field", c.field, "F or E")->capture_default_str();
    wind->add_option("--loop-radius", c.loop_radius, "loop radius (default: min(0.4 x nearest BTP, 0.1))");
    wind->add_option("--samples", c.samples, "loop samples")->capture_default_str();
    wind->add_option("--branch", c.branch, "band to start on: plus or minus");

    auto* scan = sub("scan", "phase-diagram scan over (gamma, T)", cmd_scan);
    scan->add_option("--gamma-range", c.gamma_range, "lo:hi")->capture_default_str();
    scan->add_option("--T-range", c.T_range, "lo:hi")->capture_default_str();
    scan->add_option("--res", c.res, "nodes per axis")->capture_default_str();
    scan->add_option("--samples", c.samples, "loop samples")->capture_default_str();
    scan->add_option("--threads", c.threads, "worker threads (0: hardware)")->capture_default_str();

    auto* disp = sub("dispersion", "power-law fits of |E| near each band touching", cmd_dispersion);
    disp->add_option("--kx", c.kx, "restrict to the touching at this kx");
    disp->add_option("--ky", c.ky, "restrict to the touching at this ky");
    disp->add_option("--samples", c.samples, "loop samples for classification")->capture_default_str();

    auto* sym = sub("symmetry", "lattice symmetry and chiral residuals", cmd_symmetry);
    sym->add_option("--grid", c.grid, "grid per side")->capture_default_str();

    auto* rs = sub("realspace", "real-space Hamiltonian block check", cmd_realspace);
    rs->add_option("--N", c.N, "unit cells per side (even, >= 4)")->capture_default_str();

    auto* ring = sub("ring", "exceptional ring polylines (t = 0)", cmd_ring);
    ring->add_option("--branch", c.branch, "+1 or -1 (default both)");
    ring->add_option("--samples", c.samples, "vertices per ring")->capture_default_str();

    auto* fe = sub("field-export", "SVG and CSV of the F field", cmd_field_export);
    fe->add_option("--grid", c.grid, "density cells per side")->capture_default_str();
    fe->add_option("--arrows", c.arrows, "arrows per side")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitBadInput;
    }

    try {
        c.p.tol_ep = c.tol;
        c.p.validate();
        return run(c);
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}
