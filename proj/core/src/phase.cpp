#include "nhbl/phase.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "nhbl/error.hpp"

namespace nhbl {

std::vector<Btp> characterize_btps(const ModelParams& p, int samples) {
    std::vector<Btp> btps = locate_btps(p);
    for (Btp& b : btps) {
        const Loop loop = make_loop(b.k, btps, samples);
        b.w1 = winding_number(p, loop, FieldKind::F).value;
        b.w2 = winding_number(p, loop, FieldKind::E).value;
        b.kind = classify_btp(p, b, *b.w1);
    }
    return btps;
}

std::vector<SignedCharge> ConfigurationSignature::signed_w2() const {
    std::vector<SignedCharge> out;
    for (const Btp& b : btps) {
        out.push_back({b.k, b.w2.value_or(0.0)});
    }
    return out;
}

namespace {

int twice(std::optional<double> w) { return static_cast<int>(std::lround(2.0 * w.value_or(0.0))); }

} // namespace

std::string ConfigurationSignature::topology_key() const {
    std::string key = "{" + std::to_string(count_zero) + "," + std::to_string(count_half) + "," + std::to_string(count_one) + "}";
    for (const Btp& b : btps) {
        key += "(" + std::to_string(twice(b.w1)) + "," + std::to_string(twice(b.w2)) + ")";
    }
    return key;
}

std::string ConfigurationSignature::phase_label() const {
    std::string label = topology_key();
    char buf[64];
    for (const Btp& b : btps) {
        std::snprintf(buf, sizeof buf, "[%.6f,%.6f]", b.k.kx, b.k.ky);
        label += buf;
    }
    return label;
}

std::uint64_t ConfigurationSignature::w2_hash() const {
    std::uint64_t h = 14695981039346656037ULL;
    for (const Btp& b : btps) {
        const auto v = static_cast<std::uint8_t>(twice(b.w2) + 16);
        h ^= v;
        h *= 1099511628211ULL;
    }
    return h;
}

bool on_merger_line(const ModelParams& p) {
    if (p.gamma == 0.0) {
        return true;
    }
    for (int s : {1, -1}) {
        const double c = branch_level(p, s);
        for (double target : {-1.0, 0.0, 1.0}) {
            if (std::abs(c - target) <= 1e-9) {
                return true;
            }
        }
    }
    return false;
}

ConfigurationSignature signature(const ModelParams& p, int samples) {
    p.validate();
    ConfigurationSignature sig;
    sig.btps = characterize_btps(p, samples);
    sig.n_btps = static_cast<int>(sig.btps.size());
    sig.boundary = on_merger_line(p);
    for (const Btp& b : sig.btps) {
        const double w = *b.w1;
        sig.total_w1 += w;
        const double a = std::abs(w);
        if (a == 0.0) {
            ++sig.count_zero;
        } else if (a == 0.5) {
            ++sig.count_half;
        } else {
            ++sig.count_one;
        }
    }
    return sig;
}

std::string_view to_string(TableType t) {
    switch (t) {
    case TableType::I: return "I";
    case TableType::II: return "II";
    case TableType::III: return "III";
    case TableType::IV: return "IV";
    case TableType::V: return "V";
    case TableType::None: return "None";
    }
    return "None";
}

TableType table1_type(const ConfigurationSignature& s) {
    struct Row {
        int z, h, o;
        TableType type;
    };
    static constexpr Row rows[] = {
        {4, 0, 0, TableType::I}, {0, 0, 8, TableType::II}, {0, 16, 0, TableType::III},
        {4, 8, 0, TableType::IV}, {8, 0, 0, TableType::V},
    };
    for (const Row& r : rows) {
        if (s.count_zero == r.z && s.count_half == r.h && s.count_one == r.o) {
            return r.type;
        }
    }
    return TableType::None;
}

Range parse_range(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw InvalidInput("range must look like lo:hi");
    }
    auto parse = [](std::string_view s) {
        double v = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
            throw InvalidInput("bad number in range: " + std::string(s));
        }
        return v;
    };
    Range r{parse(text.substr(0, colon)), parse(text.substr(colon + 1))};
    if (r.hi < r.lo) {
        throw InvalidInput("range upper bound is below lower bound");
    }
    return r;
}

double CandidateLine::distance(double gamma, double T) const {
    return std::abs(a * gamma + b * T + c) / std::hypot(a, b);
}

std::vector<CandidateLine> candidate_lines(double J) {
    const double two = 2.0 * std::abs(J);
    return {
        {"gamma=0", 1.0, 0.0, 0.0},
        {"T=gamma", -1.0, 1.0, 0.0},
        {"T=-gamma", 1.0, 1.0, 0.0},
        {"T+gamma=2J", 1.0, 1.0, -two},
        {"T+gamma=-2J", 1.0, 1.0, two},
        {"T-gamma=2J", -1.0, 1.0, -two},
        {"T-gamma=-2J", -1.0, 1.0, two},
    };
}

double PhaseGrid::cell_width() const {
    const double dg = n_gamma > 1 ? (gamma_range.hi - gamma_range.lo) / (n_gamma - 1) : 0.0;
    const double dT = n_T > 1 ? (T_range.hi - T_range.lo) / (n_T - 1) : 0.0;
    return std::max(dg, dT);
}

PhaseGrid scan_phase_diagram(Range gamma_range, Range T_range, int resolution, const ModelParams& base, unsigned threads,
                             int samples) {
    base.validate();
    if (resolution < 8) {
        throw InvalidInput("scan resolution must be at least 8 per axis");
    }
    PhaseGrid grid;
    grid.gamma_range = gamma_range;
    grid.T_range = T_range;
    grid.base = base;
    grid.n_gamma = gamma_range.lo == gamma_range.hi ? 1 : resolution;
    grid.n_T = T_range.lo == T_range.hi ? 1 : resolution;
    auto node = [](Range r, int n, int i) { return n == 1 ? r.lo : r.lo + (r.hi - r.lo) * i / (n - 1); };

    const auto lines = candidate_lines(base.J);
    grid.cells.resize(static_cast<std::size_t>(grid.n_gamma) * static_cast<std::size_t>(grid.n_T));
    for (int iT = 0; iT < grid.n_T; ++iT) {
        for (int ig = 0; ig < grid.n_gamma; ++ig) {
            PhaseCell& cell = grid.cells[static_cast<std::size_t>(iT * grid.n_gamma + ig)];
            cell.gamma = node(gamma_range, grid.n_gamma, ig);
            cell.T = node(T_range, grid.n_T, iT);
            cell.on_candidate_line = std::any_of(lines.begin(), lines.end(),
                                                 [&](const CandidateLine& l) { return l.distance(cell.gamma, cell.T) < 1e-6; });
        }
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < grid.cells.size(); i = next++) {
            PhaseCell& cell = grid.cells[i];
            ModelParams p = base;
            p.gamma = cell.gamma;
            p.T = cell.T;
            try {
                cell.sig = signature(p, samples);
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
        }
    };
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < threads; ++i) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& th : pool) {
        th.join();
    }
    return grid;
}

BoundaryReport detect_boundaries(const PhaseGrid& grid) {
    BoundaryReport rep;
    const auto lines = candidate_lines(grid.base.J);
    const double width = grid.cell_width();
    auto key = [](const PhaseCell& c) { return c.sig ? c.sig->topology_key() : "error:" + c.error; };

    auto consider = [&](int ig_a, int iT_a, int ig_b, int iT_b) {
        const PhaseCell& a = grid.at(ig_a, iT_a);
        const PhaseCell& b = grid.at(ig_b, iT_b);
        if (key(a) == key(b)) {
            return;
        }
        BoundaryEdge e{ig_a, iT_a, ig_b, iT_b, 0.5 * (a.gamma + b.gamma), 0.5 * (a.T + b.T), "", 0.0, false};
        e.line_distance = std::numeric_limits<double>::infinity();
        for (const CandidateLine& l : lines) {
            const double d = l.distance(e.gamma, e.T);
            if (d < e.line_distance) {
                e.line_distance = d;
                e.nearest_line = l.name;
            }
        }
        e.consistent = e.line_distance <= width + 1e-12;
        if (!e.consistent) {
            ++rep.inconsistent;
        }
        rep.edges.push_back(std::move(e));
    };
    for (int iT = 0; iT < grid.n_T; ++iT) {
        for (int ig = 0; ig < grid.n_gamma; ++ig) {
            if (ig + 1 < grid.n_gamma) {
                consider(ig, iT, ig + 1, iT);
            }
            if (iT + 1 < grid.n_T) {
                consider(ig, iT, ig, iT + 1);
            }
        }
    }
    return rep;
}

} // namespace nhbl
