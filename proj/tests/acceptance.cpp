// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nhbl/bloch.hpp"
#include "nhbl/btp.hpp"
#include "nhbl/dispersion.hpp"
#include "nhbl/phase.hpp"
#include "nhbl/realspace.hpp"
#include "nhbl/winding.hpp"
#include "oracles.hpp"

using namespace nhbl;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) {
                detail << "first failure: " << what << "; ";
            }
            pass = false;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ModelParams table_params(double gamma, double T) { return make_params(1.0, T, 0.5, gamma); }

bool half_integer(double w) { return 2.0 * w == std::round(2.0 * w); }

const Btp* find_at(const std::vector<Btp>& list, Momentum k) {
    for (const Btp& b : list) {
        if (torus_distance(b.k, k) < 1e-9) {
            return &b;
        }
    }
    return nullptr;
}

void type_table(Outcome& o) {
    struct Row {
        double gamma, T;
        int c0, ch, c1;
        TableType type;
    };
    const Row rows[] = {{0.0, 0.0, 4, 0, 0, TableType::I},
                        {0.0, -1.0, 0, 0, 8, TableType::II},
                        {0.5, -1.0, 0, 16, 0, TableType::III},
                        {0.5, -1.5, 4, 8, 0, TableType::IV},
                        {-1.0, -1.0, 8, 0, 0, TableType::V}};
    const auto t0 = std::chrono::steady_clock::now();
    for (const Row& r : rows) {
        const ConfigurationSignature s = signature(table_params(r.gamma, r.T));
        std::ostringstream tag;
        tag << "(" << r.gamma << "," << r.T << ") -> {" << s.count_zero << "," << s.count_half << "," << s.count_one
            << "} " << to_string(table1_type(s));
        o.require(s.count_zero == r.c0 && s.count_half == r.ch && s.count_one == r.c1, tag.str());
        o.require(table1_type(s) == r.type, tag.str());
    }
    const double dt = seconds_since(t0);
    o.require(dt < 5.0, "runtime");
    o.detail << "5 rows in " << dt << " s";
}

void pinned_pattern(Outcome& o) {
    const ModelParams p = table_params(0.5, -1.5);
    const auto all = locate_btps(p);
    std::vector<Btp> line;
    for (const Btp& b : all) {
        if (std::abs(b.k.ky + kPi / 2) < 1e-12) {
            line.push_back(b);
        }
    }
    std::sort(line.begin(), line.end(), [](const Btp& a, const Btp& b) { return a.k.kx < b.k.kx; });
    o.require(line.size() == 3, "three points on ky = -pi/2");
    if (line.size() != 3) {
        return;
    }
    const double want_w1[] = {0.5, 0.0, -0.5};
    const double want_w2[] = {-0.5, 0.0, 0.5};
    double worst = 0.0;
    std::ostringstream got;
    for (std::size_t i = 0; i < 3; ++i) {
        const Loop loop = make_loop(line[i].k, all);
        const WindingResult f = winding_number(p, loop, FieldKind::F);
        const WindingResult e = winding_number(p, loop, FieldKind::E);
        worst = std::max({worst, f.residual, e.residual});
        got << "(" << f.value << "," << e.value << ")";
        o.require(f.value == want_w1[i] && e.value == want_w2[i], "pinned pattern");
        if (i == 1) {
            o.require(f.value == 0.0 && e.value == 0.0, "hybrid EP carries no charge");
        } else {
            o.require(e.value == -f.value && f.value != 0.0, "wII = -wI at normal EP");
        }
    }
    o.require(worst < 0.05, "residual");
    o.detail << "(wI,wII) by kx: " << got.str() << ", max residual " << worst;
}

void winding_laws(Outcome& o) {
    std::mt19937_64 rng(2024);
    int windings = 0;
    double worst = 0.0;
    for (int draw = 0; draw < 50; ++draw) {
        const oracle::Couplings c = oracle::random_diamond(rng);
        const ModelParams p = make_params(c.J, c.T, c.t, c.gamma);
        const auto btps = locate_btps(p);
        const auto plus = characterize_btps(p);
        const auto minus = characterize_btps(p.with_gamma(-p.gamma));
        double total = 0.0;
        for (const Btp& b : btps) {
            const Loop loop = make_loop(b.k, btps);
            for (FieldKind f : {FieldKind::F, FieldKind::E}) {
                const WindingResult r = winding_number(p, loop, f);
                ++windings;
                worst = std::max(worst, r.residual);
                o.require(r.residual < 0.05 && half_integer(r.value), "quantization");
                if (f == FieldKind::F) {
                    total += r.value;
                }
            }
        }
        o.require(total == 0.0, "sum of wI");
        o.require(plus.size() == minus.size(), "gamma mirror keeps the points");
        for (const Btp& b : plus) {
            const Btp* m = find_at(minus, b.k);
            o.require(m != nullptr, "gamma mirror position");
            if (m) {
                o.require(*b.w1 == *m->w1, "wI(-gamma) = wI(gamma)");
                o.require(*b.w2 == -*m->w2, "wII(-gamma) = -wII(gamma)");
            }
        }
    }
    // gamma = 0.01 splits the Dirac point at (pi/3, pi/2) into two EPs.
    const ModelParams split = make_params(1.0, -1.0, 0.5, 0.01);
    const Loop big{{kPi / 3, kPi / 2}, 0.1, 2048};
    const AdditivityReport add = winding_additivity(split, locate_btps(split), big);
    const double parent = winding_number(split.with_gamma(0.0), big, FieldKind::F).value;
    o.require(add.enclosed == 2 && add.holds && add.big_w1 == parent && std::abs(parent) == 1.0, "additivity");
    o.detail << "50 draws, " << windings << " windings, max residual " << worst << "; split pair sums to "
             << add.sum_w1 << ", parent DP " << parent;
}

void symmetry_suite(Outcome& o) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        const ModelParams p = make_params(1.0 + 0.5 * u(rng), u(rng), u(rng), u(rng));
        const auto rows = symmetry_residuals(p, 64);
        o.require(rows.size() == 9, "nine relations");
        for (const auto& r : rows) {
            worst = std::max(worst, r.max_residual);
        }
    }
    o.require(worst < 1e-12, "residual");
    // Swapping cos kx cos ky for sin kx sin ky breaks the relations.
    const ModelParams p = make_params(1.0, -0.4, 0.7, 0.3);
    const FieldFunction corrupted = [p](Momentum k) {
        BlochField f = bloch_field(p, k);
        f.by_re = 2.0 * p.t * (std::cos(k.kx - k.ky) - std::cos(k.kx + k.ky));
        return f;
    };
    double defect = 0.0;
    for (const auto& r : symmetry_residuals(corrupted, 64)) {
        defect = std::max(defect, r.max_residual);
    }
    o.require(defect > 0.1, "negative control");
    o.detail << "100 draws on 64x64, max residual " << worst << "; negative control " << defect;
}

void t_zero_regime(Outcome& o) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    int rings = 0;
    double worst_level = 0.0, worst_e = 0.0;
    for (int draw = 0; draw < 20; ++draw) {
        const ModelParams p = make_params(1.0, u(rng), 0.0, u(rng));
        o.require(spectral_reality(p, 64, 1e-9), "spectral reality");
        for (int s : {1, -1}) {
            const EpRing ring = trace_ep_ring(p, s);
            if (ring.vertices.size() < 2) {
                continue;
            }
            ++rings;
            for (const Momentum& k : ring.vertices) {
                worst_level = std::max(worst_level, std::abs(std::cos(k.kx) + std::cos(k.ky) - ring.level));
                worst_e = std::max(worst_e, std::sqrt(std::abs(bloch_field(p, k).energy_squared())));
            }
        }
    }
    o.require(rings > 0, "some rings traced");
    o.require(worst_level < 1e-8 && worst_e < 1e-6, "ring vertices");

    const ModelParams trivial = make_params(1.0, 3.0, 0.0, 1.0);
    const auto point = characterize_btps(trivial);
    const bool single = point.size() == 1 && torus_distance(point[0].k, {kPi, kPi}) < 1e-12 &&
                        point[0].kind == BtpKind::trivial_isolated_ep && *point[0].w1 == 0.0 && *point[0].w2 == 0.0;
    o.require(single, "trivial isolated EP at (pi, pi)");

    const ModelParams gapped = make_params(1.0, 5.0, 0.0, 0.5);
    const double gap = min_gap(gapped);
    o.require(locate_btps(gapped).empty() && gap > 0.1, "gapped");
    o.detail << "20 draws, " << rings << " rings, level error " << worst_level << ", max |E| " << worst_e
             << "; (1,3) single trivial EP; (0.5,5) min|E| " << gap;
}

void dispersion_suite(Outcome& o) {
    struct Config {
        double gamma, T;
    };
    // Normal EPs; hybrid EPs at k_c = 0, pi/2, pi; semi-Dirac at 0, pi/2, pi;
    // Dirac points.
    const Config configs[] = {{0.5, -1.5}, {0.5, -1.0}, {0.5, 0.5},  {0.5, 1.5},
                              {0.0, -2.0}, {0.0, 0.0},  {0.0, 2.0},  {0.0, -1.0}};
    const std::vector<std::string> required{"normal-ep",       "hybrid-0",       "hybrid-pi/2",
                                            "hybrid-pi:",      "semi-dirac-0",   "semi-dirac-pi/2",
                                            "semi-dirac-pi:", "dirac"};
    const auto q = default_offsets();
    const auto t0 = std::chrono::steady_clock::now();
    std::set<std::string> seen;
    int rays = 0;
    double worst_alpha = 0.0, worst_c = 0.0, worst_r2 = 1.0;
    for (const Config& c : configs) {
        const ModelParams p = table_params(c.gamma, c.T);
        for (const Btp& b : characterize_btps(p)) {
            for (const Direction& d : case_directions(*b.kind, b.k)) {
                const RayReport r = analyze_ray(p, b, d, q);
                if (!r.expected) {
                    continue;
                }
                ++rays;
                seen.insert(r.expected->case_id);
                worst_alpha = std::max(worst_alpha, std::abs(r.fit.alpha - r.expected->alpha));
                worst_c = std::max(worst_c, std::abs(r.fixed_prefactor / r.expected->prefactor - 1.0));
                worst_r2 = std::min(worst_r2, r.fit.r2);
                o.require(r.passes(), r.expected->case_id);
            }
        }
    }
    for (const std::string& prefix : required) {
        const bool hit = std::any_of(seen.begin(), seen.end(), [&](const std::string& id) { return id.rfind(prefix, 0) == 0; });
        o.require(hit, "case " + prefix + " covered");
    }
    const double dt = seconds_since(t0);
    o.require(dt < 20.0, "runtime");
    o.detail << rays << " rays over " << seen.size() << " case ids; max |d alpha| " << worst_alpha
             << ", max prefactor error " << worst_c << ", min r2 " << worst_r2 << "; " << dt << " s";
}

void realspace_oracle(Outcome& o) {
    const ModelParams p = table_params(0.5, -1.5);
    const LatticeSize size(6);
    const ComplexMatrix U = build_momentum_basis(size);
    const ComplexMatrix H = build_realspace(p, size);
    const BlockCheck check = block_check(H, U, p);
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(H, false);
    const std::vector<cplx> direct(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
    const double spectral = multiset_distance(direct, bloch_spectrum(p, size));
    o.require(check.offblock < 1e-10 && check.blockdev < 1e-10, "block residuals");
    o.require(spectral < 1e-10, "spectral match");

    ComplexMatrix bad = H;
    const int a = size.index(1, 1, 1), b = size.index(1, 2, 1);
    bad(a, b) = -bad(a, b);
    bad(b, a) = -bad(b, a);
    const BlockCheck broken = block_check(bad, U, p);
    o.require(broken.offblock >= 1e-10, "negative control");
    o.detail << "offblock " << check.offblock << ", blockdev " << check.blockdev << ", spectral " << spectral
             << "; one flipped bond gives offblock " << broken.offblock;
}

void phase_scan(Outcome& o) {
    const ModelParams base = table_params(0.0, 0.0);
    const auto t0 = std::chrono::steady_clock::now();
    const PhaseGrid grid = scan_phase_diagram({-2.0, 2.0}, {-2.0, 2.0}, 41, base);
    const double dt = seconds_since(t0);
    o.require(dt < 60.0, "runtime");

    const BoundaryReport edges = detect_boundaries(grid);
    o.require(edges.consistent(), "boundary edges on candidate lines");

    int errors = 0, mirrored = 0, outside = 0;
    std::set<std::string> phases;
    for (int iT = 0; iT < grid.n_T; ++iT) {
        for (int ig = 0; ig < grid.n_gamma; ++ig) {
            const PhaseCell& cell = grid.at(ig, iT);
            if (!cell.sig) {
                ++errors;
                continue;
            }
            phases.insert(cell.sig->topology_key());
            const PhaseCell& mirror = grid.at(grid.n_gamma - 1 - ig, iT);
            if (mirror.sig) {
                const auto wa = cell.sig->signed_w2(), wb = mirror.sig->signed_w2();
                bool flipped = wa.size() == wb.size();
                for (std::size_t i = 0; flipped && i < wa.size(); ++i) {
                    flipped = wa[i].w2 == -wb[i].w2;
                }
                o.require(cell.sig->count_zero == mirror.sig->count_zero &&
                              cell.sig->count_half == mirror.sig->count_half &&
                              cell.sig->count_one == mirror.sig->count_one && flipped,
                          "gamma mirror");
                ++mirrored;
            }
            if (cell.on_candidate_line) {
                continue;
            }
            ModelParams q = base.with_gamma(cell.gamma);
            q.T = cell.T;
            const bool in_diamond = std::abs(cell.T + cell.gamma) <= 2.0 && std::abs(cell.T - cell.gamma) <= 2.0;
            // A branch has EPs on ky = +-pi/2 when |c_s| <= 1.
            const int valid = (std::abs(branch_level(q, 1)) < 1.0) + (std::abs(branch_level(q, -1)) < 1.0);
            if (!in_diamond && valid == 1) {
                ++outside;
                o.require(cell.sig->n_btps == 8, "eight EPs outside the diamond");
            }
        }
    }
    o.require(errors == 0, "cells without a signature");
    o.require(outside > 0, "one-branch cells present");
    o.detail << "41x41 in " << dt << " s; " << edges.edges.size() << " boundary edges, " << edges.inconsistent
             << " off-line; " << mirrored << " mirror pairs; " << outside << " one-branch cells; " << phases.size()
             << " distinct topology keys";
}

void splitting(Outcome& o) {
    const double gamma = 0.01;
    const ModelParams p = make_params(1.0, -1.0, 0.5, gamma);
    const double kc = kPi / 3;
    std::vector<Momentum> pair;
    for (const Btp& b : locate_btps(p)) {
        if (std::abs(b.k.ky - kPi / 2) < 1e-12 && std::abs(b.k.kx - kc) < 0.05) {
            pair.push_back(b.k);
        }
    }
    o.require(pair.size() == 2, "two EPs near the parent DP");
    if (pair.size() != 2) {
        return;
    }
    const bool flank = std::min(pair[0].kx, pair[1].kx) < kc && std::max(pair[0].kx, pair[1].kx) > kc;
    const double expected = gamma / (p.J * std::sin(kc));
    const double ratio = torus_distance(pair[0], pair[1]) / expected;
    o.require(flank, "EPs flank the DP");
    o.require(std::abs(ratio - 1.0) < 0.01, "separation");
    o.detail << "separation / predicted = " << ratio;
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<void(Outcome&)> run;
    };
    const Criterion criteria[] = {
        {"type-table-signatures", type_table},   {"pinned-winding-pattern", pinned_pattern},
        {"winding-laws", winding_laws},        {"symmetry-suite", symmetry_suite},
        {"t-zero-regime", t_zero_regime},      {"dispersion-suite", dispersion_suite},
        {"realspace-oracle", realspace_oracle}, {"phase-scan", phase_scan},
        {"dp-ep-splitting", splitting},
    };
    int failures = 0;
    int index = 0;
    for (const Criterion& c : criteria) {
        ++index;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double dt = seconds_since(t0);
        std::printf("%s %d %s [%.2f s] %s\n", o.pass ? "PASS" : "FAIL", index, c.name, dt, o.detail.str().c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d/%d criteria passed\n", index - failures, index);
    return failures == 0 ? 0 : 1;
}
