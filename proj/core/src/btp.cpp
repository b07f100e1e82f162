#include "nhbl/btp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "nhbl/error.hpp"

namespace nhbl {

std::string_view to_string(BtpKind kind) {
    switch (kind) {
    case BtpKind::dirac_point: return "DiracPoint";
    case BtpKind::semi_dirac_point: return "SemiDiracPoint";
    case BtpKind::normal_ep: return "NormalEP";
    case BtpKind::hybrid_ep: return "HybridEP";
    case BtpKind::trivial_isolated_ep: return "TrivialIsolatedEP";
    }
    return "unknown";
}

std::string_view to_string(BranchSign b) {
    switch (b) {
    case BranchSign::plus: return "+";
    case BranchSign::minus: return "-";
    case BranchSign::both: return "both";
    }
    return "unknown";
}

namespace {

// Level values within this distance of 0 or +-1 are treated as exact mergers.
constexpr double kMergerTol = 1e-9;
constexpr double kDedupDistance = 1e-4;

void push_unique(std::vector<Btp>& out, const Btp& b) {
    for (const Btp& o : out) {
        if (torus_distance(o.k, b.k) < kDedupDistance) {
            return;
        }
    }
    out.push_back(b);
}

void sort_btps(std::vector<Btp>& v) {
    std::sort(v.begin(), v.end(), [](const Btp& a, const Btp& b) { return momentum_less(a.k, b.k); });
}

double merged_arccos(double c) {
    if (std::abs(c - 1.0) < kMergerTol) {
        return 0.0;
    }
    if (std::abs(c + 1.0) < kMergerTol) {
        return kPi;
    }
    if (std::abs(c) < kMergerTol) {
        return kPi / 2.0;
    }
    return std::acos(std::clamp(c, -1.0, 1.0));
}

} // namespace

bool momentum_less(Momentum a, Momentum b) {
    constexpr double tie = 1e-9;
    if (std::abs(a.kx - b.kx) > tie) {
        return a.kx < b.kx;
    }
    if (std::abs(a.ky - b.ky) > tie) {
        return a.ky < b.ky;
    }
    return false;
}

double branch_level(const ModelParams& p, int s) { return (-p.T + s * p.gamma) / (2.0 * p.J); }

bool is_trivial_isolated(const ModelParams& p, double tol) {
    if (p.t != 0.0 || p.gamma == 0.0) {
        return false;
    }
    for (int s : {1, -1}) {
        if (std::abs(std::abs(branch_level(p, s)) - 2.0) <= tol) {
            return true;
        }
    }
    return false;
}

std::vector<Btp> locate_btps(const ModelParams& p) {
    p.validate();
    std::vector<Btp> out;

    if (p.t == 0.0) {
        const bool has_ring = std::abs(branch_level(p, 1)) < 2.0 - 1e-12 || std::abs(branch_level(p, -1)) < 2.0 - 1e-12;
        if (p.gamma == 0.0 && has_ring) {
            throw RingRegime("t = 0 and gamma = 0: band touchings form the nodal line Bx = 0, not isolated points");
        }
        if (has_ring && !is_trivial_isolated(p)) {
            throw RingRegime("t = 0 with gamma != 0 gives exceptional rings; use trace_ep_ring");
        }
        for (int s : {1, -1}) {
            const double c = branch_level(p, s);
            if (std::abs(std::abs(c) - 2.0) <= 1e-12) {
                const double k = c > 0.0 ? 0.0 : kPi;
                if (p.gamma == 0.0) {
                    push_unique(out, Btp{{k, k}, BranchSign::both, {}, {}, {}});
                } else {
                    push_unique(out, Btp{{k, k}, s > 0 ? BranchSign::plus : BranchSign::minus, BtpKind::trivial_isolated_ep, {}, {}});
                }
            }
        }
        sort_btps(out);
        return out;
    }

    const bool hermitian = p.gamma == 0.0;
    for (int s : {1, -1}) {
        if (hermitian && s < 0) {
            break;
        }
        const double c = branch_level(p, s);
        if (std::abs(c) > 1.0 + kMergerTol) {
            continue;
        }
        const double kc = merged_arccos(c);
        const BranchSign sign = hermitian ? BranchSign::both : (s > 0 ? BranchSign::plus : BranchSign::minus);
        for (double a : {kc, -kc}) {
            for (double b : {kPi / 2.0, -kPi / 2.0}) {
                push_unique(out, Btp{Momentum{a, b}.canonical(), sign, {}, {}, {}});
                push_unique(out, Btp{Momentum{b, a}.canonical(), sign, {}, {}, {}});
            }
        }
    }
    sort_btps(out);
    return out;
}

namespace {

struct Residual {
    std::array<double, 2> f{};
    std::array<double, 4> jac{}; // row-major
};

Residual residual(const ModelParams& p, Momentum k) {
    const BlochField b = bloch_field(p, k);
    const double sx = std::sin(k.kx);
    const double sy = std::sin(k.ky);
    const double cx = std::cos(k.kx);
    const double cy = std::cos(k.ky);
    const double dbx[2] = {-2.0 * p.J * sx, -2.0 * p.J * sy};
    const double dby[2] = {-4.0 * p.t * sx * cy, -4.0 * p.t * cx * sy};
    Residual r;
    if (p.gamma == 0.0) {
        r.f = {b.bx, b.by_re};
        r.jac = {dbx[0], dbx[1], dby[0], dby[1]};
    } else {
        r.f = {b.bx * b.bx + b.by_re * b.by_re - p.gamma * p.gamma, 2.0 * p.gamma * b.by_re};
        for (int i = 0; i < 2; ++i) {
            r.jac[static_cast<std::size_t>(i)] = 2.0 * b.bx * dbx[i] + 2.0 * b.by_re * dby[i];
            r.jac[static_cast<std::size_t>(2 + i)] = 2.0 * p.gamma * dby[i];
        }
    }
    return r;
}

// Damped Gauss-Newton step: (J^T J + mu I) d = -J^T f. The damping is tiny
// and only matters at merged points, where the Jacobian is singular.
std::array<double, 2> newton_step(const Residual& r) {
    const auto& j = r.jac;
    const double a = j[0] * j[0] + j[2] * j[2];
    const double b = j[0] * j[1] + j[2] * j[3];
    const double d = j[1] * j[1] + j[3] * j[3];
    const double mu = 1e-12 * (a + d) + 1e-300;
    const double g0 = -(j[0] * r.f[0] + j[2] * r.f[1]);
    const double g1 = -(j[1] * r.f[0] + j[3] * r.f[1]);
    const double det = (a + mu) * (d + mu) - b * b;
    return {((d + mu) * g0 - b * g1) / det, ((a + mu) * g1 - b * g0) / det};
}

double e2_abs(const ModelParams& p, Momentum k) { return std::abs(bloch_field(p, k).energy_squared()); }

std::optional<Momentum> newton_refine(const ModelParams& p, Momentum k, double tol) {
    for (int it = 0; it < 50; ++it) {
        const auto step = newton_step(residual(p, k));
        double size = std::hypot(step[0], step[1]);
        if (!std::isfinite(size)) {
            return std::nullopt;
        }
        // Limit the trust region so a flat seed cannot jump across the zone.
        const double scale = size > 0.5 ? 0.5 / size : 1.0;
        k = Momentum{k.kx + scale * step[0], k.ky + scale * step[1]}.canonical();
        if (size < 1e-15) {
            break;
        }
    }
    if (e2_abs(p, k) < tol) {
        return k;
    }
    return std::nullopt;
}

} // namespace

RefineReport refine_btps_numeric(const ModelParams& p, int coarseN, double tol) {
    p.validate();
    if (coarseN < 32) {
        throw InvalidInput("refine_btps_numeric needs coarseN >= 32");
    }
    const double step = 2.0 * kPi / coarseN;
    auto at = [&](int i, int j) {
        return Momentum{-kPi + step * ((i % coarseN + coarseN) % coarseN), -kPi + step * ((j % coarseN + coarseN) % coarseN)};
    };
    std::vector<double> grid(static_cast<std::size_t>(coarseN) * static_cast<std::size_t>(coarseN));
    for (int i = 0; i < coarseN; ++i) {
        for (int j = 0; j < coarseN; ++j) {
            grid[static_cast<std::size_t>(i * coarseN + j)] = e2_abs(p, at(i, j));
        }
    }
    auto value = [&](int i, int j) {
        i = (i % coarseN + coarseN) % coarseN;
        j = (j % coarseN + coarseN) % coarseN;
        return grid[static_cast<std::size_t>(i * coarseN + j)];
    };

    RefineReport report;
    for (int i = 0; i < coarseN; ++i) {
        for (int j = 0; j < coarseN; ++j) {
            const double v = value(i, j);
            bool is_min = true;
            for (int di = -1; di <= 1 && is_min; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    if ((di != 0 || dj != 0) && value(i + di, j + dj) < v) {
                        is_min = false;
                        break;
                    }
                }
            }
            if (!is_min) {
                continue;
            }
            const Momentum seed = at(i, j);
            const auto root = newton_refine(p, seed, tol);
            if (!root) {
                report.warnings.push_back("seed (" + std::to_string(seed.kx) + ", " + std::to_string(seed.ky) +
                                          ") did not converge within 50 Newton steps");
                continue;
            }
            BranchSign sign = BranchSign::both;
            if (p.gamma != 0.0) {
                sign = (bloch_field(p, *root).bx * p.gamma > 0.0) ? BranchSign::plus : BranchSign::minus;
            }
            push_unique(report.points, Btp{*root, sign, {}, {}, {}});
        }
    }
    sort_btps(report.points);
    return report;
}

BtpKind classify_btp(const ModelParams& p, const Btp& btp, double w1) {
    const double twice = 2.0 * w1;
    const double n = std::round(twice);
    if (!std::isfinite(w1) || std::abs(twice - n) > 1e-9 || std::abs(n) > 2.0) {
        throw InvalidInput("winding " + std::to_string(w1) + " is not one of 0, +-1/2, +-1");
    }
    if (btp.kind == BtpKind::trivial_isolated_ep || (p.t == 0.0 && p.gamma != 0.0)) {
        if (n != 0.0) {
            throw InvalidInput("trivial isolated EP must carry zero winding");
        }
        return BtpKind::trivial_isolated_ep;
    }
    if (p.gamma == 0.0) {
        if (std::abs(n) == 2.0) {
            return BtpKind::dirac_point;
        }
        if (n == 0.0) {
            return BtpKind::semi_dirac_point;
        }
        throw InvalidInput("half-integer winding at a Hermitian band touching");
    }
    if (std::abs(n) == 1.0) {
        return BtpKind::normal_ep;
    }
    if (n == 0.0) {
        return BtpKind::hybrid_ep;
    }
    throw InvalidInput("integer winding +-1 at a non-Hermitian band touching");
}

EpRing trace_ep_ring(const ModelParams& p, int branch, int samples) {
    p.validate();
    if (p.t != 0.0 || p.gamma == 0.0) {
        throw InvalidInput("exceptional rings exist only for t = 0 and gamma != 0");
    }
    if (branch != 1 && branch != -1) {
        throw InvalidInput("ring branch must be +1 or -1");
    }
    if (samples < 8) {
        throw InvalidInput("ring needs at least 8 samples");
    }
    EpRing ring;
    ring.branch = branch;
    ring.level = branch_level(p, branch);
    const double c = ring.level;
    if (std::abs(c) > 2.0 + 1e-12) {
        return ring;
    }
    if (std::abs(c) >= 2.0 - 1e-12) {
        const double k = c > 0.0 ? 0.0 : kPi;
        ring.vertices.push_back({k, k});
        return ring;
    }

    // Valid kx arc: |c - cos kx| <= 1.
    double lo = 0.0;
    double hi = 0.0;
    if (c >= 0.0) {
        hi = std::acos(c - 1.0);
        lo = -hi;
    } else {
        lo = std::acos(c + 1.0);
        hi = 2.0 * kPi - lo;
    }
    auto solve_ky = [c](double kx) {
        const double target = std::clamp(c - std::cos(kx), -1.0, 1.0);
        double a = 0.0;
        double b = kPi;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            if (mid == a || mid == b) {
                break;
            }
            (std::cos(mid) > target ? a : b) = mid;
        }
        return 0.5 * (a + b);
    };

    const int m = samples / 2 + 1;
    std::vector<Momentum> upper;
    for (int i = 0; i < m; ++i) {
        const double kx = (i == m - 1) ? hi : lo + (hi - lo) * i / (m - 1);
        upper.push_back({kx, solve_ky(kx)});
    }
    for (const Momentum& v : upper) {
        ring.vertices.push_back(v.canonical());
    }
    for (int i = m - 2; i >= 1; --i) {
        ring.vertices.push_back(Momentum{upper[static_cast<std::size_t>(i)].kx, -upper[static_cast<std::size_t>(i)].ky}.canonical());
    }
    return ring;
}

double min_gap(const ModelParams& p, int gridN) {
    p.validate();
    if (gridN < 64) {
        throw InvalidInput("min_gap needs gridN >= 64");
    }
    const double step = 2.0 * kPi / gridN;
    Momentum best{};
    double best_v = std::numeric_limits<double>::infinity();
    for (int i = 0; i < gridN; ++i) {
        for (int j = 0; j < gridN; ++j) {
            const Momentum k{-kPi + step * i, -kPi + step * j};
            const double v = e2_abs(p, k);
            if (v < best_v) {
                best_v = v;
                best = k;
            }
        }
    }
    // Compass search on |E^2|.
    double h = step;
    while (h > 1e-15) {
        bool moved = false;
        for (const auto& d : {std::array{1.0, 0.0}, std::array{-1.0, 0.0}, std::array{0.0, 1.0}, std::array{0.0, -1.0},
                              std::array{1.0, 1.0}, std::array{1.0, -1.0}, std::array{-1.0, 1.0}, std::array{-1.0, -1.0}}) {
            const Momentum k{best.kx + h * d[0], best.ky + h * d[1]};
            const double v = e2_abs(p, k);
            if (v < best_v) {
                best_v = v;
                best = k;
                moved = true;
            }
        }
        if (!moved) {
            h *= 0.5;
        }
    }
    if (const auto root = newton_refine(p, best, std::numeric_limits<double>::infinity())) {
        best_v = std::min(best_v, e2_abs(p, *root));
    }
    return std::sqrt(best_v);
}

} // namespace nhbl
