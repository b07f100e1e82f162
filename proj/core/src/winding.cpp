#include "nhbl/winding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nhbl/error.hpp"

namespace nhbl {

std::string_view to_string(FieldKind f) { return f == FieldKind::F ? "F" : "E"; }

void Loop::validate() const {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw InvalidInput("loop radius must be positive");
    }
    if (samples < 256) {
        throw InvalidInput("loop needs at least 256 samples");
    }
}

Loop make_loop(Momentum center, std::span<const Btp> all, int samples) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const Btp& b : all) {
        const double d = torus_distance(center, b.k);
        if (d > 1e-6) {
            nearest = std::min(nearest, d);
        }
    }
    const double radius = std::min(0.4 * nearest, kMaxLoopRadius);
    if (radius < 1e-4) {
        throw NumericalError("loop radius " + std::to_string(radius) +
                             " below 1e-4: band touchings are unresolved, check for a merger");
    }
    Loop loop{center, radius, samples};
    loop.validate();
    return loop;
}

namespace {

constexpr int kMaxSamples = 1 << 16;
constexpr double kQuantizationTol = 0.05;

struct Walk {
    bool needs_refinement = false;
    double total_angle = 0.0;
    bool swapped = false;
};

double field_angle(const EigenSystem& e, Branch b, FieldKind field) {
    const Observables o = observables(e, b);
    const double x = field == FieldKind::F ? o.fx : o.ex;
    const double y = field == FieldKind::F ? o.fy : o.ey;
    if (std::hypot(x, y) < 1e-10) {
        throw LoopThroughDefect("planar field vanishes on the loop; it passes through a band-touching point");
    }
    return std::atan2(y, x);
}

Walk walk(const ModelParams& p, const Loop& loop, FieldKind field, Branch start) {
    Walk w;
    const int m = loop.samples;
    auto sample = [&](int i) {
        const double theta = 2.0 * kPi * i / m;
        const Momentum k{loop.center.kx + loop.radius * std::cos(theta), loop.center.ky + loop.radius * std::sin(theta)};
        const EigenSystem e = eigensystem(bloch_matrix(bloch_field(p, k)), p.tol_ep);
        if (e.defective || e.degenerate) {
            throw LoopThroughDefect("loop passes through a band-touching point");
        }
        return e;
    };

    const EigenSystem first = sample(0);
    Branch branch = start;
    Spinor prev = first.vector(branch);
    double prev_angle = field_angle(first, branch, field);

    for (int i = 1; i <= m; ++i) {
        const EigenSystem e = (i == m) ? first : sample(i);
        const double o_same = overlap(prev, e.vector(branch));
        const double o_other = overlap(prev, e.vector(opposite(branch)));
        if (std::abs(o_same - o_other) < 1e-12) {
            throw LoopThroughDefect("eigenvector overlaps tie; the loop runs through a degeneracy");
        }
        if (o_other > o_same) {
            branch = opposite(branch);
        }
        if (std::max(o_same, o_other) < 0.99) {
            w.needs_refinement = true;
            return w;
        }
        prev = e.vector(branch);
        const double angle = field_angle(e, branch, field);
        const double delta = canonical_angle(angle - prev_angle);
        if (std::abs(delta) > kPi / 2.0) {
            w.needs_refinement = true;
            return w;
        }
        w.total_angle += delta;
        prev_angle = angle;
    }
    // Back at the starting momentum: which band are we on?
    w.swapped = branch != start;
    return w;
}

} // namespace

WindingResult winding_number(const ModelParams& p, const Loop& loop, FieldKind field, Branch start) {
    p.validate();
    loop.validate();
    Loop current = loop;
    while (true) {
        const Walk w = walk(p, current, field, start);
        if (!w.needs_refinement) {
            WindingResult r;
            r.raw = w.total_angle / (2.0 * kPi);
            r.value = std::round(2.0 * r.raw) / 2.0;
            r.residual = std::abs(r.raw - r.value);
            r.field = field;
            r.branch_swapped = w.swapped;
            r.loop = current;
            if (r.value == 0.0) {
                r.value = 0.0; // no negative zero in reports
            }
            if (r.residual >= kQuantizationTol) {
                throw NumericalError("winding not quantized: raw " + std::to_string(r.raw));
            }
            return r;
        }
        if (current.samples >= kMaxSamples) {
            throw NumericalError("winding refinement cap exceeded (2^16 samples) around (" +
                                 std::to_string(loop.center.kx) + ", " + std::to_string(loop.center.ky) + ")");
        }
        current.samples *= 2;
    }
}

AdditivityReport winding_additivity(const ModelParams& p, std::span<const Btp> btps, const Loop& big) {
    AdditivityReport rep;
    rep.big_w1 = winding_number(p, big, FieldKind::F).value;
    rep.big_w2 = winding_number(p, big, FieldKind::E).value;
    for (const Btp& b : btps) {
        if (torus_distance(b.k, big.center) >= big.radius) {
            continue;
        }
        ++rep.enclosed;
        const Loop small = make_loop(b.k, btps, big.samples);
        rep.sum_w1 += winding_number(p, small, FieldKind::F).value;
        rep.sum_w2 += winding_number(p, small, FieldKind::E).value;
    }
    rep.holds = std::abs(rep.big_w1 - rep.sum_w1) < kQuantizationTol && std::abs(rep.big_w2 - rep.sum_w2) < kQuantizationTol;
    return rep;
}

} // namespace nhbl
