#include "nhbl/dispersion.hpp"

#include <cmath>
#include <numeric>

#include "nhbl/error.hpp"

namespace nhbl {

std::vector<double> log_spaced(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) {
        throw InvalidInput("log_spaced needs 0 < lo < hi and n >= 2");
    }
    std::vector<double> q(static_cast<std::size_t>(n));
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (int i = 0; i < n; ++i) {
        q[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
    }
    return q;
}

std::vector<double> default_offsets() { return log_spaced(1e-4, 1e-2, 24); }

namespace {

Direction unit(Direction d) {
    const double n = std::hypot(d[0], d[1]);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw InvalidInput("direction must be a nonzero finite vector");
    }
    return {d[0] / n, d[1] / n};
}

} // namespace

DispersionSample sample_dispersion(const ModelParams& p, Momentum origin, Direction direction, std::span<const double> q) {
    p.validate();
    DispersionSample s;
    s.origin = origin;
    s.direction = unit(direction);
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (!(q[i] > 0.0) || (i > 0 && !(q[i] > q[i - 1]))) {
            throw InvalidInput("ray offsets must be positive and strictly increasing");
        }
        const Momentum k{origin.kx + q[i] * s.direction[0], origin.ky + q[i] * s.direction[1]};
        const BlochField f = bloch_field(p, k);
        const double e2 = std::abs(f.energy_squared());
        const double e = std::sqrt(e2);
        const double scale = f.bx * f.bx + f.by_re * f.by_re + f.by_im * f.by_im;
        if (e < 1e-14 || e2 < 1e-12 * scale) {
            throw NumericalError("ray sample at q = " + std::to_string(q[i]) + " hits another band touching");
        }
        s.q.push_back(q[i]);
        s.abs_e.push_back(e);
    }
    return s;
}

PowerLawFit fit_power_law(const DispersionSample& s) {
    const std::size_t n = s.q.size();
    if (n < 8 || s.abs_e.size() != n) {
        throw InvalidInput("power-law fit needs at least 8 samples");
    }
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(s.abs_e[i] > 0.0)) {
            throw InvalidInput("power-law fit: zero energy sample makes the logarithm degenerate");
        }
        x[i] = std::log(s.q[i]);
        y[i] = std::log(s.abs_e[i]);
    }
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    PowerLawFit fit;
    fit.alpha = sxy / sxx;
    fit.prefactor = std::exp(my - fit.alpha * mx);
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (my + fit.alpha * (x[i] - mx));
        ss_res += r * r;
    }
    fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

double prefactor_at(const DispersionSample& s, double alpha) {
    if (s.q.empty()) {
        throw InvalidInput("prefactor_at: empty sample");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < s.q.size(); ++i) {
        acc += std::log(s.abs_e[i]) - alpha * std::log(s.q[i]);
    }
    return std::exp(acc / static_cast<double>(s.q.size()));
}

namespace {

constexpr double kAxisTol = 1e-6;

bool near_angle(double a, double b) { return std::abs(canonical_angle(a - b)) < kAxisTol; }
bool on_half_pi(double k) { return near_angle(k, kPi / 2.0) || near_angle(k, -kPi / 2.0); }
double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }
bool parallel(Direction d, Direction v) { return std::abs(d[0] * v[1] - d[1] * v[0]) < 1e-9; }

// Origin expressed as (k_c, sigma pi/2) with the direction mirrored to
// match when the point sits on a kx = +-pi/2 line.
struct Frame {
    double kc = 0.0;
    double sigma = 1.0;
    Direction d{};
};

std::optional<Frame> frame(Momentum o, Direction d) {
    if (on_half_pi(o.ky)) {
        return Frame{o.kx, sign_of(o.ky), d};
    }
    if (on_half_pi(o.kx)) {
        return Frame{o.ky, sign_of(o.kx), {d[1], d[0]}};
    }
    return std::nullopt;
}

enum class Merge { zero, half_pi, pi, none };

Merge merge_of(double kc) {
    if (near_angle(kc, 0.0)) {
        return Merge::zero;
    }
    if (near_angle(kc, kPi)) {
        return Merge::pi;
    }
    if (on_half_pi(kc)) {
        return Merge::half_pi;
    }
    return Merge::none;
}

double csqrt_abs(cplx z) { return std::abs(std::sqrt(z)); }

// Generic k_c: rays ky = xi kx when |dx| >= |dy|, kx = -xi ky otherwise.
ExpectedDispersion generic_case(BtpKind kind, const Frame& f, const ModelParams& p) {
    const double J = p.J, t = p.t, g = p.gamma, s = f.sigma;
    const double sk = std::sin(f.kc), ck = std::cos(f.kc);
    const double onsite = p.T + 2.0 * J * ck; // equals +-gamma at an EP
    const bool along_x = std::abs(f.d[0]) >= std::abs(f.d[1]);
    const double xi = along_x ? f.d[1] / f.d[0] : -f.d[0] / f.d[1];
    const double comp = along_x ? std::abs(f.d[0]) : std::abs(f.d[1]);
    const cplx i{0.0, 1.0};
    ExpectedDispersion e;
    if (kind == BtpKind::normal_ep) {
        e.alpha = 0.5;
        const cplx inner = along_x ? -J * onsite * (sk + s * xi) - s * 2.0 * i * g * t * xi * ck
                                   : J * onsite * (xi * sk - s) - s * 2.0 * i * g * t * ck;
        e.prefactor = 2.0 * csqrt_abs(inner) * std::sqrt(comp);
        e.case_id = along_x ? "normal-ep:ky=xi*kx" : "normal-ep:kx=-xi*ky";
    } else {
        e.alpha = 1.0;
        const double inner = along_x ? J * J * (sk + s * xi) * (sk + s * xi) + 4.0 * t * t * xi * xi * ck * ck
                                     : J * J * (xi * sk - s) * (xi * sk - s) + 4.0 * t * t * ck * ck;
        e.prefactor = 2.0 * std::sqrt(inner) * comp;
        e.case_id = along_x ? "dirac:ky=xi*kx" : "dirac:kx=-xi*ky";
    }
    return e;
}

} // namespace

std::optional<ExpectedDispersion> expected_dispersion(BtpKind kind, Momentum origin, Direction direction,
                                                      const ModelParams& p) {
    const Direction d = unit(direction);
    const double J = p.J, T = p.T, t = p.t, g = p.gamma;
    const cplx i{0.0, 1.0};

    // Points on both lines: k_c = pi/2 merger at (l1 pi/2, l2 pi/2).
    if (on_half_pi(origin.kx) && on_half_pi(origin.ky)) {
        const double l1 = sign_of(origin.kx), l2 = sign_of(origin.ky);
        const Direction diag{1.0, l1 * l2};
        const Direction anti{1.0, -l1 * l2};
        const double dx = std::abs(d[0]);
        if (kind == BtpKind::hybrid_ep) {
            if (parallel(d, diag)) {
                return ExpectedDispersion{0.5, 2.0 * csqrt_abs(-2.0 * l1 * J * T) * std::sqrt(dx), "hybrid-pi/2:diagonal"};
            }
            if (parallel(d, anti)) {
                return ExpectedDispersion{1.0, 2.0 * csqrt_abs(-2.0 * i * g * t) * dx, "hybrid-pi/2:antidiagonal"};
            }
        } else if (kind == BtpKind::semi_dirac_point) {
            if (parallel(d, diag)) {
                return ExpectedDispersion{1.0, 4.0 * std::abs(J) * dx, "semi-dirac-pi/2:diagonal"};
            }
            if (parallel(d, anti)) {
                return ExpectedDispersion{2.0, 4.0 * std::abs(t) * dx * dx, "semi-dirac-pi/2:antidiagonal"};
            }
        }
        return std::nullopt;
    }

    const auto f = frame(origin, d);
    if (!f) {
        return std::nullopt;
    }
    const Merge m = merge_of(f->kc);
    const double s = f->sigma;
    const bool along_ky = parallel(f->d, {0.0, 1.0}); // the "kx = 0" closed form
    const bool along_kx = parallel(f->d, {1.0, 0.0}); // the "ky = 0" closed form

    switch (kind) {
    case BtpKind::normal_ep:
    case BtpKind::dirac_point:
        if (m != Merge::none) {
            return std::nullopt;
        }
        return generic_case(kind, *f, p);
    case BtpKind::hybrid_ep:
        if (m == Merge::zero) {
            if (along_ky) {
                return ExpectedDispersion{0.5, 2.0 * csqrt_abs(-s * (J * T + 2.0 * J * J + 2.0 * i * g * t)), "hybrid-0:kx=0"};
            }
            if (along_kx) {
                return ExpectedDispersion{1.0, std::sqrt(std::abs(-2.0 * J * T - 4.0 * J * J)), "hybrid-0:ky=0"};
            }
        } else if (m == Merge::pi) {
            if (along_ky) {
                return ExpectedDispersion{0.5, 2.0 * csqrt_abs(s * (-J * T + 2.0 * J * J + 2.0 * i * g * t)), "hybrid-pi:kx=0"};
            }
            if (along_kx) {
                return ExpectedDispersion{1.0, std::sqrt(std::abs(2.0 * J * T - 4.0 * J * J)), "hybrid-pi:ky=0"};
            }
        }
        return std::nullopt;
    case BtpKind::semi_dirac_point:
        if (m == Merge::zero || m == Merge::pi) {
            const std::string tag = m == Merge::zero ? "semi-dirac-0" : "semi-dirac-pi";
            if (along_ky) {
                return ExpectedDispersion{1.0, 2.0 * std::sqrt(J * J + 4.0 * t * t), tag + ":kx=0"};
            }
            if (along_kx) {
                return ExpectedDispersion{2.0, std::abs(J), tag + ":ky=0"};
            }
        }
        return std::nullopt;
    case BtpKind::trivial_isolated_ep:
        return std::nullopt;
    }
    return std::nullopt;
}

std::vector<Direction> case_directions(BtpKind kind, Momentum o) {
    const double r = 1.0 / std::sqrt(2.0);
    if (kind == BtpKind::hybrid_ep || kind == BtpKind::semi_dirac_point) {
        if (on_half_pi(o.kx) && on_half_pi(o.ky)) {
            const double l = sign_of(o.kx) * sign_of(o.ky);
            return {Direction{r, l * r}, Direction{r, -l * r}};
        }
        return {Direction{1.0, 0.0}, Direction{0.0, 1.0}};
    }
    if (kind == BtpKind::trivial_isolated_ep) {
        return {};
    }
    std::vector<Direction> out;
    for (int i = 0; i < 8; ++i) {
        const double a = 2.0 * kPi * (i + 0.3) / 8.0;
        out.push_back({std::cos(a), std::sin(a)});
    }
    return out;
}

bool RayReport::passes() const {
    if (!expected) {
        return false;
    }
    const double alpha_tol = expected->alpha == 2.0 ? 0.05 : 0.02;
    return std::abs(fit.alpha - expected->alpha) < alpha_tol && fit.r2 >= 0.999 &&
           std::abs(fixed_prefactor / expected->prefactor - 1.0) < 0.01;
}

RayReport analyze_ray(const ModelParams& p, const Btp& btp, Direction direction, std::span<const double> q) {
    if (!btp.kind) {
        throw InvalidInput("analyze_ray needs a classified band touching");
    }
    RayReport r;
    r.origin = btp.k;
    r.kind = *btp.kind;
    const DispersionSample s = sample_dispersion(p, btp.k, direction, q);
    r.direction = s.direction;
    r.fit = fit_power_law(s);
    r.expected = expected_dispersion(r.kind, btp.k, s.direction, p);
    r.fixed_prefactor = prefactor_at(s, r.expected ? r.expected->alpha : r.fit.alpha);
    return r;
}

} // namespace nhbl
