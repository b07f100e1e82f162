#include "nhbl/bloch.hpp"

#include <algorithm>
#include <cmath>

#include "nhbl/error.hpp"

namespace nhbl {

void ModelParams::validate() const {
    if (!std::isfinite(J) || !std::isfinite(T) || !std::isfinite(t) || !std::isfinite(gamma)) {
        throw InvalidInput("model couplings must be finite");
    }
    if (J == 0.0) {
        throw InvalidInput("J sets the energy unit and must be nonzero");
    }
    if (!(tol_ep > 0.0) || !std::isfinite(tol_ep)) {
        throw InvalidInput("tol_ep must be positive and finite");
    }
}

ModelParams make_params(double J, double T, double t, double gamma) {
    ModelParams p{J, T, t, gamma, kDefaultTolEp};
    p.validate();
    return p;
}

double canonical_angle(double k) {
    double r = std::remainder(k, 2.0 * kPi); // [-pi, pi]
    if (r <= -kPi) {
        r += 2.0 * kPi;
    }
    return r;
}

double torus_distance(Momentum a, Momentum b) {
    const double dx = canonical_angle(a.kx - b.kx);
    const double dy = canonical_angle(a.ky - b.ky);
    return std::hypot(dx, dy);
}

cplx BlochField::energy_squared() const {
    const cplx b = by();
    return bx * bx + b * b;
}

double BlochMatrix::max_abs() const {
    double r = 0.0;
    for (const auto& z : m) {
        r = std::max(r, std::abs(z));
    }
    return r;
}

BlochField bloch_field(const ModelParams& p, Momentum k) {
    const double cx = std::cos(k.kx);
    const double cy = std::cos(k.ky);
    return {2.0 * p.J * (cx + cy) + p.T, 4.0 * p.t * cx * cy, p.gamma};
}

BlochMatrix bloch_matrix(const BlochField& f) {
    const cplx by = f.by();
    const cplx bx{f.bx, 0.0};
    return {{by, bx, bx, -by}};
}

double max_deviation(const BlochMatrix& a, const BlochMatrix& b) {
    double r = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        r = std::max(r, std::abs(a.m[i] - b.m[i]));
    }
    return r;
}

double norm(const Spinor& psi) { return std::sqrt(std::norm(psi[0]) + std::norm(psi[1])); }

double overlap(const Spinor& a, const Spinor& b) { return std::abs(std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1]); }

namespace {

cplx principal_sqrt(cplx z) {
    cplx s = std::sqrt(z);
    if (s.real() < 0.0 || (s.real() == 0.0 && s.imag() < 0.0)) {
        s = -s;
    }
    return s;
}

Spinor normalized(const Spinor& v) {
    const double n = norm(v);
    return {v[0] / n, v[1] / n};
}

// Eigenvector of [[By, Bx], [Bx, -By]] for eigenvalue e. Both rows give a
// candidate; the larger one is the better conditioned.
Spinor eigenvector(cplx bx, cplx by, cplx e) {
    const Spinor from_row0{bx, e - by};
    const Spinor from_row1{e + by, bx};
    return normalized(norm(from_row0) >= norm(from_row1) ? from_row0 : from_row1);
}

} // namespace

EigenSystem eigensystem(const BlochMatrix& h, double tol_ep) {
    const cplx by = h(0, 0);
    const cplx bx = h(0, 1);
    const cplx e2 = bx * bx + by * by;
    const double scale = h.max_abs();

    EigenSystem out;
    out.e_plus = principal_sqrt(e2);
    out.e_minus = -out.e_plus;

    if (scale <= tol_ep) {
        out.degenerate = true;
        out.psi_plus = {1.0, 0.0};
        out.psi_minus = {0.0, 1.0};
        return out;
    }
    if (std::abs(e2) < tol_ep) {
        out.defective = true;
        out.psi_plus = eigenvector(bx, by, 0.0);
        out.psi_minus = out.psi_plus;
        return out;
    }
    out.psi_plus = eigenvector(bx, by, out.e_plus);
    out.psi_minus = eigenvector(bx, by, out.e_minus);
    return out;
}

Observables expectation(const Spinor& psi) {
    const cplx a = psi[0];
    const cplx b = psi[1];
    const cplx ab = std::conj(a) * b;
    Observables o;
    o.fx = 2.0 * ab.real();
    o.fy = std::norm(a) - std::norm(b);
    o.sigma_y = 2.0 * ab.imag();
    return o;
}

Observables observables(const EigenSystem& e, Branch branch) {
    Observables o = expectation(e.vector(branch));
    const cplx E = e.energy(branch);
    o.ex = E.real();
    o.ey = E.imag();
    return o;
}

std::vector<Momentum> bz_grid(int gridN) {
    std::vector<Momentum> g;
    g.reserve(static_cast<std::size_t>(gridN) * static_cast<std::size_t>(gridN));
    const double step = 2.0 * kPi / gridN;
    for (int i = 0; i < gridN; ++i) {
        for (int j = 0; j < gridN; ++j) {
            g.push_back({-kPi + (i + 0.5) * step, -kPi + (j + 0.5) * step});
        }
    }
    return g;
}

std::vector<SymmetryResidual> symmetry_residuals(const FieldFunction& field, int gridN) {
    if (gridN < 4) {
        throw InvalidInput("symmetry grid must be at least 4x4");
    }
    struct Relation {
        const char* id;
        Momentum (*map)(Momentum);
    };
    static constexpr Relation relations[] = {
        {"identity", [](Momentum k) { return k; }},
        {"(-kx,-ky)", [](Momentum k) { return Momentum{-k.kx, -k.ky}; }},
        {"(-kx,ky)", [](Momentum k) { return Momentum{-k.kx, k.ky}; }},
        {"(kx,-ky)", [](Momentum k) { return Momentum{k.kx, -k.ky}; }},
        {"(ky,kx)", [](Momentum k) { return Momentum{k.ky, k.kx}; }},
        {"(-ky,-kx)", [](Momentum k) { return Momentum{-k.ky, -k.kx}; }},
        {"(ky,-kx)", [](Momentum k) { return Momentum{k.ky, -k.kx}; }},
        {"(-ky,kx)", [](Momentum k) { return Momentum{-k.ky, k.kx}; }},
    };

    std::vector<SymmetryResidual> out;
    for (const auto& r : relations) {
        out.push_back({r.id, 0.0});
    }
    out.push_back({"chiral", 0.0});

    for (const Momentum& k : bz_grid(gridN)) {
        const BlochMatrix h = bloch_matrix(field(k));
        for (std::size_t i = 0; i < std::size(relations); ++i) {
            const BlochMatrix hr = bloch_matrix(field(relations[i].map(k)));
            out[i].max_residual = std::max(out[i].max_residual, max_deviation(h, hr));
        }
        // sigma_y h sigma_y with sigma_y = [[0,-i],[i,0]] maps [[a,b],[c,d]] to [[d,-c],[-b,a]].
        const BlochMatrix conj{{h(1, 1), -h(1, 0), -h(0, 1), h(0, 0)}};
        BlochMatrix sum;
        for (std::size_t i = 0; i < 4; ++i) {
            sum.m[i] = conj.m[i] + h.m[i];
        }
        out.back().max_residual = std::max(out.back().max_residual, sum.max_abs());
    }
    return out;
}

std::vector<SymmetryResidual> symmetry_residuals(const ModelParams& params, int gridN) {
    params.validate();
    return symmetry_residuals([&params](Momentum k) { return bloch_field(params, k); }, gridN);
}

bool spectral_reality(const ModelParams& params, int gridN, double tol) {
    params.validate();
    for (const Momentum& k : bz_grid(gridN)) {
        const cplx e = principal_sqrt(bloch_field(params, k).energy_squared());
        if (std::min(std::abs(e.real()), std::abs(e.imag())) >= tol) {
            return false;
        }
    }
    return true;
}

} // namespace nhbl
