#pragma once

#include <array>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace nhbl {

using cplx = std::complex<double>;
using Spinor = std::array<cplx, 2>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kDefaultTolEp = 1e-9;

/// Couplings of the bilayer lattice. All energies are in units of J.
///
/// J: intralayer nearest-neighbour hopping, T: interlayer hopping,
/// t: staggered diagonal coupling, gamma: balanced gain/loss.
struct ModelParams {
    double J = 1.0;
    double T = 0.0;
    double t = 0.0;
    double gamma = 0.0;
    double tol_ep = kDefaultTolEp;

    /// Throws InvalidInput unless J != 0 and every field is finite.
    void validate() const;

    [[nodiscard]] ModelParams with_gamma(double g) const {
        ModelParams p = *this;
        p.gamma = g;
        return p;
    }
};

/// Validated construction.
ModelParams make_params(double J, double T, double t, double gamma);

/// Maps an angle onto (-pi, pi].
double canonical_angle(double k);

struct Momentum {
    double kx = 0.0;
    double ky = 0.0;

    [[nodiscard]] Momentum canonical() const { return {canonical_angle(kx), canonical_angle(ky)}; }
};

/// Shortest distance between two momenta on the Brillouin-zone torus.
double torus_distance(Momentum a, Momentum b);

/// B(k) = (Bx, By) with By = by_re + i by_im.
struct BlochField {
    double bx = 0.0;
    double by_re = 0.0;
    double by_im = 0.0;

    [[nodiscard]] cplx by() const { return {by_re, by_im}; }
    /// Bx^2 + By^2, the square of the band energy.
    [[nodiscard]] cplx energy_squared() const;
};

/// Traceless Bloch matrix h = Bx sigma_x + By sigma_z, stored row-major
/// as [[By, Bx], [Bx, -By]].
struct BlochMatrix {
    std::array<cplx, 4> m{};

    [[nodiscard]] cplx operator()(int row, int col) const { return m[static_cast<std::size_t>(2 * row + col)]; }
    [[nodiscard]] cplx trace() const { return m[0] + m[3]; }
    /// Largest entry magnitude.
    [[nodiscard]] double max_abs() const;
};

BlochField bloch_field(const ModelParams& params, Momentum k);
BlochMatrix bloch_matrix(const BlochField& field);

/// Entrywise maximum deviation between two matrices.
double max_deviation(const BlochMatrix& a, const BlochMatrix& b);

enum class Branch { plus, minus };

inline Branch opposite(Branch b) { return b == Branch::plus ? Branch::minus : Branch::plus; }

/// Analytic eigensystem of a traceless 2x2 Bloch matrix.
///
/// E+ is the principal square root of Bx^2 + By^2 (non-negative real part,
/// non-negative imaginary part on the imaginary axis) and E- = -E+.
/// At an exceptional point both vectors are the single Jordan eigenvector
/// proportional to (Bx, -By) and `defective` is set. At a diabolic point
/// (h = 0) the canonical basis is returned and `degenerate` is set instead.
///
/// The tolerance is applied to |E|^2 = |Bx^2 + By^2|: at a rounded EP
/// momentum |E|^2 carries an O(1e-16) error, so |E| itself cannot be
/// resolved below ~1e-8.
struct EigenSystem {
    cplx e_plus;
    cplx e_minus;
    Spinor psi_plus{};
    Spinor psi_minus{};
    bool defective = false;
    bool degenerate = false;

    [[nodiscard]] cplx energy(Branch b) const { return b == Branch::plus ? e_plus : e_minus; }
    [[nodiscard]] const Spinor& vector(Branch b) const { return b == Branch::plus ? psi_plus : psi_minus; }
};

EigenSystem eigensystem(const BlochMatrix& h, double tol_ep = kDefaultTolEp);

/// Planar fields at one momentum for one band: F = (<sigma_x>, <sigma_z>)
/// and E = (Re E, Im E). Expectation values use the Hermitian inner
/// product with the normalized right eigenvector.
struct Observables {
    double fx = 0.0;
    double fy = 0.0;
    double sigma_y = 0.0;
    double ex = 0.0;
    double ey = 0.0;
};

/// (<sigma_x>, <sigma_z>, <sigma_y>) of a normalized spinor, packed into
/// fx, fy, sigma_y; ex and ey are left zero.
Observables expectation(const Spinor& psi);
Observables observables(const EigenSystem& e, Branch branch);

double norm(const Spinor& psi);
/// |<a|b>| under the Hermitian inner product.
double overlap(const Spinor& a, const Spinor& b);

// ---------------------------------------------------------------------------
// Symmetry checks

using FieldFunction = std::function<BlochField(Momentum)>;

struct SymmetryResidual {
    std::string relation;
    double max_residual = 0.0;
};

/// Maximum of |h(k) - h(R k)| over a gridN x gridN Brillouin-zone grid
/// for the eight point-group momentum relations of the lattice, followed
/// by the chiral residual max ||sigma_y h sigma_y + h||. Nine rows in all.
std::vector<SymmetryResidual> symmetry_residuals(const ModelParams& params, int gridN);
std::vector<SymmetryResidual> symmetry_residuals(const FieldFunction& field, int gridN);

/// True iff every eigenvalue on the grid is purely real or purely
/// imaginary to within `tol`.
bool spectral_reality(const ModelParams& params, int gridN, double tol);

/// Midpoint grid of gridN x gridN momenta over (-pi, pi]^2.
std::vector<Momentum> bz_grid(int gridN);

} // namespace nhbl
