#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nhbl/bloch.hpp"
#include "nhbl/btp.hpp"

namespace nhbl {

using Direction = std::array<double, 2>;

/// |E+| sampled along a ray origin + q * direction, q in radians of arc
/// length.
struct DispersionSample {
    std::vector<double> q;
    std::vector<double> abs_e;
    Direction direction{1.0, 0.0};
    Momentum origin;
};

/// n log-spaced offsets in [lo, hi].
std::vector<double> log_spaced(double lo, double hi, int n);

/// Default offsets: 24 log-spaced points in [1e-4, 1e-2].
std::vector<double> default_offsets();

/// Samples the exact band energy (never the expansion). `direction` is
/// normalized here; a zero vector is rejected. Offsets must be strictly
/// increasing and positive. Throws NumericalError when a sample lands on
/// another band touching: |E| < 1e-14 (a diabolic point), or
/// |E^2| < 1e-12 |B|^2 (an exceptional point, where rounding leaves
/// |E| near 1e-8).
DispersionSample sample_dispersion(const ModelParams& params, Momentum origin, Direction direction,
                                   std::span<const double> q);

struct PowerLawFit {
    double alpha = 0.0;
    double prefactor = 0.0;
    double r2 = 0.0;
};

/// Least squares of log|E| on log q. Needs >= 8 points, all |E| > 0.
PowerLawFit fit_power_law(const DispersionSample& sample);

/// exp(mean(log|E| - alpha log q)): the prefactor with the exponent held
/// at `alpha`.
double prefactor_at(const DispersionSample& sample, double alpha);

/// Leading-order exponent and arc-length prefactor near a band touching.
///
/// Closed forms come from expanding B(k) to second order around
/// (k_c, +-pi/2); points on the kx = +-pi/2 lines use the kx <-> ky mirror.
/// The expansions are written per unit of the kx (or ky) offset along
/// rays ky = xi kx (or kx = -xi ky); they are rescaled to arc length by
/// |component|^alpha of the unit direction.
struct ExpectedDispersion {
    double alpha = 0.0;
    double prefactor = 0.0;
    std::string case_id;
};

/// std::nullopt for an unsupported (kind, origin, direction) combination.
std::optional<ExpectedDispersion> expected_dispersion(BtpKind kind, Momentum origin, Direction direction,
                                                      const ModelParams& params);

/// Directions with closed forms at a point: the two distinguished axes for
/// merged points (hybrid EP, semi-Dirac point), and eight fixed directions
/// otherwise.
std::vector<Direction> case_directions(BtpKind kind, Momentum origin);

struct RayReport {
    Momentum origin;
    Direction direction{};
    BtpKind kind = BtpKind::normal_ep;
    PowerLawFit fit;
    double fixed_prefactor = 0.0; ///< prefactor_at(expected alpha)
    std::optional<ExpectedDispersion> expected;

    /// Exponent within 0.02 (0.05 for quadratic), r2 >= 0.999, prefactor
    /// within 1%.
    [[nodiscard]] bool passes() const;
};

RayReport analyze_ray(const ModelParams& params, const Btp& btp, Direction direction,
                      std::span<const double> q);

} // namespace nhbl
