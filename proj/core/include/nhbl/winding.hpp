#pragma once

#include <span>
#include <string_view>

#include "nhbl/bloch.hpp"
#include "nhbl/btp.hpp"

namespace nhbl {

enum class FieldKind { F, E };

std::string_view to_string(FieldKind f);

/// Counterclockwise circle k(theta) = center + radius (cos theta, sin theta)
/// sampled at `samples` points, wrapped onto the torus.
struct Loop {
    Momentum center;
    double radius = 0.1;
    int samples = 512;

    void validate() const;
};

inline constexpr double kMaxLoopRadius = 0.1;
inline constexpr int kDefaultLoopSamples = 512;

/// Loop around `center` with radius min(0.4 x distance to the nearest other
/// BTP, 0.1); points within 1e-6 of the center count as the center.
/// Throws NumericalError when the radius would fall below 1e-4, which
/// means two touchings are unresolved and a merger check is needed.
Loop make_loop(Momentum center, std::span<const Btp> all, int samples = kDefaultLoopSamples);

struct WindingResult {
    double value = 0.0;    ///< snapped to a multiple of 1/2
    double raw = 0.0;      ///< accumulated angle / 2 pi
    double residual = 0.0; ///< |raw - value|
    FieldKind field = FieldKind::F;
    bool branch_swapped = false; ///< tracked band came back as the other band
    Loop loop;                   ///< samples reflect any refinement
};

/// Winding of F = (<sigma_x>, <sigma_z>) or E = (Re E, Im E) around a loop.
///
/// One band is followed continuously by maximal eigenvector overlap with
/// the previous sample and the wrapped angle increments of its planar field
/// are summed. If an increment exceeds pi/2, or the best overlap drops
/// below 0.99, the sample count doubles (up to 2^16) and the walk restarts.
///
/// Throws LoopThroughDefect when the field vanishes on the loop or the two
/// bands cannot be told apart, and NumericalError when refinement runs out
/// or the result is not quantized to within 0.05.
WindingResult winding_number(const ModelParams& params, const Loop& loop, FieldKind field,
                             Branch start = Branch::plus);

struct AdditivityReport {
    bool holds = false;
    double big_w1 = 0.0;
    double big_w2 = 0.0;
    double sum_w1 = 0.0;
    double sum_w2 = 0.0;
    std::size_t enclosed = 0;
};

/// Compares the winding around `big` with the sum of single-point windings
/// of the enclosed BTPs, for both fields.
AdditivityReport winding_additivity(const ModelParams& params, std::span<const Btp> btps, const Loop& big);

inline bool winding_additivity_check(const ModelParams& params, std::span<const Btp> btps, const Loop& big) {
    return winding_additivity(params, btps, big).holds;
}

} // namespace nhbl
