#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nhbl/bloch.hpp"

namespace nhbl {

enum class BtpKind { dirac_point, semi_dirac_point, normal_ep, hybrid_ep, trivial_isolated_ep };

std::string_view to_string(BtpKind kind);

/// Which of the two level values c = (-T +- gamma)/(2J) produced a point.
/// `both` marks the Hermitian case where the two coincide.
enum class BranchSign { plus = 1, minus = -1, both = 0 };

std::string_view to_string(BranchSign b);

/// A band-touching point. Kind and windings are filled in by the
/// classification pipeline; locate_btps only sets them for trivial
/// isolated points.
struct Btp {
    Momentum k;
    BranchSign branch = BranchSign::both;
    std::optional<BtpKind> kind;
    std::optional<double> w1;
    std::optional<double> w2;
};

/// c_s = (-T + s gamma) / (2J) for s = +1 or -1.
double branch_level(const ModelParams& params, int s);

/// True for t = 0 and |gamma| = |T - 4J| or |T + 4J| (to `tol`), where an
/// exceptional ring collapses to a single momentum.
bool is_trivial_isolated(const ModelParams& params, double tol = 1e-12);

/// Analytic band-touching points, sorted by (kx, ky).
///
/// For every branch with |c_s| <= 1 the points (+-k_c, +-pi/2) and
/// (+-pi/2, +-k_c) with k_c = arccos(c_s) are emitted, deduplicated on the
/// torus. Mergers at k_c in {0, pi/2, pi} are detected from c_s itself so
/// the counts do not depend on a distance tolerance.
///
/// For t = 0 the touchings form rings (exceptional rings, or the nodal
/// line when gamma = 0): RingRegime is thrown while a ring exists, unless
/// the parameters sit on a trivial isolated point, which is then returned
/// (with kind set when gamma != 0). With no ring the list is empty.
std::vector<Btp> locate_btps(const ModelParams& params);

struct RefineReport {
    std::vector<Btp> points;
    std::vector<std::string> warnings;
};

/// Grid scan for local minima of |E^2| followed by damped Newton
/// refinement. For gamma != 0 the residual is (Re E^2, Im E^2); in the
/// Hermitian case E^2 = |B|^2 has a double zero and (Bx, Re By) is solved
/// instead. Seeds that do not converge in 50 steps are dropped with a
/// warning.
RefineReport refine_btps_numeric(const ModelParams& params, int coarseN = 64, double tol = 1e-12);

/// Kind from the F-field winding. Throws InvalidInput when w1 is not one
/// of 0, +-1/2, +-1 or is incompatible with gamma.
BtpKind classify_btp(const ModelParams& params, const Btp& btp, double w1);

struct EpRing {
    std::vector<Momentum> vertices; ///< closed polyline, first vertex not repeated
    int branch = 1;
    double level = 0.0; ///< c in cos kx + cos ky = c

    [[nodiscard]] bool empty() const { return vertices.empty(); }
};

/// Level set cos kx + cos ky = c_branch for t = 0, marching kx uniformly
/// over the valid arc and bisecting for ky. |c| > 2 gives an empty ring
/// and |c| = 2 a single vertex.
EpRing trace_ep_ring(const ModelParams& params, int branch, int samples = 512);

/// min |E+| over a gridN x gridN grid refined by local descent from the
/// best cell.
double min_gap(const ModelParams& params, int gridN = 128);

/// Lexicographic (kx, ky) order with a small tie tolerance.
bool momentum_less(Momentum a, Momentum b);

} // namespace nhbl
