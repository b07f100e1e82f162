#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nhbl/bloch.hpp"
#include "nhbl/btp.hpp"

namespace nhbl {

struct FieldSample {
    Momentum k;
    double fx = 0.0;
    double fy = 0.0;
};

/// F = (<sigma_x>, <sigma_z>) of one band on the n x n midpoint grid of
/// bz_grid, row-major in kx.
std::vector<FieldSample> sample_f_field(const ModelParams& params, int n, Branch branch = Branch::plus);

struct SvgOptions {
    int density_grid = 128; ///< background |F|^2 cells per side
    int arrow_grid = 32;    ///< arrows per side
    int size_px = 640;
};

/// Static SVG 1.1 figure: |F|^2 density over the Brillouin zone, the
/// subsampled F arrow field on top, and the band touchings as open
/// circles.
std::string render_field_svg(const ModelParams& params, const std::vector<Btp>& btps, const SvgOptions& options = {});

/// kx,ky,Fx,Fy with a header row.
void write_field_csv(std::ostream& out, const std::vector<FieldSample>& samples);

} // namespace nhbl
