#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "nhbl/bloch.hpp"

namespace nhbl {

/// Number of unit cells per direction of the periodic N x N bilayer.
/// N must be even (the (-1)^(j+l) staggering has to close under the
/// periodic wrap) and at least 4.
class LatticeSize {
public:
    explicit LatticeSize(int n);
    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] int sites() const { return 2 * n_ * n_; }

    /// Dense index of site (layer, j, l) with layer in {1,2}, j,l in 1..N.
    [[nodiscard]] int index(int layer, int j, int l) const;

private:
    int n_;
};

using ComplexMatrix = Eigen::MatrixXcd;

/// Real-space Hamiltonian of the bilayer with periodic boundaries:
/// nearest-neighbour J within each layer, staggered diagonal couplings
/// t(-1)^(layer+j+l) to (j+1, l+-1), on-site i gamma (-1)^(layer+j+l),
/// and interlayer T between equal (j, l). J = 0 is allowed here.
ComplexMatrix build_realspace(const ModelParams& params, const LatticeSize& size);

/// Columns are the plane-wave states |phi(k)>_A, |phi(k)>_B for
/// k = (2 pi nx / N, 2 pi ny / N). Column 2*(nx*N + ny) holds the A state,
/// column 2*(nx*N + ny) + 1 the B state. Sublattice A at (j, l) lives in
/// layer [3 + (-1)^(j+l)]/2, sublattice B in the other layer.
ComplexMatrix build_momentum_basis(const LatticeSize& size);

/// Momentum of block b (0 <= b < N*N) in the basis above.
Momentum block_momentum(const LatticeSize& size, int block);

struct BlockCheck {
    double offblock = 0.0; ///< largest |element| outside the 2x2 k-blocks of U^dagger H U
    double blockdev = 0.0; ///< largest deviation of a block from h(k)
    bool swapped = false;  ///< true when the (B, A) ordering matched better
    std::vector<BlochMatrix> blocks;
};

/// Transforms H into the momentum basis and compares every 2x2 block with
/// bloch_matrix(bloch_field(params, k)). The (A, B) ordering is the
/// documented one; the (B, A) reading is also evaluated and the better of
/// the two is reported with `swapped` set accordingly.
BlockCheck block_check(const ComplexMatrix& H, const ComplexMatrix& U, const ModelParams& params);

/// Eigenvalues of the 2x2 blocks, from the generic quadratic formula.
std::vector<cplx> block_spectrum(const BlockCheck& check);

/// {+E(k), -E(k)} over the N x N grid from the Bloch dispersion.
std::vector<cplx> bloch_spectrum(const ModelParams& params, const LatticeSize& size);

/// Largest distance in a greedy nearest-neighbour pairing of two
/// equal-size multisets of complex numbers; infinity when the sizes differ.
double multiset_distance(std::vector<cplx> a, std::vector<cplx> b);

/// Writes the nonzero entries as CSV rows "row,col,re,im" with a header.
void write_matrix_csv(std::ostream& out, const ComplexMatrix& m, double zero_tol = 0.0);

} // namespace nhbl
