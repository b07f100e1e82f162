#include "nhbl/realspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "nhbl/error.hpp"
#include "nhbl/report.hpp"

namespace nhbl {

LatticeSize::LatticeSize(int n) : n_(n) {
    if (n < 4) {
        throw InvalidInput("lattice size N must be at least 4");
    }
    if (n % 2 != 0) {
        throw InvalidInput("lattice size N must be even for the staggered couplings to close periodically");
    }
}

int LatticeSize::index(int layer, int j, int l) const {
    auto wrap = [this](int x) { return ((x - 1) % n_ + n_) % n_; };
    return ((layer - 1) * n_ + wrap(j)) * n_ + wrap(l);
}

namespace {

int stagger(int layer, int j, int l) { return ((layer + j + l) % 2 == 0) ? 1 : -1; }

// Adds amplitude a to |from><to| and its Hermitian conjugate.
void add_hopping(ComplexMatrix& H, int from, int to, cplx a) {
    H(from, to) += a;
    H(to, from) += std::conj(a);
}

} // namespace

ComplexMatrix build_realspace(const ModelParams& p, const LatticeSize& size) {
    if (!std::isfinite(p.J) || !std::isfinite(p.T) || !std::isfinite(p.t) || !std::isfinite(p.gamma)) {
        throw InvalidInput("model couplings must be finite");
    }
    const int n = size.n();
    ComplexMatrix H = ComplexMatrix::Zero(size.sites(), size.sites());
    for (int layer = 1; layer <= 2; ++layer) {
        for (int j = 1; j <= n; ++j) {
            for (int l = 1; l <= n; ++l) {
                const int s = size.index(layer, j, l);
                const double sign = stagger(layer, j, l);
                add_hopping(H, s, size.index(layer, j + 1, l), p.J);
                add_hopping(H, s, size.index(layer, j, l + 1), p.J);
                for (int nu : {1, -1}) {
                    add_hopping(H, s, size.index(layer, j + 1, l + nu), p.t * sign);
                }
                H(s, s) += cplx{0.0, p.gamma * sign};
            }
        }
    }
    for (int j = 1; j <= n; ++j) {
        for (int l = 1; l <= n; ++l) {
            add_hopping(H, size.index(1, j, l), size.index(2, j, l), p.T);
        }
    }
    return H;
}

Momentum block_momentum(const LatticeSize& size, int block) {
    const int n = size.n();
    const int nx = block / n;
    const int ny = block % n;
    return Momentum{2.0 * kPi * nx / n, 2.0 * kPi * ny / n}.canonical();
}

ComplexMatrix build_momentum_basis(const LatticeSize& size) {
    const int n = size.n();
    ComplexMatrix U = ComplexMatrix::Zero(size.sites(), size.sites());
    for (int b = 0; b < n * n; ++b) {
        const Momentum k = block_momentum(size, b);
        for (int j = 1; j <= n; ++j) {
            for (int l = 1; l <= n; ++l) {
                const cplx phase = std::polar(1.0 / n, k.kx * j + k.ky * l);
                const int parity = ((j + l) % 2 == 0) ? 1 : -1;
                const int layer_a = (3 + parity) / 2;
                const int layer_b = (3 - parity) / 2;
                U(size.index(layer_a, j, l), 2 * b) = phase;
                U(size.index(layer_b, j, l), 2 * b + 1) = phase;
            }
        }
    }
    return U;
}

BlockCheck block_check(const ComplexMatrix& H, const ComplexMatrix& U, const ModelParams& params) {
    if (H.rows() != H.cols() || U.rows() != U.cols() || H.rows() != U.rows() || H.rows() % 2 != 0) {
        throw InvalidInput("block_check: dimension mismatch between H and the momentum basis");
    }
    const int dim = static_cast<int>(H.rows());
    const int n = static_cast<int>(std::lround(std::sqrt(dim / 2.0)));
    if (2 * n * n != dim) {
        throw InvalidInput("block_check: dimension is not 2 N^2");
    }
    const LatticeSize size(n);
    const ComplexMatrix Hk = U.adjoint() * H * U;

    BlockCheck out;
    double dev_ab = 0.0;
    double dev_ba = 0.0;
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            if (r / 2 != c / 2) {
                out.offblock = std::max(out.offblock, std::abs(Hk(r, c)));
            }
        }
    }
    for (int b = 0; b < n * n; ++b) {
        const BlochMatrix block{{Hk(2 * b, 2 * b), Hk(2 * b, 2 * b + 1), Hk(2 * b + 1, 2 * b), Hk(2 * b + 1, 2 * b + 1)}};
        const BlochMatrix swapped{{block.m[3], block.m[2], block.m[1], block.m[0]}};
        const BlochMatrix expected = bloch_matrix(bloch_field(params, block_momentum(size, b)));
        dev_ab = std::max(dev_ab, max_deviation(block, expected));
        dev_ba = std::max(dev_ba, max_deviation(swapped, expected));
        out.blocks.push_back(block);
    }
    out.swapped = dev_ba < dev_ab;
    out.blockdev = std::min(dev_ab, dev_ba);
    return out;
}

std::vector<cplx> block_spectrum(const BlockCheck& check) {
    std::vector<cplx> ev;
    ev.reserve(2 * check.blocks.size());
    for (const BlochMatrix& m : check.blocks) {
        const cplx tr = m(0, 0) + m(1, 1);
        const cplx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        const cplx disc = std::sqrt(tr * tr - 4.0 * det);
        ev.push_back(0.5 * (tr + disc));
        ev.push_back(0.5 * (tr - disc));
    }
    return ev;
}

std::vector<cplx> bloch_spectrum(const ModelParams& params, const LatticeSize& size) {
    std::vector<cplx> ev;
    for (int b = 0; b < size.n() * size.n(); ++b) {
        const EigenSystem e = eigensystem(bloch_matrix(bloch_field(params, block_momentum(size, b))), params.tol_ep);
        ev.push_back(e.e_plus);
        ev.push_back(e.e_minus);
    }
    return ev;
}

double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
    if (a.size() != b.size()) {
        return std::numeric_limits<double>::infinity();
    }
    double worst = 0.0;
    std::vector<bool> used(b.size(), false);
    for (const cplx& x : a) {
        std::size_t best = b.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (!used[i] && std::abs(x - b[i]) < best_d) {
                best_d = std::abs(x - b[i]);
                best = i;
            }
        }
        used[best] = true;
        worst = std::max(worst, best_d);
    }
    return worst;
}

void write_matrix_csv(std::ostream& out, const ComplexMatrix& m, double zero_tol) {
    out << "row,col,re,im\n";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const cplx z = m(r, c);
            if (std::abs(z) > zero_tol) {
                out << r << ',' << c << ',' << format_number(z.real()) << ',' << format_number(z.imag()) << '\n';
            }
        }
    }
}

} // namespace nhbl
