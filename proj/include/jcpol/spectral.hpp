#pragma once

// Per-block spectral data: the rectangular coupling matrix of G^dag restricted
// to one invariant block, its singular-value decomposition into coupled pairs
// (G^dag v0_k = xi_k v1_k) plus dark vectors, and the dressed frequencies.

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <complex>
#include <stdexcept>

#include "statespace.hpp"

namespace jcpol {

// Matrix of G^dag = i(G1^dag + G2^dag) on V^(n,l): rows run over the excited
// basis (a=1, n-1 photons), columns over the ground basis (a=0, n photons).
// Each column holds at most two nonzeros (the two circular channels).
inline Eigen::MatrixXcd coupling_matrix(const TransitionSpec& t, int n, HalfInt l) {
    if (n < 1) throw std::invalid_argument("coupling matrix needs at least one excitation");
    const SubspaceDims d0 = subspace_dims(t.j0, n, l);
    const SubspaceDims d1 = subspace_dims(t.j1, n - 1, l);
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(d1.dim, d0.dim);
    if (d0.dim == 0 || d1.dim == 0) return M;
    const SubspaceBasis b0 = basis(t.j0, {0, n, l});
    const SubspaceBasis b1 = basis(t.j1, {1, n - 1, l});
    const std::complex<double> i1(0.0, 1.0);
    for (int c = 0; c < b0.dim(); ++c) {
        const HalfInt m = b0.m[c];
        const int sigma = b0.sigma[c];
        int r = b1.index_of(m + HalfInt(1));
        if (r >= 0) M(r, c) += i1 * coupling_g(t, 1, m, n, sigma);
        r = b1.index_of(m - HalfInt(1));
        if (r >= 0) M(r, c) += i1 * coupling_g(t, 2, m, n, sigma);
    }
    return M;
}

struct BlockEigensystem {
    int n = 0;  // excitation number
    HalfInt l;
    int dim0 = 0, dim1 = 0;
    Eigen::VectorXd xi;       // coupled singular values, descending
    Eigen::MatrixXcd v0, v1;  // coupled pair columns: G^dag v0_k = xi_k v1_k
    Eigen::MatrixXcd d0, d1;  // dark (decoupled) orthonormal bases

    int coupled() const { return static_cast<int>(xi.size()); }
    int dark0() const { return static_cast<int>(d0.cols()); }
    int dark1() const { return static_cast<int>(d1.cols()); }
};

// Exact zeros of the coupling matrix are separated from genuine couplings by a
// relative cutoff; with the exact 3j core the smallest true xi in any block is
// many orders above it.
inline constexpr double kRankCutoff = 1e-10;

inline BlockEigensystem block_eigensystem(const TransitionSpec& t, int n, HalfInt l) {
    if (n < 0) throw std::invalid_argument("excitation number must be non-negative");
    BlockEigensystem es;
    es.n = n;
    es.l = l;
    es.dim0 = subspace_dims(t.j0, n, l).dim;
    es.dim1 = (n >= 1) ? subspace_dims(t.j1, n - 1, l).dim : 0;
    if (es.dim0 == 0 && es.dim1 == 0)
        throw std::invalid_argument("block V^(n,l) is empty");

    if (es.dim0 == 0 || es.dim1 == 0) {  // fully dark sector
        es.d0 = Eigen::MatrixXcd::Identity(es.dim0, es.dim0);
        es.d1 = Eigen::MatrixXcd::Identity(es.dim1, es.dim1);
        es.xi.resize(0);
        es.v0.resize(es.dim0, 0);
        es.v1.resize(es.dim1, 0);
        return es;
    }

    const Eigen::MatrixXcd M = coupling_matrix(t, n, l);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cutoff = kRankCutoff * std::max(1.0, sv.size() ? sv(0) : 0.0);
    int nc = 0;
    while (nc < sv.size() && sv(nc) > cutoff) ++nc;

    es.xi = sv.head(nc);
    es.v0 = svd.matrixV().leftCols(nc);
    es.v1 = svd.matrixU().leftCols(nc);
    es.d0 = svd.matrixV().rightCols(es.dim0 - nc);
    es.d1 = svd.matrixU().rightCols(es.dim1 - nc);
    return es;
}

// Dressed (vacuum-field Rabi) data of the coupled pairs at detuning delta and
// coupling theta.
struct DressedBlock {
    double delta = 0, theta = 1;
    Eigen::VectorXd omega;             // Omega_k = sqrt(delta^2 + theta^2 xi_k^2)
    Eigen::VectorXd c_plus, c_minus;   // sqrt((1 +- delta/Omega)/2)
};

inline DressedBlock dressed(const BlockEigensystem& es, double delta, double theta) {
    DressedBlock d;
    d.delta = delta;
    d.theta = theta;
    const int nc = es.coupled();
    d.omega.resize(nc);
    d.c_plus.resize(nc);
    d.c_minus.resize(nc);
    for (int k = 0; k < nc; ++k) {
        const double om = std::hypot(delta, theta * es.xi(k));
        d.omega(k) = om;
        const double r = (om > 0) ? delta / om : 0.0;  // resonance limit
        d.c_plus(k) = std::sqrt(0.5 * (1.0 + r));
        d.c_minus(k) = std::sqrt(0.5 * (1.0 - r));
    }
    return d;
}

}  // namespace jcpol
