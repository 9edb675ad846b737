#pragma once

// Exact unitary evolution, block by block.  On each invariant block the
// propagator S(t) = exp(i Omega t / 2) splits into a phase on the dark
// subspaces and independent 2x2 rotations on the coupled pairs:
//   dark:     e^{+i delta t/2} on ground darks, e^{-i delta t/2} on excited darks
//   pair k:   C_k(t) = cos(Omega_k t/2) + i (delta/Omega_k) sin(Omega_k t/2) on v0 v0^H,
//             conj(C_k) on v1 v1^H, and S_k(t) = i (theta xi_k/Omega_k) sin(Omega_k t/2)
//             on both off-diagonal couplings v0 v1^H, v1 v0^H.

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spectral.hpp"

namespace jcpol {

struct EvolutionParams {
    double delta = 0;  // cavity-atom detuning
    double theta = 1;  // vacuum coupling constant
    double time = 0;
};

struct ExcitationKey {
    int n = 0;  // excitation number (photons + a)
    HalfInt l;
    friend constexpr auto operator<=>(const ExcitationKey&, const ExcitationKey&) = default;
};

// concatenated basis of V^(n,l): ground part (a=0, n photons) then excited
// part (a=1, n-1 photons), each ascending in m
struct BlockBasis {
    ExcitationKey key;
    int dim0 = 0, dim1 = 0;
    std::vector<int> atom;   // 0/1 per basis state
    std::vector<HalfInt> m;
    std::vector<int> sigma;
    int dim() const { return dim0 + dim1; }
};

inline BlockBasis block_basis(const TransitionSpec& t, const ExcitationKey& key) {
    BlockBasis b;
    b.key = key;
    b.dim0 = subspace_dims(t.j0, key.n, key.l).dim;
    b.dim1 = (key.n >= 1) ? subspace_dims(t.j1, key.n - 1, key.l).dim : 0;
    if (b.dim() == 0) throw std::invalid_argument("block V^(n,l) is empty");
    if (b.dim0 > 0) {
        SubspaceBasis s = basis(t.j0, {0, key.n, key.l});
        for (int i = 0; i < s.dim(); ++i) {
            b.atom.push_back(0);
            b.m.push_back(s.m[i]);
            b.sigma.push_back(s.sigma[i]);
        }
    }
    if (b.dim1 > 0) {
        SubspaceBasis s = basis(t.j1, {1, key.n - 1, key.l});
        for (int i = 0; i < s.dim(); ++i) {
            b.atom.push_back(1);
            b.m.push_back(s.m[i]);
            b.sigma.push_back(s.sigma[i]);
        }
    }
    return b;
}

inline Eigen::MatrixXcd block_propagator(const BlockEigensystem& es, const EvolutionParams& p) {
    using cd = std::complex<double>;
    const int n0 = es.dim0, n1 = es.dim1;
    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(n0 + n1, n0 + n1);
    const cd ph = std::polar(1.0, 0.5 * p.delta * p.time);
    if (es.dark0() > 0) S.topLeftCorner(n0, n0) += ph * (es.d0 * es.d0.adjoint());
    if (es.dark1() > 0) S.bottomRightCorner(n1, n1) += std::conj(ph) * (es.d1 * es.d1.adjoint());
    for (int k = 0; k < es.coupled(); ++k) {
        const double om = std::hypot(p.delta, p.theta * es.xi(k));
        const double half = 0.5 * om * p.time;
        const double co = std::cos(half), si = std::sin(half);
        const double rd = (om > 0) ? p.delta / om : 0.0;
        const double rx = (om > 0) ? p.theta * es.xi(k) / om : 0.0;
        const cd C(co, rd * si);
        const cd Sk(0.0, rx * si);
        S.topLeftCorner(n0, n0) += C * (es.v0.col(k) * es.v0.col(k).adjoint());
        S.bottomRightCorner(n1, n1) += std::conj(C) * (es.v1.col(k) * es.v1.col(k).adjoint());
        S.topRightCorner(n0, n1) += Sk * (es.v0.col(k) * es.v1.col(k).adjoint());
        S.bottomLeftCorner(n1, n0) += Sk * (es.v1.col(k) * es.v0.col(k).adjoint());
    }
    return S;
}

inline Eigen::MatrixXcd block_propagator(const TransitionSpec& t, int n, HalfInt l,
                                         const EvolutionParams& p) {
    return block_propagator(block_eigensystem(t, n, l), p);
}

// Block-sparse density matrix: one complex matrix per pair of populated
// invariant blocks, over the concatenated V^(n,l) bases.  Hermiticity is kept
// by storing both orientations of every off-diagonal pair.
class BlockDensityMatrix {
public:
    using Key = std::pair<ExcitationKey, ExcitationKey>;

    explicit BlockDensityMatrix(const TransitionSpec& t) : t_(t) {}

    const TransitionSpec& transition() const { return t_; }

    // inserts rho_{K,K'} (and its adjoint if K != K')
    void set_entry(const ExcitationKey& a, const ExcitationKey& b, const Eigen::MatrixXcd& value) {
        const BlockBasis ba = block_basis(t_, a), bb = block_basis(t_, b);
        if (value.rows() != ba.dim() || value.cols() != bb.dim())
            throw std::invalid_argument("entry shape does not match block dimensions");
        entries_[{a, b}] = value;
        if (!(a == b)) entries_[{b, a}] = value.adjoint();
    }

    bool has_entry(const ExcitationKey& a, const ExcitationKey& b) const {
        return entries_.count({a, b}) > 0;
    }

    const Eigen::MatrixXcd& entry(const ExcitationKey& a, const ExcitationKey& b) const {
        auto it = entries_.find({a, b});
        if (it == entries_.end()) throw std::invalid_argument("no such coherence block");
        return it->second;
    }

    const std::map<Key, Eigen::MatrixXcd>& entries() const { return entries_; }

    double trace() const {
        double tr = 0;
        for (const auto& [k, v] : entries_)
            if (k.first == k.second) tr += v.trace().real();
        return tr;
    }

    double max_hermiticity_defect() const {
        double d = 0;
        for (const auto& [k, v] : entries_) {
            auto it = entries_.find({k.second, k.first});
            if (it == entries_.end()) return std::numeric_limits<double>::infinity();
            d = std::max(d, (v - it->second.adjoint()).cwiseAbs().maxCoeff());
        }
        return d;
    }

private:
    friend class Evolver;

    // conjugation by unitaries cannot change a block's shape, so the Evolver
    // hot path skips the dimension lookups of set_entry
    void set_entry_unchecked(const ExcitationKey& a, const ExcitationKey& b,
                             Eigen::MatrixXcd value) {
        if (!(a == b)) entries_[{b, a}] = value.adjoint();
        entries_[{a, b}] = std::move(value);
    }

    TransitionSpec t_;
    std::map<Key, Eigen::MatrixXcd> entries_;
};

// rho -> S(t) rho S(t)^dag with one propagator per populated block; the set of
// populated (n,l) blocks is unchanged
inline BlockDensityMatrix evolve(const BlockDensityMatrix& rho, const EvolutionParams& p) {
    std::map<ExcitationKey, Eigen::MatrixXcd> props;
    const TransitionSpec& t = rho.transition();
    auto prop = [&](const ExcitationKey& k) -> const Eigen::MatrixXcd& {
        auto it = props.find(k);
        if (it == props.end())
            it = props.emplace(k, block_propagator(t, k.n, k.l, p)).first;
        return it->second;
    };
    BlockDensityMatrix out(t);
    for (const auto& [key, v] : rho.entries()) {
        if (!(key.first <= key.second)) continue;  // adjoint mirror handled by set_entry
        out.set_entry(key.first, key.second, prop(key.first) * v * prop(key.second).adjoint());
    }
    return out;
}

// total population of the excited level
inline double excited_population(const BlockDensityMatrix& rho) {
    double pop = 0;
    const TransitionSpec& t = rho.transition();
    for (const auto& [key, v] : rho.entries()) {
        if (!(key.first == key.second)) continue;
        // excited states sit after the dim0 ground states in the block basis
        const int dim0 = subspace_dims(t.j0, key.first.n, key.first.l).dim;
        for (int i = dim0; i < v.rows(); ++i) pop += v(i, i).real();
    }
    return pop;
}

// Same map as evolve(), but with the per-block SVDs computed once and reused.
// Pushing one state through many times t is then dominated by the (cheap)
// propagator assembly instead of repeated diagonalization.
class Evolver {
public:
    explicit Evolver(const TransitionSpec& t) : t_(t) {}

    const TransitionSpec& transition() const { return t_; }

    const BlockEigensystem& eigensystem(const ExcitationKey& k) {
        auto it = cache_.find(k);
        if (it == cache_.end()) it = cache_.emplace(k, block_eigensystem(t_, k.n, k.l)).first;
        return it->second;
    }

    // rho is the state at time zero; p.time is absolute
    BlockDensityMatrix at(const BlockDensityMatrix& rho, const EvolutionParams& p) {
        std::map<ExcitationKey, Eigen::MatrixXcd> props;
        auto prop = [&](const ExcitationKey& k) -> const Eigen::MatrixXcd& {
            auto it = props.find(k);
            if (it == props.end()) it = props.emplace(k, block_propagator(eigensystem(k), p)).first;
            return it->second;
        };
        BlockDensityMatrix out(t_);
        for (const auto& [key, v] : rho.entries()) {
            if (!(key.first <= key.second)) continue;
            out.set_entry_unchecked(key.first, key.second,
                                    prop(key.first) * v * prop(key.second).adjoint());
        }
        return out;
    }

private:
    TransitionSpec t_;
    std::map<ExcitationKey, BlockEigensystem> cache_;
};

}  // namespace jcpol
