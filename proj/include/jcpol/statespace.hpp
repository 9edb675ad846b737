#pragma once

// Invariant subspaces of the degenerate-level Jaynes-Cummings model.
//
// A product state |J_a,m>|n,sigma> (sigma = n1 - n2, the photon angular
// momentum) conserves the excitation number (photons + a) and the total
// projection l = m + sigma.  Each invariant block V^(n,l) is the union of a
// ground part (a=0, n photons) and an excited part (a=1, n-1 photons); within
// one part the allowed m values step by 2 because sigma has the parity of the
// photon number.

#include <stdexcept>
#include <utility>
#include <vector>

#include "angular.hpp"
#include "half_int.hpp"

namespace jcpol {

struct SubspaceKey {
    int atom = 0;     // 0 ground, 1 excited
    int photons = 0;  // cavity photon number
    HalfInt l;        // conserved total projection m + sigma
    friend constexpr auto operator<=>(const SubspaceKey&, const SubspaceKey&) = default;
};

struct SubspaceDims {
    HalfInt m_min;  // smallest atomic projection in the block (meaningless if dim == 0)
    int dim = 0;
};

// Dimension and lowest m of V^(a,n,l) for a level with momentum j_a.
// An empty subspace is dim 0, not an error.
inline SubspaceDims subspace_dims(HalfInt j_a, int photons, HalfInt l) {
    if (photons < 0) throw std::invalid_argument("photon number must be non-negative");
    SubspaceDims out;
    if ((l.twice() - j_a.twice()) % 2 != 0) return out;  // sigma would be non-integer
    // m in [max(-j_a, l-n), min(j_a, l+n)] with sigma = l - m of the parity of n
    int lo = std::max(-j_a.twice(), l.twice() - 2 * photons);
    int hi = std::min(j_a.twice(), l.twice() + 2 * photons);
    // sigma = (l.twice - m.twice)/2 must be = photons (mod 2)
    auto sigma_ok = [&](int tm) { return (((l.twice() - tm) / 2 - photons) % 2) == 0; };
    if (!sigma_ok(lo)) lo += 2;
    if (lo > hi) return out;
    if (!sigma_ok(hi)) hi -= 2;
    out.m_min = HalfInt::from_twice(lo);
    out.dim = (hi - lo) / 4 + 1;  // m steps by 2 half-units = 4 twice-units
    return out;
}

struct SubspaceBasis {
    SubspaceKey key;
    std::vector<HalfInt> m;  // ascending
    std::vector<int> sigma;  // sigma[i] = l - m[i]
    int dim() const { return static_cast<int>(m.size()); }

    // index of a given m, or -1
    int index_of(HalfInt mm) const {
        for (int i = 0; i < dim(); ++i)
            if (m[i] == mm) return i;
        return -1;
    }
};

inline SubspaceBasis basis(HalfInt j_a, const SubspaceKey& key) {
    SubspaceDims d = subspace_dims(j_a, key.photons, key.l);
    if (d.dim == 0) throw std::invalid_argument("basis of an empty subspace requested");
    SubspaceBasis b;
    b.key = key;
    int tm = d.m_min.twice();
    for (int i = 0; i < d.dim; ++i, tm += 4) {
        b.m.push_back(HalfInt::from_twice(tm));
        b.sigma.push_back((key.l.twice() - tm) / 2);
    }
    return b;
}

inline SubspaceBasis basis(const TransitionSpec& t, const SubspaceKey& key) {
    return basis(key.atom == 0 ? t.j0 : t.j1, key);
}

// All non-empty subspaces of the excitation-n manifold, ground sector first,
// each sector ordered by ascending l.
inline std::vector<SubspaceKey> enumerate_blocks(const TransitionSpec& t, int n) {
    if (n < 0) throw std::invalid_argument("excitation number must be non-negative");
    std::vector<SubspaceKey> out;
    auto scan = [&out](HalfInt j_a, int atom, int photons) {
        if (photons < 0) return;
        int span = j_a.twice() + 2 * photons;
        for (int tl = -span; tl <= span; tl += 2) {
            SubspaceKey k{atom, photons, HalfInt::from_twice(tl)};
            if (subspace_dims(j_a, photons, k.l).dim > 0) out.push_back(k);
        }
    };
    scan(t.j0, 0, n);
    scan(t.j1, 1, n - 1);
    return out;
}

}  // namespace jcpol
