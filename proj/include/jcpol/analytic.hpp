#pragma once

// Closed-form block eigensystems for the low-momentum transitions where the
// coupled/dark structure can be written down explicitly, plus the
// single-photon (excitation 1) manifold of an arbitrary transition.  These are
// an independent oracle for the SVD route: every xi, coupled pair and dark
// vector below is an explicit formula, not a numerical decomposition.
//
// Several eigenvector components carry explicit factors of i; overall signs
// are fixed so that every coupled pair satisfies the defining relation
// G^dag v0 = xi v1 with xi > 0.

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spectral.hpp"

namespace jcpol {

enum class AnalyticFamily {
    j0_to_1,            // J0=0   -> J1=1
    j1_to_0,            // J0=1   -> J1=0
    j1_to_1,            // J0=1   -> J1=1
    half_to_half,       // J0=1/2 -> J1=1/2
    half_to_three_half, // J0=1/2 -> J1=3/2
    three_half_to_half, // J0=3/2 -> J1=1/2
    single_photon,      // any transition, excitation n = 1
};

struct AnalyticCase {
    TransitionSpec t;
    AnalyticFamily family;
    int n = 1;  // excitation number
    HalfInt l;
};

// Family covering a given transition for all n, if one exists.
inline AnalyticFamily classify_family(const TransitionSpec& t) {
    const int a = t.j0.twice(), b = t.j1.twice();
    if (a == 0 && b == 2) return AnalyticFamily::j0_to_1;
    if (a == 2 && b == 0) return AnalyticFamily::j1_to_0;
    if (a == 2 && b == 2) return AnalyticFamily::j1_to_1;
    if (a == 1 && b == 1) return AnalyticFamily::half_to_half;
    if (a == 1 && b == 3) return AnalyticFamily::half_to_three_half;
    if (a == 3 && b == 1) return AnalyticFamily::three_half_to_half;
    throw std::invalid_argument(
        "no all-n closed form for J0=" + t.j0.str() + " -> J1=" + t.j1.str() +
        "; supported: 0->1, 1->0, 1->1, 1/2->1/2, 1/2->3/2, 3/2->1/2 (and single_photon for any "
        "transition at n=1)");
}

// Signed single-photon couplings (xi0, xi1) of the excitation-1 block l:
// xi0 multiplies the sigma+ ground state |J0,l-1>|1,+1>, xi1 the sigma- one.
// Values follow the per-family closed forms; an absent base state or excited
// partner yields a zero.
inline std::pair<double, double> single_photon_xi(const TransitionSpec& t, HalfInt l) {
    if (!on_lattice(t.j0, l)) throw std::invalid_argument("l is off the transition's lattice");
    const double J = t.j0.value(), L = l.value();
    const bool excited_ok = abs(l) <= t.j1;
    double x0 = 0, x1 = 0;
    if (excited_ok && abs(l - HalfInt(1)) <= t.j0) {
        if (t.j1.twice() == t.j0.twice() - 2)
            x0 = std::sqrt((J - L) * (J - L + 1) / ((2 * J + 1) * 2 * J * (2 * J - 1)));
        else if (t.j1 == t.j0)
            x0 = std::sqrt((J + L) * (J - L + 1) / ((J + 1) * 2 * J * (2 * J + 1)));
        else
            x0 = std::sqrt((J + L) * (J + L + 1) / ((2 * J + 1) * (2 * J + 2) * (2 * J + 3)));
    }
    if (excited_ok && abs(l + HalfInt(1)) <= t.j0) {
        if (t.j1.twice() == t.j0.twice() - 2)
            x1 = std::sqrt((J + L) * (J + L + 1) / ((2 * J + 1) * 2 * J * (2 * J - 1)));
        else if (t.j1 == t.j0)
            x1 = -std::sqrt((J - L) * (J + L + 1) / ((J + 1) * 2 * J * (2 * J + 1)));
        else
            x1 = std::sqrt((J - L) * (J - L + 1) / ((2 * J + 1) * (2 * J + 2) * (2 * J + 3)));
    }
    return {x0, x1};
}

namespace detail {

// assembly helper: collects amplitudes on (atom, m) product states and emits
// the BlockEigensystem matrices in the ascending-m numeric basis
class AnalyticBuilder {
public:
    AnalyticBuilder(const TransitionSpec& t, int n, HalfInt l) : t_(t) {
        es_.n = n;
        es_.l = l;
        es_.dim0 = subspace_dims(t.j0, n, l).dim;
        es_.dim1 = (n >= 1) ? subspace_dims(t.j1, n - 1, l).dim : 0;
        if (es_.dim0 == 0 && es_.dim1 == 0)
            throw std::invalid_argument("block V^(n,l) is empty");
        if (es_.dim0 > 0) b0_ = basis(t.j0, {0, n, l});
        if (es_.dim1 > 0) b1_ = basis(t.j1, {1, n - 1, l});
    }

    using Amp = std::vector<std::pair<HalfInt, std::complex<double>>>;  // (m, amplitude)

    void pair(const Amp& ground, const Amp& excited, double xi) {
        xis_.push_back(xi);
        v0s_.push_back(make_vec(b0_, es_.dim0, ground));
        v1s_.push_back(make_vec(b1_, es_.dim1, excited));
    }
    void dark0(const Amp& ground) { d0s_.push_back(make_vec(b0_, es_.dim0, ground)); }
    void dark1(const Amp& excited) { d1s_.push_back(make_vec(b1_, es_.dim1, excited)); }

    BlockEigensystem take() {
        // descending xi, matching the SVD ordering
        std::vector<int> order(xis_.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return xis_[a] > xis_[b]; });
        es_.xi.resize(static_cast<int>(xis_.size()));
        es_.v0.resize(es_.dim0, static_cast<int>(xis_.size()));
        es_.v1.resize(es_.dim1, static_cast<int>(xis_.size()));
        for (size_t i = 0; i < order.size(); ++i) {
            es_.xi(static_cast<int>(i)) = xis_[order[i]];
            es_.v0.col(static_cast<int>(i)) = v0s_[order[i]];
            es_.v1.col(static_cast<int>(i)) = v1s_[order[i]];
        }
        es_.d0.resize(es_.dim0, static_cast<int>(d0s_.size()));
        for (size_t i = 0; i < d0s_.size(); ++i) es_.d0.col(static_cast<int>(i)) = d0s_[i];
        es_.d1.resize(es_.dim1, static_cast<int>(d1s_.size()));
        for (size_t i = 0; i < d1s_.size(); ++i) es_.d1.col(static_cast<int>(i)) = d1s_[i];
        if (es_.coupled() + es_.dark0() != es_.dim0 || es_.coupled() + es_.dark1() != es_.dim1)
            throw std::logic_error("analytic family bookkeeping does not fill the block");
        return es_;
    }

private:
    static Eigen::VectorXcd make_vec(const SubspaceBasis& b, int dim, const Amp& amps) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
        for (const auto& [m, a] : amps) {
            const int i = b.index_of(m);
            if (i < 0) throw std::logic_error("analytic amplitude on a state outside the block");
            v(i) = a;
        }
        return v;
    }

    TransitionSpec t_;
    BlockEigensystem es_;
    SubspaceBasis b0_, b1_;
    std::vector<double> xis_;
    std::vector<Eigen::VectorXcd> v0s_, v1s_;
    std::vector<Eigen::VectorXcd> d0s_, d1s_;
};

}  // namespace detail

inline BlockEigensystem analytic_eigensystem(const AnalyticCase& c) {
    using std::sqrt;
    const std::complex<double> i1(0.0, 1.0);
    const TransitionSpec& t = c.t;
    const int n = c.n;
    const double ln = c.l.value();
    const int tl = c.l.twice();
    detail::AnalyticBuilder bld(t, n, c.l);

    if (c.family == AnalyticFamily::single_photon) {
        if (n != 1) throw std::invalid_argument("single_photon family is the excitation-1 manifold");
        auto [x0, x1] = single_photon_xi(t, c.l);
        const double xi = std::hypot(x0, x1);
        const bool w0_ok = abs(c.l - HalfInt(1)) <= t.j0;
        const bool w1_ok = abs(c.l + HalfInt(1)) <= t.j0;
        const bool e_ok = abs(c.l) <= t.j1;
        if (xi > 0) {
            detail::AnalyticBuilder::Amp g;
            if (w0_ok) g.push_back({c.l - HalfInt(1), x0 / xi});
            if (w1_ok) g.push_back({c.l + HalfInt(1), x1 / xi});
            bld.pair(g, {{c.l, i1}}, xi);
            if (w0_ok && w1_ok) bld.dark0({{c.l - HalfInt(1), x1 / xi}, {c.l + HalfInt(1), -x0 / xi}});
        } else {
            // decoupled block: every present state is dark
            if (w0_ok) bld.dark0({{c.l - HalfInt(1), 1.0}});
            if (w1_ok) bld.dark0({{c.l + HalfInt(1), 1.0}});
            if (e_ok) bld.dark1({{c.l, 1.0}});
        }
        return bld.take();
    }

    if (c.family != classify_family(t))
        throw std::invalid_argument("analytic family does not match the transition");
    if (n < 1) throw std::invalid_argument("analytic families cover excitation n >= 1");

    switch (c.family) {
    case AnalyticFamily::j0_to_1: {
        if ((tl - 2 * n) % 4 == 0) {  // ground-bearing set: l = -n + 2s
            const double xi = sqrt(n / 3.0);
            if (tl == 2 * n || tl == -2 * n) {
                const int sg = (tl >= 0) ? 1 : -1;
                bld.pair({{HalfInt(0), 1.0}}, {{HalfInt(sg), i1}}, xi);
            } else {
                const std::complex<double> c0 = i1 * sqrt((n - ln) / (2.0 * n));
                const std::complex<double> c1 = i1 * sqrt((n + ln) / (2.0 * n));
                bld.pair({{HalfInt(0), 1.0}}, {{HalfInt(-1), c0}, {HalfInt(1), c1}}, xi);
                bld.dark1({{HalfInt(-1), c1}, {HalfInt(1), -c0}});
            }
        } else {  // excited-only set: dark |1,0>|n-1,l>
            bld.dark1({{HalfInt(0), i1}});
        }
        return bld.take();
    }
    case AnalyticFamily::j1_to_0: {
        if ((tl - 2 * (n + 1)) % 4 == 0) {  // l = -(n+1) + 2s
            if (std::abs(tl) == 2 * (n + 1)) {
                const int sg = (tl >= 0) ? 1 : -1;
                bld.dark0({{HalfInt(sg), 1.0}});
            } else {
                const double xi = sqrt((n + 1) / 3.0);
                const double c0 = sqrt((n + 1 + ln) / (2.0 * (n + 1)));
                const double c1 = sqrt((n + 1 - ln) / (2.0 * (n + 1)));
                bld.pair({{HalfInt(-1), c0}, {HalfInt(1), c1}}, {{HalfInt(0), i1}}, xi);
                bld.dark0({{HalfInt(-1), c1}, {HalfInt(1), -c0}});
            }
        } else {  // l = -n + 2s: dark |1,0>|n,l>
            bld.dark0({{HalfInt(0), 1.0}});
        }
        return bld.take();
    }
    case AnalyticFamily::j1_to_1: {
        if ((tl - 2 * (n + 1)) % 4 == 0) {  // p=0 set: l = -(n+1) + 2s
            if (std::abs(tl) == 2 * (n + 1)) {
                const int sg = (tl >= 0) ? 1 : -1;
                bld.dark0({{HalfInt(sg), 1.0}});
            } else {
                const double xi = sqrt((n + 1) / 6.0);
                const double c0 = sqrt((n + 1 + ln) / (2.0 * (n + 1)));
                const double c1 = sqrt((n + 1 - ln) / (2.0 * (n + 1)));
                // the -i on v1 keeps G^dag v0 = +xi v1 with this v0 sign choice
                bld.pair({{HalfInt(-1), -c0}, {HalfInt(1), c1}}, {{HalfInt(0), -i1}}, xi);
                bld.dark0({{HalfInt(-1), c1}, {HalfInt(1), c0}});
            }
        } else {  // p=1 set: l = -n + 2s
            const double xi = sqrt(n / 6.0);
            if (tl == 2 * n) {
                bld.pair({{HalfInt(0), 1.0}}, {{HalfInt(1), i1}}, xi);
            } else if (tl == -2 * n) {
                bld.pair({{HalfInt(0), 1.0}}, {{HalfInt(-1), -i1}}, xi);
            } else {
                const std::complex<double> c0 = i1 * sqrt((n - ln) / (2.0 * n));
                const std::complex<double> c1 = i1 * sqrt((n + ln) / (2.0 * n));
                bld.pair({{HalfInt(0), 1.0}}, {{HalfInt(-1), -c0}, {HalfInt(1), c1}}, xi);
                bld.dark1({{HalfInt(-1), c1}, {HalfInt(1), c0}});
            }
        }
        return bld.take();
    }
    case AnalyticFamily::half_to_half: {
        const HalfInt h = HalfInt::from_twice(1);
        if ((tl + 2 * n + 1) % 4 == 0) {  // p=0 set: l = -(n+1/2) + 2s
            if (tl == -(2 * n + 1)) {
                bld.dark0({{-h, 1.0}});
            } else {
                const double xi = sqrt((n + ln + 0.5) / 6.0);
                bld.pair({{-h, 1.0}}, {{h, i1}}, xi);
            }
        } else {  // p=1 set: l = -(n-1/2) + 2s
            if (tl == 2 * n + 1) {
                bld.dark0({{h, 1.0}});
            } else {
                const double xi = sqrt((n - ln + 0.5) / 6.0);
                bld.pair({{h, 1.0}}, {{-h, -i1}}, xi);
            }
        }
        return bld.take();
    }
    case AnalyticFamily::half_to_three_half: {
        const HalfInt h = HalfInt::from_twice(1), th = HalfInt::from_twice(3);
        if ((tl + 2 * n + 1) % 4 == 0) {  // p=0 set: l = -(n+1/2)+2s, ground state m=-1/2
            const double xi = sqrt((2 * n - ln - 0.5) / 12.0);
            if (tl == -(2 * n + 1)) {
                bld.pair({{-h, 1.0}}, {{-th, i1}}, xi);
            } else if (tl == 2 * n - 1) {
                bld.pair({{-h, 1.0}}, {{h, i1}}, xi);
            } else {
                const double c0 = sqrt(3 * (n - ln - 0.5) / (2 * (2 * n - ln - 0.5)));
                const double c1 = sqrt((n + ln + 0.5) / (2 * (2 * n - ln - 0.5)));
                bld.pair({{-h, 1.0}}, {{-th, i1 * c0}, {h, i1 * c1}}, xi);
                bld.dark1({{-th, i1 * c1}, {h, -i1 * c0}});
            }
        } else {  // p=1 set: l = -(n-1/2)+2s, ground state m=+1/2
            const double xi = sqrt((2 * n + ln - 0.5) / 12.0);
            if (tl == -(2 * n - 1)) {
                bld.pair({{h, 1.0}}, {{-h, i1}}, xi);
            } else if (tl == 2 * n + 1) {
                bld.pair({{h, 1.0}}, {{th, i1}}, xi);
            } else {
                const double c0 = sqrt((n - ln + 0.5) / (2 * (2 * n + ln - 0.5)));
                const double c1 = sqrt(3 * (n + ln - 0.5) / (2 * (2 * n + ln - 0.5)));
                bld.pair({{h, 1.0}}, {{-h, i1 * c0}, {th, i1 * c1}}, xi);
                bld.dark1({{-h, i1 * c1}, {th, -i1 * c0}});
            }
        }
        return bld.take();
    }
    case AnalyticFamily::three_half_to_half: {
        const HalfInt h = HalfInt::from_twice(1), th = HalfInt::from_twice(3);
        if ((tl + 2 * n + 3) % 4 == 0) {  // p=0 set: l = -(n+3/2)+2s, excited m=-1/2
            if (tl == -(2 * n + 3)) {
                bld.dark0({{-th, 1.0}});
            } else if (tl == 2 * n + 1) {
                bld.dark0({{h, 1.0}});
            } else {
                const double xi = sqrt((2 * n + ln + 2.5) / 12.0);
                const double c0 = sqrt(3 * (n + ln + 1.5) / (2 * (2 * n + ln + 2.5)));
                const double c1 = sqrt((n - ln + 0.5) / (2 * (2 * n + ln + 2.5)));
                bld.pair({{-th, c0}, {h, c1}}, {{-h, i1}}, xi);
                bld.dark0({{-th, c1}, {h, -c0}});
            }
        } else {  // p=1 set: l = -(n+1/2)+2s, excited m=+1/2
            if (tl == -(2 * n + 1)) {
                bld.dark0({{-h, 1.0}});
            } else if (tl == 2 * n + 3) {
                bld.dark0({{th, 1.0}});
            } else {
                const double xi = sqrt((2 * n - ln + 2.5) / 12.0);
                const double c0 = sqrt((n + ln + 0.5) / (2 * (2 * n - ln + 2.5)));
                const double c1 = sqrt(3 * (n - ln + 1.5) / (2 * (2 * n - ln + 2.5)));
                bld.pair({{-h, c0}, {th, c1}}, {{h, i1}}, xi);
                bld.dark0({{-h, c1}, {th, -c0}});
            }
        }
        return bld.take();
    }
    default:
        throw std::invalid_argument("unreachable analytic family");
    }
}

}  // namespace jcpol
