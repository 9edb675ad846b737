#pragma once

// Cross-validation machinery: gauge-insensitive comparison of two block
// eigensystems, plus a built-in check run pitting the closed forms, the SVD
// route, brute-force enumeration and the propagator algebra against each
// other.  The CLI exposes this as its selfcheck command.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "analytic.hpp"
#include "evolution.hpp"
#include "spectral.hpp"

namespace jcpol {

struct EigensystemComparison {
    bool dims_match = true;
    double xi_gap = 0;         // worst gap between the descending xi lists
    double projector_gap = 0;  // worst gap between matched spectral projectors
};

// Compares two eigensystems of the same block without being fooled by gauge:
// xi lists are compared entrywise (both are descending), while eigenvectors
// are compared through the projectors of each near-degenerate xi cluster.  The
// cross operator sum v1 v0^H is included, so a relative sign between the two
// members of a coupled pair cannot slip through.
inline EigensystemComparison compare_eigensystems(const BlockEigensystem& a,
                                                  const BlockEigensystem& b,
                                                  double cluster_rel_gap = 1e-9) {
    EigensystemComparison out;
    if (a.dim0 != b.dim0 || a.dim1 != b.dim1 || a.coupled() != b.coupled()) {
        out.dims_match = false;
        out.xi_gap = out.projector_gap = std::numeric_limits<double>::infinity();
        return out;
    }
    const int nc = a.coupled();
    for (int k = 0; k < nc; ++k)
        out.xi_gap = std::max(out.xi_gap, std::abs(a.xi(k) - b.xi(k)));

    auto gap = [](const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
        return (x - y).cwiseAbs().maxCoeff();
    };
    const double scale = std::max(1.0, nc > 0 ? a.xi(0) : 0.0);
    int k = 0;
    while (k < nc) {
        int k2 = k + 1;
        while (k2 < nc && a.xi(k2 - 1) - a.xi(k2) <= cluster_rel_gap * scale) ++k2;
        const auto va0 = a.v0.middleCols(k, k2 - k), vb0 = b.v0.middleCols(k, k2 - k);
        const auto va1 = a.v1.middleCols(k, k2 - k), vb1 = b.v1.middleCols(k, k2 - k);
        out.projector_gap = std::max(out.projector_gap,
                                     gap(va0 * va0.adjoint(), vb0 * vb0.adjoint()));
        out.projector_gap = std::max(out.projector_gap,
                                     gap(va1 * va1.adjoint(), vb1 * vb1.adjoint()));
        out.projector_gap = std::max(out.projector_gap,
                                     gap(va1 * va0.adjoint(), vb1 * vb0.adjoint()));
        k = k2;
    }
    if (a.dark0() > 0)
        out.projector_gap = std::max(out.projector_gap,
                                     gap(a.d0 * a.d0.adjoint(), b.d0 * b.d0.adjoint()));
    if (a.dark1() > 0)
        out.projector_gap = std::max(out.projector_gap,
                                     gap(a.d1 * a.d1.adjoint(), b.d1 * b.d1.adjoint()));
    return out;
}

// all non-empty invariant blocks at excitation n
inline std::vector<ExcitationKey> excitation_blocks(const TransitionSpec& t, int n) {
    std::vector<ExcitationKey> keys;
    const int tmax = t.j0.twice() + 2 * n;
    for (int tl = -tmax; tl <= tmax; tl += 2) {
        const HalfInt l = HalfInt::from_twice(tl);
        const int d0 = subspace_dims(t.j0, n, l).dim;
        const int d1 = (n >= 1) ? subspace_dims(t.j1, n - 1, l).dim : 0;
        if (d0 + d1 > 0) keys.push_back({n, l});
    }
    return keys;
}

struct SelfCheckReport {
    int passed = 0, failed = 0;
    std::vector<std::string> lines;     // one "ok:"/"FAIL:" line per check
    std::vector<std::string> failures;  // messages of the failed checks only

    void tally(bool ok, const std::string& what) {
        lines.push_back((ok ? "ok:   " : "FAIL: ") + what);
        if (ok)
            ++passed;
        else {
            ++failed;
            failures.push_back(what);
        }
    }
};

// Built-in oracle run.  Kept light enough for interactive use; the test suite
// drives the same comparisons over much larger ranges.
inline SelfCheckReport run_selfcheck() {
    SelfCheckReport rep;
    std::ostringstream msg;

    // closed-form families against the SVD route
    const std::pair<HalfInt, HalfInt> families[] = {
        {HalfInt(0), HalfInt(1)},
        {HalfInt(1), HalfInt(0)},
        {HalfInt(1), HalfInt(1)},
        {HalfInt::from_twice(1), HalfInt::from_twice(1)},
        {HalfInt::from_twice(1), HalfInt::from_twice(3)},
        {HalfInt::from_twice(3), HalfInt::from_twice(1)},
    };
    for (const auto& [j0, j1] : families) {
        const TransitionSpec t{j0, j1};
        const AnalyticFamily family = classify_family(t);
        double worst_xi = 0, worst_proj = 0;
        bool dims_ok = true;
        for (int n = 1; n <= 8; ++n)
            for (const ExcitationKey& key : excitation_blocks(t, n)) {
                const BlockEigensystem num = block_eigensystem(t, key.n, key.l);
                const BlockEigensystem ana = analytic_eigensystem({t, family, key.n, key.l});
                const EigensystemComparison c = compare_eigensystems(ana, num);
                dims_ok = dims_ok && c.dims_match;
                worst_xi = std::max(worst_xi, c.xi_gap);
                worst_proj = std::max(worst_proj, c.projector_gap);
            }
        msg.str("");
        msg << "closed forms " << j0.str() << "->" << j1.str() << " vs SVD (n<=8): xi gap "
            << worst_xi << ", projector gap " << worst_proj;
        rep.tally(dims_ok && worst_xi < 1e-12 && worst_proj < 1e-11, msg.str());
    }

    // single-photon amplitudes against the angular coefficients
    {
        double worst = 0;
        for (int tj0 = 0; tj0 <= 8; ++tj0)
            for (int dt : {-2, 0, 2}) {
                const int tj1 = tj0 + dt;
                if (tj1 < 0 || (tj0 == 0 && tj1 == 0)) continue;
                const TransitionSpec t{HalfInt::from_twice(tj0), HalfInt::from_twice(tj1)};
                for (int tl = -(tj0 + 2); tl <= tj0 + 2; tl += 2) {
                    const HalfInt l = HalfInt::from_twice(tl);
                    const auto [x0, x1] = single_photon_xi(t, l);
                    worst = std::max(worst, std::abs(x0 - f1(t, l - HalfInt(1))));
                    worst = std::max(worst, std::abs(x1 - f2(t, l + HalfInt(1))));
                }
            }
        msg.str("");
        msg << "single-photon amplitudes vs angular coefficients (J<=4): gap " << worst;
        rep.tally(worst < 1e-14, msg.str());
    }

    // channel sum rule
    {
        double worst = 0;
        for (int tj0 = 0; tj0 <= 8; ++tj0)
            for (int dt : {-2, 0, 2}) {
                const int tj1 = tj0 + dt;
                if (tj1 < 0 || (tj0 == 0 && tj1 == 0)) continue;
                const TransitionSpec t{HalfInt::from_twice(tj0), HalfInt::from_twice(tj1)};
                for (int tm = -tj1; tm <= tj1; tm += 2) {
                    const HalfInt m = HalfInt::from_twice(tm);
                    const double s = std::pow(f1(t, m - HalfInt(1)), 2) +
                                     std::pow(f2(t, m + HalfInt(1)), 2) +
                                     std::pow(f0(t, m), 2);
                    worst = std::max(worst, std::abs(s - 1.0 / (tj1 + 1)));
                }
            }
        msg.str("");
        msg << "channel sum rule f1^2+f2^2+f0^2 = 1/(2J1+1) (J<=4): gap " << worst;
        rep.tally(worst < 1e-14, msg.str());
    }

    // dimension completeness: every level state lands in exactly one block
    {
        bool ok = true;
        for (int tj = 0; tj <= 6 && ok; ++tj)
            for (int n = 0; n <= 6 && ok; ++n) {
                const HalfInt j = HalfInt::from_twice(tj);
                long total = 0;
                const int tmax = tj + 2 * n;
                for (int tl = -tmax; tl <= tmax; tl += 2)
                    total += subspace_dims(j, n, HalfInt::from_twice(tl)).dim;
                ok = total == static_cast<long>(tj + 1) * (n + 1);
            }
        rep.tally(ok, "dimension completeness Sum dim = (2J+1)(n+1) (J<=3, n<=6)");
    }

    // propagator sanity: unitarity, group law, and the dense exponential
    {
        std::mt19937 rng(20240817);
        std::uniform_real_distribution<double> time_dist(0.1, 20.0);
        std::uniform_real_distribution<double> delta_dist(-2.0, 2.0);
        double worst_unit = 0, worst_group = 0, worst_exp = 0;
        const TransitionSpec cases[] = {{HalfInt(1), HalfInt(2)},
                                        {HalfInt::from_twice(3), HalfInt::from_twice(3)},
                                        {HalfInt(2), HalfInt(1)}};
        for (const TransitionSpec& t : cases)
            for (int n : {1, 3})
                for (const ExcitationKey& key : excitation_blocks(t, n)) {
                    const BlockEigensystem es = block_eigensystem(t, key.n, key.l);
                    const double t1 = time_dist(rng), t2 = time_dist(rng);
                    const double delta = delta_dist(rng);
                    const Eigen::MatrixXcd S1 = block_propagator(es, {delta, 1.0, t1});
                    const Eigen::MatrixXcd S2 = block_propagator(es, {delta, 1.0, t2});
                    const Eigen::MatrixXcd S12 = block_propagator(es, {delta, 1.0, t1 + t2});
                    const int d = es.dim0 + es.dim1;
                    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
                    worst_unit =
                        std::max(worst_unit, (S1 * S1.adjoint() - id).cwiseAbs().maxCoeff());
                    worst_group = std::max(worst_group, (S12 - S1 * S2).cwiseAbs().maxCoeff());

                    // dense exponential of the assembled block generator
                    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(d, d);
                    H.topLeftCorner(es.dim0, es.dim0) = delta * id.topLeftCorner(es.dim0, es.dim0);
                    H.bottomRightCorner(es.dim1, es.dim1) =
                        -delta * id.bottomRightCorner(es.dim1, es.dim1);
                    if (es.dim0 > 0 && es.dim1 > 0) {
                        const Eigen::MatrixXcd M = coupling_matrix(t, key.n, key.l);
                        H.bottomLeftCorner(es.dim1, es.dim0) = M;
                        H.topRightCorner(es.dim0, es.dim1) = M.adjoint();
                    }
                    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(H);
                    const Eigen::VectorXcd ph =
                        (std::complex<double>(0, 0.5 * t1) * eig.eigenvalues().array())
                            .exp()
                            .matrix();
                    const Eigen::MatrixXcd expH = eig.eigenvectors() * ph.asDiagonal() *
                                                  eig.eigenvectors().adjoint();
                    worst_exp = std::max(worst_exp, (S1 - expH).cwiseAbs().maxCoeff());
                }
        msg.str("");
        msg << "propagator unitarity " << worst_unit << ", group law " << worst_group
            << ", dense exponential " << worst_exp;
        rep.tally(worst_unit < 1e-12 && worst_group < 1e-11 && worst_exp < 1e-10, msg.str());
    }

    return rep;
}

}  // namespace jcpol
