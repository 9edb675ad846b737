#pragma once

// Turnkey experiments: excited-level population under a thermal unpolarized
// cavity field, the stretched-transition two-level reference curve, and the
// single-photon polarization swap.  Each observable is available twice, as a
// direct spectral sum and through the generic propagator machinery, so the two
// code paths can be played against each other.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "analytic.hpp"
#include "evolution.hpp"

namespace jcpol {

struct ThermalConfig {
    TransitionSpec transition;
    double delta = 0;
    double theta = 1;
    double n_c = 1;  // mean thermal photon number
    std::vector<double> t_grid;
    double truncation_eps = 1e-10;
};

struct SwapConfig {
    TransitionSpec transition;
    double delta = 0;
    double theta = 1;
    std::vector<double> ground_populations;  // over m = -J0 .. J0, ascending
    std::vector<double> t_grid;
};

namespace detail {

inline void check_thermal(const ThermalConfig& cfg) {
    if (!(cfg.n_c > 0)) throw std::invalid_argument("n_c must be positive");
    if (!(cfg.truncation_eps > 0 && cfg.truncation_eps < 1e-3))
        throw std::invalid_argument("truncation_eps must lie in (0, 1e-3)");
}

inline void check_populations(const TransitionSpec& t, const std::vector<double>& n0) {
    if (static_cast<int>(n0.size()) != t.j0.twice() + 1)
        throw std::invalid_argument("ground populations need 2*J0+1 entries");
    double sum = 0;
    for (double w : n0) {
        if (w < 0) throw std::invalid_argument("ground populations must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("ground populations must sum to one");
}

}  // namespace detail

// Geometric photon-number weights p_n = n_c^n / (1+n_c)^(n+1), kept up to the
// smallest n whose cumulative weight exceeds 1 - eps.  The truncated list is
// used as-is, without renormalization, so the dropped tail bounds every
// downstream truncation error directly.
inline std::vector<double> thermal_weights(double n_c, double eps = 1e-10) {
    if (!(n_c > 0) || !(eps > 0)) throw std::invalid_argument("thermal_weights: bad parameters");
    std::vector<double> p;
    const double ratio = n_c / (1.0 + n_c);
    double w = 1.0 / (1.0 + n_c);
    double cum = 0;
    while (cum < 1.0 - eps) {
        p.push_back(w);
        cum += w;
        w *= ratio;
    }
    return p;
}

// ---- initial states ------------------------------------------------------

// atom uniformly mixed over the lower level, field thermal and unpolarized:
// every basis state with n photons carries weight p_n / ((2J0+1)(n+1))
inline BlockDensityMatrix thermal_ground_state(const TransitionSpec& t, double n_c,
                                               double eps = 1e-10) {
    const std::vector<double> p = thermal_weights(n_c, eps);
    BlockDensityMatrix rho(t);
    for (int n = 0; n < static_cast<int>(p.size()); ++n) {
        const int tmax = t.j0.twice() + 2 * n;
        for (int tl = -tmax; tl <= tmax; tl += 2) {
            const HalfInt l = HalfInt::from_twice(tl);
            if (subspace_dims(t.j0, n, l).dim == 0) continue;
            const ExcitationKey key{n, l};
            const BlockBasis b = block_basis(t, key);
            Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(b.dim(), b.dim());
            const double w = p[n] / ((t.j0.twice() + 1) * (n + 1.0));
            for (int i = 0; i < b.dim0; ++i) mat(i, i) = w;
            rho.set_entry(key, key, mat);
        }
    }
    return rho;
}

// atom pinned at m = +J0 with a fully sigma+ polarized thermal field; the
// n-photon component |J0,J0>|n,n> sits alone in the block (n, J0+n)
inline BlockDensityMatrix stretched_sigma_plus_state(const TransitionSpec& t, double n_c,
                                                     double eps = 1e-10) {
    const std::vector<double> p = thermal_weights(n_c, eps);
    BlockDensityMatrix rho(t);
    for (int n = 0; n < static_cast<int>(p.size()); ++n) {
        const ExcitationKey key{n, t.j0 + HalfInt(n)};
        const BlockBasis b = block_basis(t, key);
        Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(b.dim(), b.dim());
        bool placed = false;
        for (int i = 0; i < b.dim0; ++i)
            if (b.m[i] == t.j0) {
                mat(i, i) = p[n];
                placed = true;
            }
        if (!placed) throw std::logic_error("stretched state slot missing");
        rho.set_entry(key, key, mat);
    }
    return rho;
}

// one sigma+ photon, atom distributed over the lower level with weights n0_m
inline BlockDensityMatrix ground_plus_photon_state(const TransitionSpec& t,
                                                   const std::vector<double>& n0) {
    detail::check_populations(t, n0);
    BlockDensityMatrix rho(t);
    for (std::size_t k = 0; k < n0.size(); ++k) {
        if (n0[k] == 0) continue;
        const HalfInt m = -t.j0 + HalfInt(static_cast<int>(k));
        const ExcitationKey key{1, m + HalfInt(1)};
        const BlockBasis b = block_basis(t, key);
        Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(b.dim(), b.dim());
        bool placed = false;
        for (int i = 0; i < b.dim0; ++i)
            if (b.m[i] == m && b.sigma[i] == 1) {
                mat(i, i) = n0[k];
                placed = true;
            }
        if (!placed) throw std::logic_error("sigma+ slot missing");
        rho.set_entry(key, key, mat);
    }
    return rho;
}

// excited atom and empty cavity; n1 is the (2J1+1)-square upper-level density
// matrix over m = -J1 .. J1, coherences between different m land in
// off-diagonal coherence blocks between (n=1, l=m) and (n=1, l=m')
inline BlockDensityMatrix excited_vacuum_state(const TransitionSpec& t,
                                               const Eigen::MatrixXcd& n1) {
    const int d = t.j1.twice() + 1;
    if (n1.rows() != d || n1.cols() != d)
        throw std::invalid_argument("initial excited matrix must be (2*J1+1) square");
    if ((n1 - n1.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("initial excited matrix must be hermitian");
    if (std::abs(n1.trace() - std::complex<double>(1, 0)) > 1e-12)
        throw std::invalid_argument("initial excited matrix must have unit trace");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(n1);
    if (es.eigenvalues().minCoeff() < -1e-12)
        throw std::invalid_argument("initial excited matrix must be positive semidefinite");

    auto slot = [&](int k, ExcitationKey& key, int& idx) {
        const HalfInt m = -t.j1 + HalfInt(k);
        key = ExcitationKey{1, m};
        const BlockBasis b = block_basis(t, key);
        idx = -1;
        for (int i = b.dim0; i < b.dim(); ++i)
            if (b.m[i] == m) idx = i;
        if (idx < 0) throw std::logic_error("excited slot missing");
        return b.dim();
    };

    BlockDensityMatrix rho(t);
    for (int kb = 0; kb < d; ++kb)
        for (int ka = 0; ka <= kb; ++ka) {
            if (n1(ka, kb) == 0.0 && (ka != kb || n1(ka, ka) == 0.0)) continue;
            ExcitationKey keya, keyb;
            int ia = 0, ib = 0;
            const int da = slot(ka, keya, ia);
            const int db = slot(kb, keyb, ib);
            Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(da, db);
            mat(ia, ib) = n1(ka, kb);
            rho.set_entry(keya, keyb, mat);
        }
    return rho;
}

// Uniform entry point over the four initial-state builders.
enum class InitialStateKind {
    thermal_ground,
    stretched_sigma_plus,
    ground_plus_photon,
    excited_vacuum,
};

struct InitialStateParams {
    double n_c = 1;
    double truncation_eps = 1e-10;
    std::vector<double> ground_populations;  // ground_plus_photon only
    Eigen::MatrixXcd initial_excited;        // excited_vacuum only
};

inline BlockDensityMatrix build_initial_state(const TransitionSpec& t, InitialStateKind kind,
                                              const InitialStateParams& p) {
    switch (kind) {
    case InitialStateKind::thermal_ground:
        return thermal_ground_state(t, p.n_c, p.truncation_eps);
    case InitialStateKind::stretched_sigma_plus:
        return stretched_sigma_plus_state(t, p.n_c, p.truncation_eps);
    case InitialStateKind::ground_plus_photon:
        if (p.ground_populations.empty())
            throw std::domain_error("ground_plus_photon needs ground_populations");
        return ground_plus_photon_state(t, p.ground_populations);
    case InitialStateKind::excited_vacuum:
        if (p.initial_excited.size() == 0)
            throw std::domain_error("excited_vacuum needs the upper-level matrix");
        return excited_vacuum_state(t, p.initial_excited);
    }
    throw std::invalid_argument("unknown initial state kind");
}

// probability that the cavity photon is sigma- polarized (lower-level states
// holding a spin -1 photon)
inline double sigma_minus_probability(const BlockDensityMatrix& rho) {
    double w = 0;
    for (const auto& [key, v] : rho.entries()) {
        if (!(key.first == key.second)) continue;
        const BlockBasis b = block_basis(rho.transition(), key.first);
        for (int i = 0; i < b.dim0; ++i)
            if (b.sigma[i] == -1) w += v(i, i).real();
    }
    return w;
}

// ---- thermal field -------------------------------------------------------

// Excited-level population for the thermal scenario as a pure spectral sum:
//   n1(t) = sum_n p_n/((2J0+1)(n+1)) sum_l sum_k (theta xi_k / Omega_k)^2 sin^2(Omega_k t/2)
// where k runs over the coupled pairs of block (n,l).
inline std::vector<double> thermal_population(const ThermalConfig& cfg) {
    detail::check_thermal(cfg);
    const TransitionSpec& t = cfg.transition;
    const std::vector<double> p = thermal_weights(cfg.n_c, cfg.truncation_eps);

    struct Term {
        double omega, amp;
    };
    std::vector<Term> terms;
    for (int n = 1; n < static_cast<int>(p.size()); ++n) {
        const double block_weight = p[n] / ((t.j0.twice() + 1) * (n + 1.0));
        const int tmax = std::max(t.j0.twice() + 2 * n, t.j1.twice() + 2 * (n - 1));
        for (int tl = -tmax; tl <= tmax; tl += 2) {
            const HalfInt l = HalfInt::from_twice(tl);
            if (subspace_dims(t.j0, n, l).dim == 0) continue;
            if (subspace_dims(t.j1, n - 1, l).dim == 0) continue;
            const BlockEigensystem es = block_eigensystem(t, n, l);
            for (int k = 0; k < es.coupled(); ++k) {
                const double om = std::hypot(cfg.delta, cfg.theta * es.xi(k));
                if (om == 0) continue;
                const double r = cfg.theta * es.xi(k) / om;
                terms.push_back({om, block_weight * r * r});
            }
        }
    }

    std::vector<double> out;
    out.reserve(cfg.t_grid.size());
    for (double time : cfg.t_grid) {
        double n1 = 0;
        for (const Term& term : terms) {
            const double s = std::sin(0.5 * term.omega * time);
            n1 += term.amp * s * s;
        }
        out.push_back(n1);
    }
    return out;
}

// same observable through the generic machinery: build the thermal state once,
// conjugate with the block propagators, trace against the upper level
inline std::vector<double> thermal_population_evolved(const ThermalConfig& cfg) {
    detail::check_thermal(cfg);
    const BlockDensityMatrix rho0 =
        thermal_ground_state(cfg.transition, cfg.n_c, cfg.truncation_eps);
    Evolver ev(cfg.transition);
    std::vector<double> out;
    out.reserve(cfg.t_grid.size());
    for (double time : cfg.t_grid)
        out.push_back(excited_population(ev.at(rho0, {cfg.delta, cfg.theta, time})));
    return out;
}

// Stretched reference: for J1 = J0+1 the state |J0,J0>|n,n> couples to exactly
// one partner, with xi_n = sqrt(n/(2J0+3)), so the thermal average collapses
// to a sum of two-level Rabi terms.
inline std::vector<double> stretched_population(const ThermalConfig& cfg) {
    detail::check_thermal(cfg);
    const TransitionSpec& t = cfg.transition;
    if (!(t.j1 == t.j0 + HalfInt(1)))
        throw std::domain_error("stretched reference requires J1 = J0 + 1");
    const std::vector<double> p = thermal_weights(cfg.n_c, cfg.truncation_eps);
    const double denom = t.j0.twice() + 3.0;  // 2J0 + 3

    struct Term {
        double omega, amp;
    };
    std::vector<Term> terms;
    for (int n = 1; n < static_cast<int>(p.size()); ++n) {
        const double xi = std::sqrt(n / denom);
        const double om = std::hypot(cfg.delta, cfg.theta * xi);
        if (om == 0) continue;
        const double r = cfg.theta * xi / om;
        terms.push_back({om, p[n] * r * r});
    }

    std::vector<double> out;
    out.reserve(cfg.t_grid.size());
    for (double time : cfg.t_grid) {
        double n1 = 0;
        for (const Term& term : terms) {
            const double s = std::sin(0.5 * term.omega * time);
            n1 += term.amp * s * s;
        }
        out.push_back(n1);
    }
    return out;
}

inline std::vector<double> stretched_population_evolved(const ThermalConfig& cfg) {
    detail::check_thermal(cfg);
    if (!(cfg.transition.j1 == cfg.transition.j0 + HalfInt(1)))
        throw std::domain_error("stretched reference requires J1 = J0 + 1");
    const BlockDensityMatrix rho0 =
        stretched_sigma_plus_state(cfg.transition, cfg.n_c, cfg.truncation_eps);
    Evolver ev(cfg.transition);
    std::vector<double> out;
    out.reserve(cfg.t_grid.size());
    for (double time : cfg.t_grid)
        out.push_back(excited_population(ev.at(rho0, {cfg.delta, cfg.theta, time})));
    return out;
}

// ---- polarization swap ---------------------------------------------------

// Probability of finding the photon sigma- polarized after injecting a single
// sigma+ photon:  w(t) = sum_m n0_m |F_{m+1}(t)|^2 with
//   F_l(t) = (xi0 xi1 / xi^2) [C_l(t) - e^{i delta t/2}],
// the interference of the coupled pair's C_l rotation with the dark phase.
inline std::vector<double> polarization_swap(const SwapConfig& cfg) {
    detail::check_populations(cfg.transition, cfg.ground_populations);

    struct Channel {
        double weight, omega, pref;
    };
    std::vector<Channel> channels;
    for (std::size_t k = 0; k < cfg.ground_populations.size(); ++k) {
        const double weight = cfg.ground_populations[k];
        if (weight == 0) continue;
        const HalfInt m = -cfg.transition.j0 + HalfInt(static_cast<int>(k));
        const auto [xi0, xi1] = single_photon_xi(cfg.transition, m + HalfInt(1));
        const double xi2 = xi0 * xi0 + xi1 * xi1;
        if (xi0 * xi1 == 0) continue;  // no second channel, nothing to swap into
        const double om = std::hypot(cfg.delta, cfg.theta * std::sqrt(xi2));
        channels.push_back({weight, om, xi0 * xi1 / xi2});
    }

    std::vector<double> out;
    out.reserve(cfg.t_grid.size());
    for (double time : cfg.t_grid) {
        double w = 0;
        for (const Channel& ch : channels) {
            if (ch.omega == 0) continue;
            const double half = 0.5 * ch.omega * time;
            const std::complex<double> C(std::cos(half), cfg.delta / ch.omega * std::sin(half));
            const std::complex<double> dark = std::polar(1.0, 0.5 * cfg.delta * time);
            w += ch.weight * std::norm(ch.pref * (C - dark));
        }
        out.push_back(w);
    }
    return out;
}

inline std::vector<double> polarization_swap_evolved(const SwapConfig& cfg) {
    const BlockDensityMatrix rho0 =
        ground_plus_photon_state(cfg.transition, cfg.ground_populations);
    Evolver ev(cfg.transition);
    std::vector<double> out;
    out.reserve(cfg.t_grid.size());
    for (double time : cfg.t_grid)
        out.push_back(sigma_minus_probability(ev.at(rho0, {cfg.delta, cfg.theta, time})));
    return out;
}

}  // namespace jcpol
