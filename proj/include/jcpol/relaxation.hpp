#pragma once

// Emission of a single photon by an initially excited atom into an empty
// cavity, with two loss channels: cavity decay at gamma_c and free-space
// spontaneous emission at gamma_a.  Two routes to the photon polarization
// matrix: a strong-coupling closed form, and direct integration of the master
// equation on the closed manifold
//   {|J1,m>|0,0>}  u  {|J0,m0>|1,q>}  u  {|J0,m0>|0,0>}
// where the last group only collects decayed population (the sink), which
// keeps the total trace an exact invariant worth asserting.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "angular.hpp"
#include "statespace.hpp"

namespace jcpol {

struct EmissionConfig {
    TransitionSpec transition;
    double delta = 0;
    double theta = 1;
    double gamma_c = 0;  // cavity decay rate
    double gamma_a = 0;  // free-space spontaneous emission rate
    Eigen::MatrixXcd initial_excited;  // (2J1+1) square over m = -J1 .. J1
};

// photon polarization data: w holds the unnormalized 2x2 matrix with rows and
// columns ordered q = +1 then q = -1
struct PhotonPolarizationMatrix {
    Eigen::Matrix2cd w = Eigen::Matrix2cd::Zero();

    double total() const { return w.trace().real(); }

    Eigen::Matrix2cd sigma() const {
        const double tr = total();
        if (!(tr > 0)) throw std::domain_error("no photon amplitude to normalize");
        return w / tr;
    }
};

namespace detail {

inline void check_emission(const EmissionConfig& cfg) {
    if (cfg.gamma_c < 0 || cfg.gamma_a < 0)
        throw std::invalid_argument("decay rates must be nonnegative");
    const int d = cfg.transition.j1.twice() + 1;
    const Eigen::MatrixXcd& n1 = cfg.initial_excited;
    if (n1.rows() != d || n1.cols() != d)
        throw std::invalid_argument("initial excited matrix must be (2*J1+1) square");
    if ((n1 - n1.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("initial excited matrix must be hermitian");
    if (std::abs(n1.trace() - std::complex<double>(1, 0)) > 1e-12)
        throw std::invalid_argument("initial excited matrix must have unit trace");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(n1);
    if (es.eigenvalues().minCoeff() < -1e-12)
        throw std::invalid_argument("initial excited matrix must be positive semidefinite");
}

// e^{-g} sinh(x + i c) without overflow; requires |x| <= g, which holds here
// because the drift splitting is bounded by the mean decay rate
inline std::complex<double> damped_sinh(double x, double c, double g) {
    return 0.5 * (std::exp(std::complex<double>(x - g, c)) -
                  std::exp(std::complex<double>(-x - g, -c)));
}

}  // namespace detail

// ---- closed form ---------------------------------------------------------

// w_{q'q}(t) = e^{-gamma t} sum_{m'-m = q'-q} n1_{mm'} h*(m,q) h(m',q') with
//   h(m,q) = b_q(m) (theta/Omega_m) [sinh(D_m t/2) cos(Omega_m t/2)
//                                    + i cosh(D_m t/2) sin(Omega_m t/2)]
//   b_{+1}(m) = f1(m-1),  b_{-1}(m) = f2(m+1),
//   Omega_m = sqrt(delta^2 + theta^2 (b_+^2 + b_-^2)),
//   D_m = (delta/Omega_m)(gamma_c - gamma_a)/2,  gamma = (gamma_c + gamma_a)/2.
// The hyperbolic growth is always beaten by e^{-gamma t}; the two factors are
// combined before exponentiating so large t cannot overflow.
inline PhotonPolarizationMatrix emission_closed_form(const EmissionConfig& cfg, double time) {
    detail::check_emission(cfg);
    const TransitionSpec& tr = cfg.transition;
    const int d = tr.j1.twice() + 1;
    const double gamma = 0.5 * (cfg.gamma_c + cfg.gamma_a);
    const double split = 0.5 * (cfg.gamma_c - cfg.gamma_a);

    const int qval[2] = {+1, -1};
    std::vector<std::array<std::complex<double>, 2>> h(d);
    for (int a = 0; a < d; ++a) {
        const HalfInt m = -tr.j1 + HalfInt(a);
        const double b[2] = {f1(tr, m - HalfInt(1)), f2(tr, m + HalfInt(1))};
        const double om = std::hypot(cfg.delta, cfg.theta * std::hypot(b[0], b[1]));
        for (int iq = 0; iq < 2; ++iq) {
            if (b[iq] == 0 || om == 0) {
                h[a][iq] = 0;
                continue;
            }
            const double x = (cfg.delta / om) * split * 0.5 * time;
            h[a][iq] = b[iq] * (cfg.theta / om) *
                       detail::damped_sinh(x, 0.5 * om * time, 0.5 * gamma * time);
        }
    }

    PhotonPolarizationMatrix out;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int iq = 0; iq < 2; ++iq)
                for (int iqp = 0; iqp < 2; ++iqp) {
                    if ((b - a) != qval[iqp] - qval[iq]) continue;
                    out.w(iq, iqp) +=
                        cfg.initial_excited(a, b) * std::conj(h[a][iq]) * h[b][iqp];
                }
    return out;
}

// ---- master equation -----------------------------------------------------

// Basis bookkeeping for the emission manifold.  Layout: excited states
// |J1,m>|0,0> (m ascending), then per ground m0 the photon pair (q=+1, q=-1),
// then the sink states |J0,m0>|0,0>.
struct EmissionManifold {
    TransitionSpec transition;
    int e_dim, g_dim;

    explicit EmissionManifold(const TransitionSpec& t)
        : transition(t), e_dim(t.j1.twice() + 1), g_dim(t.j0.twice() + 1) {}

    int dim() const { return e_dim + 3 * g_dim; }

    int excited_index(HalfInt m) const { return (m + transition.j1).whole(); }
    int photon_index(HalfInt m0, int q) const {
        return e_dim + 2 * (m0 + transition.j0).whole() + (q == 1 ? 0 : 1);
    }
    int sink_index(HalfInt m0) const {
        return e_dim + 2 * g_dim + (m0 + transition.j0).whole();
    }

    // the conserved-part generator: +delta on the lower level, -delta on the
    // upper, and the one-photon coupling i theta f between photon and excited
    Eigen::MatrixXcd omega_matrix(double delta, double theta) const {
        const TransitionSpec& t = transition;
        Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim(), dim());
        for (int i = 0; i < e_dim; ++i) H(i, i) = -delta;
        for (int i = e_dim; i < dim(); ++i) H(i, i) = delta;
        for (int k = 0; k < g_dim; ++k) {
            const HalfInt m0 = -t.j0 + HalfInt(k);
            const std::complex<double> up(0, theta);
            if (abs(m0 + HalfInt(1)) <= t.j1) {
                const int r = excited_index(m0 + HalfInt(1));
                H(r, photon_index(m0, +1)) += up * f1(t, m0);
                H(photon_index(m0, +1), r) += std::conj(up * f1(t, m0));
            }
            if (abs(m0 - HalfInt(1)) <= t.j1) {
                const int r = excited_index(m0 - HalfInt(1));
                H(r, photon_index(m0, -1)) += up * f2(t, m0);
                H(photon_index(m0, -1), r) += std::conj(up * f2(t, m0));
            }
        }
        return H;
    }

    // sqrt-rate-scaled collapse operators: two cavity annihilators (one per
    // polarization) and the three atomic lowering channels, normalized so the
    // total upper-level damping is exactly gamma_a
    std::vector<Eigen::MatrixXcd> jump_operators(double gamma_c, double gamma_a) const {
        const TransitionSpec& t = transition;
        std::vector<Eigen::MatrixXcd> ops;
        if (gamma_c > 0)
            for (int q : {+1, -1}) {
                Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(dim(), dim());
                for (int k = 0; k < g_dim; ++k) {
                    const HalfInt m0 = -t.j0 + HalfInt(k);
                    L(sink_index(m0), photon_index(m0, q)) = std::sqrt(gamma_c);
                }
                ops.push_back(std::move(L));
            }
        if (gamma_a > 0) {
            const double scale = std::sqrt(gamma_a * (t.j1.twice() + 1));
            for (int ch : {-1, 0, +1}) {
                Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(dim(), dim());
                for (int i = 0; i < e_dim; ++i) {
                    const HalfInt m = -t.j1 + HalfInt(i);
                    const HalfInt md = m + HalfInt(ch);  // lower-level partner
                    if (!(abs(md) <= t.j0)) continue;
                    L(sink_index(md), i) = scale * f_coeff(t, ch, md);
                }
                ops.push_back(std::move(L));
            }
        }
        return ops;
    }
};

struct EmissionSample {
    double time = 0;
    PhotonPolarizationMatrix photon;
    Eigen::MatrixXcd rho;  // full manifold density matrix
};

namespace detail {

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// dense Liouvillian acting on column-stacked rho
inline Eigen::MatrixXcd liouvillian(const EmissionManifold& mf, const EmissionConfig& cfg) {
    const int d = mf.dim();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    const Eigen::MatrixXcd H = mf.omega_matrix(cfg.delta, cfg.theta);
    const std::complex<double> ihalf(0, 0.5);
    Eigen::MatrixXcd L = ihalf * (kron(id, H) - kron(H.transpose(), id));
    for (const Eigen::MatrixXcd& J : mf.jump_operators(cfg.gamma_c, cfg.gamma_a)) {
        const Eigen::MatrixXcd K = J.adjoint() * J;
        L += kron(J.conjugate(), J);
        L -= 0.5 * (kron(id, K) + kron(K.transpose(), id));
    }
    return L;
}

}  // namespace detail

inline PhotonPolarizationMatrix photon_readout(const EmissionManifold& mf,
                                               const Eigen::MatrixXcd& rho) {
    PhotonPolarizationMatrix out;
    const int qval[2] = {+1, -1};
    for (int k = 0; k < mf.g_dim; ++k) {
        const HalfInt m0 = -mf.transition.j0 + HalfInt(k);
        for (int iq = 0; iq < 2; ++iq)
            for (int iqp = 0; iqp < 2; ++iqp)
                out.w(iq, iqp) +=
                    rho(mf.photon_index(m0, qval[iq]), mf.photon_index(m0, qval[iqp]));
    }
    return out;
}

// Master-equation integration on the emission manifold.  Classic fourth-order
// stepping with step doubling; the local error target is 1e-10 per unit of
// decay (or per unit of the fastest coherent rate when both gammas vanish), so
// accuracy tracks the observable scale e^{-gamma t} rather than wall time.
inline std::vector<EmissionSample> emission_lindblad(const EmissionConfig& cfg,
                                                     const std::vector<double>& t_grid) {
    detail::check_emission(cfg);
    if (t_grid.empty()) throw std::invalid_argument("empty time grid");
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        if (t_grid[i] < 0 || (i > 0 && t_grid[i] <= t_grid[i - 1]))
            throw std::invalid_argument("time grid must be ascending and nonnegative");

    const EmissionManifold mf(cfg.transition);
    const int d = mf.dim();
    const Eigen::MatrixXcd L = detail::liouvillian(mf, cfg);

    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(d * d);
    {
        Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(d, d);
        rho0.topLeftCorner(mf.e_dim, mf.e_dim) = cfg.initial_excited;
        y = Eigen::Map<Eigen::VectorXcd>(rho0.data(), d * d);
    }

    auto rk4 = [&](const Eigen::VectorXcd& v, double h) {
        const Eigen::VectorXcd k1 = L * v;
        const Eigen::VectorXcd k2 = L * (v + 0.5 * h * k1);
        const Eigen::VectorXcd k3 = L * (v + 0.5 * h * k2);
        const Eigen::VectorXcd k4 = L * (v + h * k3);
        return (v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)).eval();
    };

    double gamma_bar = 0.5 * (cfg.gamma_c + cfg.gamma_a);
    if (gamma_bar == 0)
        gamma_bar = std::max({cfg.theta, std::abs(cfg.delta), 1.0});
    const double tol_rate = 1e-10 * gamma_bar;
    const double t_end = t_grid.back();
    const double h_floor = 1e-12 * std::max(1.0, t_end);

    std::vector<EmissionSample> out;
    out.reserve(t_grid.size());
    double t = 0;
    double h = std::min(0.1 / std::max({cfg.theta, std::abs(cfg.delta), gamma_bar}),
                        t_end > 0 ? t_end : 1.0);
    for (double target : t_grid) {
        while (t < target) {
            double step = std::min(h, target - t);
            // A step clamped by the grid gap says nothing about the error scale,
            // so rejections there must not shrink the cruising step size.
            const bool clamped = step < h;
            for (;;) {
                const Eigen::VectorXcd one = rk4(y, step);
                const Eigen::VectorXcd two = rk4(rk4(y, 0.5 * step), 0.5 * step);
                const double err = (one - two).cwiseAbs().maxCoeff() / 15.0;
                // Absolute floor absorbs roundoff on near-degenerate gap steps.
                const double tol =
                    tol_rate * step + 1e-14 * std::max(1.0, y.cwiseAbs().maxCoeff());
                if (err <= tol) {
                    y = two + (two - one) / 15.0;
                    t += step;
                    if (!clamped && err < 0.015625 * tol) h = 2.0 * step;
                    break;
                }
                step *= 0.5;
                if (!clamped) h = step;
                if (step < h_floor)
                    throw std::runtime_error("integration step underflow near t = " +
                                             std::to_string(t));
            }
        }
        EmissionSample s;
        s.time = target;
        s.rho = Eigen::Map<Eigen::MatrixXcd>(y.data(), d, d);
        s.photon = photon_readout(mf, s.rho);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace jcpol
