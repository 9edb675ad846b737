#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include <jcpol/jcpol.hpp>

using Catch::Matchers::WithinAbs;
using jcpol::EmissionConfig;
using jcpol::EmissionManifold;
using jcpol::ExcitationKey;
using jcpol::HalfInt;
using jcpol::TransitionSpec;

namespace {

std::vector<double> linspace(double t0, double t1, int count) {
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) g[i] = t0 + (t1 - t0) * i / (count - 1);
    return g;
}

// photon polarization matrix read from the block-sparse representation:
// the (q, q') element collects ground states |J0,m0>|1,q> across blocks
Eigen::Matrix2cd block_photon_matrix(const jcpol::BlockDensityMatrix& rho) {
    const TransitionSpec& t = rho.transition();
    const int qval[2] = {+1, -1};
    auto slot = [&](const jcpol::BlockBasis& b, HalfInt m0, int q) {
        for (int i = 0; i < b.dim0; ++i)
            if (b.m[i] == m0 && b.sigma[i] == q) return i;
        return -1;
    };
    Eigen::Matrix2cd w = Eigen::Matrix2cd::Zero();
    for (int k = 0; k <= t.j0.twice(); ++k) {
        const HalfInt m0 = -t.j0 + HalfInt(k);
        for (int iq = 0; iq < 2; ++iq)
            for (int iqp = 0; iqp < 2; ++iqp) {
                const ExcitationKey ka{1, m0 + HalfInt(qval[iq])};
                const ExcitationKey kb{1, m0 + HalfInt(qval[iqp])};
                if (!rho.has_entry(ka, kb)) continue;
                const auto ba = jcpol::block_basis(t, ka);
                const auto bb = jcpol::block_basis(t, kb);
                const int ia = slot(ba, m0, qval[iq]);
                const int ib = slot(bb, m0, qval[iqp]);
                if (ia < 0 || ib < 0) continue;
                w(iq, iqp) += rho.entry(ka, kb)(ia, ib);
            }
    }
    return w;
}

double excited_trace(const EmissionManifold& mf, const Eigen::MatrixXcd& rho) {
    double p = 0;
    for (int i = 0; i < mf.e_dim; ++i) p += rho(i, i).real();
    return p;
}

}  // namespace

TEST_CASE("emission manifold layout and jump algebra") {
    TransitionSpec t(HalfInt(1), HalfInt(1));
    EmissionManifold mf(t);
    REQUIRE(mf.dim() == 3 + 3 * 3);

    // every index is distinct and in range
    std::vector<int> seen(mf.dim(), 0);
    for (int i = 0; i < mf.e_dim; ++i) seen.at(mf.excited_index(-t.j1 + HalfInt(i)))++;
    for (int k = 0; k < mf.g_dim; ++k) {
        const HalfInt m0 = -t.j0 + HalfInt(k);
        seen.at(mf.photon_index(m0, +1))++;
        seen.at(mf.photon_index(m0, -1))++;
        seen.at(mf.sink_index(m0))++;
    }
    for (int c : seen) REQUIRE(c == 1);

    const auto H = mf.omega_matrix(0.7, 1.3);
    CHECK((H - H.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    // one coupling spot check: |1,0>|1,+1> drives |1,1>|0,0> at i theta f1(0)
    const std::complex<double> want(0, 1.3 * jcpol::f1(t, HalfInt(0)));
    CHECK(std::abs(H(mf.excited_index(HalfInt(1)), mf.photon_index(HalfInt(0), +1)) -
                   want) < 1e-15);

    // sum of J^dag J resolves into gamma_a on the upper level and gamma_c on
    // the photon states, with nothing on the sinks
    const double gc = 0.31, ga = 0.17;
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(mf.dim(), mf.dim());
    for (const auto& J : mf.jump_operators(gc, ga)) K += J.adjoint() * J;
    Eigen::MatrixXcd want_K = Eigen::MatrixXcd::Zero(mf.dim(), mf.dim());
    for (int i = 0; i < mf.e_dim; ++i) want_K(i, i) = ga;
    for (int k = 0; k < mf.g_dim; ++k) {
        const HalfInt m0 = -t.j0 + HalfInt(k);
        want_K(mf.photon_index(m0, +1), mf.photon_index(m0, +1)) = gc;
        want_K(mf.photon_index(m0, -1), mf.photon_index(m0, -1)) = gc;
    }
    REQUIRE((K - want_K).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("emission configuration validation") {
    TransitionSpec t(HalfInt(0), HalfInt(1));
    EmissionConfig good{t, 0.0, 1.0, 0.1, 0.1,
                        Eigen::MatrixXcd::Identity(3, 3) / 3.0};
    CHECK_NOTHROW(jcpol::emission_closed_form(good, 1.0));

    EmissionConfig bad = good;
    bad.gamma_c = -1.0;
    CHECK_THROWS_AS(jcpol::emission_closed_form(bad, 1.0), std::invalid_argument);
    bad = good;
    bad.initial_excited = Eigen::MatrixXcd::Identity(2, 2) / 2.0;
    CHECK_THROWS_AS(jcpol::emission_closed_form(bad, 1.0), std::invalid_argument);
    bad = good;
    bad.initial_excited(0, 1) = 0.2;
    CHECK_THROWS_AS(jcpol::emission_closed_form(bad, 1.0), std::invalid_argument);
    bad = good;
    bad.initial_excited *= 1.5;
    CHECK_THROWS_AS(jcpol::emission_closed_form(bad, 1.0), std::invalid_argument);
    bad = good;
    bad.initial_excited(0, 0) = -0.4;
    bad.initial_excited(1, 1) = 1.0;
    CHECK_THROWS_AS(jcpol::emission_closed_form(bad, 1.0), std::invalid_argument);

    CHECK_THROWS_AS(jcpol::emission_lindblad(good, {}), std::invalid_argument);
    CHECK_THROWS_AS(jcpol::emission_lindblad(good, {1.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(jcpol::emission_lindblad(good, {-1.0, 0.5}), std::invalid_argument);
}

TEST_CASE("0 -> 1 closed form reduces to the two-level expression") {
    TransitionSpec t(HalfInt(0), HalfInt(1));
    Eigen::MatrixXcd n1 = Eigen::MatrixXcd::Zero(3, 3);
    n1(0, 0) = 0.25;  // m = -1
    n1(1, 1) = 0.35;  // m =  0 (emits no cavity photon)
    n1(2, 2) = 0.40;  // m = +1
    const double n0 = 0.25 + 0.40;

    const double delta = 0.3, theta = 1.0, gc = 0.02, ga = 0.005;
    EmissionConfig cfg{t, delta, theta, gc, ga, n1};
    const double xi2 = 1.0 / 3.0;
    const double om = std::sqrt(delta * delta + theta * theta * xi2);
    const double gamma = 0.5 * (gc + ga);
    const double dsplit = (delta / om) * 0.5 * (gc - ga);

    for (double time : linspace(0.0, 30.0, 61)) {
        const auto ph = jcpol::emission_closed_form(cfg, time);
        const double want = n0 * (theta * theta * xi2 / (om * om)) *
                            (std::pow(std::sin(0.5 * om * time), 2) +
                             std::pow(std::sinh(0.5 * dsplit * time), 2)) *
                            std::exp(-gamma * time);
        REQUIRE_THAT(ph.total(), WithinAbs(want, 1e-12));
        // no coherence between the circular channels for a diagonal source
        REQUIRE(std::abs(ph.w(0, 1)) == 0.0);
        // the polarization matrix is the rescaled upper-level source at all times
        if (time > 0) {
            const auto sig = ph.sigma();
            REQUIRE_THAT(sig(0, 0).real(), WithinAbs(0.40 / n0, 1e-12));
            REQUIRE_THAT(sig(1, 1).real(), WithinAbs(0.25 / n0, 1e-12));
        }
    }
}

TEST_CASE("closed form starts from an empty photon record") {
    TransitionSpec t(HalfInt(1), HalfInt(2));
    EmissionConfig cfg{t, 0.1, 1.0, 0.01, 0.02,
                       Eigen::MatrixXcd::Identity(5, 5) / 5.0};
    const auto ph = jcpol::emission_closed_form(cfg, 0.0);
    CHECK(ph.w.cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(ph.sigma(), std::domain_error);
}

TEST_CASE("decoupled cavity: atom decays into free space only") {
    TransitionSpec t(HalfInt(1), HalfInt(1));
    EmissionConfig cfg{t, 0.2, 0.0, 0.5, 0.3,
                       Eigen::MatrixXcd::Identity(3, 3) / 3.0};
    for (double time : {1.0, 4.0}) {
        const auto ph = jcpol::emission_closed_form(cfg, time);
        CHECK(ph.w.cwiseAbs().maxCoeff() == 0.0);
    }
    const auto run = jcpol::emission_lindblad(cfg, linspace(0.0, 10.0, 6));
    EmissionManifold mf(t);
    for (const auto& s : run) {
        REQUIRE_THAT(excited_trace(mf, s.rho),
                     WithinAbs(std::exp(-0.3 * s.time), 1e-8));
        CHECK(s.photon.total() < 1e-12);
        CHECK_THAT(s.rho.trace().real(), WithinAbs(1.0, 1e-9));
    }
}

TEST_CASE("undamped manifold matches the block propagators") {
    TransitionSpec t(HalfInt(1), HalfInt(1));
    Eigen::VectorXcd v(3);
    v << std::complex<double>(1, 0), std::complex<double>(0, 1),
        std::complex<double>(1, 0);
    v /= v.norm();
    const Eigen::MatrixXcd n1 = v * v.adjoint();

    EmissionConfig cfg{t, 0.2, 1.0, 0.0, 0.0, n1};
    const auto grid = linspace(0.0, 8.0, 9);
    const auto run = jcpol::emission_lindblad(cfg, grid);

    const auto rho0 = jcpol::excited_vacuum_state(t, n1);
    jcpol::Evolver ev(t);
    EmissionManifold mf(t);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto blocks = ev.at(rho0, {cfg.delta, cfg.theta, grid[i]});
        REQUIRE_THAT(excited_trace(mf, run[i].rho),
                     WithinAbs(jcpol::excited_population(blocks), 1e-8));
        const Eigen::Matrix2cd wb = block_photon_matrix(blocks);
        REQUIRE((run[i].photon.w - wb).cwiseAbs().maxCoeff() < 1e-8);
        // nothing may leak into the sinks without damping
        double sink = 0;
        for (int k = 0; k <= t.j0.twice(); ++k)
            sink += run[i].rho(mf.sink_index(-t.j0 + HalfInt(k)),
                               mf.sink_index(-t.j0 + HalfInt(k)))
                        .real();
        CHECK(std::abs(sink) < 1e-12);
    }
}

TEST_CASE("equal rates: the closed form tracks the integrator") {
    TransitionSpec t(HalfInt(1), HalfInt(1));
    Eigen::MatrixXcd n1 = Eigen::MatrixXcd::Zero(3, 3);
    n1(0, 0) = 0.5;
    n1(2, 2) = 0.5;
    n1(0, 2) = 0.3;
    n1(2, 0) = 0.3;
    EmissionConfig cfg{t, 0.15, 1.0, 1e-3, 1e-3, n1};
    const auto grid = linspace(0.0, 10.0, 21);
    const auto run = jcpol::emission_lindblad(cfg, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto closed = jcpol::emission_closed_form(cfg, grid[i]);
        REQUIRE((closed.w - run[i].photon.w).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("trace conservation and positivity under damping") {
    TransitionSpec t(HalfInt(0), HalfInt(1));
    EmissionConfig cfg{t, 0.1, 1.0, 0.1, 0.05,
                       Eigen::MatrixXcd::Identity(3, 3) / 3.0};
    const double gbar = 0.5 * (cfg.gamma_c + cfg.gamma_a);
    const auto grid = linspace(0.0, 10.0 / gbar, 26);
    const auto run = jcpol::emission_lindblad(cfg, grid);
    for (const auto& s : run) {
        REQUIRE_THAT(s.rho.trace().real(), WithinAbs(1.0, 1e-9));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> sol(s.rho);
        REQUIRE(sol.eigenvalues().minCoeff() > -1e-8);
    }
    // by the end of the window everything has drained into the sinks
    EmissionManifold mf(t);
    CHECK(excited_trace(mf, run.back().rho) < 1e-10);
    CHECK(run.back().photon.total() < 1e-10);
}

TEST_CASE("polarization coherence needs a matching upper-level coherence") {
    // half -> half: |Delta m| = 2 cannot occur, so the q/q' cross terms vanish
    TransitionSpec t(HalfInt::from_twice(1), HalfInt::from_twice(1));
    Eigen::MatrixXcd n1(2, 2);
    n1 << 0.5, std::complex<double>(0.2, 0.1), std::complex<double>(0.2, -0.1), 0.5;
    EmissionConfig cfg{t, 0.1, 1.0, 0.02, 0.01, n1};
    for (double time : {1.0, 3.0, 7.0}) {
        const auto ph = jcpol::emission_closed_form(cfg, time);
        CHECK(std::abs(ph.w(0, 1)) == 0.0);
        CHECK(std::abs(ph.w(1, 0)) == 0.0);
    }
    const auto run = jcpol::emission_lindblad(cfg, {0.0, 2.5, 5.0});
    for (const auto& s : run) CHECK(std::abs(s.photon.w(0, 1)) < 1e-10);

    // 0 -> 1 with an m-coherence of |Delta m| = 2 does populate the cross term
    TransitionSpec t01(HalfInt(0), HalfInt(1));
    Eigen::MatrixXcd c1 = Eigen::MatrixXcd::Zero(3, 3);
    c1(0, 0) = 0.5;
    c1(2, 2) = 0.5;
    c1(0, 2) = 0.5;
    c1(2, 0) = 0.5;
    EmissionConfig cfg2{t01, 0.0, 1.0, 0.02, 0.01, c1};
    const auto ph = jcpol::emission_closed_form(cfg2, 2.0);
    CHECK(std::abs(ph.w(0, 1)) > 1e-3);
    // a pure upper-level state emits a pure polarization state
    const auto sig = ph.sigma();
    CHECK_THAT((sig * sig).trace().real(), WithinAbs(1.0, 1e-12));
}

TEST_CASE("weak damping converges linearly onto the closed form") {
    TransitionSpec t(HalfInt(0), HalfInt(1));
    Eigen::MatrixXcd n1 = Eigen::MatrixXcd::Identity(3, 3) / 3.0;
    const auto grid = linspace(0.0, 40.0, 41);
    auto gap_at = [&](double gamma) {
        EmissionConfig cfg{t, 0.1, 1.0, gamma, 0.5 * gamma, n1};
        const auto run = jcpol::emission_lindblad(cfg, grid);
        double gap = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto closed = jcpol::emission_closed_form(cfg, grid[i]);
            gap = std::max(gap,
                           (closed.w - run[i].photon.w).cwiseAbs().maxCoeff());
        }
        return gap;
    };
    const double g1 = gap_at(3e-2);
    const double g2 = gap_at(3e-3);
    CHECK(g1 < 1e-2);       // already small at the coarser damping
    CHECK(g2 < 0.25 * g1);  // and shrinking at least linearly in gamma
}
