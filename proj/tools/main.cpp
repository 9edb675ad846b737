// Command-line front end.  Subcommands map one-to-one onto the library's
// computations (dims, spectrum, dynamics, swap, emit) plus a selfcheck run of
// the built-in oracles.  All numeric output is CSV with a leading parameter
// comment, formatted at 12 significant digits so identical runs produce
// byte-identical files.

#include <CLI11.hpp>

#include <jcpol/jcpol.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using namespace jcpol;

std::string fmt(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.12g", v);
    return b;
}

HalfInt arg_half(const std::string& flag, const std::string& text) {
    try {
        return parse_half_int(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(flag + ": " + e.what());
    }
}

std::vector<double> make_grid(double t0, double t1, double dt) {
    if (!(dt > 0)) throw std::invalid_argument("--t-step: must be positive");
    if (t1 < t0) throw std::invalid_argument("--t-end: must not precede --t-start");
    const int count = static_cast<int>(std::floor((t1 - t0) / dt + 1e-9)) + 1;
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) g[i] = t0 + i * dt;
    return g;
}

// whole result assembled in memory, then moved into place, so a failing run
// can never leave a partial file behind
void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::fputs(content.c_str(), stdout);
        return;
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        f << content;
        if (!f.good()) {
            f.close();
            std::remove(tmp.c_str());
            throw std::runtime_error("cannot write " + tmp);
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot move output into place at " + path);
    }
}

struct DimsOpt {
    std::string j, out;
    int n = 0;
};

int run_dims(const DimsOpt& o) {
    const HalfInt j = arg_half("--j", o.j);
    if (o.n < 0) throw std::invalid_argument("--n: must be nonnegative");
    std::ostringstream csv;
    csv << "# command=dims j=" << j.str() << " n=" << o.n << "\n";
    csv << "l,dim\n";
    const int tmax = j.twice() + 2 * o.n;
    for (int tl = -tmax; tl <= tmax; tl += 2) {
        const HalfInt l = HalfInt::from_twice(tl);
        const int d = subspace_dims(j, o.n, l).dim;
        if (d > 0) csv << l.str() << "," << d << "\n";
    }
    write_output(o.out, csv.str());
    return 0;
}

struct SpectrumOpt {
    std::string j0, j1, l, out;
    int n = 1;
    double delta = 0, theta = 1;
};

int run_spectrum(const SpectrumOpt& o) {
    const TransitionSpec t{arg_half("--j0", o.j0), arg_half("--j1", o.j1)};
    if (o.n < 0) throw std::invalid_argument("--n: must be nonnegative");
    const HalfInt l = arg_half("--l", o.l);
    const BlockEigensystem es = block_eigensystem(t, o.n, l);
    const DressedBlock d = dressed(es, o.delta, o.theta);
    std::ostringstream csv;
    csv << "# command=spectrum j0=" << t.j0.str() << " j1=" << t.j1.str() << " n=" << o.n
        << " l=" << l.str() << " delta=" << fmt(o.delta) << " theta=" << fmt(o.theta)
        << " dim0=" << es.dim0 << " dim1=" << es.dim1 << " coupled=" << es.coupled()
        << " dark0=" << es.dark0() << " dark1=" << es.dark1() << "\n";
    csv << "k,xi,omega,c_plus,c_minus\n";
    for (int k = 0; k < es.coupled(); ++k)
        csv << k << "," << fmt(es.xi(k)) << "," << fmt(d.omega(k)) << "," << fmt(d.c_plus(k))
            << "," << fmt(d.c_minus(k)) << "\n";
    write_output(o.out, csv.str());
    return 0;
}

struct DynamicsOpt {
    std::string j0, j1, out;
    double delta = 0, theta = 1, nc = 1, t0 = 0, t1 = 50, dt = 0.02, eps = 1e-10;
    bool stretched = false;
};

int run_dynamics(const DynamicsOpt& o) {
    ThermalConfig cfg{.transition = TransitionSpec{arg_half("--j0", o.j0), arg_half("--j1", o.j1)},
                      .delta = o.delta,
                      .theta = o.theta,
                      .n_c = o.nc,
                      .t_grid = make_grid(o.t0, o.t1, o.dt),
                      .truncation_eps = o.eps};
    const std::vector<double> n1 =
        o.stretched ? stretched_population(cfg) : thermal_population(cfg);
    std::ostringstream csv;
    csv << "# command=dynamics j0=" << cfg.transition.j0.str()
        << " j1=" << cfg.transition.j1.str() << " delta=" << fmt(o.delta)
        << " theta=" << fmt(o.theta) << " nc=" << fmt(o.nc) << " t_start=" << fmt(o.t0)
        << " t_end=" << fmt(o.t1) << " t_step=" << fmt(o.dt) << " eps=" << fmt(o.eps)
        << " stretched=" << (o.stretched ? 1 : 0) << "\n";
    csv << "t,n1\n";
    for (size_t i = 0; i < cfg.t_grid.size(); ++i)
        csv << fmt(cfg.t_grid[i]) << "," << fmt(n1[i]) << "\n";
    write_output(o.out, csv.str());
    return 0;
}

struct SwapOpt {
    std::string j0, j1, m, out;
    double delta = 0, theta = 1, t0 = 0, t1 = 50, dt = 0.02;
};

int run_swap(const SwapOpt& o) {
    SwapConfig cfg{.transition = TransitionSpec{arg_half("--j0", o.j0), arg_half("--j1", o.j1)},
                   .delta = o.delta,
                   .theta = o.theta};
    const HalfInt m = arg_half("--m", o.m);
    if (!on_lattice(cfg.transition.j0, m) || !(abs(m) <= cfg.transition.j0))
        throw std::invalid_argument("--m: not a lower-level magnetic number");
    cfg.ground_populations.assign(cfg.transition.j0.twice() + 1, 0.0);
    cfg.ground_populations[(m + cfg.transition.j0).whole()] = 1.0;
    cfg.t_grid = make_grid(o.t0, o.t1, o.dt);
    const std::vector<double> w = polarization_swap(cfg);
    std::ostringstream csv;
    csv << "# command=swap j0=" << cfg.transition.j0.str() << " j1=" << cfg.transition.j1.str()
        << " delta=" << fmt(o.delta) << " theta=" << fmt(o.theta) << " m=" << m.str()
        << " t_start=" << fmt(o.t0) << " t_end=" << fmt(o.t1) << " t_step=" << fmt(o.dt)
        << "\n";
    csv << "t,w\n";
    for (size_t i = 0; i < cfg.t_grid.size(); ++i)
        csv << fmt(cfg.t_grid[i]) << "," << fmt(w[i]) << "\n";
    write_output(o.out, csv.str());
    return 0;
}

struct EmitOpt {
    std::string j0, j1, m, out;
    double delta = 0, theta = 1, gc = 0, ga = 0, t0 = 0, t1 = 20, dt = 0.05;
    bool closed = false, lindblad = false, both = false;
};

void append_photon_columns(std::ostringstream& csv, const PhotonPolarizationMatrix& ph) {
    const double w = ph.total();
    Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
    if (w > 0) s = ph.sigma();
    csv << "," << fmt(w) << "," << fmt(s(0, 0).real()) << "," << fmt(s(1, 1).real()) << ","
        << fmt(s(0, 1).real()) << "," << fmt(s(0, 1).imag());
}

int run_emit(const EmitOpt& o) {
    EmissionConfig cfg{.transition = TransitionSpec{arg_half("--j0", o.j0), arg_half("--j1", o.j1)},
                       .delta = o.delta,
                       .theta = o.theta,
                       .gamma_c = o.gc,
                       .gamma_a = o.ga};
    const int d = cfg.transition.j1.twice() + 1;
    if (o.m.empty()) {
        cfg.initial_excited = Eigen::MatrixXcd::Identity(d, d) / d;
    } else {
        const HalfInt m = arg_half("--m", o.m);
        if (!on_lattice(cfg.transition.j1, m) || !(abs(m) <= cfg.transition.j1))
            throw std::invalid_argument("--m: not an upper-level magnetic number");
        cfg.initial_excited = Eigen::MatrixXcd::Zero(d, d);
        cfg.initial_excited((m + cfg.transition.j1).whole(), (m + cfg.transition.j1).whole()) = 1;
    }
    const bool use_closed = o.closed || o.both || (!o.lindblad && !o.both);
    const bool use_lindblad = o.lindblad || o.both;
    const std::vector<double> grid = make_grid(o.t0, o.t1, o.dt);

    std::vector<EmissionSample> master;
    if (use_lindblad) master = emission_lindblad(cfg, grid);

    std::ostringstream csv;
    csv << "# command=emit j0=" << cfg.transition.j0.str() << " j1=" << cfg.transition.j1.str()
        << " delta=" << fmt(o.delta) << " theta=" << fmt(o.theta) << " gamma_c=" << fmt(o.gc)
        << " gamma_a=" << fmt(o.ga) << " m=" << (o.m.empty() ? "mixed" : o.m)
        << " t_start=" << fmt(o.t0) << " t_end=" << fmt(o.t1) << " t_step=" << fmt(o.dt)
        << " method=" << (o.both ? "both" : (use_lindblad ? "lindblad" : "closed")) << "\n";
    csv << "t";
    const char* cols = ",w,re_sigma_pp,re_sigma_mm,re_sigma_pm,im_sigma_pm";
    if (use_closed && use_lindblad)
        csv << ",w_closed,re_sigma_pp_closed,re_sigma_mm_closed,re_sigma_pm_closed,"
               "im_sigma_pm_closed,w_lindblad,re_sigma_pp_lindblad,re_sigma_mm_lindblad,"
               "re_sigma_pm_lindblad,im_sigma_pm_lindblad";
    else
        csv << cols;
    csv << "\n";
    for (size_t i = 0; i < grid.size(); ++i) {
        csv << fmt(grid[i]);
        if (use_closed) append_photon_columns(csv, emission_closed_form(cfg, grid[i]));
        if (use_lindblad) append_photon_columns(csv, master[i].photon);
        csv << "\n";
    }
    write_output(o.out, csv.str());
    return 0;
}

int run_selfcheck_cmd() {
    const SelfCheckReport rep = run_selfcheck();
    for (const std::string& line : rep.lines) std::printf("%s\n", line.c_str());
    std::printf("selfcheck: %d passed, %d failed\n", rep.passed, rep.failed);
    return rep.failed == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"degenerate-level Jaynes-Cummings blocks, spectra and dynamics"};
    app.require_subcommand(1);

    DimsOpt dims_opt;
    CLI::App* dims_cmd = app.add_subcommand("dims", "invariant-subspace dimensions against l");
    dims_cmd->set_config("--config", "", "flat key=value configuration file");
    dims_cmd->add_option("--j", dims_opt.j, "level angular momentum (e.g. 3 or 3/2)")->required();
    dims_cmd->add_option("--n", dims_opt.n, "photon number")->required();
    dims_cmd->add_option("--out", dims_opt.out, "output CSV path (default stdout)");

    SpectrumOpt spec_opt;
    CLI::App* spec_cmd = app.add_subcommand("spectrum", "coupled/dark structure of one block");
    spec_cmd->set_config("--config", "", "flat key=value configuration file");
    spec_cmd->add_option("--j0", spec_opt.j0, "lower level J")->required();
    spec_cmd->add_option("--j1", spec_opt.j1, "upper level J")->required();
    spec_cmd->add_option("--n", spec_opt.n, "excitation number")->required();
    spec_cmd->add_option("--l", spec_opt.l, "total angular momentum projection")->required();
    spec_cmd->add_option("--delta", spec_opt.delta, "detuning (units of theta)");
    spec_cmd->add_option("--theta", spec_opt.theta, "coupling constant")
        ->check(CLI::PositiveNumber);
    spec_cmd->add_option("--out", spec_opt.out, "output CSV path (default stdout)");

    DynamicsOpt dyn_opt;
    CLI::App* dyn_cmd =
        app.add_subcommand("dynamics", "excited-level population under a thermal field");
    dyn_cmd->set_config("--config", "", "flat key=value configuration file");
    dyn_cmd->add_option("--j0", dyn_opt.j0, "lower level J")->required();
    dyn_cmd->add_option("--j1", dyn_opt.j1, "upper level J")->required();
    dyn_cmd->add_option("--delta", dyn_opt.delta, "detuning (units of theta)");
    dyn_cmd->add_option("--theta", dyn_opt.theta, "coupling constant")
        ->check(CLI::PositiveNumber);
    dyn_cmd->add_option("--nc", dyn_opt.nc, "mean thermal photon number")
        ->required()
        ->check(CLI::PositiveNumber);
    dyn_cmd->add_option("--t-start", dyn_opt.t0, "first output time");
    dyn_cmd->add_option("--t-end", dyn_opt.t1, "last output time");
    dyn_cmd->add_option("--t-step", dyn_opt.dt, "output time step");
    dyn_cmd->add_option("--eps", dyn_opt.eps, "thermal truncation tail bound");
    dyn_cmd->add_flag("--stretched", dyn_opt.stretched,
                      "stretched-state two-level reference curve instead");
    dyn_cmd->add_option("--out", dyn_opt.out, "output CSV path (default stdout)");

    SwapOpt swap_opt;
    CLI::App* swap_cmd =
        app.add_subcommand("swap", "sigma- detection probability for one sigma+ photon");
    swap_cmd->set_config("--config", "", "flat key=value configuration file");
    swap_cmd->add_option("--j0", swap_opt.j0, "lower level J")->required();
    swap_cmd->add_option("--j1", swap_opt.j1, "upper level J")->required();
    swap_cmd->add_option("--delta", swap_opt.delta, "detuning (units of theta)");
    swap_cmd->add_option("--theta", swap_opt.theta, "coupling constant")
        ->check(CLI::PositiveNumber);
    swap_cmd->add_option("--m", swap_opt.m, "initial lower-level magnetic number")->required();
    swap_cmd->add_option("--t-start", swap_opt.t0, "first output time");
    swap_cmd->add_option("--t-end", swap_opt.t1, "last output time");
    swap_cmd->add_option("--t-step", swap_opt.dt, "output time step");
    swap_cmd->add_option("--out", swap_opt.out, "output CSV path (default stdout)");

    EmitOpt emit_opt;
    CLI::App* emit_cmd =
        app.add_subcommand("emit", "single-photon emission with cavity and atomic decay");
    emit_cmd->set_config("--config", "", "flat key=value configuration file");
    emit_cmd->add_option("--j0", emit_opt.j0, "lower level J")->required();
    emit_cmd->add_option("--j1", emit_opt.j1, "upper level J")->required();
    emit_cmd->add_option("--delta", emit_opt.delta, "detuning (units of theta)");
    emit_cmd->add_option("--theta", emit_opt.theta, "coupling constant")
        ->check(CLI::PositiveNumber);
    emit_cmd->add_option("--gamma-c", emit_opt.gc, "cavity decay rate")
        ->required()
        ->check(CLI::NonNegativeNumber);
    emit_cmd->add_option("--gamma-a", emit_opt.ga, "spontaneous emission rate")
        ->required()
        ->check(CLI::NonNegativeNumber);
    emit_cmd->add_option("--m", emit_opt.m,
                         "pure initial upper-level magnetic number (default: uniform mixture)");
    emit_cmd->add_option("--t-start", emit_opt.t0, "first output time");
    emit_cmd->add_option("--t-end", emit_opt.t1, "last output time");
    emit_cmd->add_option("--t-step", emit_opt.dt, "output time step");
    emit_cmd->add_flag("--closed", emit_opt.closed, "strong-coupling closed form (default)");
    emit_cmd->add_flag("--lindblad", emit_opt.lindblad, "master-equation integration");
    emit_cmd->add_flag("--both", emit_opt.both, "both methods side by side");
    emit_cmd->add_option("--out", emit_opt.out, "output CSV path (default stdout)");

    CLI::App* check_cmd = app.add_subcommand("selfcheck", "run the built-in oracle suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (dims_cmd->parsed()) return run_dims(dims_opt);
        if (spec_cmd->parsed()) return run_spectrum(spec_opt);
        if (dyn_cmd->parsed()) return run_dynamics(dyn_opt);
        if (swap_cmd->parsed()) return run_swap(swap_opt);
        if (emit_cmd->parsed()) return run_emit(emit_opt);
        if (check_cmd->parsed()) return run_selfcheck_cmd();
    } catch (const std::logic_error& e) {  // bad parameters, dipole rule, empty blocks
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {  // numerical failures
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
