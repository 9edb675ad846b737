#pragma once

// Wigner 3j symbols and the dipole coupling coefficients of a degenerate
// J0 <-> J1 transition driven by a polarization-degenerate cavity mode.
//
// The 3j symbol is evaluated with the Racah single-sum formula carried out in
// exact big-integer rationals; floating point enters only through one final
// square root.  This keeps every downstream coupling matrix element accurate
// to the last double bit.

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <stdexcept>

#include "half_int.hpp"

namespace jcpol {

namespace detail {

using bigint = boost::multiprecision::cpp_int;
using bigrat = boost::multiprecision::cpp_rational;

inline bigint factorial(int n) {
    bigint r = 1;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

// signed square of the 3j symbol as an exact rational; sign < 0 means the
// symbol itself is negative
struct SignedSquare {
    int sign = 0;  // -1, 0, +1
    bigrat square = 0;
    double value() const {
        if (sign == 0) return 0.0;
        double num = boost::multiprecision::numerator(square).convert_to<double>();
        double den = boost::multiprecision::denominator(square).convert_to<double>();
        return sign * std::sqrt(num / den);
    }
};

inline SignedSquare wigner3j_exact(HalfInt j1, HalfInt j2, HalfInt j3,
                                   HalfInt m1, HalfInt m2, HalfInt m3) {
    // selection rules; any violation is a defined zero
    if ((m1 + m2 + m3).twice() != 0) return {};
    if (j1.twice() < 0 || j2.twice() < 0 || j3.twice() < 0) return {};
    if (abs(m1) > j1 || abs(m2) > j2 || abs(m3) > j3) return {};
    if (!on_lattice(j1, m1) || !on_lattice(j2, m2) || !on_lattice(j3, m3)) return {};
    if ((j1 + j2 + j3).twice() % 2 != 0) return {};
    if (abs(j1 - j2) > j3 || j3 > j1 + j2) return {};

    auto whole = [](HalfInt h) { return h.twice() / 2; };
    const int a = whole(j1 + j2 - j3);
    const int b = whole(j1 - j2 + j3);
    const int c = whole(-j1 + j2 + j3);

    const int t_min = std::max({0, whole(j2 - j3 - m1), whole(j1 - j3 + m2)});
    const int t_max = std::min({a, whole(j1 - m1), whole(j2 + m2)});

    bigrat sum = 0;
    for (int t = t_min; t <= t_max; ++t) {
        bigint den = factorial(t) * factorial(a - t) * factorial(whole(j1 - m1) - t) *
                     factorial(whole(j2 + m2) - t) * factorial(whole(j3 - j2 + m1) + t) *
                     factorial(whole(j3 - j1 - m2) + t);
        bigrat term(1, den);
        if (t % 2 != 0) term = -term;
        sum += term;
    }
    if (sum == 0) return {};

    bigrat pref(factorial(a) * factorial(b) * factorial(c) * factorial(whole(j1 + m1)) *
                    factorial(whole(j1 - m1)) * factorial(whole(j2 + m2)) * factorial(whole(j2 - m2)) *
                    factorial(whole(j3 + m3)) * factorial(whole(j3 - m3)),
                factorial(whole(j1 + j2 + j3) + 1));

    SignedSquare out;
    out.sign = (sum > 0) ? 1 : -1;
    if (whole(j1 - j2 - m3) % 2 != 0) out.sign = -out.sign;
    out.square = pref * sum * sum;
    return out;
}

}  // namespace detail

inline double wigner3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3) {
    return detail::wigner3j_exact(j1, j2, j3, m1, m2, m3).value();
}

// A dipole-allowed transition between a ground level J0 and an excited level J1.
struct TransitionSpec {
    HalfInt j0, j1;

    TransitionSpec(HalfInt ground, HalfInt excited) : j0(ground), j1(excited) {
        if (j0.twice() < 0 || j1.twice() < 0)
            throw std::invalid_argument("negative angular momentum");
        if ((j0.twice() + j1.twice()) % 2 != 0)
            throw std::invalid_argument("J0 and J1 must both be integer or both half-integer");
        if (abs(j0 - j1) > HalfInt(1))
            throw std::invalid_argument("dipole rule requires |J1 - J0| <= 1");
        if ((j0 + j1).twice() < 2)
            throw std::invalid_argument("J0 = J1 = 0 carries no dipole transition");
    }
};

// f coefficient of the transition for polarization channel q:
//   q = -1:  f1(m) = (-1)^(J0-m) (J0 1 J1; -m -1 m+1)   [sigma+ photon channel]
//   q = +1:  f2(m) = (-1)^(J0-m) (J0 1 J1; -m +1 m-1)   [sigma- photon channel]
//   q =  0:  f0(m) = (-1)^(J0-m) (J0 1 J1; -m  0 m)     [pi, free-space only]
// Vanishes (no error) whenever a projection falls off either level's lattice.
inline double f_coeff(const TransitionSpec& t, int q, HalfInt m) {
    if (q < -1 || q > 1) throw std::invalid_argument("polarization channel q must be -1, 0 or +1");
    if (!on_lattice(t.j0, m) || abs(m) > t.j0) return 0.0;
    double v = wigner3j(t.j0, HalfInt(1), t.j1, -m, HalfInt(q), m - HalfInt(q));
    if (((t.j0 - m).twice() / 2) % 2 != 0) v = -v;
    return v;
}

inline double f1(const TransitionSpec& t, HalfInt m) { return f_coeff(t, -1, m); }
inline double f2(const TransitionSpec& t, HalfInt m) { return f_coeff(t, +1, m); }
inline double f0(const TransitionSpec& t, HalfInt m) { return f_coeff(t, 0, m); }

// Matrix element of the raising interaction on |J0,m>|n,sigma>:
//   channel 1:  G1 = f1(m) sqrt((n+sigma)/2)   ->  |J1,m+1>|n-1,sigma-1>
//   channel 2:  G2 = f2(m) sqrt((n-sigma)/2)   ->  |J1,m-1>|n-1,sigma+1>
// (real part; the overall i of G^dag = i(G1^dag + G2^dag) is applied where the
// coupling matrix is assembled)
inline double coupling_g(const TransitionSpec& t, int channel, HalfInt m, int n, int sigma) {
    if (n < 0) throw std::invalid_argument("photon number must be non-negative");
    if (std::abs(sigma) > n) throw std::invalid_argument("|sigma| exceeds photon number");
    if ((n - sigma) % 2 != 0) throw std::invalid_argument("sigma must have the parity of n");
    if (channel == 1) return f1(t, m) * std::sqrt((n + sigma) / 2.0);
    if (channel == 2) return f2(t, m) * std::sqrt((n - sigma) / 2.0);
    throw std::invalid_argument("coupling channel must be 1 or 2");
}

}  // namespace jcpol
