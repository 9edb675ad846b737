#pragma once

// Half-integer angular momenta and projections, stored exactly as twice the value.

#include <compare>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace jcpol {

class HalfInt {
public:
    constexpr HalfInt() = default;
    constexpr HalfInt(int whole) : twice_(2 * whole) {}

    static constexpr HalfInt from_twice(int t) {
        HalfInt h;
        h.twice_ = t;
        return h;
    }

    constexpr int twice() const { return twice_; }
    constexpr bool is_integer() const { return twice_ % 2 == 0; }
    constexpr double value() const { return 0.5 * twice_; }

    // valid only for integer values
    constexpr int whole() const { return twice_ / 2; }

    constexpr HalfInt operator-() const { return from_twice(-twice_); }
    friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return from_twice(a.twice_ + b.twice_); }
    friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return from_twice(a.twice_ - b.twice_); }
    friend constexpr auto operator<=>(HalfInt a, HalfInt b) = default;

    HalfInt& operator+=(HalfInt b) { twice_ += b.twice_; return *this; }
    HalfInt& operator-=(HalfInt b) { twice_ -= b.twice_; return *this; }

    // "2", "-3/2", ...
    std::string str() const {
        if (is_integer()) return std::to_string(twice_ / 2);
        return std::to_string(twice_) + "/2";
    }

private:
    int twice_ = 0;
};

inline HalfInt abs(HalfInt a) { return HalfInt::from_twice(std::abs(a.twice())); }

// true if m is a valid projection lattice point for momentum j
inline bool on_lattice(HalfInt j, HalfInt m) { return (j.twice() - m.twice()) % 2 == 0; }

// accepts "3/2", "-1/2", "1.5", "2", "-2.0"
inline HalfInt parse_half_int(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty half-integer");
    auto bad = [&] { return std::invalid_argument("not a half-integer: '" + s + "'"); };
    std::size_t slash = s.find('/');
    try {
        if (slash != std::string::npos) {
            int num = std::stoi(s.substr(0, slash));
            int den = std::stoi(s.substr(slash + 1));
            if (den == 1) return HalfInt(num);
            if (den == 2) return HalfInt::from_twice(num);
            throw bad();
        }
        double v = std::stod(s);
        double tw = 2.0 * v;
        int t = static_cast<int>(tw > 0 ? tw + 0.5 : tw - 0.5);
        if (std::abs(tw - t) > 1e-9) throw bad();
        return HalfInt::from_twice(t);
    } catch (const std::invalid_argument&) {
        throw bad();
    } catch (const std::out_of_range&) {
        throw bad();
    }
}

}  // namespace jcpol
