#ifndef CK_NUMERICS_HPP
#define CK_NUMERICS_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace ck::num {

using Mat4 = std::array<std::array<double, 4>, 4>;

// Root of fn on [lo, hi] by bisection. Requires a sign change on the bracket.
double bisect(const std::function<double(double)>& fn, double lo, double hi,
              double tol = 1e-13, int max_iter = 200);

// Adaptive Simpson quadrature of fn over [a, b].
double adaptive_simpson(const std::function<double(double)>& fn, double a, double b,
                        double tol = 1e-12);

// Eigenvalues of a real 4x4 matrix (general, possibly complex).
std::array<std::complex<double>, 4> eigenvalues(const Mat4& m);

// Singular values of an m x n matrix stored row-major, descending order.
std::vector<double> singular_values(std::span<const double> a, int rows, int cols);

// Portable uniform double in [lo, hi) from a mt19937_64 stream. The standard
// distributions are implementation-defined bit-for-bit; this is not.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}
inline double uniform(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform01(gen);
}

// Shortest round-trip decimal form of x (std::to_chars with no precision).
std::string format_shortest(double x);

} // namespace ck::num

#endif
