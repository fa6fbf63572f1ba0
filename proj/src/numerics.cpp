#include "ck/numerics.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ck/errors.hpp"

namespace ck::num {

double bisect(const std::function<double(double)>& fn, double lo, double hi,
              double tol, int max_iter) {
    double flo = fn(lo);
    double fhi = fn(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw NumericalError("bisect: no sign change on bracket");
    for (int i = 0; i < max_iter; ++i) {
        double mid = 0.5 * (lo + hi);
        double fmid = fn(mid);
        if (fmid == 0.0) return mid;
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
        if (hi - lo < tol) break;
    }
    return 0.5 * (lo + hi);
}

namespace {

double simpson(const std::function<double(double)>& fn, double a, double m, double b,
               double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_rec(const std::function<double(double)>& fn, double a, double m, double b,
                   double fa, double fm, double fb, double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = fn(lm), frm = fn(rm);
    double left = simpson(fn, a, lm, m, fa, flm, fm);
    double right = simpson(fn, m, rm, b, fm, frm, fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(fn, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(fn, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& fn, double a, double b,
                        double tol) {
    if (a == b) return 0.0;
    double m = 0.5 * (a + b);
    double fa = fn(a), fm = fn(m), fb = fn(b);
    double whole = simpson(fn, a, m, b, fa, fm, fb);
    return simpson_rec(fn, a, m, b, fa, fm, fb, whole, tol, 48);
}

std::array<std::complex<double>, 4> eigenvalues(const Mat4& m) {
    Eigen::Matrix4d em;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) em(i, j) = m[i][j];
    Eigen::EigenSolver<Eigen::Matrix4d> solver(em, /*computeEigenvectors=*/false);
    std::array<std::complex<double>, 4> out;
    for (int i = 0; i < 4; ++i) out[i] = solver.eigenvalues()(i);
    return out;
}

std::vector<double> singular_values(std::span<const double> a, int rows, int cols) {
    Eigen::MatrixXd em(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) em(i, j) = a[static_cast<std::size_t>(i) * cols + j];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(em);
    std::vector<double> out(svd.singularValues().data(),
                            svd.singularValues().data() + svd.singularValues().size());
    return out;
}

std::string format_shortest(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

} // namespace ck::num
