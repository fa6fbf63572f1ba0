#include "ck/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ck/errors.hpp"
#include "ck/numerics.hpp"

namespace ck {

SurfaceSpec make_surface(double K, double L, double gamma_c) {
    if (!(K > 0.0)) throw ValidationError("make_surface: K must be positive, got " + std::to_string(K));
    if (!(L > 0.0)) throw ValidationError("make_surface: L must be positive, got " + std::to_string(L));
    if (!(gamma_c > 0.0))
        throw ValidationError("make_surface: gamma_c must be positive, got " + std::to_string(gamma_c));
    SurfaceSpec s;
    s.K = K;
    s.L = L;
    s.gamma_c = gamma_c;
    s.sqrt_K = std::sqrt(K);
    s.beta = L * s.sqrt_K;
    s.r_north = 0.0;
    s.r_south = std::numbers::pi / s.sqrt_K;
    s.embeddable = s.beta <= 1.0;
    return s;
}

SurfaceSpec surface_from_beta(double beta, double gamma_c) {
    return make_surface(1.0, beta, gamma_c);
}

double profile_f(const SurfaceSpec& s, double r) { return s.L * std::sin(s.sqrt_K * r); }

double profile_fp(const SurfaceSpec& s, double r) {
    return s.L * s.sqrt_K * std::cos(s.sqrt_K * r);
}

double profile_theta(const SurfaceSpec& s, double r) {
    double x = s.sqrt_K * r;
    return -std::cos(x) / (std::sin(x) * s.L * s.L * s.sqrt_K);
}

double inv_f_theta(const SurfaceSpec& s, double r) {
    return -s.beta / std::cos(s.sqrt_K * r);
}

Profile profile(const SurfaceSpec& s, double r) {
    if (!(r > s.r_north) || !(r < s.r_south))
        throw ValidationError("profile: r = " + std::to_string(r) +
                              " is at or beyond a pole (f = 0, Theta unbounded)");
    Profile p;
    p.f = profile_f(s, r);
    p.fp = profile_fp(s, r);
    p.Theta = profile_theta(s, r);
    p.V = s.gamma_c * p.Theta;
    return p;
}

double laplace_beltrami_residual(const SurfaceSpec& s, double r, double step) {
    double margin = s.pole_margin();
    if (r < s.r_north + margin || r > s.r_south - margin)
        throw ValidationError("laplace_beltrami_residual: r within pole margin");
    if (!(step > 0.0) || r - 2.0 * step <= s.r_north || r + 2.0 * step >= s.r_south)
        throw NumericalError("laplace_beltrami_residual: step size unusable this close to a pole");

    auto V = [&](double rr) { return s.gamma_c * profile_theta(s, rr); };
    auto flux = [&](double rr) {
        // f^2 * dV/dr with dV/dr by central difference
        double dV = (V(rr + step) - V(rr - step)) / (2.0 * step);
        double f = profile_f(s, rr);
        return f * f * dV;
    };
    double f = profile_f(s, r);
    return (flux(r + step) - flux(r - step)) / (2.0 * step * f * f);
}

std::optional<int> classify_orbifold(const SurfaceSpec& s, int m_max) {
    if (m_max < 1) throw ValidationError("classify_orbifold: m_max must be >= 1");
    for (int n = 1; n <= m_max; ++n) {
        double target = 1.0 / n;
        if (std::abs(s.beta - target) <= kRationalityTol * std::max(s.beta, target))
            return n;
    }
    return std::nullopt;
}

double embedding_profile(const SurfaceSpec& s, double r) {
    if (!s.embeddable)
        throw ValidationError("embedding_profile: beta > 1, surface is an abstract metric only");
    if (r < s.r_north || r > s.r_south)
        throw ValidationError("embedding_profile: r outside [r_north, r_south]");
    auto integrand = [&](double rho) {
        double fp = profile_fp(s, rho);
        return std::sqrt(std::max(0.0, 1.0 - fp * fp));
    };
    return num::adaptive_simpson(integrand, s.r_north, r, 1e-12);
}

} // namespace ck
