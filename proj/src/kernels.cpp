#include "trapwalk/kernels.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "trapwalk/special.hpp"

namespace trapwalk {

double transition_prob(double t, const LatticePoint& x, double rate, int d) {
    if (d < 1) throw std::invalid_argument("transition_prob: d must be >= 1");
    if (static_cast<int>(x.size()) != d) throw std::invalid_argument("transition_prob: point/dimension mismatch");
    if (!(t >= 0.0) || !(rate >= 0.0)) throw std::invalid_argument("transition_prob: t and rate must be >= 0");
    if (rate == 0.0 || t == 0.0) return supnorm(x) == 0 ? 1.0 : 0.0;
    double u = t * rate / d;
    int nmax = 0;
    for (int c : x) nmax = std::max(nmax, std::abs(c));
    auto iv = bessel_i_scaled_all(nmax, u);
    double p = 1.0;
    for (int c : x) p *= iv[static_cast<size_t>(std::abs(c))];
    return p;
}

double return_prob(double t, double rate, int d) {
    if (rate == 0.0 || t == 0.0) return 1.0;
    return std::pow(bessel_i_scaled(0, t * rate / d), d);
}

namespace {

/// Adaptive Simpson with absolute tolerance.
double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

/// Integrate f over [0, T] with panels doubling in width, so the quadrature
/// resolves both the analytic origin and the slow algebraic tail.
double integrate_dyadic(const std::function<double(double)>& f, double T, double tol) {
    double total = 0.0, a = 0.0, b = 1.0;
    int panels = 2 + static_cast<int>(std::ceil(std::log2(std::max(2.0, T))));
    while (a < T) {
        if (b > T) b = T;
        total += adaptive_simpson(f, a, b, tol / panels);
        a = b;
        b *= 2.0;
    }
    return total;
}

}  // namespace

double green_function(int d, double tol) {
    if (d < 3) throw std::domain_error("green_function: diverges for d <= 2");
    if (!(tol > 0.0)) throw std::invalid_argument("green_function: tol must be > 0");
    // p_t(0) = (d/(2 pi t))^{d/2} (1 + d^2/(8t) + O(1/t^2)); keep the first
    // correction in the tail value and certify against the next one.
    double c = std::pow(d / (2.0 * M_PI), 0.5 * d);
    double T = 16.0;
    auto tail_error = [&](double TT) {
        return c * (d * d / 8.0) * (2.0 / d) * std::pow(TT, -0.5 * d) * 1.5;
    };
    while (tail_error(T) > 0.5 * tol) T *= 2.0;
    auto f = [d](double t) { return return_prob(t, 1.0, d); };
    double head = integrate_dyadic(f, T, 0.25 * tol);
    double tail = c * (2.0 / (d - 2.0)) * std::pow(T, 1.0 - 0.5 * d) + c * (d / 4.0) * std::pow(T, -0.5 * d);
    return head + tail;
}

double laplace_p(double lambda, int d) {
    if (d < 1) throw std::invalid_argument("laplace_p: d must be >= 1");
    if (!(lambda > 0.0)) throw std::domain_error("laplace_p: requires lambda > 0 (diverges in d <= 2)");
    auto f = [=](double t) { return std::exp(-lambda * t) * return_prob(t, 1.0, d); };
    // Rough scale first, then a horizon with negligible certified tail:
    // int_T^inf e^{-lambda t} p_t(0) dt <= e^{-lambda T} p_T(0) / lambda.
    double rough = integrate_dyadic(f, std::min(64.0, 8.0 / lambda), 1e-12);
    rough = std::max(rough, 1e-8);
    double T = 8.0 / lambda;
    while (std::exp(-lambda * T) * return_prob(T, 1.0, d) / lambda > 1e-10 * rough) T *= 2.0;
    return integrate_dyadic(f, T, 1e-10 * rough);
}

double hat_v0(double lambda, const ModelParams& params) {
    params.validate();
    if (params.gamma_infinite()) throw std::domain_error("hat_v0: gamma must be finite");
    if (!(lambda > 0.0)) throw std::domain_error("hat_v0: requires lambda > 0");
    double ph = laplace_p(lambda / params.rho, params.d);
    return (1.0 / lambda) * params.rho / (params.rho + params.gamma * ph);
}

double rate_j(double y) {
    y = std::abs(y);
    // y asinh(y) - sqrt(1+y^2) + 1, evaluated stably near 0
    if (y < 1e-4) return 0.5 * y * y * (1.0 - y * y / 12.0);
    return y * std::asinh(y) - std::sqrt(1.0 + y * y) + 1.0;
}

double rate_function_J(const std::vector<double>& v, double kappa, int d) {
    if (d < 1 || static_cast<int>(v.size()) != d) throw std::invalid_argument("rate_function_J: bad dimension");
    if (!(kappa >= 0.0)) throw std::invalid_argument("rate_function_J: kappa must be >= 0");
    if (kappa == 0.0) {
        for (double c : v)
            if (c != 0.0) return std::numeric_limits<double>::infinity();
        return 0.0;
    }
    double J = 0.0;
    for (double c : v) J += (kappa / d) * rate_j(d * c / kappa);
    return J;
}

double lclt_approx(double t, const LatticePoint& x, double kappa, int d) {
    if (d < 1 || static_cast<int>(x.size()) != d) throw std::invalid_argument("lclt_approx: bad dimension");
    if (!(t > 0.0) || !(kappa > 0.0)) throw std::invalid_argument("lclt_approx: requires t > 0 and kappa > 0");
    std::vector<double> v(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) v[static_cast<size_t>(i)] = x[static_cast<size_t>(i)] / t;
    double J = rate_function_J(v, kappa, d);
    double denom = std::pow(2.0 * M_PI * t, 0.5 * d);
    for (int i = 0; i < d; ++i) {
        double vi = v[static_cast<size_t>(i)];
        denom *= std::pow(vi * vi + (kappa / d) * (kappa / d), 0.25);
    }
    return std::exp(-J * t) / denom;
}

double exit_prob_bound(double rate, double t, int d, int R) {
    if (R < 1) return 1.0;
    if (rate == 0.0 || t == 0.0) return 0.0;
    double per = rate * t / d;
    double b = 4.0 * d * std::exp(-per * rate_j(R / per));
    return std::min(1.0, b);
}

int min_radius_for_exit_bound(double rate, double t, int d, double eps) {
    if (rate == 0.0 || t == 0.0) return 0;
    int lo = 1, hi = 2;
    while (exit_prob_bound(rate, t, d, hi) > eps) {
        hi *= 2;
        if (hi > (1 << 28)) throw std::runtime_error("min_radius_for_exit_bound: no feasible radius");
    }
    while (lo < hi) {
        int mid = lo + (hi - lo) / 2;
        if (exit_prob_bound(rate, t, d, mid) <= eps)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

double poisson_tail_bound(double mean, int k) {
    if (k <= mean || mean <= 0.0) return 1.0;
    double u = k / mean;
    return std::exp(-mean * (u * std::log(u) - u + 1.0));
}

}  // namespace trapwalk
