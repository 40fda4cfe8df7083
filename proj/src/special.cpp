#include "trapwalk/special.hpp"

#include <cmath>
#include <stdexcept>

namespace trapwalk {

namespace {

/// Asymptotic series for e^{-x} I_0(x), reliable for x >~ 50.
double scaled_i0_asymptotic(double x) {
    double sum = 1.0, term = 1.0;
    for (int k = 1; k <= 30; ++k) {
        double num = 2.0 * k - 1.0;
        term *= num * num / (8.0 * k * x);
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum / std::sqrt(2.0 * M_PI * x);
}

}  // namespace

std::vector<double> bessel_i_scaled_all(int nmax, double x) {
    if (nmax < 0) throw std::invalid_argument("bessel_i_scaled_all: order must be >= 0");
    if (!(x >= 0.0)) throw std::invalid_argument("bessel_i_scaled_all: x must be >= 0");
    std::vector<double> out(static_cast<size_t>(nmax) + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }

    // Miller backward recurrence b_{k-1} = b_{k+1} + (2k/x) b_k, started
    // well above both the order and the turning point, normalised with
    // I_0(x) + 2 sum_{k>=1} I_k(x) = e^x.
    double top = std::max(static_cast<double>(nmax), x);
    int m = nmax + 2 + static_cast<int>(12.0 * std::sqrt(top + 10.0) + 0.25 * x + 30.0);

    double bp = 0.0;     // b_{k+1}
    double bc = 1e-280;  // b_k
    double sum = 0.0;    // sum of b_k over k = 1..m
    for (int k = m; k >= 1; --k) {
        sum += bc;
        if (k <= nmax) out[static_cast<size_t>(k)] = bc;
        double bm = bp + (2.0 * k / x) * bc;
        bp = bc;
        bc = bm;
        if (bc > 1e280) {
            bc *= 1e-280;
            bp *= 1e-280;
            sum *= 1e-280;
            for (auto& v : out) v *= 1e-280;
        }
    }
    out[0] = bc;  // b_0
    double norm = bc + 2.0 * sum;
    for (auto& v : out) v /= norm;
    return out;
}

double bessel_i_scaled(int order, double x) {
    order = std::abs(order);
    if (!(x >= 0.0)) throw std::invalid_argument("bessel_i_scaled: x must be >= 0");
    if (x == 0.0) return order == 0 ? 1.0 : 0.0;
    if (order == 0 && x > 60.0) return scaled_i0_asymptotic(x);
    return bessel_i_scaled_all(order, x)[static_cast<size_t>(order)];
}

double bessel_i(int order, double x) {
    return std::exp(x) * bessel_i_scaled(order, x);
}

}  // namespace trapwalk
