#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace trapwalk {

/// Site of Z^d.  Kept as a plain vector so dimensions stay run-time values.
using LatticePoint = std::vector<int>;

inline LatticePoint origin(int d) { return LatticePoint(static_cast<size_t>(d), 0); }

inline int supnorm(const LatticePoint& x) {
    int m = 0;
    for (int c : x) m = std::max(m, std::abs(c));
    return m;
}

inline LatticePoint sub(const LatticePoint& a, const LatticePoint& b) {
    LatticePoint r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

/// Directions are encoded as 2*axis + (positive ? 1 : 0).
inline void apply_step(LatticePoint& x, int dir) {
    x[static_cast<size_t>(dir >> 1)] += (dir & 1) ? 1 : -1;
}

/// Model parameters: walk jump rate kappa, trap jump rate rho, trap density
/// nu, killing strength gamma.  gamma = +infinity is a first-class value
/// (hard traps); negative gamma is accepted where the catalytic regime makes
/// sense.  gamma = 0 is rejected, the model degenerates.
struct ModelParams {
    int d = 1;
    double kappa = 0.0;
    double rho = 1.0;
    double nu = 1.0;
    double gamma = 1.0;

    bool gamma_infinite() const { return std::isinf(gamma) && gamma > 0.0; }

    void validate() const {
        if (d < 1) throw std::invalid_argument("ModelParams: d must be >= 1");
        if (!(kappa >= 0.0) || std::isinf(kappa)) throw std::invalid_argument("ModelParams: kappa must be finite and >= 0");
        if (!(rho > 0.0) || std::isinf(rho)) throw std::invalid_argument("ModelParams: rho must be finite and > 0");
        if (!(nu >= 0.0) || std::isinf(nu)) throw std::invalid_argument("ModelParams: nu must be finite and >= 0");
        if (std::isnan(gamma) || gamma == 0.0) throw std::invalid_argument("ModelParams: gamma must be nonzero (or +inf)");
        if (std::isinf(gamma) && gamma < 0.0) throw std::invalid_argument("ModelParams: gamma = -inf is not a model");
    }
};

/// Thrown when a certified truncation (observation window, heat-flow box)
/// cannot meet the requested tolerance.  suggested_radius is the smallest
/// radius that would.
struct CertificationError : std::runtime_error {
    int suggested_radius;
    explicit CertificationError(const std::string& msg, int suggested)
        : std::runtime_error(msg), suggested_radius(suggested) {}
};

/// Thrown when a query leaves the certified observation window in space or
/// time.  Out-of-window peeks are silent bias, so they are hard errors.
struct OutOfWindowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Centered sup-norm box [-radius, radius]^d with row-major linear indexing.
struct Box {
    int d = 1;
    int radius = 0;

    Box() = default;
    Box(int d_, int radius_) : d(d_), radius(radius_) {
        if (d < 1 || radius < 0) throw std::invalid_argument("Box: bad dimensions");
        double n = 1;
        for (int i = 0; i < d; ++i) n *= side();
        if (n > 2e9) throw std::invalid_argument("Box: too many sites");
    }

    int side() const { return 2 * radius + 1; }

    size_t size() const {
        size_t n = 1;
        for (int i = 0; i < d; ++i) n *= static_cast<size_t>(side());
        return n;
    }

    bool contains(const LatticePoint& x) const { return supnorm(x) <= radius; }

    size_t index(const LatticePoint& x) const {
        size_t idx = 0;
        for (int i = 0; i < d; ++i) idx = idx * static_cast<size_t>(side()) + static_cast<size_t>(x[static_cast<size_t>(i)] + radius);
        return idx;
    }

    LatticePoint point(size_t idx) const {
        LatticePoint x(static_cast<size_t>(d));
        for (int i = d - 1; i >= 0; --i) {
            x[static_cast<size_t>(i)] = static_cast<int>(idx % static_cast<size_t>(side())) - radius;
            idx /= static_cast<size_t>(side());
        }
        return x;
    }
};

}  // namespace trapwalk
