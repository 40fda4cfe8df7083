#include "trapwalk/pascal.hpp"

#include <cmath>
#include <functional>

namespace trapwalk {

namespace {

/// Axis-aligned box [lo_i, hi_i] with row-major indexing; reads outside the
/// box return a caller-chosen constant.
struct RectBox {
    std::vector<int> lo, hi, dims;
    std::vector<size_t> stride;
    size_t total = 1;

    RectBox(const std::vector<int>& lo_, const std::vector<int>& hi_) : lo(lo_), hi(hi_) {
        size_t d = lo.size();
        dims.resize(d);
        stride.assign(d, 1);
        for (size_t i = 0; i < d; ++i) {
            dims[i] = hi[i] - lo[i] + 1;
            total *= static_cast<size_t>(dims[i]);
        }
        for (size_t i = d; i-- > 1;) stride[i - 1] = stride[i] * static_cast<size_t>(dims[i]);
        if (total > 200u * 1000u * 1000u) throw std::invalid_argument("pascal DP box too large");
    }

    size_t index(const LatticePoint& x) const {
        size_t idx = 0;
        for (size_t i = 0; i < lo.size(); ++i) idx += stride[i] * static_cast<size_t>(x[i] - lo[i]);
        return idx;
    }
};

RectBox dp_box(const DiscretePath& path, int n, int d) {
    std::vector<int> lo(static_cast<size_t>(d)), hi(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) {
        int mn = path.positions[0][static_cast<size_t>(i)], mx = mn;
        for (const auto& p : path.positions) {
            mn = std::min(mn, p[static_cast<size_t>(i)]);
            mx = std::max(mx, p[static_cast<size_t>(i)]);
        }
        lo[static_cast<size_t>(i)] = mn - n;
        hi[static_cast<size_t>(i)] = mx + n;
    }
    return RectBox(lo, hi);
}

void validate_inputs(const LazyWalkKernel& kernel, const DiscretePath& path, int n, double q) {
    if (n < 0) throw std::invalid_argument("trapping_sum: n must be >= 0");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("trapping_sum: q must be in [0,1]");
    if (path.steps() < n) throw std::invalid_argument("trapping_sum: path shorter than n");
    for (const auto& p : path.positions)
        if (static_cast<int>(p.size()) != kernel.d) throw std::invalid_argument("trapping_sum: dimension mismatch");
}

/// One kernel convolution with out-of-box values read as `outside`.
void convolve(const RectBox& box, const LazyWalkKernel& kernel, const std::vector<double>& in,
              std::vector<double>& out, double outside) {
    size_t d = box.lo.size();
    std::vector<int> coord(box.lo.begin(), box.lo.end());
    for (size_t idx = 0; idx < box.total; ++idx) {
        double acc = kernel.stay * in[idx];
        for (size_t i = 0; i < d; ++i) {
            double up = coord[i] < box.hi[i] ? in[idx + box.stride[i]] : outside;
            double dn = coord[i] > box.lo[i] ? in[idx - box.stride[i]] : outside;
            acc += kernel.axis[i] * (up + dn);
        }
        out[idx] = acc;
        for (size_t i = d; i-- > 0;) {
            if (++coord[i] <= box.hi[i]) break;
            coord[i] = box.lo[i];
        }
    }
}

}  // namespace

double trapping_sum(const LazyWalkKernel& kernel, const DiscretePath& path, int n, double q) {
    validate_inputs(kernel, path, n, q);
    RectBox box = dp_box(path, n, kernel.d);
    std::vector<double> h(box.total, 1.0), tmp(box.total);
    for (int i = n; i >= 0; --i) {
        convolve(box, kernel, h, tmp, 1.0);
        std::swap(h, tmp);
        h[box.index(path.positions[static_cast<size_t>(i)])] *= 1.0 - q;
    }
    double s = 0.0;
    for (double v : h) s += 1.0 - v;
    return s;
}

PascalCheckResult pascal_check(const LazyWalkKernel& kernel, const DiscretePath& path, int n, double q) {
    if (!kernel.lazy()) throw std::domain_error("pascal_check: kernel must be lazy (stay probability >= 1/2)");
    PascalCheckResult r;
    r.moving = trapping_sum(kernel, path, n, q);
    r.pinned = trapping_sum(kernel, DiscretePath::constant(kernel.d, path.steps()), n, q);
    r.margin = r.moving - r.pinned;
    r.verdict = r.margin >= -1e-12;
    return r;
}

double expected_range(const LazyWalkKernel& kernel, const DiscretePath& path, int n) {
    return trapping_sum(kernel, path, n, 1.0);
}

KernelMonotonicityResult kernel_monotonicity_check(const LazyWalkKernel& kernel, int n_max) {
    if (n_max < 1) throw std::invalid_argument("kernel_monotonicity_check: n_max must be >= 1");
    std::vector<int> lo(static_cast<size_t>(kernel.d), -(n_max + 1)), hi(static_cast<size_t>(kernel.d), n_max + 1);
    RectBox box{lo, hi};
    std::vector<double> p(box.total, 0.0), tmp(box.total);
    size_t zero = box.index(origin(kernel.d));
    p[zero] = 1.0;

    KernelMonotonicityResult res;
    double prev0 = 1.0;
    for (int k = 1; k <= n_max; ++k) {
        convolve(box, kernel, p, tmp, 0.0);
        std::swap(p, tmp);
        double p0 = p[zero];
        for (double v : p) {
            if (v > p0 + 1e-15 && res.space_ok) {
                res.space_ok = false;
                if (res.first_violation_step < 0) res.first_violation_step = k;
            }
        }
        if (p0 > prev0 + 1e-15 && res.time_ok) {
            res.time_ok = false;
            if (res.first_violation_step < 0) res.first_violation_step = k;
        }
        prev0 = p0;
    }
    return res;
}

double brute_force_oracle(const LazyWalkKernel& kernel, const DiscretePath& path, int n, double q) {
    validate_inputs(kernel, path, n, q);
    RectBox box = dp_box(path, n, kernel.d);
    double states = static_cast<double>(box.total) * std::pow(2.0 * kernel.d + 1.0, n);
    if (states > 5e7)
        throw std::invalid_argument("brute_force_oracle: enumeration of " + std::to_string(states) +
                                    " states refused (limit 5e7); use trapping_sum");

    double total = 0.0;
    std::function<double(LatticePoint&, int, int)> walk = [&](LatticePoint& y, int epoch, int meets) -> double {
        if (y == path.positions[static_cast<size_t>(epoch)]) ++meets;
        if (epoch == n) return std::pow(1.0 - q, meets);
        double acc = kernel.stay * walk(y, epoch + 1, meets);
        for (int i = 0; i < kernel.d; ++i) {
            for (int sgn : {-1, +1}) {
                y[static_cast<size_t>(i)] += sgn;
                acc += kernel.axis[static_cast<size_t>(i)] * walk(y, epoch + 1, meets);
                y[static_cast<size_t>(i)] -= sgn;
            }
        }
        return acc;
    };

    std::vector<int> coord(box.lo.begin(), box.lo.end());
    for (size_t idx = 0; idx < box.total; ++idx) {
        LatticePoint y(coord.begin(), coord.end());
        total += 1.0 - walk(y, 0, 0);
        for (size_t i = coord.size(); i-- > 0;) {
            if (++coord[i] <= box.hi[i]) break;
            coord[i] = box.lo[i];
        }
    }
    return total;
}

std::vector<double> induction_gap(const LazyWalkKernel& kernel, const DiscretePath& path, int n, double q) {
    validate_inputs(kernel, path, n, q);
    std::vector<double> diff(static_cast<size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        double sx = trapping_sum(kernel, path, k, q);
        double s0 = trapping_sum(kernel, DiscretePath::constant(kernel.d, k), k, q);
        diff[static_cast<size_t>(k)] = sx - s0;
    }

    // return probabilities p_j(0) of the kernel, exact convolution
    std::vector<int> lo(static_cast<size_t>(kernel.d), -(n + 1)), hi(static_cast<size_t>(kernel.d), n + 1);
    RectBox box{lo, hi};
    std::vector<double> p(box.total, 0.0), tmp(box.total);
    size_t zero = box.index(origin(kernel.d));
    p[zero] = 1.0;
    std::vector<double> p0(static_cast<size_t>(n) + 1);
    p0[0] = 1.0;
    for (int j = 1; j <= n; ++j) {
        convolve(box, kernel, p, tmp, 0.0);
        std::swap(p, tmp);
        p0[static_cast<size_t>(j)] = p[zero];
    }

    std::vector<double> residuals;
    for (int k = 1; k <= n; ++k) {
        double rhs = (1.0 - q * p0[1]) * diff[static_cast<size_t>(k - 1)];
        for (int j = 0; j <= k - 2; ++j)
            rhs += q * (p0[static_cast<size_t>(k - j - 1)] - p0[static_cast<size_t>(k - j)]) *
                   diff[static_cast<size_t>(j)];
        residuals.push_back(diff[static_cast<size_t>(k)] - rhs);
    }
    return residuals;
}

}  // namespace trapwalk
