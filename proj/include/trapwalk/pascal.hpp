#pragma once

#include "trapwalk/model.hpp"

namespace trapwalk {

/// Symmetric stay-or-unit-step kernel on Z^d: P(0) = stay, P(+-e_i) =
/// axis[i].  "Lazy" means stay >= 1/2, the hypothesis under which the
/// trapping sum is minimised by the constant path; the constructor accepts
/// non-lazy kernels so the necessity of the hypothesis can be demonstrated.
struct LazyWalkKernel {
    int d = 1;
    double stay = 0.5;
    std::vector<double> axis;

    LazyWalkKernel(int d_, double stay_, std::vector<double> axis_) : d(d_), stay(stay_), axis(std::move(axis_)) {
        if (d < 1 || static_cast<int>(axis.size()) != d) throw std::invalid_argument("LazyWalkKernel: bad dimension");
        double total = stay;
        for (double a : axis) {
            if (!(a >= 0.0)) throw std::invalid_argument("LazyWalkKernel: negative step probability");
            total += 2.0 * a;
        }
        if (!(stay >= 0.0) || std::abs(total - 1.0) > 1e-12)
            throw std::invalid_argument("LazyWalkKernel: probabilities must sum to 1");
    }

    bool lazy() const { return stay >= 0.5 - 1e-15; }
};

/// Deterministic discrete-time path X(0..n); arbitrary finite paths are
/// accepted, the trapping-sum comparison needs no structure on X.
struct DiscretePath {
    std::vector<LatticePoint> positions;

    int steps() const { return static_cast<int>(positions.size()) - 1; }
    static DiscretePath constant(int d, int n) {
        DiscretePath p;
        p.positions.assign(static_cast<size_t>(n) + 1, origin(d));
        return p;
    }
    static DiscretePath from_steps_1d(const std::vector<int>& steps) {
        DiscretePath p;
        int x = 0;
        p.positions.push_back({0});
        for (int s : steps) {
            x += s;
            p.positions.push_back({x});
        }
        return p;
    }
};

/// S_n^X = sum_y (1 - E_y[(1-q)^{#{0 <= i <= n : Y(i) = X(i)}}]), the
/// expected number of independent q-trapping walkers that meet the path.
/// Computed by backward dynamic programming on a box that contains every
/// site from which the path is reachable in n kernel steps.
double trapping_sum(const LazyWalkKernel& kernel, const DiscretePath& path, int n, double q);

struct PascalCheckResult {
    double moving = 0.0;    // S_n for the given path
    double pinned = 0.0;    // S_n for the constant path of the same length
    double margin = 0.0;    // moving - pinned
    bool verdict = false;   // margin >= -1e-12
};

/// The comparison S_n^X >= S_n^0; requires a lazy kernel.
PascalCheckResult pascal_check(const LazyWalkKernel& kernel, const DiscretePath& path, int n, double q);

/// q = 1 case: trapping_sum equals E |range of (Y - X) over 0..n|.
double expected_range(const LazyWalkKernel& kernel, const DiscretePath& path, int n);

struct KernelMonotonicityResult {
    bool space_ok = true;   // p_k(0) >= p_k(y) for all k <= n_max
    bool time_ok = true;    // p_k(0) >= p_{k+1}(0) for all k < n_max
    int first_violation_step = -1;
};

/// Exact n-step convolution check of the two monotonicity properties a lazy
/// kernel guarantees (and a 0.2-stay kernel violates).
KernelMonotonicityResult kernel_monotonicity_check(const LazyWalkKernel& kernel, int n_max);

/// Exhaustive enumeration oracle for trapping_sum (support^n trajectories
/// from every relevant start); refuses when the enumeration would exceed
/// ~5e7 states.
double brute_force_oracle(const LazyWalkKernel& kernel, const DiscretePath& path, int n, double q);

/// Residuals of the one-step comparison recursion
///   D_n >= (1 - q p_1(0)) D_{n-1} + q sum_k (p_{n-k-1}(0) - p_{n-k}(0)) D_k
/// with D_k = S_k^X - S_k^0; every residual should be >= -1e-12.
std::vector<double> induction_gap(const LazyWalkKernel& kernel, const DiscretePath& path, int n, double q);

}  // namespace trapwalk
