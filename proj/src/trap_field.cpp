#include "trapwalk/trap_field.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "trapwalk/kernels.hpp"
#include "trapwalk/rng.hpp"

namespace trapwalk {

namespace {

double shell_count(int m, int d) {
    if (m == 0) return 1.0;
    return std::pow(2.0 * m + 1.0, d) - std::pow(2.0 * m - 1.0, d);
}

constexpr uint64_t kCountsTag = 1;
constexpr uint64_t kTrajectoryTag = 2;

// Streams are keyed by the absolute lattice site, not the window-array index,
// so enlarging the window (or horizon) extends a realization without
// disturbing the traps already sampled.
uint64_t site_key(const LatticePoint& x) {
    constexpr int kHalf = 1 << 20;
    uint64_t key = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= -kHalf || x[i] >= kHalf)
            throw std::invalid_argument("trap field window exceeds the addressable site range");
        key |= static_cast<uint64_t>(x[i] + kHalf) << (21 * i);
    }
    return key;
}

uint64_t fnv1a(uint64_t h, const void* data, size_t n) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ULL;
    }
    return h;
}

uint64_t field_digest(const TrapFieldRealization& field) {
    uint64_t h = 0xCBF29CE484222325ULL;
    for (const auto& traj : field.trajectories) {
        for (int c : traj.start) h = fnv1a(h, &c, sizeof c);
        uint64_t n = traj.jump_times.size();
        h = fnv1a(h, &n, sizeof n);
        if (n > 0) {
            h = fnv1a(h, traj.jump_times.data(), n * sizeof(double));
            h = fnv1a(h, traj.steps.data(), n);
        }
    }
    return h;
}

}  // namespace

int window_radius(const ModelParams& params, int obs_radius, double horizon, double epsilon) {
    params.validate();
    if (obs_radius < 0) throw std::invalid_argument("window_radius: obs_radius must be >= 0");
    if (!(horizon >= 0.0)) throw std::invalid_argument("window_radius: horizon must be >= 0");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("window_radius: epsilon must be in (0,1)");
    if (horizon == 0.0) return obs_radius;

    // A trap at sup-norm distance obs_radius + k needs at least k jumps to
    // reach the box, so its entry probability is bounded by the Poisson
    // jump-count tail.  Expected offenders outside radius obs_radius + K:
    //   nu * sum_{k > K} shell(obs_radius + k) P(Poisson(rho T) >= k).
    double mean = params.rho * horizon;
    int kmax = static_cast<int>(mean + 12.0 * std::sqrt(mean + 1.0) + 60.0);
    while (params.nu * shell_count(obs_radius + kmax, params.d) * poisson_tail_bound(mean, kmax) > epsilon * 1e-6)
        kmax += 32;

    std::vector<double> term(static_cast<size_t>(kmax) + 2, 0.0);
    for (int k = 1; k <= kmax; ++k)
        term[static_cast<size_t>(k)] =
            params.nu * shell_count(obs_radius + k, params.d) * poisson_tail_bound(mean, k);
    double tail = 0.0;
    int K = kmax;
    for (int k = kmax; k >= 1; --k) {
        tail += term[static_cast<size_t>(k)];
        if (tail > epsilon) break;
        K = k - 1;
    }
    return obs_radius + K;
}

TrapFieldRealization sample_field(const TrapFieldConfig& config) {
    config.validate();
    TrapFieldRealization field;
    field.config = config;
    field.window = window_radius(config.params, config.obs_radius, config.horizon, config.epsilon_window);
    Box box(config.params.d, field.window);
    for (size_t i = 0; i < box.size(); ++i) {
        LatticePoint site = box.point(i);
        uint64_t key = site_key(site);
        Rng counts = derive_stream(config.seed, {kCountsTag, key});
        uint64_t n = counts.poisson(config.params.nu);
        for (uint64_t j = 0; j < n; ++j) {
            Rng traj_rng = derive_stream(config.seed, {kTrajectoryTag, key, j});
            field.trajectories.push_back(
                sample_trajectory(site, config.params.rho, config.params.d, config.horizon, traj_rng));
        }
    }
    return field;
}

void TrapFieldRealization::check_in_window(double t, const LatticePoint& x) const {
    if (!(t >= 0.0) || t > config.horizon)
        throw OutOfWindowError("trap field queried outside its time horizon");
    if (static_cast<int>(x.size()) != config.params.d)
        throw std::invalid_argument("trap field query: dimension mismatch");
    if (supnorm(x) > config.obs_radius)
        throw OutOfWindowError("trap field queried outside the certified observation box");
}

int TrapFieldRealization::occupancy(double t, const LatticePoint& x) const {
    check_in_window(t, x);
    int count = 0;
    for (const auto& traj : trajectories)
        if (traj.position_at(t) == x) ++count;
    return count;
}

double TrapFieldRealization::integrate_along_path(const WalkPath& path, double t0, double t1) const {
    if (!(t0 >= 0.0) || !(t1 >= t0)) throw std::invalid_argument("integrate_along_path: need 0 <= t0 <= t1");
    if (t1 > config.horizon) throw OutOfWindowError("integrate_along_path: beyond field horizon");
    if (t1 > path.horizon) throw std::invalid_argument("integrate_along_path: beyond path horizon");
    for (size_t i = path.segment_at(t0); i <= path.segment_at(t1); ++i)
        if (supnorm(path.positions[i]) > config.obs_radius)
            throw OutOfWindowError("integrate_along_path: path leaves the observation box");

    const double inf = std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (const auto& traj : trajectories) {
        size_t ip = path.segment_at(t0), it = traj.segment_at(t0);
        double cur = t0;
        while (cur < t1) {
            double np = ip < path.jump_times.size() ? path.jump_times[ip] : inf;
            double nt = it < traj.jump_times.size() ? traj.jump_times[it] : inf;
            double next = std::min({np, nt, t1});
            if (path.positions[ip] == traj.positions[it]) total += next - cur;
            if (np <= next) ++ip;
            if (nt <= next) ++it;
            cur = next;
        }
    }
    return total;
}

std::string field_to_json(const TrapFieldRealization& field) {
    nlohmann::json j;
    j["format"] = "trapwalk-field";
    j["version"] = 1;
    const auto& c = field.config;
    j["config"] = {{"d", c.params.d},
                   {"kappa", c.params.kappa},
                   {"rho", c.params.rho},
                   {"nu", c.params.nu},
                   {"gamma", c.params.gamma_infinite() ? nlohmann::json("inf") : nlohmann::json(c.params.gamma)},
                   {"obs_radius", c.obs_radius},
                   {"horizon", c.horizon},
                   {"epsilon_window", c.epsilon_window},
                   {"seed", c.seed}};
    j["window"] = field.window;
    j["trap_count"] = field.trajectories.size();
    j["digest"] = field_digest(field);
    return j.dump(2);
}

TrapFieldRealization field_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("format", "") != std::string("trapwalk-field"))
        throw std::runtime_error("field_from_json: not a trap-field file");
    if (j.value("version", 0) != 1) throw std::runtime_error("field_from_json: unsupported version");
    const auto& c = j.at("config");
    TrapFieldConfig config;
    config.params.d = c.at("d").get<int>();
    config.params.kappa = c.at("kappa").get<double>();
    config.params.rho = c.at("rho").get<double>();
    config.params.nu = c.at("nu").get<double>();
    if (c.at("gamma").is_string())
        config.params.gamma = std::numeric_limits<double>::infinity();
    else
        config.params.gamma = c.at("gamma").get<double>();
    config.obs_radius = c.at("obs_radius").get<int>();
    config.horizon = c.at("horizon").get<double>();
    config.epsilon_window = c.at("epsilon_window").get<double>();
    config.seed = c.at("seed").get<uint64_t>();

    TrapFieldRealization field = sample_field(config);
    if (j.at("window").get<int>() != field.window)
        throw std::runtime_error("field_from_json: window radius mismatch after regeneration");
    if (j.at("digest").get<uint64_t>() != field_digest(field))
        throw std::runtime_error("field_from_json: digest mismatch after regeneration");
    return field;
}

void save_field(const TrapFieldRealization& field, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_field: cannot open " + path);
    out << field_to_json(field) << "\n";
}

TrapFieldRealization load_field(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_field: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return field_from_json(ss.str());
}

}  // namespace trapwalk
