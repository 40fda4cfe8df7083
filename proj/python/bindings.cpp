#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "trapwalk/field_stats.hpp"
#include "trapwalk/hitting.hpp"
#include "trapwalk/kernels.hpp"
#include "trapwalk/mc.hpp"
#include "trapwalk/pam.hpp"
#include "trapwalk/pascal.hpp"
#include "trapwalk/passage.hpp"
#include "trapwalk/rng.hpp"
#include "trapwalk/trap_field.hpp"
#include "trapwalk/volterra.hpp"
#include "trapwalk/walk.hpp"

namespace py = pybind11;
using namespace trapwalk;

PYBIND11_MODULE(_core, m) {
    m.doc() = "random walk among moving Poisson traps: survival probabilities, "
              "asymptotic laws and passage structure";
#ifdef TRAPWALK_VERSION
    m.attr("__version__") = TRAPWALK_VERSION;
#else
    m.attr("__version__") = "0.0.0";
#endif

    py::register_exception<CertificationError>(m, "CertificationError", PyExc_RuntimeError);
    py::register_exception<OutOfWindowError>(m, "OutOfWindowError", PyExc_RuntimeError);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init([](int d, double kappa, double rho, double nu, double gamma) {
                 ModelParams p{d, kappa, rho, nu, gamma};
                 p.validate();
                 return p;
             }),
             py::arg("d") = 1, py::arg("kappa") = 0.0, py::arg("rho") = 1.0, py::arg("nu") = 1.0,
             py::arg("gamma") = 1.0)
        .def_readwrite("d", &ModelParams::d)
        .def_readwrite("kappa", &ModelParams::kappa)
        .def_readwrite("rho", &ModelParams::rho)
        .def_readwrite("nu", &ModelParams::nu)
        .def_readwrite("gamma", &ModelParams::gamma)
        .def("gamma_infinite", &ModelParams::gamma_infinite)
        .def("validate", &ModelParams::validate)
        .def("__repr__", [](const ModelParams& p) {
            return "ModelParams(d=" + std::to_string(p.d) + ", kappa=" + std::to_string(p.kappa) +
                   ", rho=" + std::to_string(p.rho) + ", nu=" + std::to_string(p.nu) +
                   ", gamma=" + std::to_string(p.gamma) + ")";
        });

    py::class_<Rng>(m, "Rng")
        .def(py::init<uint64_t>(), py::arg("seed"))
        .def("next", &Rng::next)
        .def("uniform", &Rng::uniform)
        .def("exponential", &Rng::exponential, py::arg("rate"))
        .def("uniform_int", &Rng::uniform_int, py::arg("n"))
        .def("poisson", &Rng::poisson, py::arg("mean"));
    m.def(
        "derive_stream",
        [](uint64_t seed, const std::vector<uint64_t>& keys) { return derive_stream(seed, keys); },
        py::arg("seed"), py::arg("keys"));

    // exact kernels and rate functions
    m.def("transition_prob", &transition_prob, py::arg("t"), py::arg("x"), py::arg("rate"), py::arg("d"));
    m.def("return_prob", &return_prob, py::arg("t"), py::arg("rate"), py::arg("d"));
    m.def("green_function", &green_function, py::arg("d"), py::arg("tol") = 1e-10);
    m.def("laplace_p", &laplace_p, py::arg("lam"), py::arg("d"));
    m.def("hat_v0", &hat_v0, py::arg("lam"), py::arg("params"));
    m.def("rate_j", &rate_j, py::arg("y"));
    m.def("rate_function_J", &rate_function_J, py::arg("v"), py::arg("kappa"), py::arg("d"));
    m.def("lclt_approx", &lclt_approx, py::arg("t"), py::arg("x"), py::arg("kappa"), py::arg("d"));
    m.def("exit_prob_bound", &exit_prob_bound, py::arg("rate"), py::arg("t"), py::arg("d"), py::arg("R"));
    m.def("min_radius_for_exit_bound", &min_radius_for_exit_bound, py::arg("rate"), py::arg("t"), py::arg("d"),
          py::arg("eps"));
    m.def("poisson_tail_bound", &poisson_tail_bound, py::arg("mean"), py::arg("k"));

    // walk and trap trajectories
    py::class_<JumpTrajectory>(m, "JumpTrajectory")
        .def_readonly("start", &JumpTrajectory::start)
        .def_readonly("jump_times", &JumpTrajectory::jump_times)
        .def_readonly("horizon", &JumpTrajectory::horizon)
        .def_readonly("positions", &JumpTrajectory::positions)
        .def("position_at", &JumpTrajectory::position_at, py::arg("t"))
        .def("max_supnorm", &JumpTrajectory::max_supnorm);
    m.def("sample_walk", &sample_walk, py::arg("params"), py::arg("horizon"), py::arg("rng"));
    m.def("sample_trajectory", &sample_trajectory, py::arg("start"), py::arg("rate"), py::arg("d"),
          py::arg("horizon"), py::arg("rng"));

    // Poisson field of moving traps
    py::class_<TrapFieldConfig>(m, "TrapFieldConfig")
        .def(py::init([](const ModelParams& params, int obs_radius, double horizon, double epsilon_window,
                         uint64_t seed) {
                 TrapFieldConfig c{params, obs_radius, horizon, epsilon_window, seed};
                 c.validate();
                 return c;
             }),
             py::arg("params"), py::arg("obs_radius"), py::arg("horizon"), py::arg("epsilon_window") = 1e-8,
             py::arg("seed") = 0)
        .def_readwrite("params", &TrapFieldConfig::params)
        .def_readwrite("obs_radius", &TrapFieldConfig::obs_radius)
        .def_readwrite("horizon", &TrapFieldConfig::horizon)
        .def_readwrite("epsilon_window", &TrapFieldConfig::epsilon_window)
        .def_readwrite("seed", &TrapFieldConfig::seed);
    py::class_<TrapFieldRealization>(m, "TrapFieldRealization")
        .def_readonly("config", &TrapFieldRealization::config)
        .def_readonly("window", &TrapFieldRealization::window)
        .def_readonly("trajectories", &TrapFieldRealization::trajectories)
        .def("occupancy", &TrapFieldRealization::occupancy, py::arg("t"), py::arg("x"))
        .def("integrate_along_path", &TrapFieldRealization::integrate_along_path, py::arg("path"), py::arg("t0"),
             py::arg("t1"));
    m.def("window_radius", &window_radius, py::arg("params"), py::arg("obs_radius"), py::arg("horizon"),
          py::arg("epsilon"));
    m.def("sample_field", &sample_field, py::arg("config"));
    m.def("save_field", &save_field, py::arg("field"), py::arg("path"));
    m.def("load_field", &load_field, py::arg("path"));

    // pinned Volterra solutions and annealed laws
    py::class_<PathSurvivalSolution>(m, "PathSurvivalSolution")
        .def_readonly("h", &PathSurvivalSolution::h)
        .def_readonly("m", &PathSurvivalSolution::m)
        .def_readonly("integral", &PathSurvivalSolution::integral)
        .def_readonly("params", &PathSurvivalSolution::params)
        .def("value", &PathSurvivalSolution::value)
        .def("integral_value", &PathSurvivalSolution::integral_value);
    m.def("solve_v0", &solve_v0, py::arg("t"), py::arg("h"), py::arg("params"));
    m.def("solve_m_along_path", &solve_m_along_path, py::arg("path"), py::arg("t"), py::arg("h"), py::arg("params"));
    m.def("annealed_survival_given_path", &annealed_survival_given_path, py::arg("path"), py::arg("t"), py::arg("h"),
          py::arg("params"));
    m.def("annealed_survival_pinned", &annealed_survival_pinned, py::arg("t"), py::arg("h"), py::arg("params"));
    py::class_<AnnealedLyapunov>(m, "AnnealedLyapunov")
        .def_readonly("value", &AnnealedLyapunov::value)
        .def_readonly("exponential", &AnnealedLyapunov::exponential);
    m.def("lyapunov_annealed_pinned", &lyapunov_annealed_pinned, py::arg("params"), py::arg("green_tol") = 1e-10);

    // hard traps: hitting problem
    py::class_<HittingSolution>(m, "HittingSolution")
        .def_readonly("box_radius", &HittingSolution::box_radius)
        .def_readonly("exit_bound", &HittingSolution::exit_bound)
        .def_readonly("series_tol", &HittingSolution::series_tol)
        .def_readonly("times", &HittingSolution::times)
        .def_readonly("phi_e1", &HittingSolution::phi_e1)
        .def_readonly("integral", &HittingSolution::integral)
        .def("value", &HittingSolution::value)
        .def("integral_value", &HittingSolution::integral_value)
        .def("phi_final", &HittingSolution::phi_final, py::arg("y"))
        .def("sum_psi_final", &HittingSolution::sum_psi_final, py::arg("inner_radius"));
    m.def("solve_hitting", &solve_hitting, py::arg("t"), py::arg("params"), py::arg("box_radius"),
          py::arg("tol") = 1e-10);
    m.def("annealed_survival_infinite_gamma", &annealed_survival_infinite_gamma, py::arg("t"), py::arg("params"),
          py::arg("tol") = 1e-10);

    // quenched PDE and Monte Carlo
    m.def("quenched_log_survival_pde", &quenched_log_survival_pde, py::arg("field"), py::arg("params"), py::arg("t"),
          py::arg("box_radius"), py::arg("h"));
    m.def("quenched_survival_pde", &quenched_survival_pde, py::arg("field"), py::arg("params"), py::arg("t"),
          py::arg("box_radius"), py::arg("h"));
    py::class_<McEstimate>(m, "McEstimate")
        .def_readonly("mean", &McEstimate::mean)
        .def_readonly("stderror", &McEstimate::stderror)
        .def_readonly("n", &McEstimate::n)
        .def_readonly("seed", &McEstimate::seed)
        .def_readonly("excluded", &McEstimate::excluded)
        .def_readonly("bias_bound", &McEstimate::bias_bound)
        .def("half_width", &McEstimate::half_width, py::arg("z") = 3.0);
    m.def("quenched_survival_mc", &quenched_survival_mc, py::arg("field"), py::arg("params"), py::arg("t"),
          py::arg("n"), py::arg("seed"), py::arg("exclusion_threshold") = 0.05);
    m.def("annealed_survival_mc", &annealed_survival_mc, py::arg("params"), py::arg("t"), py::arg("n_fields"),
          py::arg("n_paths"), py::arg("seed"), py::arg("epsilon_window") = 1e-8, py::arg("workers") = 1);
    py::class_<QuenchedLyapunovRow>(m, "QuenchedLyapunovRow")
        .def_readonly("t", &QuenchedLyapunovRow::t)
        .def_readonly("estimate", &QuenchedLyapunovRow::estimate)
        .def_readonly("stderror", &QuenchedLyapunovRow::stderror)
        .def_readonly("replicates", &QuenchedLyapunovRow::replicates)
        .def_readonly("envelope", &QuenchedLyapunovRow::envelope);
    m.def("lyapunov_quenched_estimate", &lyapunov_quenched_estimate, py::arg("params"), py::arg("horizons"),
          py::arg("replicates"), py::arg("seed"), py::arg("h") = 0.01);

    // discrete trapping comparison
    py::class_<LazyWalkKernel>(m, "LazyWalkKernel")
        .def(py::init<int, double, std::vector<double>>(), py::arg("d"), py::arg("stay"), py::arg("axis"))
        .def_readonly("d", &LazyWalkKernel::d)
        .def_readonly("stay", &LazyWalkKernel::stay)
        .def_readonly("axis", &LazyWalkKernel::axis)
        .def("lazy", &LazyWalkKernel::lazy);
    py::class_<DiscretePath>(m, "DiscretePath")
        .def(py::init([](std::vector<LatticePoint> positions) {
                 DiscretePath p;
                 p.positions = std::move(positions);
                 return p;
             }),
             py::arg("positions"))
        .def_static("constant", &DiscretePath::constant, py::arg("d"), py::arg("n"))
        .def_static("from_steps_1d", &DiscretePath::from_steps_1d, py::arg("steps"))
        .def_readonly("positions", &DiscretePath::positions)
        .def("steps", &DiscretePath::steps);
    m.def("trapping_sum", &trapping_sum, py::arg("kernel"), py::arg("path"), py::arg("n"), py::arg("q"));
    py::class_<PascalCheckResult>(m, "PascalCheckResult")
        .def_readonly("moving", &PascalCheckResult::moving)
        .def_readonly("pinned", &PascalCheckResult::pinned)
        .def_readonly("margin", &PascalCheckResult::margin)
        .def_readonly("verdict", &PascalCheckResult::verdict);
    m.def("pascal_check", &pascal_check, py::arg("kernel"), py::arg("path"), py::arg("n"), py::arg("q"));
    m.def("expected_range", &expected_range, py::arg("kernel"), py::arg("path"), py::arg("n"));
    py::class_<KernelMonotonicityResult>(m, "KernelMonotonicityResult")
        .def_readonly("space_ok", &KernelMonotonicityResult::space_ok)
        .def_readonly("time_ok", &KernelMonotonicityResult::time_ok)
        .def_readonly("first_violation_step", &KernelMonotonicityResult::first_violation_step);
    m.def("kernel_monotonicity_check", &kernel_monotonicity_check, py::arg("kernel"), py::arg("n_max"));
    m.def("brute_force_oracle", &brute_force_oracle, py::arg("kernel"), py::arg("path"), py::arg("n"), py::arg("q"));
    m.def("induction_gap", &induction_gap, py::arg("kernel"), py::arg("path"), py::arg("n"), py::arg("q"));

    // passage weights and shape
    py::class_<PassageSample>(m, "PassageSample")
        .def_readonly("s", &PassageSample::s)
        .def_readonly("t", &PassageSample::t)
        .def_readonly("x", &PassageSample::x)
        .def_readonly("y", &PassageSample::y)
        .def_readonly("value", &PassageSample::value)
        .def_readonly("finite", &PassageSample::finite)
        .def_readonly("exit_bound", &PassageSample::exit_bound)
        .def_readonly("solver_tolerance", &PassageSample::solver_tolerance);
    m.def("passage", &passage, py::arg("field"), py::arg("params"), py::arg("s"), py::arg("t"), py::arg("x"),
          py::arg("y"), py::arg("box_radius"), py::arg("h"));
    py::class_<TriangleInstance>(m, "TriangleInstance")
        .def_readonly("s", &TriangleInstance::s)
        .def_readonly("r", &TriangleInstance::r)
        .def_readonly("t", &TriangleInstance::t)
        .def_readonly("x", &TriangleInstance::x)
        .def_readonly("y", &TriangleInstance::y)
        .def_readonly("z", &TriangleInstance::z)
        .def_readonly("direct", &TriangleInstance::direct)
        .def_readonly("via", &TriangleInstance::via)
        .def_readonly("margin", &TriangleInstance::margin)
        .def_readonly("tolerance", &TriangleInstance::tolerance);
    m.def("triangle_margin", &triangle_margin, py::arg("field"), py::arg("params"), py::arg("s"), py::arg("r"),
          py::arg("t"), py::arg("x"), py::arg("y"), py::arg("z"), py::arg("box_radius"), py::arg("h"));
    py::class_<TriangleCheckResult>(m, "TriangleCheckResult")
        .def_readonly("instances", &TriangleCheckResult::instances)
        .def_readonly("min_margin", &TriangleCheckResult::min_margin)
        .def_readonly("verdict", &TriangleCheckResult::verdict);
    m.def("triangle_check", &triangle_check, py::arg("field"), py::arg("params"), py::arg("t_max"),
          py::arg("box_radius"), py::arg("point_radius"), py::arg("h"), py::arg("n_instances"), py::arg("seed"));
    py::class_<ShapeProfile>(m, "ShapeProfile")
        .def_readonly("t", &ShapeProfile::t)
        .def_readonly("h", &ShapeProfile::h)
        .def_readonly("box_radius", &ShapeProfile::box_radius)
        .def_readonly("exit_bound", &ShapeProfile::exit_bound)
        .def_readonly("speeds", &ShapeProfile::speeds)
        .def_readonly("alpha", &ShapeProfile::alpha)
        .def_readonly("max_symmetry_residual", &ShapeProfile::max_symmetry_residual)
        .def_readonly("max_convexity_residual", &ShapeProfile::max_convexity_residual);
    m.def("shape_profile", &shape_profile, py::arg("field"), py::arg("params"), py::arg("t"), py::arg("speeds"),
          py::arg("box_radius"), py::arg("h"));
    py::class_<SubadditivityRow>(m, "SubadditivityRow")
        .def_readonly("t1", &SubadditivityRow::t1)
        .def_readonly("t2", &SubadditivityRow::t2)
        .def_readonly("lhs", &SubadditivityRow::lhs)
        .def_readonly("rhs", &SubadditivityRow::rhs)
        .def_readonly("margin", &SubadditivityRow::margin);
    py::class_<SubadditivityResult>(m, "SubadditivityResult")
        .def_readonly("rows", &SubadditivityResult::rows)
        .def_readonly("min_margin", &SubadditivityResult::min_margin)
        .def_readonly("verdict", &SubadditivityResult::verdict);
    m.def("subadditivity_annealed_check", &subadditivity_annealed_check, py::arg("params"), py::arg("times"),
          py::arg("h"));

    // field statistics
    py::class_<SliceFitResult>(m, "SliceFitResult")
        .def_readonly("time", &SliceFitResult::time)
        .def_readonly("stat", &SliceFitResult::stat)
        .def_readonly("df", &SliceFitResult::df)
        .def_readonly("pvalue", &SliceFitResult::pvalue)
        .def_readonly("samples", &SliceFitResult::samples);
    m.def("field_poisson_chi_square", &field_poisson_chi_square, py::arg("base"), py::arg("slices"),
          py::arg("n_fields"), py::arg("seed"), py::arg("fit_nu") = 0.0);
    py::class_<ReversalCovarianceResult>(m, "ReversalCovarianceResult")
        .def_readonly("forward", &ReversalCovarianceResult::forward)
        .def_readonly("reversed", &ReversalCovarianceResult::reversed)
        .def_readonly("diff_mean", &ReversalCovarianceResult::diff_mean)
        .def_readonly("diff_stderr", &ReversalCovarianceResult::diff_stderr)
        .def_readonly("z", &ReversalCovarianceResult::z)
        .def_readonly("n", &ReversalCovarianceResult::n);
    m.def("field_reversal_covariance", &field_reversal_covariance, py::arg("base"), py::arg("T"), py::arg("x"),
          py::arg("y"), py::arg("n_fields"), py::arg("seed"));
}
