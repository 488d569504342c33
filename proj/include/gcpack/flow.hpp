#pragma once

// Combinatorial Ricci flow dK/dt = -(L(K) - target) in log-curvature
// coordinates, with a damped Newton finish on the convex potential.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "gcpack/errors.hpp"
#include "gcpack/packing.hpp"
#include "gcpack/surface.hpp"

namespace gcp
{

enum class Stepper { AdaptiveRK, RK4 };

struct FlowConfig {
    /** Stop when max |L - target| drops below this */
    double residual_tol = 1e-10;
    double max_time = 1e4;
    int max_steps = 200000;
    Stepper stepper = Stepper::AdaptiveRK;
    /** Local error bound (max-norm) for accepting an adaptive step */
    double step_tol = 1e-8;
    double initial_step = 0.05;
    /** Step size of the fixed-step RK4 integrator */
    double rk4_step = 0.05;
    bool use_newton = true;
    double newton_switch_tol = 1e-3;
    /** Initial Newton step fraction, in (0, 1] */
    double newton_damping = 1.0;
    int max_newton_iterations = 100;
    /** Run the exhaustive subset check before integrating (|V| <= 25) */
    bool check_feasibility = true;
    /** |K_i| beyond this with a stalled residual is reported as infeasible */
    double divergence_bound = 40.0;

    /** @throws DomainError on non-positive tolerances or inconsistent settings */
    void validate() const
    {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw DomainError(std::string(name) + " must be positive");
            }
        };
        positive(residual_tol, "residual_tol");
        positive(max_time, "max_time");
        positive(step_tol, "step_tol");
        positive(initial_step, "initial_step");
        positive(rk4_step, "rk4_step");
        positive(newton_switch_tol, "newton_switch_tol");
        positive(divergence_bound, "divergence_bound");
        if (max_steps <= 0) throw DomainError("max_steps must be positive");
        if (!(newton_switch_tol > residual_tol)) {
            throw DomainError("newton_switch_tol must exceed residual_tol");
        }
        if (!(newton_damping > 0.0 && newton_damping <= 1.0)) {
            throw DomainError("newton_damping must lie in (0, 1]");
        }
    }
};

template <typename Scalar>
struct FlowSample {
    Scalar t{};
    VectorX<Scalar> K;
    Scalar residual_max{};
    Scalar residual_2norm{};
};

/**
 * @brief Accepted flow states (strictly increasing t) and, separately, the
 * Newton iterates that finished the solve.
 */
template <typename Scalar>
struct FlowTrace {
    std::vector<FlowSample<Scalar>> samples;
    std::vector<FlowSample<Scalar>> newton;
};

struct RateEstimate {
    double lambda;
    double r_squared;
    int samples;
};

enum class SolveStatus { Converged, MaxStepsExceeded, Infeasible };

inline const char* to_string(SolveStatus status)
{
    switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxStepsExceeded: return "max_steps_exceeded";
    case SolveStatus::Infeasible: return "infeasible";
    }
    return "unknown";
}

template <typename Scalar>
struct SolveResult {
    VectorX<Scalar> K;
    FlowTrace<Scalar> trace;
    SolveStatus status{SolveStatus::MaxStepsExceeded};
    /** Violated subset from the admissibility check; empty for the divergence heuristic */
    std::vector<int> witness;
    Scalar residual_max{};
    int flow_steps{0};
    int rejected_steps{0};
    int newton_iterations{0};
    std::string message;
};

template <typename Scalar>
struct FlowStepResult {
    VectorX<Scalar> K;
    Scalar error{};
    /** -(L - target) at the new state */
    VectorX<Scalar> velocity;
};

namespace detail
{

template <typename Scalar>
VectorX<Scalar> flow_velocity(const Triangulation& tri, const VectorX<Scalar>& K,
                              const VectorX<Scalar>& targets)
{
    return targets - total_curvatures(tri, K);
}

// Dormand–Prince 5(4) tableau
struct DormandPrince {
    static constexpr double c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    static constexpr double a[7][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
    };
    static constexpr double b[7] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0.0};
    static constexpr double b_low[7] = {5179.0 / 57600, 0.0,           7571.0 / 16695, 393.0 / 640,
                                        -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
};

}  // namespace detail

/**
 * @brief One Dormand–Prince step of size h from K.
 *
 * `velocity` is the vector field at K, if already known (first-same-as-last).
 * The returned error is the max-norm difference between the 5th and 4th
 * order solutions; acceptance is left to the caller.
 */
template <typename Scalar>
FlowStepResult<Scalar> flow_step(const Triangulation& tri, const VectorX<Scalar>& K,
                                 const VectorX<Scalar>& targets, Scalar h,
                                 const VectorX<Scalar>* velocity = nullptr)
{
    using DP = detail::DormandPrince;
    if (!(h > Scalar(0))) throw DomainError("step size must be positive");
    detail::check_dimension<Scalar>(tri, K.size(), "state vector");
    detail::check_dimension<Scalar>(tri, targets.size(), "target vector");

    std::array<VectorX<Scalar>, 7> stages;
    stages[0] = velocity ? *velocity : detail::flow_velocity(tri, K, targets);
    for (int s = 1; s < 7; ++s) {
        VectorX<Scalar> point = K;
        for (int j = 0; j < s; ++j) {
            if (DP::a[s][j] != 0.0) point += h * Scalar(DP::a[s][j]) * stages[j];
        }
        stages[s] = detail::flow_velocity(tri, point, targets);
    }
    FlowStepResult<Scalar> out;
    out.K = K;
    VectorX<Scalar> err = VectorX<Scalar>::Zero(K.size());
    for (int s = 0; s < 7; ++s) {
        out.K += h * Scalar(DP::b[s]) * stages[s];
        err += h * Scalar(DP::b[s] - DP::b_low[s]) * stages[s];
    }
    // the last stage is evaluated at the 5th order solution
    out.velocity = std::move(stages[6]);
    out.error = err.template lpNorm<Eigen::Infinity>();
    return out;
}

/** Classical fixed-step RK4; the error field is left at zero */
template <typename Scalar>
FlowStepResult<Scalar> rk4_step(const Triangulation& tri, const VectorX<Scalar>& K,
                                const VectorX<Scalar>& targets, Scalar h,
                                const VectorX<Scalar>* velocity = nullptr)
{
    if (!(h > Scalar(0))) throw DomainError("step size must be positive");
    const VectorX<Scalar> k1 = velocity ? *velocity : detail::flow_velocity(tri, K, targets);
    const VectorX<Scalar> k2 = detail::flow_velocity<Scalar>(tri, K + Scalar(0.5) * h * k1, targets);
    const VectorX<Scalar> k3 = detail::flow_velocity<Scalar>(tri, K + Scalar(0.5) * h * k2, targets);
    const VectorX<Scalar> k4 = detail::flow_velocity<Scalar>(tri, K + h * k3, targets);
    FlowStepResult<Scalar> out;
    out.K = K + (h / Scalar(6)) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
    out.velocity = detail::flow_velocity(tri, out.K, targets);
    out.error = Scalar(0);
    return out;
}

/** Solve M x = b with M symmetric positive definite */
template <typename Scalar>
VectorX<Scalar> solve_spd(const SparseMatrix<Scalar>& M, const VectorX<Scalar>& b)
{
    const Eigen::Index n = M.rows();
    if (n < 64) {
        const MatrixX<Scalar> dense(M);
        return dense.ldlt().solve(b);
    }
    if (n < 2000) {
        Eigen::SimplicialLDLT<SparseMatrix<Scalar>> ldlt(M);
        if (ldlt.info() != Eigen::Success) throw InfeasibleGeometryError("Hessian factorization failed");
        return ldlt.solve(b);
    }
    Eigen::ConjugateGradient<SparseMatrix<Scalar>, Eigen::Lower | Eigen::Upper> cg(M);
    cg.setTolerance(Scalar(1e-14));
    return cg.solve(b);
}

namespace detail
{

template <typename Scalar>
FlowSample<Scalar> make_sample(Scalar t, const VectorX<Scalar>& K, const VectorX<Scalar>& residual)
{
    return {t, K, residual.template lpNorm<Eigen::Infinity>(), residual.norm()};
}

template <typename Scalar>
std::vector<double> to_std(const VectorX<Scalar>& v)
{
    std::vector<double> out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = static_cast<double>(v[i]);
    return out;
}

}  // namespace detail

/**
 * @brief Flow from K0 until max |L - target| < residual_tol.
 *
 * Adaptive steps are accepted when the local error estimate is below
 * step_tol and the residual norm does not grow.
 * Below newton_switch_tol (when enabled) the remaining distance is covered
 * by damped Newton on the potential, halving the step until the residual
 * 2-norm decreases; a failed line search hands control back to the flow.
 * Without an admissibility check, a component of K escaping beyond
 * divergence_bound while the residual is still above newton_switch_tol is
 * reported as Infeasible (a heuristic).
 *
 * @throws StiffnessError if the adaptive step underflows 1e-14
 */
template <typename Scalar>
SolveResult<Scalar> solve(const Triangulation& tri, const VectorX<Scalar>& targets,
                          const VectorX<Scalar>& K0, const FlowConfig& config = {})
{
    config.validate();
    detail::check_dimension<Scalar>(tri, targets.size(), "target vector");
    detail::check_dimension<Scalar>(tri, K0.size(), "initial state");
    if (!K0.allFinite()) throw DomainError("initial state must be finite");

    SolveResult<Scalar> result;
    const std::vector<double> target_values = detail::to_std(targets);
    for (std::size_t i = 0; i < target_values.size(); ++i) {
        if (!(target_values[i] > 0.0) || !std::isfinite(target_values[i])) {
            throw DomainError("target curvature at vertex " + std::to_string(i) + " must be positive");
        }
    }
    if (config.check_feasibility && tri.num_vertices() <= kMaxAdmissibilityVertices) {
        const AdmissibilityResult verdict = check_admissible(tri, target_values);
        if (const auto* violated = std::get_if<Violated>(&verdict)) {
            result.status = SolveStatus::Infeasible;
            result.witness = violated->witness;
            result.K = K0;
            result.residual_max = phi_gradient(tri, K0, targets).template lpNorm<Eigen::Infinity>();
            result.message = "targets violate the subset inequality";
            return result;
        }
    }

    const Scalar tol = Scalar(config.residual_tol);
    const Scalar switch_tol = Scalar(config.newton_switch_tol);
    VectorX<Scalar> K = K0;
    VectorX<Scalar> velocity = detail::flow_velocity(tri, K, targets);
    Scalar t = Scalar(0);
    Scalar h = Scalar(config.stepper == Stepper::RK4 ? config.rk4_step : config.initial_step);
    result.trace.samples.push_back(detail::make_sample<Scalar>(t, K, -velocity));

    auto residual_max = [&] { return velocity.template lpNorm<Eigen::Infinity>(); };

    auto newton = [&]() -> bool {
        for (int it = 0; it < config.max_newton_iterations; ++it) {
            const VectorX<Scalar> residual = -velocity;
            if (residual.template lpNorm<Eigen::Infinity>() < tol) return true;
            const VectorX<Scalar> direction = solve_spd(global_jacobian(tri, K), residual);
            if (!direction.allFinite()) return false;
            const Scalar norm = residual.norm();
            Scalar alpha = Scalar(config.newton_damping);
            bool accepted = false;
            while (alpha > Scalar(1e-10)) {
                const VectorX<Scalar> trial = K - alpha * direction;
                const VectorX<Scalar> trial_velocity = detail::flow_velocity(tri, trial, targets);
                if (trial_velocity.norm() < norm) {
                    K = trial;
                    velocity = trial_velocity;
                    accepted = true;
                    break;
                }
                alpha /= Scalar(2);
            }
            if (!accepted) return false;
            ++result.newton_iterations;
            result.trace.newton.push_back(detail::make_sample<Scalar>(t, K, -velocity));
        }
        return residual_max() < tol;
    };

    bool newton_failed = false;
    // step growth is throttled once a step has been refused for increasing the residual
    Scalar growth_limit = Scalar(4);
    while (true) {
        const Scalar res = residual_max();
        if (res < tol) {
            result.status = SolveStatus::Converged;
            break;
        }
        if (config.use_newton && !newton_failed && res < switch_tol) {
            if (newton()) {
                result.status = SolveStatus::Converged;
                break;
            }
            // keep flowing from wherever Newton stopped
            newton_failed = true;
        }
        if (res > switch_tol && K.template lpNorm<Eigen::Infinity>() > Scalar(config.divergence_bound)) {
            result.status = SolveStatus::Infeasible;
            result.message = "log-curvature left [-" + std::to_string(config.divergence_bound) + ", " +
                             std::to_string(config.divergence_bound) +
                             "] with the residual above the switch tolerance (heuristic)";
            break;
        }
        if (result.flow_steps >= config.max_steps || t >= Scalar(config.max_time)) {
            result.status = SolveStatus::MaxStepsExceeded;
            result.message = "step or time budget exhausted";
            break;
        }

        const Scalar step = std::min(h, Scalar(config.max_time) - t);
        if (config.stepper == Stepper::RK4) {
            FlowStepResult<Scalar> next = rk4_step(tri, K, targets, step, &velocity);
            K = std::move(next.K);
            velocity = std::move(next.velocity);
        } else {
            FlowStepResult<Scalar> next = flow_step(tri, K, targets, step, &velocity);
            const bool accurate = next.error < Scalar(config.step_tol) && next.K.allFinite();
            // C(K) = |L - target|^2 must not increase along the flow
            const bool descending =
                accurate && next.velocity.squaredNorm() <= velocity.squaredNorm() * (Scalar(1) + Scalar(1e-12));
            if (!descending) {
                ++result.rejected_steps;
                h = step / Scalar(2);
                if (accurate) growth_limit = Scalar(1.1);
                if (h < Scalar(1e-14)) {
                    throw StiffnessError("adaptive step underflow", static_cast<double>(t),
                                         static_cast<double>(h), detail::to_std(K));
                }
                continue;
            }
            K = std::move(next.K);
            velocity = std::move(next.velocity);
            const Scalar ratio = next.error > Scalar(0)
                                     ? Scalar(0.9) * std::pow(Scalar(config.step_tol) / next.error, Scalar(0.2))
                                     : Scalar(4);
            h = step * std::clamp(ratio, Scalar(1), growth_limit);
        }
        t += step;
        ++result.flow_steps;
        result.trace.samples.push_back(detail::make_sample<Scalar>(t, K, -velocity));
    }
    result.K = K;
    result.residual_max = residual_max();
    if (result.status == SolveStatus::Converged) result.message = "converged";
    return result;
}

template <typename Scalar>
SolveResult<Scalar> solve(const Triangulation& tri, const VectorX<Scalar>& targets, const FlowConfig& config = {})
{
    return solve<Scalar>(tri, targets, VectorX<Scalar>::Zero(tri.num_vertices()), config);
}

/**
 * @brief Exponential decay rate of the residual 2-norm over the flow
 * samples whose max-norm residual lies in (10 residual_tol, newton_switch_tol).
 *
 * Least-squares slope of ln |L - target|_2 against t, negated. Empty when
 * fewer than 10 samples fall in the window.
 */
template <typename Scalar>
std::optional<RateEstimate> rate_estimate(const FlowTrace<Scalar>& trace, const FlowConfig& config = {})
{
    std::vector<double> ts;
    std::vector<double> ys;
    for (const FlowSample<Scalar>& s : trace.samples) {
        const double r = static_cast<double>(s.residual_max);
        if (r > 10.0 * config.residual_tol && r < config.newton_switch_tol && s.residual_2norm > Scalar(0)) {
            ts.push_back(static_cast<double>(s.t));
            ys.push_back(std::log(static_cast<double>(s.residual_2norm)));
        }
    }
    const int n = static_cast<int>(ts.size());
    if (n < 10) return std::nullopt;
    Eigen::MatrixX2d A(n, 2);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = ts[i];
        y[i] = ys[i];
    }
    const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(y);
    const double mean = y.mean();
    const double ss_tot = (y.array() - mean).square().sum();
    const double ss_res = (y - A * coef).squaredNorm();
    const double r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return RateEstimate{-coef[1], r2, n};
}

}  // namespace gcp
