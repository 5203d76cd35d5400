#pragma once
// Newton minimization with an exact (eigendecomposition-based) trust-region step.
// Intended for small dense problems, a few dozen coordinates at most.

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "qtr/error.hpp"

namespace qtr {

struct MinimizerOptions {
    double gradient_tolerance = 1e-10;
    int max_iterations = 500;
    double initial_radius = 0.1;
    double max_radius = 10.0;
    int polish_steps = 8;
};

struct MinimizerResult {
    Eigen::VectorXd x;
    long double value = 0;
    Eigen::VectorXd gradient;
    Eigen::MatrixXd hessian;
    double gradient_norm = 0;
    int iterations = 0;
};

namespace detail {

// Minimizes g.p + p.H.p/2 subject to |p| <= radius.
inline Eigen::VectorXd trust_region_step(const Eigen::VectorXd& g, const Eigen::MatrixXd& H,
                                         double radius) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const Eigen::VectorXd& lam = es.eigenvalues();
    const Eigen::MatrixXd& Q = es.eigenvectors();
    const Eigen::VectorXd gt = Q.transpose() * g;
    const Eigen::Index n = g.size();

    auto step = [&](double mu) {
        Eigen::VectorXd c(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double d = lam(i) + mu;
            c(i) = d > 0 ? -gt(i) / d : 0.0;
        }
        return c;
    };

    if (lam(0) > 0) {
        Eigen::VectorXd c = step(0.0);
        if (c.norm() <= radius) return Q * c;
    }
    const double lo = std::max(0.0, -lam(0));
    const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
    double mu_lo = lo + 1e-15 * scale;
    Eigen::VectorXd c_lo = step(mu_lo);
    if (c_lo.norm() < radius) {
        // Hard case: gradient (almost) orthogonal to the lowest eigenvector.
        const double rem = std::sqrt(std::max(0.0, radius * radius - c_lo.squaredNorm()));
        c_lo(0) += (gt(0) > 0 ? -rem : rem);
        return Q * c_lo;
    }
    double mu_hi = lo + g.norm() / radius + 1e-300;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (mu_lo + mu_hi);
        if (step(mid).norm() > radius)
            mu_lo = mid;
        else
            mu_hi = mid;
        if (mu_hi - mu_lo <= 1e-15 * std::max(1.0, mu_hi)) break;
    }
    return Q * step(mu_hi);
}

}  // namespace detail

/// Objective must provide
///   long double value(const Eigen::VectorXd&) const;
///   void derivatives(const Eigen::VectorXd&, Eigen::VectorXd& g, Eigen::MatrixXd& H) const;
template <class Objective>
MinimizerResult minimize_trust_region(const Objective& objective, Eigen::VectorXd x,
                                      const MinimizerOptions& options = {}) {
    const Eigen::Index n = x.size();
    Eigen::VectorXd g(n), g_trial(n);
    Eigen::MatrixXd H(n, n), H_trial(n, n);
    long double f = objective.value(x);
    objective.derivatives(x, g, H);
    double radius = options.initial_radius;
    int it = 0;
    bool converged = false;

    for (; it < options.max_iterations; ++it) {
        if (g.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) {
            converged = true;
            break;
        }
        const Eigen::VectorXd p = detail::trust_region_step(g, H, radius);
        const double predicted = -(g.dot(p) + 0.5 * p.dot(H * p));
        const Eigen::VectorXd x_trial = x + p;
        const long double f_trial = objective.value(x_trial);
        objective.derivatives(x_trial, g_trial, H_trial);
        const double actual = static_cast<double>(f - f_trial);
        const double noise = 1e-17 * std::max(1.0, static_cast<double>(std::fabs(f)));
        bool accept;
        double ratio = 0.0;
        if (predicted <= noise) {
            accept = g_trial.norm() < g.norm();
            ratio = accept ? 1.0 : 0.0;
        } else {
            ratio = actual / predicted;
            accept = ratio > 0.1;
        }
        const double pn = p.norm();
        if (ratio < 0.25)
            radius = 0.25 * pn;
        else if (ratio > 0.75 && pn > 0.99 * radius)
            radius = std::min(2.0 * radius, options.max_radius);
        if (accept) {
            x = x_trial;
            f = f_trial;
            g = g_trial;
            H = H_trial;
        }
        if (radius < 1e-300) break;
    }
    if (!converged)
        throw NonConvergenceError("trust-region Newton did not converge",
                                  std::vector<double>(x.data(), x.data() + n),
                                  g.lpNorm<Eigen::Infinity>(), it);

    // Extra Newton steps resolve soft directions whose gradient is far below the stiff
    // directions' rounding floor. A linearized step along a soft rotation-like coordinate can
    // raise the energy until the next step corrects it, so every iterate below the gradient
    // tolerance is a candidate and the lowest energy wins (ties go to the later iterate).
    Eigen::VectorXd x_ok = x, g_ok = g;
    Eigen::MatrixXd H_ok = H;
    long double f_ok = f;
    for (int k = 0; k < options.polish_steps; ++k) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
        if (es.eigenvalues()(0) <= 0) break;
        const Eigen::VectorXd p = -(es.eigenvectors() *
                                    (es.eigenvalues().cwiseInverse().asDiagonal() *
                                     (es.eigenvectors().transpose() * g)));
        if (p.lpNorm<Eigen::Infinity>() < 1e-13) break;
        x += p;
        f = objective.value(x);
        objective.derivatives(x, g, H);
        const long double tie = 1e-18L * std::max(1.0L, std::fabs(f));
        if (g.lpNorm<Eigen::Infinity>() < options.gradient_tolerance && f <= f_ok + tie) {
            x_ok = x;
            g_ok = g;
            H_ok = H;
            f_ok = f;
        }
    }
    x = x_ok;
    g = g_ok;
    H = H_ok;
    f = f_ok;

    MinimizerResult r;
    r.x = std::move(x);
    r.value = f;
    r.gradient = std::move(g);
    r.hessian = std::move(H);
    r.gradient_norm = r.gradient.lpNorm<Eigen::Infinity>();
    r.iterations = it;
    return r;
}

}  // namespace qtr
