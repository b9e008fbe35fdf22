// fstarsim: fluid STAR-RIS NOMA downlink optimization and simulation library
// Copyright (C) 2026 fstarsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Dense path-following barrier method over linear / second-order / PSD cone
// blocks. Phase I minimizes a uniform constraint relaxation to find a strictly
// feasible point (or certify infeasibility); phase II follows the central path
// of t*cost + barrier with damped Newton steps until the duality-gap bound
// nu/t meets the requested tolerance. Sized for small dense problems.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>

#include "fstar/conic.hpp"

namespace fstar {

namespace {

struct BarrierEval {
    bool interior = false;
    double phi = 0.0;
    RVec grad;
    RMat hess;
};

class BarrierMachine {
  public:
    BarrierMachine(const ConicProblem& p, bool with_gradients) : p_(p) {
        (void)with_gradients;
        socAtA_.reserve(p_.socs.size());
    }

    // Value-only probe used by the line search.
    bool value(const RVec& x, double& phi_out) const {
        double phi = 0.0;
        for (const auto& row : p_.lin) {
            const double s = row.rhs - row.a.dot(x);
            if (s <= 0.0) return false;
            phi -= std::log(s);
        }
        for (const auto& soc : p_.socs) {
            const double w = soc.c.dot(x) + soc.d;
            if (w <= 0.0) return false;
            const double theta = w * w - (soc.A * x + soc.b).squaredNorm();
            if (theta <= 0.0) return false;
            phi -= std::log(theta);
        }
        for (const auto& psd : p_.psds) {
            const RMat S = psd.assemble(x);
            Eigen::LLT<RMat> llt(S);
            if (llt.info() != Eigen::Success) return false;
            double logdet = 0.0;
            for (int i = 0; i < psd.dim; ++i) logdet += std::log(llt.matrixL()(i, i));
            phi -= 2.0 * logdet;
        }
        phi_out = phi;
        return true;
    }

    // Full evaluation: barrier value, gradient and Hessian.
    bool full(const RVec& x, BarrierEval& out) const {
        const int n = p_.num_vars;
        out.phi = 0.0;
        out.grad = RVec::Zero(n);
        out.hess = RMat::Zero(n, n);

        for (const auto& row : p_.lin) {
            const double s = row.rhs - row.a.dot(x);
            if (s <= 0.0) return false;
            out.phi -= std::log(s);
            out.grad += row.a / s;
            out.hess.selfadjointView<Eigen::Lower>().rankUpdate(row.a, 1.0 / (s * s));
        }
        for (const auto& soc : p_.socs) {
            const double w = soc.c.dot(x) + soc.d;
            if (w <= 0.0) return false;
            const RVec u = soc.A * x + soc.b;
            const double theta = w * w - u.squaredNorm();
            if (theta <= 0.0) return false;
            out.phi -= std::log(theta);
            const RVec dtheta = 2.0 * w * soc.c - 2.0 * soc.A.transpose() * u;
            out.grad -= dtheta / theta;
            // hess = (2 A^T A - 2 c c^T)/theta + dtheta dtheta^T / theta^2
            for (int r = 0; r < soc.A.rows(); ++r)
                out.hess.selfadjointView<Eigen::Lower>().rankUpdate(soc.A.row(r).transpose(),
                                                                    2.0 / theta);
            out.hess.selfadjointView<Eigen::Lower>().rankUpdate(soc.c, -2.0 / theta);
            out.hess.selfadjointView<Eigen::Lower>().rankUpdate(dtheta, 1.0 / (theta * theta));
        }
        for (const auto& psd : p_.psds) {
            const RMat S = psd.assemble(x);
            Eigen::LLT<RMat> llt(S);
            if (llt.info() != Eigen::Success) return false;
            double logdet = 0.0;
            for (int i = 0; i < psd.dim; ++i) logdet += std::log(llt.matrixL()(i, i));
            out.phi -= 2.0 * logdet;
            const RMat Sinv = llt.solve(RMat::Identity(psd.dim, psd.dim));
            const int nc = static_cast<int>(psd.coeffs.size());
            for (int a = 0; a < nc; ++a) {
                const auto& ca = psd.coeffs[a];
                double g = 0.0;
                for (const auto& [r, c, v] : ca.entries) g += v * Sinv(c, r);
                out.grad(ca.var) -= g;
                for (int b = 0; b <= a; ++b) {
                    const auto& cb = psd.coeffs[b];
                    double h = 0.0;
                    for (const auto& [r1, c1, v1] : ca.entries)
                        for (const auto& [r2, c2, v2] : cb.entries)
                            h += v1 * v2 * Sinv(c1, r2) * Sinv(c2, r1);
                    out.hess(std::max(ca.var, cb.var), std::min(ca.var, cb.var)) += h;
                }
            }
        }
        out.hess = out.hess.selfadjointView<Eigen::Lower>();
        out.interior = true;
        return true;
    }

    // Largest violation over all blocks at x (<= 0 means feasible), and the
    // family that attains it.
    double violation(const RVec& x, std::string* family = nullptr) const {
        double worst = -std::numeric_limits<double>::infinity();
        auto consider = [&](double v, const std::string& fam) {
            if (v > worst) {
                worst = v;
                if (family) *family = fam;
            }
        };
        for (const auto& row : p_.lin) consider(row.a.dot(x) - row.rhs, row.family);
        for (const auto& soc : p_.socs)
            consider((soc.A * x + soc.b).norm() - (soc.c.dot(x) + soc.d), soc.family);
        for (const auto& psd : p_.psds) {
            const RMat S = psd.assemble(x);
            Eigen::SelfAdjointEigenSolver<RMat> eig(S, Eigen::EigenvaluesOnly);
            consider(-eig.eigenvalues().minCoeff(), psd.family);
        }
        return worst;
    }

  private:
    const ConicProblem& p_;
    std::vector<RMat> socAtA_;
};

// Damped Newton descent on t*cost^T x + barrier(x). Returns false when the
// budget runs out far from centered; near-centered exits count as success
// (the duality-gap bound used downstream carries a factor-two allowance).
bool newton_center(const BarrierMachine& machine, const RVec& cost, double t, RVec& x,
                   int& steps_used, int budget,
                   const std::function<bool(const RVec&)>& early_stop) {
    constexpr double kDecrementTol = 1e-9;   // on lambda^2/2
    constexpr double kLooseTol = 1e-4;       // acceptable when progress stalls
    constexpr double kArmijo = 0.01;
    const int cap = std::min(budget, 100);
    BarrierEval eval;
    int stagnant = 0;
    double decrement = std::numeric_limits<double>::infinity();
    for (int it = 0; it < cap; ++it) {
        if (early_stop && early_stop(x)) return true;
        if (!machine.full(x, eval)) return false;  // should not happen from interior
        RVec grad = t * cost + eval.grad;
        RMat H = eval.hess;

        RVec dir;
        double ridge = 0.0;
        const double diag_scale = std::max(1.0, H.diagonal().cwiseAbs().maxCoeff());
        for (int attempt = 0; attempt < 6; ++attempt) {
            Eigen::LDLT<RMat> ldlt(H);
            if (ldlt.info() == Eigen::Success) {
                dir = ldlt.solve(-grad);
                if (dir.allFinite() && grad.dot(dir) < 0.0) break;
            }
            ridge = (ridge == 0.0) ? 1e-12 * diag_scale : ridge * 100.0;
            H = eval.hess + ridge * RMat::Identity(H.rows(), H.cols());
            dir.setZero();
        }
        ++steps_used;
        if (dir.size() == 0 || !dir.allFinite() || grad.dot(dir) >= 0.0)
            return decrement * 0.5 < kLooseTol;

        decrement = -grad.dot(dir);
        if (decrement * 0.5 < kDecrementTol) return true;

        const double f0 = t * cost.dot(x) + eval.phi;
        double alpha = 1.0;
        bool stepped = false;
        double f_new = f0;
        for (int ls = 0; ls < 60; ++ls) {
            const RVec trial = x + alpha * dir;
            double phi_trial;
            if (machine.value(trial, phi_trial)) {
                const double f_trial = t * cost.dot(trial) + phi_trial;
                if (f_trial <= f0 + kArmijo * alpha * grad.dot(dir)) {
                    x = trial;
                    stepped = true;
                    f_new = f_trial;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if (!stepped) return decrement * 0.5 < kLooseTol;  // floating-point floor
        // Progress stalls near machine precision well before the decrement
        // estimate does on ill-conditioned instances.
        if (f0 - f_new <= 1e-13 * (1.0 + std::abs(f0))) {
            if (++stagnant >= 3) return decrement * 0.5 < kLooseTol;
        } else {
            stagnant = 0;
        }
    }
    return decrement * 0.5 < kLooseTol;
}

struct PathResult {
    bool centered = false;
    double final_t = 0.0;
    int steps = 0;
};

// gap_rel <= 0 requests the absolute target `gap_abs` instead (phase I).
PathResult follow_path(const BarrierMachine& machine, const ConicProblem& p, RVec& x,
                       const SolverOptions& opts, int nu, double gap_rel, double gap_abs,
                       const std::function<bool(const RVec&)>& early_stop) {
    PathResult res;
    const bool trace = std::getenv("FSTAR_SOLVER_TRACE") != nullptr;
    double t = std::max(1.0, double(nu) / std::max(1.0, std::abs(p.cost.dot(x)) + 1.0));
    int steps = 0;
    while (steps < opts.max_newton) {
        const int before = steps;
        const bool ok = newton_center(machine, p.cost, t, x, steps, opts.max_newton - steps,
                                      early_stop);
        if (trace)
            std::fprintf(stderr, "[path] t=%.3e steps+=%d obj=%.9e ok=%d\n", t,
                         steps - before, p.cost.dot(x) + p.cost_offset, int(ok));
        res.steps = steps;
        if (early_stop && early_stop(x)) {
            res.centered = true;
            res.final_t = t;
            return res;
        }
        if (!ok || !x.allFinite()) return res;
        const double target =
            gap_rel > 0.0
                ? gap_rel * std::max(1.0, std::abs(p.cost.dot(x) + p.cost_offset))
                : gap_abs;
        if (2.0 * double(nu) / t <= target) {
            res.centered = true;
            res.final_t = t;
            return res;
        }
        t *= opts.mu_factor;
    }
    return res;
}

ConicProblem augment_phase1(const ConicProblem& p, double box_radius) {
    ConicProblem aug;
    aug.num_vars = p.num_vars + 1;
    aug.cost = RVec::Zero(aug.num_vars);
    aug.cost(p.num_vars) = 1.0;  // minimize the relaxation
    aug.lin = p.lin;
    for (auto& row : aug.lin) {
        RVec a = RVec::Zero(aug.num_vars);
        a.head(p.num_vars) = row.a;
        a(p.num_vars) = -1.0;
        row.a = std::move(a);
    }
    // A large box keeps the relaxed problem's sublevel sets bounded; without
    // it the analytic center can run off along cone recession directions.
    for (int i = 0; i < aug.num_vars; ++i) {
        RVec a = RVec::Zero(aug.num_vars);
        a(i) = 1.0;
        aug.lin.push_back({a, box_radius, "phase1-box"});
        aug.lin.push_back({-a, box_radius, "phase1-box"});
    }
    aug.socs = p.socs;
    for (auto& soc : aug.socs) {
        RMat A = RMat::Zero(soc.A.rows(), aug.num_vars);
        A.leftCols(p.num_vars) = soc.A;
        soc.A = std::move(A);
        RVec c = RVec::Zero(aug.num_vars);
        c.head(p.num_vars) = soc.c;
        c(p.num_vars) = 1.0;
        soc.c = std::move(c);
    }
    aug.psds = p.psds;
    for (auto& psd : aug.psds) {
        PsdBlock::Coeff relax;
        relax.var = p.num_vars;
        for (int i = 0; i < psd.dim; ++i) relax.entries.emplace_back(i, i, 1.0);
        psd.coeffs.push_back(std::move(relax));
    }
    return aug;
}

}  // namespace

ConicSolution solve_conic(const ConicProblem& problem, const SolverOptions& opts) {
    ConicSolution sol;
    sol.x = RVec::Zero(problem.num_vars);

    const int nu = problem.barrier_degree();
    if (nu == 0) {  // unconstrained linear objective: only x = 0 is sensible
        sol.status = problem.cost.isZero() ? SolveStatus::Optimal : SolveStatus::MaxIter;
        sol.objective = problem.cost_offset;
        return sol;
    }

    BarrierMachine machine(problem, true);
    RVec x0 = problem.warm_start.value_or(RVec::Zero(problem.num_vars));
    if (x0.size() != problem.num_vars || !x0.allFinite()) x0 = RVec::Zero(problem.num_vars);

    int steps_total = 0;

    // Phase I unless the start point is already strictly interior.
    const double start_violation = machine.violation(x0);
    const double interior_need = std::max(opts.interior_margin, 1e-9);
    if (start_violation > -interior_need) {
        const double box_radius =
            std::max(1e6, 1e3 * (1.0 + x0.cwiseAbs().maxCoeff() + std::abs(start_violation)));
        ConicProblem aug = augment_phase1(problem, box_radius);
        BarrierMachine machine1(aug, true);
        RVec z = RVec::Zero(aug.num_vars);
        z.head(problem.num_vars) = x0;
        z(problem.num_vars) = std::max(0.0, start_violation) + 1.0;

        const int tau = problem.num_vars;
        auto found_interior = [&](const RVec& pt) { return pt(tau) < -interior_need; };
        SolverOptions opts1 = opts;
        opts1.max_newton = opts.max_newton;
        const int nu1 = aug.barrier_degree();
        PathResult pr = follow_path(machine1, aug, z, opts1, nu1, 0.0,
                                    0.25 * interior_need, found_interior);
        steps_total += pr.steps;
        if (!found_interior(z)) {
            sol.status = SolveStatus::Infeasible;
            std::string family;
            RVec x_best = z.head(problem.num_vars);
            sol.feas_residual = std::max(0.0, machine.violation(x_best, &family));
            sol.blocking_family = family;
            sol.x = x_best;
            sol.objective = problem.cost.dot(sol.x) + problem.cost_offset;
            sol.newton_steps = steps_total;
            return sol;
        }
        x0 = z.head(problem.num_vars);
    }

    // Phase II: follow the central path to the gap target.
    RVec x = x0;
    SolverOptions opts2 = opts;
    opts2.max_newton = std::max(1, opts.max_newton - steps_total);
    PathResult pr = follow_path(machine, problem, x, opts2, nu, opts.tol_gap, 0.0, nullptr);
    steps_total += pr.steps;

    sol.x = x;
    sol.objective = problem.cost.dot(x) + problem.cost_offset;
    sol.newton_steps = steps_total;
    sol.feas_residual = std::max(0.0, machine.violation(x));
    if (pr.centered && pr.final_t > 0.0) {
        sol.gap = 2.0 * double(nu) / pr.final_t /
                  std::max(1.0, std::abs(sol.objective));
        sol.status = (sol.gap <= opts.tol_gap * 1.0001 && sol.feas_residual <= opts.tol_feas)
                         ? SolveStatus::Optimal
                         : SolveStatus::MaxIter;
    } else {
        sol.status = SolveStatus::MaxIter;
        sol.gap = std::numeric_limits<double>::infinity();
    }
    return sol;
}

}  // namespace fstar
