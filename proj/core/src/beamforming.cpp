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

#include "fstar/beamforming.hpp"

#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>

namespace fstar {

namespace {

// F W F^H as Re Tr(W * outer) with outer = conj(f) f^T (Hermitian PSD).
CMat row_outer(const CVec& row) {
    const CVec a = row.conjugate();
    return a * a.adjoint();
}

// Global user order, weakest first: transmit users then reflect users.
struct UserIndex {
    bool reflect_side;
    int idx;
};

std::vector<UserIndex> global_order(int K, int Q) {
    std::vector<UserIndex> order;
    for (int q = 0; q < Q; ++q) order.push_back({false, q});
    for (int k = 0; k < K; ++k) order.push_back({true, k});
    return order;
}

}  // namespace

RatioTerms covariance_ratio_terms(const EffectiveChannels& eff, const CovariancePool& pool,
                                  const RVec& noise_reflect, const RVec& noise_transmit) {
    const int K = static_cast<int>(eff.reflect.size());
    const int Q = static_cast<int>(eff.transmit.size());
    RatioTerms t;
    t.num_reflect.resize(K);
    t.den_reflect.resize(K);
    t.num_transmit.resize(Q);
    t.den_transmit.resize(Q);
    auto quad = [](const CVec& row, const CMat& W) {
        return (row.transpose() * W * row.conjugate())(0).real();
    };
    for (int k = 0; k < K; ++k) {
        t.num_reflect(k) = quad(eff.reflect[k], pool.reflect[k]);
        double intf = 0.0;
        for (int j = k + 1; j < K; ++j) intf += quad(eff.reflect[k], pool.reflect[j]);
        t.den_reflect(k) = intf + noise_reflect(k);
    }
    for (int q = 0; q < Q; ++q) {
        t.num_transmit(q) = quad(eff.transmit[q], pool.transmit[q]);
        double intf = 0.0;
        for (int j = q + 1; j < Q; ++j) intf += quad(eff.transmit[q], pool.transmit[j]);
        for (int k = 0; k < K; ++k) intf += quad(eff.transmit[q], pool.reflect[k]);
        t.den_transmit(q) = intf + noise_transmit(q);
    }
    return t;
}

double pool_objective(const EffectiveChannels& eff, const CovariancePool& pool,
                      const Scenario& sc) {
    const RatioTerms t =
        covariance_ratio_terms(eff, pool, sc.noise_reflect, sc.noise_transmit);
    double rate = 0.0;
    for (int k = 0; k < sc.num_reflect(); ++k)
        rate += sc.weight_r(k) * std::log2(1.0 + t.num_reflect(k) / t.den_reflect(k));
    for (int q = 0; q < sc.num_transmit(); ++q)
        rate += sc.weight_t(q) * std::log2(1.0 + t.num_transmit(q) / t.den_transmit(q));
    return rate;
}

namespace {

// Shared layout of the relaxed beamforming program: one Hermitian block per
// user (transmit blocks first to match the decode order), noise-normalized.
struct SdpLayout {
    std::vector<int> base;       // variable base per beam, global order
    std::vector<CMat> ref_outer; // per reference user (global order), unscaled
    RVec noise;                  // per reference user
    int M = 0, K = 0, Q = 0;
};

SdpLayout make_layout(ProblemBuilder& pb, const EffectiveChannels& eff, const Scenario& sc) {
    SdpLayout lay;
    lay.M = sc.num_antennas;
    lay.K = sc.num_reflect();
    lay.Q = sc.num_transmit();
    const auto order = global_order(lay.K, lay.Q);
    for (std::size_t i = 0; i < order.size(); ++i)
        lay.base.push_back(pb.add_hermitian_psd(lay.M, "psd"));
    lay.ref_outer.resize(order.size());
    lay.noise.resize(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (order[i].reflect_side) {
            lay.ref_outer[i] = row_outer(eff.reflect[order[i].idx]);
            lay.noise(i) = sc.noise_reflect(order[i].idx);
        } else {
            lay.ref_outer[i] = row_outer(eff.transmit[order[i].idx]);
            lay.noise(i) = sc.noise_transmit(order[i].idx);
        }
    }
    return lay;
}

// Power budget, decode-order power chains, and per-user SINR floors (global
// order). Coefficients are normalized by p_max (variables) and per-reference
// noise.
void add_shared_constraints(ProblemBuilder& pb, const SdpLayout& lay, const Scenario& sc,
                            const RVec& floors, int slack_var) {
    const int n_users = lay.K + lay.Q;
    // sum Tr(W) <= 1 in units of p_max
    std::vector<std::pair<int, double>> power;
    for (int u = 0; u < n_users; ++u)
        for (int d = 0; d < lay.M; ++d) power.emplace_back(lay.base[u] + d, 1.0);
    pb.add_lin_le(power, 1.0, "power");

    for (int r = 0; r < n_users; ++r) {
        const double g = sc.p_max / lay.noise(r);
        const CMat outer = g * lay.ref_outer[r];
        // Decode chain: the weakest user's beam must arrive strongest.
        for (int i = 0; i + 1 < n_users; ++i) {
            auto hi = pb.herm_inner(lay.base[i], outer);
            auto lo = pb.herm_inner(lay.base[i + 1], outer);
            for (auto& [var, coeff] : lo) coeff = -coeff;
            hi.insert(hi.end(), lo.begin(), lo.end());
            pb.add_lin_ge(hi, 0.0, "sic");
        }
        // signal - floor * interference >= floor * noise' (+ slack)
        const double floor = floors(r);
        std::vector<std::pair<int, double>> row = pb.herm_inner(lay.base[r], outer);
        for (int j = r + 1; j < n_users; ++j) {
            auto terms = pb.herm_inner(lay.base[j], outer);
            for (auto& [var, coeff] : terms) coeff *= -floor;
            row.insert(row.end(), terms.begin(), terms.end());
        }
        if (slack_var >= 0) row.emplace_back(slack_var, -1.0);
        pb.add_lin_ge(row, floor, "qos");
    }
}

RVec default_floors(const Scenario& sc) {
    return RVec::Constant(sc.num_users(), sc.qos_floor);
}

RVec ratios_in_order(const RatioTerms& t) {
    const int Q = static_cast<int>(t.num_transmit.size());
    const int K = static_cast<int>(t.num_reflect.size());
    RVec r(Q + K);
    for (int q = 0; q < Q; ++q) r(q) = t.num_transmit(q) / t.den_transmit(q);
    for (int k = 0; k < K; ++k) r(Q + k) = t.num_reflect(k) / t.den_reflect(k);
    return r;
}

CovariancePool extract_pool(const ProblemBuilder& pb, const RVec& x, const SdpLayout& lay,
                            const Scenario& sc) {
    CovariancePool pool;
    pool.transmit.resize(lay.Q);
    pool.reflect.resize(lay.K);
    const auto order = global_order(lay.K, lay.Q);
    for (std::size_t i = 0; i < order.size(); ++i) {
        CMat W = sc.p_max * pb.extract_hermitian(x, lay.base[i], lay.M);
        if (order[i].reflect_side)
            pool.reflect[order[i].idx] = std::move(W);
        else
            pool.transmit[order[i].idx] = std::move(W);
    }
    return pool;
}

RVec pool_to_raw(const CovariancePool& pool, const SdpLayout& lay, int num_vars,
                 const Scenario& sc) {
    RVec x = RVec::Zero(num_vars);
    const auto order = global_order(lay.K, lay.Q);
    for (std::size_t i = 0; i < order.size(); ++i) {
        const CMat& W = order[i].reflect_side ? pool.reflect[order[i].idx]
                                              : pool.transmit[order[i].idx];
        int var = lay.base[i];
        for (int d = 0; d < lay.M; ++d, ++var) x(var) = W(d, d).real() / sc.p_max;
        for (int j = 0; j < lay.M; ++j) {
            for (int r = 0; r < j; ++r) {
                x(var++) = W(r, j).real() / sc.p_max;
                x(var++) = W(r, j).imag() / sc.p_max;
            }
        }
    }
    return x;
}

}  // namespace

ConicProblem build_beamforming_problem(const EffectiveChannels& eff,
                                       const CovariancePool& pool_prev, const Scenario& sc,
                                       const RVec& floors) {
    const int K = sc.num_reflect();
    const int Q = sc.num_transmit();
    const RatioTerms prev =
        covariance_ratio_terms(eff, pool_prev, sc.noise_reflect, sc.noise_transmit);
    for (int k = 0; k < K; ++k)
        if (prev.num_reflect(k) <= 0)
            throw std::invalid_argument("build_beamforming_problem: degenerate signal term");
    for (int q = 0; q < Q; ++q)
        if (prev.num_transmit(q) <= 0)
            throw std::invalid_argument("build_beamforming_problem: degenerate signal term");

    ProblemBuilder pb;
    SdpLayout lay = make_layout(pb, eff, sc);
    add_shared_constraints(pb, lay, sc, floors.size() ? floors : default_floors(sc),
                           /*slack_var=*/-1);

    // Minimizing the negated concave lower bound of the weighted sum rate:
    // per user a hyperbolic epigraph covers the num_n/signal term, the
    // interference forms enter the cost linearly, constants go to the offset.
    const auto order = global_order(K, Q);
    std::vector<int> t_vars;
    double offset = 0.0;
    for (std::size_t r = 0; r < order.size(); ++r) {
        const bool rs = order[r].reflect_side;
        const int idx = order[r].idx;
        const double weight = rs ? sc.weight_r(idx) : sc.weight_t(idx);
        const double num_n =
            (rs ? prev.num_reflect(idx) : prev.num_transmit(idx)) / lay.noise(r);
        const double den_n =
            (rs ? prev.den_reflect(idx) : prev.den_transmit(idx)) / lay.noise(r);
        const double ratio_n = num_n / den_n;
        const double c = weight * (ratio_n / (1.0 + ratio_n)) / std::log(2.0);

        const double g = sc.p_max / lay.noise(r);
        const CMat outer = g * lay.ref_outer[r];

        const int t_var = pb.add_var(c);  // t >= num_n / signal
        t_vars.push_back(t_var);
        pb.add_hyperbolic({{t_var, 1.0}}, 0.0, pb.herm_inner(lay.base[r], outer), 0.0, num_n,
                          "epigraph");
        for (std::size_t j = r + 1; j < order.size(); ++j) {
            for (const auto& [var, coeff] : pb.herm_inner(lay.base[j], outer))
                pb.add_cost(var, coeff * c / den_n);
        }
        offset += -weight * std::log2(1.0 + ratio_n) - 2.0 * c + c / den_n;
    }
    pb.add_cost_offset(offset);

    ConicProblem prob = pb.take();
    // Nudge the expansion pool off the semidefinite boundary; the decode-chain
    // rows are unaffected (the shift cancels across both sides) and the rest
    // keeps slack whenever the previous iterate had any.
    CovariancePool inflated = pool_prev;
    const double bump = 0.02 * sc.p_max / double((K + Q) * sc.num_antennas);
    for (auto& W : inflated.reflect) W = 0.98 * W + bump * CMat::Identity(W.rows(), W.cols());
    for (auto& W : inflated.transmit) W = 0.98 * W + bump * CMat::Identity(W.rows(), W.cols());
    RVec warm = pool_to_raw(inflated, lay, prob.num_vars, sc);
    for (const int t : t_vars) warm(t) = 1.2;  // expansion point sits near t = 1
    prob.warm_start = std::move(warm);
    return prob;
}

std::pair<CVec, double> rank_one_recover(const CMat& W) {
    const int M = static_cast<int>(W.rows());
    const double tr = W.trace().real();
    if (tr <= 0.0) return {CVec::Zero(M), 0.0};
    Eigen::SelfAdjointEigenSolver<CMat> eig(W);
    const double lead = eig.eigenvalues()(M - 1);
    CVec w = std::sqrt(std::max(0.0, lead)) * eig.eigenvectors().col(M - 1);
    // Canonical global phase: largest-magnitude entry real positive.
    int arg = 0;
    for (int i = 1; i < M; ++i)
        if (std::abs(w(i)) > std::abs(w(arg))) arg = i;
    if (std::abs(w(arg)) > 0)
        w *= std::conj(w(arg)) / std::abs(w(arg));
    return {w, lead / tr};
}

Beamformers mrt_beamformers(const EffectiveChannels& eff, const Scenario& sc) {
    const int K = static_cast<int>(eff.reflect.size());
    const int Q = static_cast<int>(eff.transmit.size());
    const double per_user = sc.p_max / std::max(1, K + Q);
    Beamformers bf;
    bf.reflect.resize(K);
    bf.transmit.resize(Q);
    auto matched = [&](const CVec& row) -> CVec {
        const double n = row.norm();
        if (n == 0.0) return CVec::Zero(row.size());
        return std::sqrt(per_user) * row.conjugate() / n;
    };
    for (int k = 0; k < K; ++k) bf.reflect[k] = matched(eff.reflect[k]);
    for (int q = 0; q < Q; ++q) bf.transmit[q] = matched(eff.transmit[q]);
    return bf;
}

CovariancePool pool_from_beams(const Beamformers& beams) {
    CovariancePool pool;
    for (const auto& w : beams.reflect) pool.reflect.push_back(w * w.adjoint());
    for (const auto& w : beams.transmit) pool.transmit.push_back(w * w.adjoint());
    return pool;
}

namespace {

bool recovered_feasible(const EffectiveChannels& eff, const Beamformers& bf,
                        const Scenario& sc, const RVec& floors) {
    if (bf.total_power() > sc.p_max * (1.0 + 1e-6)) return false;
    const SinrReport rep = sinr_all(eff, bf, sc.noise_reflect, sc.noise_transmit);
    const int Q = sc.num_transmit();
    for (int q = 0; q < Q; ++q)
        if (rep.gamma_transmit(q) < floors(q) * (1.0 - 1e-6) - 1e-9) return false;
    for (int k = 0; k < sc.num_reflect(); ++k)
        if (rep.gamma_reflect(k) < floors(Q + k) * (1.0 - 1e-6) - 1e-9) return false;
    // decode chains, with a small relative allowance for recovery error
    const int K = sc.num_reflect();
    const auto order = global_order(K, Q);
    auto beam = [&](int i) -> const CVec& {
        return order[i].reflect_side ? bf.reflect[order[i].idx] : bf.transmit[order[i].idx];
    };
    auto chain_ok = [&](const CVec& row) {
        for (int i = 0; i + 1 < K + Q; ++i) {
            const double hi = std::norm(row_apply(row, beam(i)));
            const double lo = std::norm(row_apply(row, beam(i + 1)));
            if (lo > hi * (1.0 + 1e-6) + 1e-30) return false;
        }
        return true;
    };
    for (int q = 0; q < Q; ++q)
        if (!chain_ok(eff.transmit[q])) return false;
    for (int k = 0; k < K; ++k)
        if (!chain_ok(eff.reflect[k])) return false;
    return true;
}

double beams_rate(const EffectiveChannels& eff, const Beamformers& bf, const Scenario& sc) {
    return sinr_all(eff, bf, sc.noise_reflect, sc.noise_transmit, sc.weight_reflect,
                    sc.weight_transmit)
        .sum_rate;
}

// Feasibility program: maximize the uniform SINR-floor slack. Returns the
// attained slack (negative when the floors are unattainable) or nullopt on a
// solver failure.
std::optional<double> feasibility_phase(const EffectiveChannels& eff, const Scenario& sc,
                                        const RVec& floors, CovariancePool& pool,
                                        std::string* failure) {
    ProblemBuilder pb;
    SdpLayout lay = make_layout(pb, eff, sc);
    const int slack = pb.add_var(-1.0);  // maximize s
    add_shared_constraints(pb, lay, sc, floors, slack);
    pb.add_lin_le({{slack, 1.0}}, 10.0 + floors.maxCoeff(), "slack-cap");
    ConicProblem prob = pb.take();
    ConicSolution sol = solve_conic(prob);
    if (sol.status == SolveStatus::MaxIter) {
        if (failure) *failure = "solver";
        return std::nullopt;
    }
    if (sol.status == SolveStatus::Infeasible) {
        if (failure) *failure = sol.blocking_family.empty() ? "qos" : sol.blocking_family;
        return std::nullopt;
    }
    pool = extract_pool(pb, sol.x, lay, sc);
    return sol.x(slack);
}

}  // namespace

BeamformingResult solve_beamforming(const EffectiveChannels& eff, const Scenario& sc,
                                    const CovariancePool* pool_init) {
    BeamformingResult res;

    for (const auto& row : eff.reflect)
        if (row.norm() == 0.0) {
            res.feasible = false;
            res.failure = "zero effective channel";
            return res;
        }
    for (const auto& row : eff.transmit)
        if (row.norm() == 0.0) {
            res.feasible = false;
            res.failure = "zero effective channel";
            return res;
        }

    const int K = sc.num_reflect();
    const int Q = sc.num_transmit();
    CovariancePool pool = pool_init ? *pool_init : pool_from_beams(mrt_beamformers(eff, sc));
    RVec floors = default_floors(sc);
    {
        const RatioTerms t =
            covariance_ratio_terms(eff, pool, sc.noise_reflect, sc.noise_transmit);
        const RVec achieved = ratios_in_order(t);
        if ((achieved.array() < floors.array()).any()) {
            CovariancePool feas_pool = pool;
            const auto slack = feasibility_phase(eff, sc, floors, feas_pool, &res.failure);
            if (!slack.has_value()) {
                res.feasible = false;
                res.pool = pool;
                return res;
            }
            pool = feas_pool;
            if (*slack < 0.0) {
                // Floors unreachable with the current surface state: run this
                // stage against what is attainable now and let the outer loop
                // tighten on later passes.
                res.floor_relaxed = true;
                const RVec now = ratios_in_order(covariance_ratio_terms(
                    eff, pool, sc.noise_reflect, sc.noise_transmit));
                floors = floors.cwiseMin(0.95 * now.cwiseMax(0.0));
            }
        }
    }

    res.floors_used = floors;
    double obj = pool_objective(eff, pool, sc);
    res.objective_history.push_back(obj);
    constexpr int kMaxIter = 30;
    for (int it = 0; it < kMaxIter; ++it) {
        ConicProblem prob = build_beamforming_problem(eff, pool, sc, floors);
        ConicSolution sol = solve_conic(prob);
        ++res.iterations;
        if (sol.status == SolveStatus::Infeasible) {
            res.failure = sol.blocking_family;
            break;
        }
        if (sol.status != SolveStatus::Optimal) break;

        ProblemBuilder pb;  // rebuild the layout for extraction offsets
        SdpLayout lay = make_layout(pb, eff, sc);
        CovariancePool cand = extract_pool(pb, sol.x, lay, sc);
        const double obj_new = pool_objective(eff, cand, sc);
        if (obj_new < obj) break;  // solver-precision regression: keep previous
        pool = std::move(cand);
        res.objective_history.push_back(obj_new);
        const bool converged = (obj_new - obj) < 1e-3 * std::max(1.0, std::abs(obj));
        obj = obj_new;
        if (converged) break;
    }
    res.pool = pool;

    // Rank-one recovery.
    res.dominance.resize(K + Q);
    Beamformers beams;
    beams.reflect.resize(K);
    beams.transmit.resize(Q);
    bool all_dominant = true;
    for (int k = 0; k < K; ++k) {
        auto [w, dom] = rank_one_recover(pool.reflect[k]);
        beams.reflect[k] = w;
        res.dominance(Q + k) = dom;
        if (dom < 0.99) all_dominant = false;
    }
    for (int q = 0; q < Q; ++q) {
        auto [w, dom] = rank_one_recover(pool.transmit[q]);
        beams.transmit[q] = w;
        res.dominance(q) = dom;
        if (dom < 0.99) all_dominant = false;
    }

    if (!all_dominant) {
        // Gaussian randomization fallback; keep the best feasible candidate.
        res.randomization_used = true;
        Beamformers best = beams;
        double best_rate =
            recovered_feasible(eff, beams, sc, floors) ? beams_rate(eff, beams, sc) : -1.0;
        std::mt19937_64 eng(0x5eed5eedULL);
        std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(2.0));
        auto sqrt_of = [](const CMat& W) {
            Eigen::SelfAdjointEigenSolver<CMat> eig(W);
            const RVec vals = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
            return CMat(eig.eigenvectors() * vals.asDiagonal() *
                        eig.eigenvectors().adjoint());
        };
        std::vector<CMat> roots;
        for (const auto& W : pool.transmit) roots.push_back(sqrt_of(W));
        for (const auto& W : pool.reflect) roots.push_back(sqrt_of(W));
        const int M = sc.num_antennas;
        for (int s = 0; s < 200; ++s) {
            Beamformers cand;
            cand.transmit.resize(Q);
            cand.reflect.resize(K);
            int b = 0;
            double power = 0.0;
            auto draw = [&](const CMat& root) {
                CVec e(M);
                for (int i = 0; i < M; ++i) e(i) = {gauss(eng), gauss(eng)};
                CVec w = root * e;
                power += w.squaredNorm();
                return w;
            };
            for (int q = 0; q < Q; ++q) cand.transmit[q] = draw(roots[b++]);
            for (int k = 0; k < K; ++k) cand.reflect[k] = draw(roots[b++]);
            if (power <= 0) continue;
            const double scale = std::sqrt(sc.p_max / power);
            for (auto& w : cand.transmit) w *= std::min(1.0, scale);
            for (auto& w : cand.reflect) w *= std::min(1.0, scale);
            if (!recovered_feasible(eff, cand, sc, floors)) continue;
            const double r = beams_rate(eff, cand, sc);
            if (r > best_rate) {
                best_rate = r;
                best = cand;
            }
        }
        beams = best;
    }
    res.beams = std::move(beams);
    return res;
}

}  // namespace fstar
