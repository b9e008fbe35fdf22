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

#include "fstar/coeff_opt.hpp"

#include <cmath>
#include <stdexcept>

namespace fstar {

namespace {

// Variable layout: [Re t; Im t; Re r; Im r] over the transmission (t) and
// reflection (r) vectors, then auxiliaries.
struct VarMap {
    int L = 0;
    int re_t(int l) const { return l; }
    int im_t(int l) const { return L + l; }
    int re_r(int l) const { return 2 * L + l; }
    int im_r(int l) const { return 3 * L + l; }
    int total() const { return 4 * L; }
};

// Which coefficient vector a form acts on.
enum class Side { Transmit, Reflect };

std::vector<int> side_vars(const VarMap& vm, Side side) {
    std::vector<int> vars(2 * vm.L);
    for (int l = 0; l < vm.L; ++l) {
        vars[l] = side == Side::Transmit ? vm.re_t(l) : vm.re_r(l);
        vars[vm.L + l] = side == Side::Transmit ? vm.im_t(l) : vm.im_r(l);
    }
    return vars;
}

// Real coefficients of 2 Re(a^H v) over [Re v; Im v].
RVec cross_coeffs(const CVec& a) {
    RVec out(2 * a.size());
    out.head(a.size()) = 2.0 * a.real();
    out.tail(a.size()) = 2.0 * a.imag();
    return out;
}

std::vector<std::pair<int, double>> to_pairs(const std::vector<int>& vars, const RVec& coeffs) {
    std::vector<std::pair<int, double>> out;
    out.reserve(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (coeffs(static_cast<int>(i)) != 0.0)
            out.emplace_back(vars[i], coeffs(static_cast<int>(i)));
    return out;
}

// Affine minorant of `form` at v_n, as (coeffs over [Re v; Im v], constant).
std::pair<RVec, double> form_minorant(const QuadForm& form, const CVec& v_n) {
    CVec a = form.lin;
    double constant = form.offset;
    if (form.quad.size() > 0) {
        a += form.quad * v_n;
        constant -= (v_n.adjoint() * form.quad * v_n)(0).real();
    }
    return {cross_coeffs(a), constant};
}

struct UserRef {
    Side side;  // coefficient vector the reference user's forms act on
    int user;   // index within its side
    double noise;
    double weight;
    const std::vector<QuadForm>* forms;  // per beam, global order
};

std::vector<UserRef> reference_users(const CoeffSubproblemData& data, const Scenario& sc) {
    std::vector<UserRef> refs;
    for (int q = 0; q < sc.num_transmit(); ++q)
        refs.push_back({Side::Transmit, q, sc.noise_transmit(q), sc.weight_t(q),
                        &data.transmit_side[q]});
    for (int k = 0; k < sc.num_reflect(); ++k)
        refs.push_back({Side::Reflect, k, sc.noise_reflect(k), sc.weight_r(k),
                        &data.reflect_side[k]});
    return refs;
}

// Interference-plus-noise form of the reference user at global index r: all
// beams decoded after its own interfere.
QuadForm denominator_form(const UserRef& ref, int ref_global, int n_users, int L) {
    QuadForm den;
    den.quad = CMat::Zero(L, L);
    den.lin = CVec::Zero(L);
    den.offset = ref.noise;
    for (int b = ref_global + 1; b < n_users; ++b) {
        const QuadForm& f = (*ref.forms)[b];
        if (f.quad.size() > 0) den.quad += f.quad;
        if (f.lin.size() > 0) den.lin += f.lin;
        den.offset += f.offset;
    }
    return den;
}

}  // namespace

CoeffSubproblemData build_coeff_data(const ChannelSet& channels, const Beamformers& bf) {
    const int L = channels.num_elements();
    const int K = static_cast<int>(channels.surface_reflect.size());
    const int Q = static_cast<int>(channels.surface_transmit.size());
    if (static_cast<int>(bf.reflect.size()) != K || static_cast<int>(bf.transmit.size()) != Q)
        throw std::invalid_argument("build_coeff_data: beamformer count mismatch");

    // global beam order: transmit beams first, then reflect beams
    std::vector<const CVec*> beams;
    for (const auto& w : bf.transmit) beams.push_back(&w);
    for (const auto& w : bf.reflect) beams.push_back(&w);

    CoeffSubproblemData data;
    data.num_elements = L;
    data.transmit_side.resize(Q);
    for (int q = 0; q < Q; ++q) {
        data.transmit_side[q].reserve(beams.size());
        const CVec h_conj = channels.surface_transmit[q].conjugate();
        for (const CVec* w : beams) {
            // surface response u = diag(h^H) G w; the power is |v^H u|^2
            const CVec u = h_conj.asDiagonal() * (channels.bs_surface * (*w));
            QuadForm f;
            f.quad = u * u.adjoint();
            f.lin = CVec::Zero(L);
            f.offset = 0.0;
            data.transmit_side[q].push_back(std::move(f));
        }
    }
    data.reflect_side.resize(K);
    for (int k = 0; k < K; ++k) {
        data.reflect_side[k].reserve(beams.size());
        const CVec& h = channels.surface_reflect[k];
        const CMat user_outer = h * h.adjoint();  // shared across beams
        for (const CVec* w : beams) {
            const CVec gw = channels.bs_surface * (*w);
            const CMat relay_outer = gw * gw.adjoint();
            const cplx direct = row_apply(channels.direct[k], *w);
            // the cross matrix h * direct * gw^H enters through its diagonal
            const CVec cross_diag = direct * h.cwiseProduct(gw.conjugate());
            QuadForm f;
            f.quad = relay_outer.cwiseProduct(user_outer.transpose());
            f.lin = cross_diag.conjugate();
            f.offset = std::norm(direct);
            data.reflect_side[k].push_back(std::move(f));
        }
    }
    return data;
}

ConicProblem build_coeff_problem(const CoeffSubproblemData& data, const SurfaceCoeffs& prev,
                                 const Scenario& sc, const RVec& floors_in,
                                 bool enforce_chains) {
    const int L = data.num_elements;
    const int Q = sc.num_transmit();
    const int K = sc.num_reflect();
    const int n_users = Q + K;
    const RVec floors = floors_in.size() ? floors_in : RVec::Constant(n_users, sc.qos_floor);

    ProblemBuilder pb;
    VarMap vm{L};
    for (int i = 0; i < vm.total(); ++i) pb.add_var();

    const auto refs = reference_users(data, sc);
    auto v_of = [&](Side s) -> const CVec& {
        return s == Side::Transmit ? prev.transmit : prev.reflect;
    };

    // Per-element energy-split caps.
    for (int l = 0; l < L; ++l) {
        RMat A = RMat::Zero(4, vm.total());
        A(0, vm.re_t(l)) = 1.0;
        A(1, vm.im_t(l)) = 1.0;
        A(2, vm.re_r(l)) = 1.0;
        A(3, vm.im_r(l)) = 1.0;
        pb.add_soc(A, RVec::Zero(4), RVec::Zero(vm.total()), 1.0, "cap");
    }

    double offset = 0.0;
    for (int r = 0; r < n_users; ++r) {
        const UserRef& ref = refs[r];
        const std::vector<int> vars = side_vars(vm, ref.side);
        const CVec& v_n = v_of(ref.side);
        const double inv_noise = 1.0 / ref.noise;

        const QuadForm den = denominator_form(ref, r, n_users, L);
        const QuadForm& num = (*ref.forms)[r];
        const double num_n = num.eval(v_n) * inv_noise;
        const double den_n = den.eval(v_n) * inv_noise;
        if (den_n <= 0)
            throw std::invalid_argument("build_coeff_problem: degenerate denominator");
        if (num_n <= 0)
            throw std::invalid_argument("build_coeff_problem: degenerate signal term");

        auto [num_min_coeffs, num_min_const] = form_minorant(num, v_n);
        num_min_coeffs *= inv_noise;
        num_min_const *= inv_noise;

        // Objective pieces (minimize the negated concave bound).
        const double ratio_n = num_n / den_n;
        const double c = ref.weight * (ratio_n / (1.0 + ratio_n)) / std::log(2.0);
        const int t_var = pb.add_var(c);  // t >= num_n / minorant(num)
        pb.add_hyperbolic({{t_var, 1.0}}, 0.0, to_pairs(vars, num_min_coeffs), num_min_const,
                          num_n, "epigraph");
        const int s_var = pb.add_var(c / den_n);  // s >= den(v)
        pb.add_quad_le_affine(vars, complex_embed(den.quad) * inv_noise,
                              cross_coeffs(den.lin) * inv_noise, den.offset * inv_noise,
                              {{s_var, 1.0}}, 0.0, "den-epigraph");
        offset += -ref.weight * std::log2(1.0 + ratio_n) - 2.0 * c;

        // SINR floor: den(v) <= minorant(num)(v) / floor.
        if (floors(r) > 0.0) {
            pb.add_quad_le_affine(vars, complex_embed(den.quad) * inv_noise,
                                  cross_coeffs(den.lin) * inv_noise, den.offset * inv_noise,
                                  to_pairs(vars, num_min_coeffs / floors(r)),
                                  num_min_const / floors(r), "qos");
        }

        // Decode chains at this reference user: the weaker user's beam must
        // stay the stronger arrival. Exact convex form on the left, affine
        // minorant on the right keeps each link convex and conservative.
        if (enforce_chains) {
            for (int i = 0; i + 1 < n_users; ++i) {
                const QuadForm& right = (*ref.forms)[i];     // weaker user's beam
                const QuadForm& left = (*ref.forms)[i + 1];  // stronger user's beam
                auto [rc, rconst] = form_minorant(right, v_n);
                // slack absorbs the rank-one recovery error carried by beams
                const double slack = 1e-6 * (1.0 + std::abs(rconst) * inv_noise);
                pb.add_quad_le_affine(vars, complex_embed(left.quad) * inv_noise,
                                      cross_coeffs(left.lin) * inv_noise,
                                      left.offset * inv_noise,
                                      to_pairs(vars, rc * inv_noise),
                                      rconst * inv_noise + slack, "sic");
            }
        }
    }
    pb.add_cost_offset(offset);

    ConicProblem prob = pb.take();
    // Warm start just inside the caps; epigraph auxiliaries follow.
    RVec warm = RVec::Zero(prob.num_vars);
    const double shrink = 0.995;
    for (int l = 0; l < L; ++l) {
        warm(vm.re_t(l)) = shrink * prev.transmit(l).real();
        warm(vm.im_t(l)) = shrink * prev.transmit(l).imag();
        warm(vm.re_r(l)) = shrink * prev.reflect(l).real();
        warm(vm.im_r(l)) = shrink * prev.reflect(l).imag();
    }
    int aux = vm.total();
    for (int r = 0; r < n_users; ++r) {
        warm(aux++) = 1.3;  // t
        const UserRef& ref = refs[r];
        const QuadForm den = denominator_form(ref, r, n_users, L);
        warm(aux++) = den.eval(v_of(ref.side)) / ref.noise * 1.1 + 0.01;  // s
    }
    prob.warm_start = std::move(warm);
    return prob;
}

CoeffResult solve_coeff_subproblem(const ChannelSet& channels, const Beamformers& bf,
                                   const SurfaceCoeffs& init, const Scenario& sc,
                                   const CoeffOptions& options) {
    CoeffResult res;
    res.coeffs = init;
    const int Q = sc.num_transmit();
    const int K = sc.num_reflect();
    const int n_users = Q + K;

    double beam_power = 0.0;
    for (const auto& w : bf.transmit) beam_power += w.squaredNorm();
    for (const auto& w : bf.reflect) beam_power += w.squaredNorm();
    if (beam_power == 0.0) {
        res.rate_history.push_back(0.0);
        res.floors_used = RVec::Zero(n_users);
        return res;  // nothing to optimize against
    }

    const CoeffSubproblemData data = build_coeff_data(channels, bf);

    auto exact_rate = [&](const SurfaceCoeffs& c) {
        return sinr_all(effective_channels(channels, c), bf, sc.noise_reflect,
                        sc.noise_transmit, sc.weight_reflect, sc.weight_transmit)
            .sum_rate;
    };
    auto current_ratios = [&](const SurfaceCoeffs& c) {
        const SinrReport rep =
            sinr_all(effective_channels(channels, c), bf, sc.noise_reflect, sc.noise_transmit);
        RVec r(n_users);
        for (int q = 0; q < Q; ++q) r(q) = rep.gamma_transmit(q);
        for (int k = 0; k < K; ++k) r(Q + k) = rep.gamma_reflect(k);
        return r;
    };

    // Floors the expansion point can actually honor; unattainable ones are
    // warm-up-reduced and re-checked by the caller at convergence.
    RVec floors = RVec::Constant(n_users, options.enforce_qos ? sc.qos_floor : 0.0);
    {
        const RVec now = current_ratios(res.coeffs);
        const RVec reduced = floors.cwiseMin((1.0 - 1e-6) * now.cwiseMax(0.0));
        if ((reduced.array() < floors.array()).any()) res.floor_relaxed = true;
        floors = reduced;
    }
    res.floors_used = floors;

    double rate = exact_rate(res.coeffs);
    res.rate_history.push_back(rate);
    for (int it = 0; it < options.max_iterations; ++it) {
        ConicProblem prob;
        try {
            prob = build_coeff_problem(data, res.coeffs, sc, floors, options.enforce_chains);
        } catch (const std::invalid_argument&) {
            break;  // degenerate terms: keep the current iterate
        }
        const ConicSolution sol = solve_conic(prob);
        ++res.iterations;
        if (sol.status == SolveStatus::Infeasible) {
            res.failure = sol.blocking_family;
            break;
        }
        if (sol.status != SolveStatus::Optimal) break;

        SurfaceCoeffs cand;
        cand.transmit.resize(sc.num_elements);
        cand.reflect.resize(sc.num_elements);
        VarMap vm{sc.num_elements};
        for (int l = 0; l < sc.num_elements; ++l) {
            cand.transmit(l) = {sol.x(vm.re_t(l)), sol.x(vm.im_t(l))};
            cand.reflect(l) = {sol.x(vm.re_r(l)), sol.x(vm.im_r(l))};
        }
        const double rate_new = exact_rate(cand);
        if (rate_new < rate) break;  // surrogate exhausted at solver precision
        res.coeffs = std::move(cand);
        res.rate_history.push_back(rate_new);
        const bool converged = (rate_new - rate) < 1e-3 * std::max(1.0, std::abs(rate));
        rate = rate_new;
        if (converged) break;
    }
    return res;
}

}  // namespace fstar
