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

#ifndef FSTAR_COEFF_OPT_HPP
#define FSTAR_COEFF_OPT_HPP

#include <string>
#include <vector>

#include "fstar/conic.hpp"
#include "fstar/link_metrics.hpp"
#include "fstar/scenario.hpp"
#include "fstar/surface.hpp"
#include "fstar/types.hpp"

namespace fstar {

/// One received-power building block as a quadratic form in a coefficient
/// vector: value = v^H quad v + 2 Re(lin^H v) + offset.
struct QuadForm {
    CMat quad;
    CVec lin;
    double offset = 0.0;

    double eval(const CVec& v) const {
        double out = offset;
        if (quad.size() > 0) out += (v.adjoint() * quad * v)(0).real();
        if (lin.size() > 0) out += 2.0 * lin.dot(v).real();
        return out;
    }
};

/// Per-(reference user, beam) quadratic forms of every received power the
/// coefficient subproblem touches. Beams are globally ordered weakest-user
/// first (transmit beams, then reflect beams).
///
/// Transmit-side forms are rank-one in the transmission vector (from the
/// surface-response outer product); reflect-side forms follow the
/// trace/Hadamard expansion of the cascade-plus-direct power, so `quad` is
/// the Hadamard product of the relay outer product with the transposed user
/// outer product, `lin` comes from the cross-term diagonal and `offset` is
/// the direct-link power.
struct CoeffSubproblemData {
    std::vector<std::vector<QuadForm>> transmit_side;  // [q][beam]
    std::vector<std::vector<QuadForm>> reflect_side;   // [k][beam]
    int num_elements = 0;
};

CoeffSubproblemData build_coeff_data(const ChannelSet& channels, const Beamformers& bf);

/// Convexified coefficient subproblem around (transmit_n, reflect_n). The
/// expansion point must be feasible for its own floors. Throws on degenerate
/// previous denominators.
ConicProblem build_coeff_problem(const CoeffSubproblemData& data, const SurfaceCoeffs& prev,
                                 const Scenario& sc, const RVec& floors = RVec(),
                                 bool enforce_chains = true);

struct CoeffResult {
    SurfaceCoeffs coeffs;
    bool feasible = true;
    bool floor_relaxed = false;
    RVec floors_used;
    std::string failure;
    std::vector<double> rate_history;  // exact sum rate per accepted iterate
    int iterations = 0;
};

struct CoeffOptions {
    bool enforce_qos = true;
    bool enforce_chains = true;
    int max_iterations = 30;
};

CoeffResult solve_coeff_subproblem(const ChannelSet& channels, const Beamformers& bf,
                                   const SurfaceCoeffs& init, const Scenario& sc,
                                   const CoeffOptions& options = {});

}  // namespace fstar

#endif
