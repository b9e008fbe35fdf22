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

#ifndef FSTAR_BEAMFORMING_HPP
#define FSTAR_BEAMFORMING_HPP

#include <string>
#include <vector>

#include "fstar/conic.hpp"
#include "fstar/link_metrics.hpp"
#include "fstar/scenario.hpp"
#include "fstar/types.hpp"

namespace fstar {

/// Rank-relaxed beam covariances, one Hermitian PSD M x M block per user.
struct CovariancePool {
    std::vector<CMat> reflect;   // K
    std::vector<CMat> transmit;  // Q

    double total_power() const {
        double p = 0.0;
        for (const auto& W : reflect) p += W.trace().real();
        for (const auto& W : transmit) p += W.trace().real();
        return p;
    }
};

/// Signal/interference linear forms evaluated on a covariance pool.
struct RatioTerms {
    RVec num_reflect, den_reflect;    // per reflect user
    RVec num_transmit, den_transmit;  // per transmit user
};

RatioTerms covariance_ratio_terms(const EffectiveChannels& eff, const CovariancePool& pool,
                                  const RVec& noise_reflect, const RVec& noise_transmit);

/// Relaxed weighted sum rate of a covariance pool.
double pool_objective(const EffectiveChannels& eff, const CovariancePool& pool,
                      const Scenario& sc);

/// One convexified beamforming subproblem around the previous covariance
/// iterate. Throws std::invalid_argument when any previous signal term is
/// nonpositive (degenerate expansion point). `floors` optionally overrides
/// the per-user SINR floors (global decode order: transmit users first);
/// empty means the scenario floor for everyone.
ConicProblem build_beamforming_problem(const EffectiveChannels& eff,
                                       const CovariancePool& pool_prev, const Scenario& sc,
                                       const RVec& floors = RVec());

struct BeamformingResult {
    CovariancePool pool;
    Beamformers beams;            // rank-one recovery of the pool
    RVec dominance;               // leading-eigenvalue share per user (Q then K)
    bool randomization_used = false;
    bool feasible = true;
    bool floor_relaxed = false;   // SINR floors were warm-up-reduced this stage
    RVec floors_used;             // per-user floors enforced (global order)
    std::string failure;          // violated constraint family when infeasible
    std::vector<double> objective_history;  // relaxed objective per SCA iterate
    int iterations = 0;
};

/// Iterated convex relaxation from the given (or MRT) initializer, followed
/// by rank-one recovery with a randomization fallback.
BeamformingResult solve_beamforming(const EffectiveChannels& eff, const Scenario& sc,
                                    const CovariancePool* pool_init = nullptr);

/// Leading-eigenpair beam extraction: w = sqrt(lambda_1) u_1, phase-fixed so
/// the largest-magnitude entry is real positive. dominance = lambda_1/Tr(W)
/// (0 for the zero matrix).
std::pair<CVec, double> rank_one_recover(const CMat& W);

/// Equal-power beams matched to each user's effective channel, scaled to the
/// full power budget.
Beamformers mrt_beamformers(const EffectiveChannels& eff, const Scenario& sc);

CovariancePool pool_from_beams(const Beamformers& beams);

}  // namespace fstar

#endif
