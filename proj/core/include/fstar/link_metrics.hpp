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

#ifndef FSTAR_LINK_METRICS_HPP
#define FSTAR_LINK_METRICS_HPP

#include <string>
#include <vector>

#include "fstar/channel.hpp"
#include "fstar/surface.hpp"
#include "fstar/types.hpp"

namespace fstar {

/// Per-user downlink beamformers.
struct Beamformers {
    std::vector<CVec> reflect;   // K vectors, length M
    std::vector<CVec> transmit;  // Q vectors, length M

    double total_power() const {
        double p = 0.0;
        for (const auto& w : reflect) p += w.squaredNorm();
        for (const auto& w : transmit) p += w.squaredNorm();
        return p;
    }
};

/// Effective channels; each row is stored as a length-M vector of its
/// entries (apply to a beamformer with `row_apply`).
struct EffectiveChannels {
    std::vector<CVec> reflect;   // K rows
    std::vector<CVec> transmit;  // Q rows
};

inline cplx row_apply(const CVec& row, const CVec& w) {
    return (row.transpose() * w)(0);
}

/// SINRs, their building blocks, and the weighted sum rate.
struct SinrReport {
    RVec gamma_reflect;   // K linear SINRs
    RVec gamma_transmit;  // Q linear SINRs
    RVec num_reflect;     // signal powers (SINR numerators)
    RVec den_reflect;     // interference + noise (SINR denominators)
    RVec num_transmit;
    RVec den_transmit;
    double sum_rate = 0.0;  // bps/Hz, weighted
};

/// Outcome of the channel-gain and interference-power ordering checks the
/// decoding chain assumes.
struct OrderingReport {
    bool gain_order_ok = true;    // ||F_T,1||^2 <= ... <= ||F_R,K||^2
    bool chains_ok = true;        // per-receiver decode-order power chains
    std::string first_violation;  // empty when everything holds
};

EffectiveChannels effective_channels(const ChannelSet& channels, const SurfaceCoeffs& coeffs);

SinrReport sinr_all(const EffectiveChannels& eff, const Beamformers& bf,
                    const RVec& noise_reflect, const RVec& noise_transmit,
                    const std::vector<double>& weight_reflect = {},
                    const std::vector<double>& weight_transmit = {});

OrderingReport check_orderings(const ChannelSet& channels, const SurfaceCoeffs& coeffs,
                               const Beamformers& bf);

bool qos_feasible(const SinrReport& report, double gamma_min);

}  // namespace fstar

#endif
