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

#include "fstar/link_metrics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fstar {

EffectiveChannels effective_channels(const ChannelSet& channels, const SurfaceCoeffs& coeffs) {
    const int K = static_cast<int>(channels.surface_reflect.size());
    const int Q = static_cast<int>(channels.surface_transmit.size());
    if (coeffs.size() != channels.num_elements())
        throw std::invalid_argument("effective_channels: coefficient length mismatch");

    EffectiveChannels eff;
    eff.reflect.resize(K);
    for (int k = 0; k < K; ++k) {
        // Row of h^H Phi^H G, plus the direct link.
        const CVec scaled = (coeffs.reflect.cwiseProduct(channels.surface_reflect[k])).conjugate();
        eff.reflect[k] = channels.bs_surface.transpose() * scaled + channels.direct[k];
    }
    eff.transmit.resize(Q);
    for (int q = 0; q < Q; ++q) {
        const CVec scaled =
            (coeffs.transmit.cwiseProduct(channels.surface_transmit[q])).conjugate();
        eff.transmit[q] = channels.bs_surface.transpose() * scaled;
    }
    return eff;
}

SinrReport sinr_all(const EffectiveChannels& eff, const Beamformers& bf,
                    const RVec& noise_reflect, const RVec& noise_transmit,
                    const std::vector<double>& weight_reflect,
                    const std::vector<double>& weight_transmit) {
    const int K = static_cast<int>(eff.reflect.size());
    const int Q = static_cast<int>(eff.transmit.size());
    if ((K > 0 && noise_reflect.minCoeff() <= 0) || (Q > 0 && noise_transmit.minCoeff() <= 0))
        throw std::invalid_argument("sinr_all: noise power must be > 0");

    SinrReport rep;
    rep.gamma_reflect.resize(K);
    rep.num_reflect.resize(K);
    rep.den_reflect.resize(K);
    rep.gamma_transmit.resize(Q);
    rep.num_transmit.resize(Q);
    rep.den_transmit.resize(Q);

    // Transmission-region user q decodes after canceling everything weaker:
    // residual interference is the later transmit beams plus every reflect beam.
    for (int q = 0; q < Q; ++q) {
        const double sig = std::norm(row_apply(eff.transmit[q], bf.transmit[q]));
        double intf = 0.0;
        for (int j = q + 1; j < Q; ++j)
            intf += std::norm(row_apply(eff.transmit[q], bf.transmit[j]));
        for (int k = 0; k < K; ++k)
            intf += std::norm(row_apply(eff.transmit[q], bf.reflect[k]));
        rep.num_transmit(q) = sig;
        rep.den_transmit(q) = intf + noise_transmit(q);
        rep.gamma_transmit(q) = sig / rep.den_transmit(q);
    }
    // Reflection-region user k sees only the later reflect beams.
    for (int k = 0; k < K; ++k) {
        const double sig = std::norm(row_apply(eff.reflect[k], bf.reflect[k]));
        double intf = 0.0;
        for (int j = k + 1; j < K; ++j)
            intf += std::norm(row_apply(eff.reflect[k], bf.reflect[j]));
        rep.num_reflect(k) = sig;
        rep.den_reflect(k) = intf + noise_reflect(k);
        rep.gamma_reflect(k) = sig / rep.den_reflect(k);
    }

    double rate = 0.0;
    for (int k = 0; k < K; ++k) {
        const double w = weight_reflect.empty() ? 1.0 : weight_reflect.at(k);
        rate += w * std::log2(1.0 + rep.gamma_reflect(k));
    }
    for (int q = 0; q < Q; ++q) {
        const double w = weight_transmit.empty() ? 1.0 : weight_transmit.at(q);
        rate += w * std::log2(1.0 + rep.gamma_transmit(q));
    }
    rep.sum_rate = rate;
    return rep;
}

namespace {

std::string link_name(bool reflect_side, int idx) {
    std::ostringstream out;
    out << (reflect_side ? "R" : "T") << (idx + 1);
    return out.str();
}

}  // namespace

OrderingReport check_orderings(const ChannelSet& channels, const SurfaceCoeffs& coeffs,
                               const Beamformers& bf) {
    const EffectiveChannels eff = effective_channels(channels, coeffs);
    const int K = static_cast<int>(eff.reflect.size());
    const int Q = static_cast<int>(eff.transmit.size());

    OrderingReport rep;
    // Gain ordering: transmit users weakest-first, then reflect users.
    std::vector<double> gains;
    std::vector<std::string> names;
    for (int q = 0; q < Q; ++q) {
        gains.push_back(eff.transmit[q].squaredNorm());
        names.push_back(link_name(false, q));
    }
    for (int k = 0; k < K; ++k) {
        gains.push_back(eff.reflect[k].squaredNorm());
        names.push_back(link_name(true, k));
    }
    for (std::size_t i = 0; i + 1 < gains.size(); ++i) {
        if (gains[i] > gains[i + 1] * (1.0 + 1e-12)) {
            rep.gain_order_ok = false;
            if (rep.first_violation.empty())
                rep.first_violation = "gain order " + names[i] + " > " + names[i + 1];
            break;
        }
    }

    // Decode-order power chains at every receiver: the beam of the weakest
    // user must arrive strongest, in the global user order.
    auto beam = [&](int i) -> const CVec& {
        return i < Q ? bf.transmit[i] : bf.reflect[i - Q];
    };
    auto chain_at = [&](const CVec& row, const std::string& where) {
        for (int i = Q + K - 1; i > 0; --i) {
            const double later = std::norm(row_apply(row, beam(i)));
            const double earlier = std::norm(row_apply(row, beam(i - 1)));
            if (later > earlier * (1.0 + 1e-9) + 1e-18) {
                rep.chains_ok = false;
                if (rep.first_violation.empty()) {
                    const std::string a = i - 1 < Q ? link_name(false, i - 1) : link_name(true, i - 1 - Q);
                    const std::string b = i < Q ? link_name(false, i) : link_name(true, i - Q);
                    rep.first_violation = "chain at " + where + ": beam " + b + " > beam " + a;
                }
                return;
            }
        }
    };
    for (int q = 0; q < Q; ++q) chain_at(eff.transmit[q], link_name(false, q));
    for (int k = 0; k < K; ++k) chain_at(eff.reflect[k], link_name(true, k));
    return rep;
}

bool qos_feasible(const SinrReport& report, double gamma_min) {
    const double tol = 1e-6;
    for (int k = 0; k < report.gamma_reflect.size(); ++k)
        if (report.gamma_reflect(k) < gamma_min - tol) return false;
    for (int q = 0; q < report.gamma_transmit.size(); ++q)
        if (report.gamma_transmit(q) < gamma_min - tol) return false;
    return true;
}

}  // namespace fstar
