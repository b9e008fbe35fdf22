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

#ifndef FSTAR_CHANNEL_HPP
#define FSTAR_CHANNEL_HPP

#include <vector>

#include "fstar/scenario.hpp"
#include "fstar/surface.hpp"
#include "fstar/types.hpp"

namespace fstar {

/// Frozen small-scale fading draws, regenerated only when the seed changes.
/// Entries are zero-mean unit-variance circularly-symmetric Gaussian,
/// independent of the element layout. Consumption order is fixed: the
/// BS-surface matrix first (row-major), then each direct-link row in user
/// order, so realizations are reproducible at the sequence level.
struct NlosDraws {
    CMat bs_surface;               // L x M
    std::vector<CVec> direct;      // K entries, each length M
    std::uint64_t seed = 0;
};

/// Assembled channels for one (scenario, layout, seed) triple.
struct ChannelSet {
    CMat bs_surface;                 // L x M, Rician
    CMat bs_surface_los;             // L x M, LoS part alone (for diagnostics)
    std::vector<CVec> surface_reflect;   // K, length L, pure LoS
    std::vector<CVec> surface_transmit;  // Q, length L, pure LoS
    std::vector<CVec> direct;            // K, length M, Rician (row as column)

    // Linear large-scale gains (reference gain included).
    double loss_bs_surface = 1.0;
    RVec loss_reflect;    // K, surface->user
    RVec loss_transmit;   // Q, surface->user
    RVec loss_direct;     // K, BS->user

    int num_elements() const { return static_cast<int>(bs_surface.rows()); }
    int num_antennas() const { return static_cast<int>(bs_surface.cols()); }
};

/// Per-element propagation path difference against the region origin for a
/// wave from azimuth/elevation (phi, psi): p_x sin(phi)cos(psi) + p_y sin(psi).
double path_difference(const Vec2& p, double phi, double psi);

/// Surface steering vector: entry l = exp(j 2pi/lambda * path_difference).
CVec surface_steering(const ElementLayout& layout, double phi, double psi, double wavelength);

/// Half-wavelength ULA steering: entry m = exp(j pi m sin(phi)).
CVec ula_steering(int num_antennas, double phi);

/// Free-space large-scale gain (lambda / 4 pi d)^2. Throws on d <= 0.
double path_loss(double dist, double wavelength);

/// Draw the frozen small-scale fading for one seed.
NlosDraws draw_nlos(const Scenario& sc);

/// Synthesize all channels for the given layout; LoS factors depend on the
/// positions, the stochastic draws are reused verbatim.
ChannelSet assemble_channels(const Scenario& sc, const ElementLayout& layout,
                             const NlosDraws& nlos);

}  // namespace fstar

#endif
