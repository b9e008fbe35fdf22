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

#ifndef FSTAR_SCENARIO_HPP
#define FSTAR_SCENARIO_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fstar/types.hpp"

namespace fstar {

/// Geometry of one served user as seen from the surface (and, for users in
/// the reflection region, from the base station directly).
struct UserGeom {
    double azimuth = 0.0;        // rad, surface -> user
    double elevation = 0.0;      // rad, surface -> user
    double dist_surface = 1.0;   // m
    // Reflection-region users also have a direct BS link.
    double dist_bs = 0.0;        // m, 0 when there is no direct link
    double azimuth_bs = 0.0;     // rad, BS array broadside -> user
};

/// All static simulation parameters. Immutable after construction; users are
/// indexed weakest-to-strongest so that the assumed channel-gain ordering
/// (transmit side first, then reflection side) holds by construction.
struct Scenario {
    int num_antennas = 1;        // M, BS uniform linear array
    int num_elements = 1;        // L, movable surface elements
    double wavelength = 0.03;    // m
    double rician_kappa = 1.0;   // linear LoS/NLoS power ratio
    double aperture_side = 0.0;  // m, side of the square element region
    double min_spacing = 0.0;    // m, minimum pairwise element distance
    double p_max = 0.01;         // W, BS power budget
    double qos_floor = 1.0;      // linear SINR floor per user
    double ref_gain = 1.0;       // linear aggregate Tx/Rx gain applied per link

    double bs_azimuth = 0.0;          // rad, BS array -> surface
    double surface_azimuth = 0.0;     // rad, arrival azimuth at surface
    double surface_elevation = 0.0;   // rad, arrival elevation at surface
    double dist_bs_surface = 1.0;     // m

    std::vector<UserGeom> reflect_users;   // K entries
    std::vector<UserGeom> transmit_users;  // Q entries
    RVec noise_reflect;                    // W, per reflection user
    RVec noise_transmit;                   // W, per transmission user
    std::vector<double> weight_reflect;    // per-user rate weights, default 1
    std::vector<double> weight_transmit;

    std::uint64_t seed = 1;

    int num_reflect() const { return static_cast<int>(reflect_users.size()); }
    int num_transmit() const { return static_cast<int>(transmit_users.size()); }
    int num_users() const { return num_reflect() + num_transmit(); }

    double weight_r(int k) const {
        return weight_reflect.empty() ? 1.0 : weight_reflect.at(k);
    }
    double weight_t(int q) const {
        return weight_transmit.empty() ? 1.0 : weight_transmit.at(q);
    }

    /// Throws std::invalid_argument on any broken invariant.
    void validate() const;
};

inline void Scenario::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("scenario: " + what); };
    if (num_antennas < 1) fail("antenna count must be >= 1");
    if (num_elements < 0) fail("element count must be >= 0");
    if (num_elements == 0 && !transmit_users.empty())
        fail("transmission users are unreachable without surface elements");
    if (reflect_users.empty() && transmit_users.empty()) fail("no users");
    if (wavelength <= 0) fail("wavelength must be > 0");
    if (rician_kappa < 0) fail("rician factor must be >= 0");
    if (p_max <= 0) fail("power budget must be > 0");
    if (ref_gain <= 0) fail("reference gain must be > 0");
    if (dist_bs_surface <= 0) fail("BS-surface distance must be > 0");
    if (num_elements > 0) {
        if (min_spacing <= 0) fail("minimum spacing must be > 0");
        const int side = static_cast<int>(std::ceil(std::sqrt(double(num_elements))));
        if (aperture_side < min_spacing * double(side - 1) - 1e-12)
            fail("aperture too small for an initial uniform grid at the minimum spacing");
    }
    for (const auto& u : reflect_users) {
        if (u.dist_surface <= 0 || u.dist_bs <= 0) fail("reflect-user distances must be > 0");
    }
    for (const auto& u : transmit_users) {
        if (u.dist_surface <= 0) fail("transmit-user distances must be > 0");
    }
    if (noise_reflect.size() != num_reflect() || noise_transmit.size() != num_transmit())
        fail("noise vectors must match user counts");
    if ((noise_reflect.size() > 0 && noise_reflect.minCoeff() <= 0) ||
        (noise_transmit.size() > 0 && noise_transmit.minCoeff() <= 0))
        fail("noise powers must be > 0");
    if (!weight_reflect.empty() && static_cast<int>(weight_reflect.size()) != num_reflect())
        fail("reflect weights must match user count");
    if (!weight_transmit.empty() && static_cast<int>(weight_transmit.size()) != num_transmit())
        fail("transmit weights must match user count");
}

}  // namespace fstar

#endif
