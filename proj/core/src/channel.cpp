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

#include "fstar/channel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace fstar {

double path_difference(const Vec2& p, double phi, double psi) {
    return p.x() * std::sin(phi) * std::cos(psi) + p.y() * std::sin(psi);
}

CVec surface_steering(const ElementLayout& layout, double phi, double psi, double wavelength) {
    const int L = layout.size();
    CVec a(L);
    const double wave_num = 2.0 * pi / wavelength;
    for (int l = 0; l < L; ++l)
        a(l) = std::polar(1.0, wave_num * path_difference(layout.at(l), phi, psi));
    return a;
}

CVec ula_steering(int num_antennas, double phi) {
    CVec a(num_antennas);
    for (int m = 0; m < num_antennas; ++m)
        a(m) = std::polar(1.0, pi * double(m) * std::sin(phi));
    return a;
}

double path_loss(double dist, double wavelength) {
    if (dist <= 0.0) throw std::invalid_argument("path_loss: distance must be > 0");
    const double ratio = wavelength / (4.0 * pi * dist);
    return ratio * ratio;
}

namespace {

// Box-Muller over the raw 64-bit stream keeps draws identical across standard
// libraries (std::normal_distribution is implementation-defined).
class GaussianSource {
  public:
    explicit GaussianSource(std::uint64_t seed) : eng_(seed) {}

    cplx next_cplx() {
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        // Two N(0, 1/2) components give a unit-variance complex sample.
        const double scale = r / std::sqrt(2.0);
        return {scale * std::cos(2.0 * pi * u2), scale * std::sin(2.0 * pi * u2)};
    }

  private:
    double uniform() {
        // in (0, 1]: avoids log(0)
        return (double(eng_() >> 11) + 1.0) * 0x1.0p-53;
    }
    std::mt19937_64 eng_;
};

}  // namespace

NlosDraws draw_nlos(const Scenario& sc) {
    const int L = sc.num_elements;
    const int M = sc.num_antennas;
    const int K = sc.num_reflect();
    NlosDraws nlos;
    nlos.seed = sc.seed;
    nlos.bs_surface.resize(L, M);
    GaussianSource src(sc.seed);
    for (int l = 0; l < L; ++l)
        for (int m = 0; m < M; ++m) nlos.bs_surface(l, m) = src.next_cplx();
    nlos.direct.resize(K);
    for (int k = 0; k < K; ++k) {
        nlos.direct[k].resize(M);
        for (int m = 0; m < M; ++m) nlos.direct[k](m) = src.next_cplx();
    }
    return nlos;
}

ChannelSet assemble_channels(const Scenario& sc, const ElementLayout& layout,
                             const NlosDraws& nlos) {
    const int L = sc.num_elements;
    const int M = sc.num_antennas;
    const int K = sc.num_reflect();
    const int Q = sc.num_transmit();
    if (layout.size() != L) throw std::invalid_argument("assemble_channels: layout size mismatch");
    if (nlos.bs_surface.rows() != L || nlos.bs_surface.cols() != M ||
        static_cast<int>(nlos.direct.size()) != K)
        throw std::invalid_argument("assemble_channels: stochastic draw shape mismatch");

    const double los_w = std::sqrt(sc.rician_kappa / (sc.rician_kappa + 1.0));
    const double nlos_w = std::sqrt(1.0 / (sc.rician_kappa + 1.0));

    ChannelSet ch;
    ch.loss_bs_surface = sc.ref_gain * path_loss(sc.dist_bs_surface, sc.wavelength);
    const CVec arrive = surface_steering(layout, sc.surface_azimuth, sc.surface_elevation,
                                         sc.wavelength);
    const CVec depart = ula_steering(M, sc.bs_azimuth);
    // The large-scale factor scales LoS and scattered parts alike.
    ch.bs_surface_los = std::sqrt(ch.loss_bs_surface) * (arrive * depart.adjoint());
    ch.bs_surface = los_w * ch.bs_surface_los +
                    nlos_w * std::sqrt(ch.loss_bs_surface) * nlos.bs_surface;

    ch.loss_reflect.resize(K);
    ch.surface_reflect.resize(K);
    ch.loss_direct.resize(K);
    ch.direct.resize(K);
    for (int k = 0; k < K; ++k) {
        const auto& u = sc.reflect_users[k];
        ch.loss_reflect(k) = sc.ref_gain * path_loss(u.dist_surface, sc.wavelength);
        ch.surface_reflect[k] =
            std::sqrt(ch.loss_reflect(k)) *
            surface_steering(layout, u.azimuth, u.elevation, sc.wavelength);
        ch.loss_direct(k) = sc.ref_gain * path_loss(u.dist_bs, sc.wavelength);
        const CVec direct_los = std::sqrt(ch.loss_direct(k)) *
                                ula_steering(M, u.azimuth_bs).conjugate();
        ch.direct[k] = los_w * direct_los +
                       nlos_w * std::sqrt(ch.loss_direct(k)) * nlos.direct[k];
    }

    ch.loss_transmit.resize(Q);
    ch.surface_transmit.resize(Q);
    for (int q = 0; q < Q; ++q) {
        const auto& u = sc.transmit_users[q];
        ch.loss_transmit(q) = sc.ref_gain * path_loss(u.dist_surface, sc.wavelength);
        ch.surface_transmit[q] =
            std::sqrt(ch.loss_transmit(q)) *
            surface_steering(layout, u.azimuth, u.elevation, sc.wavelength);
    }
    return ch;
}

}  // namespace fstar
