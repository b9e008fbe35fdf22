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

#ifndef FSTAR_SURFACE_HPP
#define FSTAR_SURFACE_HPP

#include <string>
#include <vector>

#include "fstar/scenario.hpp"
#include "fstar/types.hpp"

namespace fstar {

/// Movable-element positions, one (x, y) column per element, in meters.
/// The region is the centered square [-A/2, A/2]^2.
struct ElementLayout {
    RMat positions;  // 2 x L

    int size() const { return static_cast<int>(positions.cols()); }
    Vec2 at(int l) const { return positions.col(l); }
};

/// Energy-splitting surface coefficients: `transmit` holds the transmission
/// coefficients (amplitude*e^{j*phase} per element), `reflect` the reflection
/// coefficients. Per element |t|^2 + |r|^2 <= 1.
struct SurfaceCoeffs {
    CVec transmit;  // length L
    CVec reflect;   // length L

    int size() const { return static_cast<int>(transmit.size()); }
};

/// One violated surface invariant, with the identifying indices and how far
/// past the bound the offending quantity is.
struct Violation {
    std::string kind;  // "region" | "spacing" | "cap" | "amplitude"
    int index_a = -1;
    int index_b = -1;
    double margin = 0.0;  // positive amount by which the constraint is broken
};

// Constraint checks run with a small tolerance to absorb solver round-off.
inline constexpr double kSurfaceTol = 1e-9;

/// Centered square grid at half-wavelength pitch; row-major fill for
/// non-square counts. Throws std::invalid_argument when the grid cannot fit.
ElementLayout uniform_grid_layout(const Scenario& sc);

std::vector<Violation> validate_layout(const ElementLayout& layout, const Scenario& sc);
std::vector<Violation> validate_coeffs(const SurfaceCoeffs& coeffs);

/// Diagonal-matrix views (reflection first, transmission second).
std::pair<CMat, CMat> coeffs_to_diagonals(const SurfaceCoeffs& coeffs);

// CSV row serialization for experiment logs: "x,y" per element for layouts,
// "re_t,im_t,re_r,im_r" per element for coefficients.
std::string layout_to_csv(const ElementLayout& layout);
ElementLayout layout_from_csv(const std::string& text);
std::string coeffs_to_csv(const SurfaceCoeffs& coeffs);
SurfaceCoeffs coeffs_from_csv(const std::string& text);

}  // namespace fstar

#endif
