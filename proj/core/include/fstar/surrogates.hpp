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

#ifndef FSTAR_SURROGATES_HPP
#define FSTAR_SURROGATES_HPP

#include "fstar/types.hpp"

namespace fstar {

/// Concave lower bound of ln(1 + num/den) expanded at (num_n, den_n):
///   ln(1 + r_n) + r_n/(1 + r_n) * (2 - num_n/num - den/den_n),  r_n = num_n/den_n.
/// Tight at the expansion point; all arguments must be > 0.
double log_ratio_lower_bound(double num, double den, double num_n, double den_n);

/// Curvature-capped quadratic bounds around p_n (lower: -delta/2, upper:
/// +delta/2 times the squared step). delta must be >= 0.
double quad_lower_taylor(double value_n, const Vec2& grad_n, double delta, const Vec2& p,
                         const Vec2& p_n);
double quad_upper_taylor(double value_n, const Vec2& grad_n, double delta, const Vec2& p,
                         const Vec2& p_n);

/// Affine minorant of the convex quadratic v^H M v at v_n (M Hermitian PSD):
///   2 Re{v_n^H M v} - v_n^H M v_n  <=  v^H M v, equal at v = v_n.
double linearize_affine_quadratic(const CVec& v_n, const CMat& M, const CVec& v);

/// Ratio refresh for the fractional constraints: num/den, den must be > 0.
double dinkelbach_update(double num, double den);

/// Per-user fractional-programming ratios and the stopping tolerance of the
/// inner ratio loop.
struct DinkelbachState {
    RVec ratio_reflect;   // K
    RVec ratio_transmit;  // Q
    int iterations = 0;
    double tolerance = 1e-1;
};

}  // namespace fstar

#endif
