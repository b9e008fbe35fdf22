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

#include "fstar/surrogates.hpp"

#include <cmath>
#include <stdexcept>

namespace fstar {

double log_ratio_lower_bound(double num, double den, double num_n, double den_n) {
    if (num <= 0 || den <= 0 || num_n <= 0 || den_n <= 0)
        throw std::invalid_argument("log_ratio_lower_bound: arguments must be > 0");
    const double r_n = num_n / den_n;
    return std::log1p(r_n) + r_n / (1.0 + r_n) * (2.0 - num_n / num - den / den_n);
}

double quad_lower_taylor(double value_n, const Vec2& grad_n, double delta, const Vec2& p,
                         const Vec2& p_n) {
    if (delta < 0) throw std::invalid_argument("quad_lower_taylor: curvature cap must be >= 0");
    const Vec2 step = p - p_n;
    return value_n + grad_n.dot(step) - 0.5 * delta * step.squaredNorm();
}

double quad_upper_taylor(double value_n, const Vec2& grad_n, double delta, const Vec2& p,
                         const Vec2& p_n) {
    if (delta < 0) throw std::invalid_argument("quad_upper_taylor: curvature cap must be >= 0");
    const Vec2 step = p - p_n;
    return value_n + grad_n.dot(step) + 0.5 * delta * step.squaredNorm();
}

double linearize_affine_quadratic(const CVec& v_n, const CMat& M, const CVec& v) {
    const double scale = std::max(1.0, M.norm());
    if ((M - M.adjoint()).norm() > 1e-9 * scale)
        throw std::invalid_argument("linearize_affine_quadratic: matrix must be Hermitian");
    Eigen::SelfAdjointEigenSolver<CMat> eig(M, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-9 * scale)
        throw std::invalid_argument("linearize_affine_quadratic: matrix must be PSD");
    const double cross = 2.0 * (v_n.adjoint() * M * v)(0).real();
    const double anchor = (v_n.adjoint() * M * v_n)(0).real();
    return cross - anchor;
}

double dinkelbach_update(double num, double den) {
    if (den <= 0) throw std::invalid_argument("dinkelbach_update: denominator must be > 0");
    return num / den;
}

}  // namespace fstar
