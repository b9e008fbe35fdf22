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

#ifndef FSTAR_CONIC_HPP
#define FSTAR_CONIC_HPP

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "fstar/types.hpp"

namespace fstar {

/// One dense row a^T x <= rhs.
struct LinRow {
    RVec a;
    double rhs = 0.0;
    std::string family;
};

/// ||A x + b||_2 <= c^T x + d.
struct SocBlock {
    RMat A;
    RVec b;
    RVec c;
    double d = 0.0;
    std::string family;
};

/// S0 + sum_i x_{var_i} * S_i  must be positive semidefinite. The coefficient
/// matrices are sparse symmetric entry lists (full entry sets, not triangles).
struct PsdBlock {
    int dim = 0;
    RMat constant;  // dim x dim symmetric
    struct Coeff {
        int var = -1;
        std::vector<std::tuple<int, int, double>> entries;
    };
    std::vector<Coeff> coeffs;
    std::string family;

    RMat assemble(const RVec& x) const;
};

/// A linear objective over a real decision vector with linear, second-order
/// cone, and semidefinite constraint blocks. Minimization convention.
struct ConicProblem {
    int num_vars = 0;
    RVec cost;           // minimize cost^T x + cost_offset
    double cost_offset = 0.0;
    std::vector<LinRow> lin;
    std::vector<SocBlock> socs;
    std::vector<PsdBlock> psds;
    std::optional<RVec> warm_start;

    int barrier_degree() const;  // total self-concordance parameter

    /// Plain-text standard-form dump for offline debugging.
    std::string dump() const;
    void dump_to_file(const std::string& path) const;
};

enum class SolveStatus { Optimal, Infeasible, MaxIter };

struct ConicSolution {
    SolveStatus status = SolveStatus::MaxIter;
    RVec x;
    double objective = 0.0;       // cost^T x + cost_offset
    double gap = 0.0;             // relative duality-gap bound at exit
    double feas_residual = 0.0;   // max constraint violation (0 inside the cone)
    int newton_steps = 0;
    std::string blocking_family;  // most violated family when infeasible
};

struct SolverOptions {
    double tol_gap = 1e-7;        // relative duality-gap target
    double tol_feas = 1e-7;       // primal feasibility target
    double mu_factor = 12.0;      // barrier parameter growth per outer step
    int max_newton = 4000;
    double interior_margin = 1e-9;  // strict-interior slack required of phase I
};

/// Path-following barrier solve. Never throws on numerical failure; trouble
/// is reported through the returned status.
ConicSolution solve_conic(const ConicProblem& problem, const SolverOptions& opts = {});

/// Real symmetric embedding [[Re H, -Im H], [Im H, Re H]] of a Hermitian
/// matrix; positive semidefiniteness is preserved in both directions and every
/// eigenvalue is duplicated. Throws std::invalid_argument when H is not
/// Hermitian (tolerance 1e-9 relative).
RMat complex_embed(const CMat& H);

// ---------------------------------------------------------------------------
// Incremental construction helper shared by the subproblem builders.
// ---------------------------------------------------------------------------

class ProblemBuilder {
  public:
    int add_var(double cost_coeff = 0.0);
    int num_vars() const { return n_; }

    void set_cost(int var, double coeff);
    void add_cost(int var, double coeff);  // accumulates
    void add_cost_offset(double c);

    /// coeffs as (var, coefficient) pairs: sum coeff*x_var <= rhs.
    void add_lin_le(const std::vector<std::pair<int, double>>& coeffs, double rhs,
                    const std::string& family);
    /// sum coeff*x_var >= rhs.
    void add_lin_ge(const std::vector<std::pair<int, double>>& coeffs, double rhs,
                    const std::string& family);

    void add_soc(const RMat& A, const RVec& b, const RVec& c, double d,
                 const std::string& family);

    /// Affine product bound: aff1 * aff2 >= k with k > 0 and both factors
    /// positive (rotated second-order cone form).
    void add_hyperbolic(const std::vector<std::pair<int, double>>& aff1, double off1,
                        const std::vector<std::pair<int, double>>& aff2, double off2,
                        double k, const std::string& family);

    /// Convex quadratic below an affine form:
    ///   y^T Q y + lin^T y + c0 <= rhs_lin^T x + rhs_off,
    /// where y = x(vars) and Q is PSD (factorized internally with eigenvalue
    /// clipping at -1e-12).
    void add_quad_le_affine(const std::vector<int>& vars, const RMat& Q, const RVec& lin,
                            double c0, const std::vector<std::pair<int, double>>& rhs_lin,
                            double rhs_off, const std::string& family);

    /// Registers a Hermitian dim x dim matrix variable constrained PSD via its
    /// real embedding; returns the index of the first of dim^2 real variables.
    /// Layout: [diagonal (dim)], then for each i<j column-major: (Re, Im).
    int add_hermitian_psd(int dim, const std::string& family);

    /// Objective/constraint coefficients realizing Re Tr(A * W) for a
    /// Hermitian parameter block starting at `base` (as laid out above).
    std::vector<std::pair<int, double>> herm_inner(int base, const CMat& A) const;

    /// Reconstructs the Hermitian matrix held in a block from a solution.
    CMat extract_hermitian(const RVec& x, int base, int dim) const;

    ConicProblem take();

  private:
    int n_ = 0;
    std::vector<double> cost_;
    double cost_offset_ = 0.0;
    std::vector<LinRow> lin_;
    std::vector<SocBlock> socs_;
    std::vector<PsdBlock> psds_;
};

}  // namespace fstar

#endif
