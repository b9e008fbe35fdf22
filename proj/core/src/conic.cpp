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

#include "fstar/conic.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fstar {

RMat PsdBlock::assemble(const RVec& x) const {
    RMat S = constant;
    for (const auto& coeff : coeffs) {
        const double v = x(coeff.var);
        for (const auto& [r, c, val] : coeff.entries) S(r, c) += v * val;
    }
    return S;
}

int ConicProblem::barrier_degree() const {
    int nu = static_cast<int>(lin.size()) + 2 * static_cast<int>(socs.size());
    for (const auto& p : psds) nu += p.dim;
    return nu;
}

std::string ConicProblem::dump() const {
    std::ostringstream out;
    out.precision(17);
    out << "conic_problem vars " << num_vars << "\n";
    out << "min";
    for (int i = 0; i < cost.size(); ++i) out << " " << cost(i);
    out << " offset " << cost_offset << "\n";
    for (const auto& row : lin) {
        out << "lin [" << row.family << "]";
        for (int i = 0; i < row.a.size(); ++i) out << " " << row.a(i);
        out << " <= " << row.rhs << "\n";
    }
    for (const auto& s : socs) {
        out << "soc [" << s.family << "] rows " << s.A.rows() << "\n";
        for (int r = 0; r < s.A.rows(); ++r) {
            for (int c = 0; c < s.A.cols(); ++c) out << s.A(r, c) << " ";
            out << "| " << s.b(r) << "\n";
        }
        out << "rhs";
        for (int c = 0; c < s.c.size(); ++c) out << " " << s.c(c);
        out << " | " << s.d << "\n";
    }
    for (const auto& p : psds) {
        out << "psd [" << p.family << "] dim " << p.dim << "\n";
        out << "constant\n" << p.constant << "\n";
        for (const auto& coeff : p.coeffs) {
            out << "var " << coeff.var << ":";
            for (const auto& [r, c, v] : coeff.entries) out << " (" << r << "," << c << ")=" << v;
            out << "\n";
        }
    }
    return out.str();
}

void ConicProblem::dump_to_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open dump file: " + path);
    out << dump();
}

RMat complex_embed(const CMat& H) {
    const int n = static_cast<int>(H.rows());
    if (H.cols() != n) throw std::invalid_argument("complex_embed: matrix must be square");
    const double scale = std::max(1.0, H.norm());
    if ((H - H.adjoint()).norm() > 1e-9 * scale)
        throw std::invalid_argument("complex_embed: matrix is not Hermitian");
    RMat S(2 * n, 2 * n);
    S.topLeftCorner(n, n) = H.real();
    S.bottomRightCorner(n, n) = H.real();
    S.topRightCorner(n, n) = -H.imag();
    S.bottomLeftCorner(n, n) = H.imag();
    return S;
}

// ---------------------------------------------------------------------------
// ProblemBuilder
// ---------------------------------------------------------------------------

int ProblemBuilder::add_var(double cost_coeff) {
    cost_.push_back(cost_coeff);
    return n_++;
}

void ProblemBuilder::set_cost(int var, double coeff) { cost_.at(var) = coeff; }

void ProblemBuilder::add_cost(int var, double coeff) { cost_.at(var) += coeff; }

void ProblemBuilder::add_cost_offset(double c) { cost_offset_ += c; }

namespace {

RVec to_dense(const std::vector<std::pair<int, double>>& coeffs, int n) {
    RVec a = RVec::Zero(n);
    for (const auto& [var, coeff] : coeffs) a(var) += coeff;
    return a;
}

}  // namespace

void ProblemBuilder::add_lin_le(const std::vector<std::pair<int, double>>& coeffs, double rhs,
                                const std::string& family) {
    lin_.push_back({to_dense(coeffs, n_), rhs, family});
}

void ProblemBuilder::add_lin_ge(const std::vector<std::pair<int, double>>& coeffs, double rhs,
                                const std::string& family) {
    lin_.push_back({-to_dense(coeffs, n_), -rhs, family});
}

void ProblemBuilder::add_soc(const RMat& A, const RVec& b, const RVec& c, double d,
                             const std::string& family) {
    socs_.push_back({A, b, c, d, family});
}

void ProblemBuilder::add_hyperbolic(const std::vector<std::pair<int, double>>& aff1, double off1,
                                    const std::vector<std::pair<int, double>>& aff2, double off2,
                                    double k, const std::string& family) {
    if (k <= 0) throw std::invalid_argument("add_hyperbolic: product bound must be > 0");
    // aff1*aff2 >= k  <=>  || [2 sqrt(k); aff1 - aff2] || <= aff1 + aff2
    const RVec a1 = to_dense(aff1, n_);
    const RVec a2 = to_dense(aff2, n_);
    RMat A(2, n_);
    A.row(0).setZero();
    A.row(1) = (a1 - a2).transpose();
    RVec b(2);
    b << 2.0 * std::sqrt(k), off1 - off2;
    socs_.push_back({A, b, a1 + a2, off1 + off2, family});
}

void ProblemBuilder::add_quad_le_affine(const std::vector<int>& vars, const RMat& Q,
                                        const RVec& lin, double c0,
                                        const std::vector<std::pair<int, double>>& rhs_lin,
                                        double rhs_off, const std::string& family) {
    const int m = static_cast<int>(vars.size());
    if (Q.rows() != m || Q.cols() != m || lin.size() != m)
        throw std::invalid_argument("add_quad_le_affine: dimension mismatch");
    // Factor Q = R^T R by eigendecomposition with clipping of solver round-off.
    Eigen::SelfAdjointEigenSolver<RMat> eig(0.5 * (Q + Q.transpose()));
    const RVec evals = eig.eigenvalues();
    if (evals.size() > 0 && evals.minCoeff() < -1e-9 * std::max(1.0, evals.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("add_quad_le_affine: quadratic part is not PSD");
    int rank = 0;
    for (int i = 0; i < m; ++i)
        if (evals(i) > 1e-14 * std::max(1.0, evals.cwiseAbs().maxCoeff())) ++rank;
    RMat R(rank, m);
    int r = 0;
    for (int i = 0; i < m; ++i) {
        if (evals(i) > 1e-14 * std::max(1.0, evals.cwiseAbs().maxCoeff()))
            R.row(r++) = std::sqrt(evals(i)) * eig.eigenvectors().col(i).transpose();
    }

    // y^T Q y + lin^T y + c0 <= aff  <=>  ||[2 R y; aff - lin^T y - c0 - 1]|| <= aff - lin^T y - c0 + 1
    const RVec rhs_dense = to_dense(rhs_lin, n_);
    RVec aff_lin = rhs_dense;  // full-length coefficients of (aff - lin^T y - c0)
    for (int i = 0; i < m; ++i) aff_lin(vars[i]) -= lin(i);
    const double aff_off = rhs_off - c0;

    RMat A(rank + 1, n_);
    A.setZero();
    for (int rr = 0; rr < rank; ++rr)
        for (int i = 0; i < m; ++i) A(rr, vars[i]) = 2.0 * R(rr, i);
    A.row(rank) = aff_lin.transpose();
    RVec b = RVec::Zero(rank + 1);
    b(rank) = aff_off - 1.0;
    socs_.push_back({A, b, aff_lin, aff_off + 1.0, family});
}

int ProblemBuilder::add_hermitian_psd(int dim, const std::string& family) {
    const int base = n_;
    for (int i = 0; i < dim * dim; ++i) add_var(0.0);

    PsdBlock block;
    block.dim = 2 * dim;
    block.constant = RMat::Zero(2 * dim, 2 * dim);
    block.family = family;
    int var = base;
    for (int i = 0; i < dim; ++i, ++var)
        block.coeffs.push_back({var, {{i, i, 1.0}, {i + dim, i + dim, 1.0}}});
    for (int j = 0; j < dim; ++j) {
        for (int i = 0; i < j; ++i) {
            // Re W_ij
            block.coeffs.push_back({var++, {{i, j, 1.0},
                                            {j, i, 1.0},
                                            {i + dim, j + dim, 1.0},
                                            {j + dim, i + dim, 1.0}}});
            // Im W_ij (upper block carries -Im, lower block +Im)
            block.coeffs.push_back({var++, {{i, j + dim, -1.0},
                                            {j + dim, i, -1.0},
                                            {j, i + dim, 1.0},
                                            {i + dim, j, 1.0}}});
        }
    }
    psds_.push_back(std::move(block));
    return base;
}

std::vector<std::pair<int, double>> ProblemBuilder::herm_inner(int base, const CMat& A) const {
    const int dim = static_cast<int>(A.rows());
    std::vector<std::pair<int, double>> coeffs;
    coeffs.reserve(dim * dim);
    int var = base;
    // Re Tr(A W) = sum_i A_ii W_ii + sum_{i<j} 2[Re A_ji Re W_ij - Im A_ji Im W_ij]
    for (int i = 0; i < dim; ++i, ++var) coeffs.emplace_back(var, A(i, i).real());
    for (int j = 0; j < dim; ++j) {
        for (int i = 0; i < j; ++i) {
            coeffs.emplace_back(var++, 2.0 * A(j, i).real());
            coeffs.emplace_back(var++, -2.0 * A(j, i).imag());
        }
    }
    return coeffs;
}

CMat ProblemBuilder::extract_hermitian(const RVec& x, int base, int dim) const {
    CMat W(dim, dim);
    int var = base;
    for (int i = 0; i < dim; ++i, ++var) W(i, i) = x(var);
    for (int j = 0; j < dim; ++j) {
        for (int i = 0; i < j; ++i) {
            const double re = x(var++);
            const double im = x(var++);
            W(i, j) = {re, im};
            W(j, i) = {re, -im};
        }
    }
    return W;
}

ConicProblem ProblemBuilder::take() {
    ConicProblem p;
    p.num_vars = n_;
    p.cost = Eigen::Map<RVec>(cost_.data(), n_);
    p.cost_offset = cost_offset_;
    // Rows were built against a growing variable count; pad to final width.
    for (auto& row : lin_) {
        if (row.a.size() < n_) {
            RVec a = RVec::Zero(n_);
            a.head(row.a.size()) = row.a;
            row.a = std::move(a);
        }
    }
    for (auto& s : socs_) {
        if (s.A.cols() < n_) {
            RMat A = RMat::Zero(s.A.rows(), n_);
            A.leftCols(s.A.cols()) = s.A;
            s.A = std::move(A);
            RVec c = RVec::Zero(n_);
            c.head(s.c.size()) = s.c;
            s.c = std::move(c);
        }
    }
    p.lin = std::move(lin_);
    p.socs = std::move(socs_);
    p.psds = std::move(psds_);
    return p;
}

}  // namespace fstar
