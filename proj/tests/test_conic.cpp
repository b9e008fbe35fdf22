#include <cmath>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "fstar/conic.hpp"
#include "test_helpers.hpp"

using namespace fstar;

TEST_CASE("complex embedding") {
    SUBCASE("identity") {
        const RMat S = complex_embed(CMat::Identity(2, 2));
        CHECK((S - RMat::Identity(4, 4)).norm() == 0.0);
    }

    SUBCASE("pauli-like matrix has duplicated unit eigenvalues") {
        CMat H(2, 2);
        H << cplx(0, 0), cplx(0, -1), cplx(0, 1), cplx(0, 0);
        const RMat S = complex_embed(H);
        Eigen::SelfAdjointEigenSolver<RMat> eig(S);
        const RVec v = eig.eigenvalues();
        CHECK(v(0) == doctest::Approx(-1.0));
        CHECK(v(1) == doctest::Approx(-1.0));
        CHECK(v(2) == doctest::Approx(1.0));
        CHECK(v(3) == doctest::Approx(1.0));
    }

    SUBCASE("trace doubles") {
        std::mt19937_64 eng(2);
        for (int t = 0; t < 10; ++t) {
            const CMat H = test::random_hermitian(5, eng);
            CHECK(complex_embed(H).trace() == doctest::Approx(2.0 * H.trace().real()));
        }
    }

    SUBCASE("psd-ness preserved both directions") {
        std::mt19937_64 eng(3);
        const CMat P = test::random_psd(4, eng);
        Eigen::SelfAdjointEigenSolver<RMat> eig(complex_embed(P));
        CHECK(eig.eigenvalues().minCoeff() >= -1e-12 * eig.eigenvalues().maxCoeff());
        const CMat H = test::random_hermitian(4, eng) - 3.0 * CMat::Identity(4, 4);
        Eigen::SelfAdjointEigenSolver<CMat> ec(H);
        Eigen::SelfAdjointEigenSolver<RMat> er(complex_embed(H));
        CHECK(er.eigenvalues().minCoeff() == doctest::Approx(ec.eigenvalues().minCoeff()));
    }

    SUBCASE("non-hermitian rejected") {
        CMat H(2, 2);
        H << cplx(1, 0), cplx(1, 0), cplx(0, 0), cplx(1, 0);
        CHECK_THROWS_AS(complex_embed(H), std::invalid_argument);
    }
}

TEST_CASE("linear programs") {
    SUBCASE("minimize x subject to x >= 3") {
        ProblemBuilder pb;
        const int x = pb.add_var(1.0);
        pb.add_lin_ge({{x, 1.0}}, 3.0, "bound");
        pb.add_lin_le({{x, 1.0}}, 100.0, "cap");
        const ConicSolution sol = solve_conic(pb.take());
        REQUIRE(sol.status == SolveStatus::Optimal);
        CHECK(sol.x(x) == doctest::Approx(3.0).epsilon(1e-6));
    }

    SUBCASE("infeasible box detected") {
        ProblemBuilder pb;
        const int x = pb.add_var(1.0);
        pb.add_lin_ge({{x, 1.0}}, 3.0, "lower");
        pb.add_lin_le({{x, 1.0}}, 2.0, "upper");
        const ConicSolution sol = solve_conic(pb.take());
        CHECK(sol.status == SolveStatus::Infeasible);
        CHECK_FALSE(sol.blocking_family.empty());
    }
}

TEST_CASE("second-order cone programs") {
    SUBCASE("distance to a shifted point") {
        // minimize t s.t. ||x - (3,4)|| <= t, so t* = 0 at x = (3,4); pin x
        // away with x_1 <= 1 --> t* = sqrt(4 + 16) ... use x1<=1, x2<=2.
        ProblemBuilder pb;
        const int x1 = pb.add_var();
        const int x2 = pb.add_var();
        const int t = pb.add_var(1.0);
        RMat A = RMat::Zero(2, 3);
        A(0, x1) = 1.0;
        A(1, x2) = 1.0;
        RVec b(2);
        b << -3.0, -4.0;
        RVec c = RVec::Zero(3);
        c(t) = 1.0;
        pb.add_soc(A, b, c, 0.0, "dist");
        pb.add_lin_le({{x1, 1.0}}, 1.0, "boxx");
        pb.add_lin_le({{x2, 1.0}}, 2.0, "boxy");
        const ConicSolution sol = solve_conic(pb.take());
        REQUIRE(sol.status == SolveStatus::Optimal);
        CHECK(sol.objective == doctest::Approx(std::sqrt(4.0 + 4.0)).epsilon(1e-6));
    }

    SUBCASE("hyperbolic epigraph t*x >= 4 with x <= 2") {
        ProblemBuilder pb;
        const int x = pb.add_var();
        const int t = pb.add_var(1.0);
        pb.add_hyperbolic({{t, 1.0}}, 0.0, {{x, 1.0}}, 0.0, 4.0, "hyp");
        pb.add_lin_le({{x, 1.0}}, 2.0, "cap");
        const ConicSolution sol = solve_conic(pb.take());
        REQUIRE(sol.status == SolveStatus::Optimal);
        CHECK(sol.objective == doctest::Approx(2.0).epsilon(1e-6));
    }

    SUBCASE("convex quadratic below affine") {
        // minimize y s.t. x^T x + 1 <= y, x1 >= 2 --> y* = 5
        ProblemBuilder pb;
        const int x1 = pb.add_var();
        const int x2 = pb.add_var();
        const int y = pb.add_var(1.0);
        pb.add_quad_le_affine({x1, x2}, RMat::Identity(2, 2), RVec::Zero(2), 1.0,
                              {{y, 1.0}}, 0.0, "quad");
        pb.add_lin_ge({{x1, 1.0}}, 2.0, "pin");
        const ConicSolution sol = solve_conic(pb.take());
        REQUIRE(sol.status == SolveStatus::Optimal);
        CHECK(sol.objective == doctest::Approx(5.0).epsilon(1e-6));
    }
}

TEST_CASE("semidefinite programs") {
    SUBCASE("trace minimization over X >= I") {
        ProblemBuilder pb;
        const int base = pb.add_hermitian_psd(2, "psd");
        // X - I  >= 0: shift the constant block
        ConicProblem prob = pb.take();
        prob.psds[0].constant = -RMat::Identity(4, 4);
        prob.cost = RVec::Zero(prob.num_vars);
        prob.cost(base) = 1.0;      // X_00
        prob.cost(base + 1) = 1.0;  // X_11
        const ConicSolution sol = solve_conic(prob);
        REQUIRE(sol.status == SolveStatus::Optimal);
        CHECK(sol.objective == doctest::Approx(2.0).epsilon(1e-5));
    }

    SUBCASE("largest feasible shift matches the smallest eigenvalue") {
        // maximize t s.t. Q - t I >= 0  --> t* = lambda_min(Q)
        std::mt19937_64 eng(9);
        const CMat Q = test::random_psd(8, eng) + 0.5 * CMat::Identity(8, 8);
        ProblemBuilder pb;
        const int t = pb.add_var(-1.0);
        ConicProblem prob = pb.take();
        PsdBlock block;
        block.dim = 16;
        block.constant = complex_embed(Q);
        PsdBlock::Coeff shift;
        shift.var = t;
        for (int i = 0; i < 16; ++i) shift.entries.emplace_back(i, i, -1.0);
        block.coeffs.push_back(shift);
        block.family = "shift";
        prob.psds.push_back(block);
        prob.lin.push_back({RVec::Ones(1), 100.0, "cap"});
        const ConicSolution sol = solve_conic(prob);
        REQUIRE(sol.status == SolveStatus::Optimal);
        Eigen::SelfAdjointEigenSolver<CMat> eig(Q, Eigen::EigenvaluesOnly);
        CHECK(sol.x(t) == doctest::Approx(eig.eigenvalues().minCoeff()).epsilon(1e-5));
    }

    SUBCASE("embedded complex objective matches the complex-domain route") {
        // minimize Re Tr(C W) over W >= I (complex): optimum Tr(C) at W = I.
        std::mt19937_64 eng(13);
        const CMat C = test::random_psd(3, eng) + 0.1 * CMat::Identity(3, 3);
        ProblemBuilder pb;
        const int base = pb.add_hermitian_psd(3, "psd");
        for (const auto& [var, coeff] : pb.herm_inner(base, C)) pb.add_cost(var, coeff);
        ConicProblem prob = pb.take();
        prob.psds[0].constant = -RMat::Identity(6, 6);
        const ConicSolution sol = solve_conic(prob);
        REQUIRE(sol.status == SolveStatus::Optimal);
        CHECK(sol.objective == doctest::Approx(C.trace().real()).epsilon(1e-7));
        const CMat W = pb.extract_hermitian(sol.x, base, 3);
        CHECK((W - CMat::Identity(3, 3)).norm() < 1e-3);
    }
}

TEST_CASE("warm starts and dumps") {
    ProblemBuilder pb;
    const int x = pb.add_var(1.0);
    pb.add_lin_ge({{x, 1.0}}, 3.0, "bound");
    pb.add_lin_le({{x, 1.0}}, 10.0, "cap");
    ConicProblem prob = pb.take();
    prob.warm_start = RVec::Constant(1, 5.0);  // strictly feasible start
    const ConicSolution sol = solve_conic(prob);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.x(x) == doctest::Approx(3.0).epsilon(1e-6));

    const std::string path = "/tmp/fstar_conic_dump.txt";
    prob.dump_to_file(path);
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    CHECK(first.find("conic_problem") == 0);
    std::remove(path.c_str());
}
