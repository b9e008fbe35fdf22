#include <cmath>

#include "doctest.h"
#include "fstar/beamforming.hpp"
#include "test_helpers.hpp"

using namespace fstar;

namespace {

EffectiveChannels paper_eff(const Scenario& sc) {
    const ElementLayout layout = uniform_grid_layout(sc);
    const ChannelSet ch = assemble_channels(sc, layout, draw_nlos(sc));
    SurfaceCoeffs coeffs;
    coeffs.transmit = CVec::Constant(sc.num_elements, cplx(1.0 / std::sqrt(2.0), 0.0));
    coeffs.reflect = CVec::Constant(sc.num_elements, cplx(1.0 / std::sqrt(2.0), 0.0));
    return effective_channels(ch, coeffs);
}

}  // namespace

TEST_CASE("problem census") {
    SUBCASE("single user: one block, power and qos rows only") {
        Scenario sc = test::small_scenario();
        sc.transmit_users.clear();
        sc.noise_transmit = RVec(0);
        EffectiveChannels eff;
        std::mt19937_64 eng(1);
        eff.reflect = {1e-5 * test::random_cvec(sc.num_antennas, eng)};
        const CovariancePool pool = pool_from_beams(mrt_beamformers(eff, sc));
        const ConicProblem prob = build_beamforming_problem(eff, pool, sc);
        CHECK(prob.psds.size() == 1);
        CHECK(prob.psds[0].dim == 2 * sc.num_antennas);
        int power_rows = 0, qos_rows = 0, sic_rows = 0;
        for (const auto& row : prob.lin) {
            if (row.family == "power") ++power_rows;
            if (row.family == "qos") ++qos_rows;
            if (row.family == "sic") ++sic_rows;
        }
        CHECK(power_rows == 1);
        CHECK(qos_rows == 1);
        CHECK(sic_rows == 0);
    }

    SUBCASE("full scenario: chain-link census") {
        Scenario sc = test::paper_scenario();
        const EffectiveChannels eff = paper_eff(sc);
        const CovariancePool pool = pool_from_beams(mrt_beamformers(eff, sc));
        const ConicProblem prob = build_beamforming_problem(eff, pool, sc);
        const int n_users = sc.num_users();
        CHECK(static_cast<int>(prob.psds.size()) == n_users);
        for (const auto& p : prob.psds) CHECK(p.dim == 2 * 8);  // embedded 8x8 Hermitian
        int qos_rows = 0, sic_rows = 0;
        for (const auto& row : prob.lin) {
            if (row.family == "qos") ++qos_rows;
            if (row.family == "sic") ++sic_rows;
        }
        CHECK(qos_rows == n_users);
        CHECK(sic_rows == n_users * (n_users - 1));
        CHECK(static_cast<int>(prob.socs.size()) == n_users);  // one epigraph each
    }

    SUBCASE("degenerate expansion point rejected") {
        Scenario sc = test::small_scenario();
        sc.transmit_users.clear();
        sc.noise_transmit = RVec(0);
        EffectiveChannels eff;
        eff.reflect = {CVec::Ones(sc.num_antennas)};
        CovariancePool zero;
        zero.reflect = {CMat::Zero(sc.num_antennas, sc.num_antennas)};
        CHECK_THROWS_AS(build_beamforming_problem(eff, zero, sc), std::invalid_argument);
    }
}

TEST_CASE("single-user solve matches matched filtering") {
    Scenario sc = test::small_scenario();
    sc.transmit_users.clear();
    sc.noise_transmit = RVec(0);
    sc.num_antennas = 4;
    sc.qos_floor = 0.0;
    std::mt19937_64 eng(5);
    EffectiveChannels eff;
    eff.reflect = {3e-5 * test::random_cvec(4, eng)};  // direct link only, no surface

    const BeamformingResult res = solve_beamforming(eff, sc);
    REQUIRE(res.feasible);
    const double closed_form =
        std::log2(1.0 + sc.p_max * eff.reflect[0].squaredNorm() / sc.noise_reflect(0));
    const double achieved = pool_objective(eff, res.pool, sc);
    CHECK(achieved == doctest::Approx(closed_form).epsilon(1e-3));
    // recovered beam is essentially the matched filter at full power
    CHECK(res.beams.reflect[0].squaredNorm() == doctest::Approx(sc.p_max).epsilon(1e-2));
    CHECK(res.dominance.maxCoeff() >= 0.99);
}

TEST_CASE("power headroom never hurts") {
    Scenario sc = test::small_scenario();
    const EffectiveChannels eff = paper_eff(sc);
    const BeamformingResult base = solve_beamforming(eff, sc);
    REQUIRE(base.feasible);
    Scenario doubled = sc;
    doubled.p_max *= 2.0;
    const BeamformingResult more = solve_beamforming(eff, doubled);
    REQUIRE(more.feasible);
    CHECK(pool_objective(eff, more.pool, doubled) >=
          pool_objective(eff, base.pool, sc) - 1e-6);
}

TEST_CASE("sca iterations are monotone and bounded") {
    Scenario sc = test::paper_scenario();
    const EffectiveChannels eff = paper_eff(sc);
    const BeamformingResult res = solve_beamforming(eff, sc);
    REQUIRE(res.feasible);
    CHECK(res.iterations <= 30);
    for (std::size_t i = 1; i < res.objective_history.size(); ++i)
        CHECK(res.objective_history[i] >= res.objective_history[i - 1] - 1e-8);
    // converged pool satisfies the headline constraints (against the floors
    // actually enforced; warm-up may have reduced unattainable ones)
    CHECK(res.pool.total_power() <= sc.p_max * (1.0 + 1e-6));
    const RatioTerms t =
        covariance_ratio_terms(eff, res.pool, sc.noise_reflect, sc.noise_transmit);
    const int Q = sc.num_transmit();
    for (int q = 0; q < Q; ++q)
        CHECK(t.num_transmit(q) / t.den_transmit(q) >= res.floors_used(q) * (1.0 - 1e-5));
    for (int k = 0; k < sc.num_reflect(); ++k)
        CHECK(t.num_reflect(k) / t.den_reflect(k) >= res.floors_used(Q + k) * (1.0 - 1e-5));
    // zero-phase initial coefficients leave the transmission side short of the
    // full floor at this stage, so the warm-up reduction must have engaged
    CHECK(res.floor_relaxed);
    for (int q = 0; q < Q; ++q) CHECK(res.floors_used(q) <= sc.qos_floor);
}

TEST_CASE("rank-one recovery") {
    std::mt19937_64 eng(21);

    SUBCASE("exact rank one") {
        const CVec w = test::random_cvec(5, eng);
        const auto [w2, dom] = rank_one_recover(w * w.adjoint());
        CHECK(dom == doctest::Approx(1.0));
        CHECK((w2 * w2.adjoint() - w * w.adjoint()).norm() < 1e-10 * w.squaredNorm());
        // canonical phase: largest entry real positive
        int arg = 0;
        for (int i = 1; i < 5; ++i)
            if (std::abs(w2(i)) > std::abs(w2(arg))) arg = i;
        CHECK(w2(arg).imag() == doctest::Approx(0.0));
        CHECK(w2(arg).real() > 0.0);
    }

    SUBCASE("identity splits evenly") {
        const auto [w, dom] = rank_one_recover(CMat::Identity(2, 2));
        CHECK(dom == doctest::Approx(0.5));
    }

    SUBCASE("zero matrix") {
        const auto [w, dom] = rank_one_recover(CMat::Zero(3, 3));
        CHECK(dom == 0.0);
        CHECK(w.norm() == 0.0);
    }

    SUBCASE("perturbed rank one recovers to the dominant dyad") {
        const CVec w = test::random_cvec(6, eng);
        const CMat W = w * w.adjoint() + 1e-8 * CMat::Identity(6, 6);
        const auto [w2, dom] = rank_one_recover(W);
        CHECK((w2 * w2.adjoint() - W).norm() <= 1e-3 * W.norm());
        CHECK(dom > 0.99);
    }
}
