#include <cmath>

#include "doctest.h"
#include "fstar/channel.hpp"
#include "fstar/surface.hpp"
#include "test_helpers.hpp"

using namespace fstar;

TEST_CASE("path difference") {
    const double lam = 0.03;
    CHECK(path_difference({0.0, 0.0}, 1.234, -0.7) == 0.0);
    CHECK(path_difference({lam / 2, 0.0}, pi / 2, 0.0) == doctest::Approx(lam / 2));
    CHECK(path_difference({0.0, lam / 2}, 2.1, pi / 6) == doctest::Approx(lam / 4));
}

TEST_CASE("surface steering") {
    Scenario sc = test::paper_scenario();
    ElementLayout single;
    single.positions = RMat::Zero(2, 1);
    const CVec a1 = surface_steering(single, 0.3, -0.2, sc.wavelength);
    CHECK(a1(0).real() == doctest::Approx(1.0));
    CHECK(a1(0).imag() == doctest::Approx(0.0));

    ElementLayout pair;
    pair.positions.resize(2, 2);
    pair.positions << 0.0, sc.wavelength / 2, 0.0, 0.0;
    const CVec a2 = surface_steering(pair, pi / 2, 0.0, sc.wavelength);
    CHECK(a2(0).real() == doctest::Approx(1.0));
    CHECK(a2(1).real() == doctest::Approx(-1.0));
    CHECK(std::abs(a2(1).imag()) < 1e-12);

    const ElementLayout grid = uniform_grid_layout(sc);
    const CVec a = surface_steering(grid, 1.1, 0.4, sc.wavelength);
    for (int l = 0; l < a.size(); ++l) CHECK(std::abs(std::abs(a(l)) - 1.0) < 1e-12);
}

TEST_CASE("ula steering") {
    const CVec a1 = ula_steering(1, 0.7);
    CHECK(a1(0) == cplx(1.0, 0.0));
    const CVec a0 = ula_steering(5, 0.0);
    for (int m = 0; m < 5; ++m) CHECK(a0(m) == cplx(1.0, 0.0));
    const CVec a2 = ula_steering(2, pi / 2);
    CHECK(a2(1).real() == doctest::Approx(-1.0));
}

TEST_CASE("path loss") {
    CHECK(path_loss(20.0, 0.03) / path_loss(40.0, 0.03) == doctest::Approx(4.0));
    CHECK(path_loss(0.03 / (4 * pi), 0.03) == doctest::Approx(1.0));
    // direct evaluation of the free-space law
    const double expected = std::pow(0.03 / (4 * pi * 70.0), 2);
    CHECK(path_loss(70.0, 0.03) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(path_loss(70.0, 0.03) == doctest::Approx(1.163e-9).epsilon(1e-3));
    CHECK_THROWS_AS(path_loss(0.0, 0.03), std::invalid_argument);
    CHECK_THROWS_AS(path_loss(-1.0, 0.03), std::invalid_argument);
}

TEST_CASE("channel assembly shapes and limits") {
    Scenario sc = test::paper_scenario();
    const ElementLayout layout = uniform_grid_layout(sc);
    const NlosDraws nlos = draw_nlos(sc);

    SUBCASE("shapes") {
        const ChannelSet ch = assemble_channels(sc, layout, nlos);
        CHECK(ch.bs_surface.rows() == sc.num_elements);
        CHECK(ch.bs_surface.cols() == sc.num_antennas);
        CHECK(static_cast<int>(ch.surface_reflect.size()) == sc.num_reflect());
        CHECK(ch.surface_reflect[0].size() == sc.num_elements);
        CHECK(ch.direct[0].size() == sc.num_antennas);
    }

    SUBCASE("strong-LoS limit is rank one") {
        Scenario hi = sc;
        hi.rician_kappa = 1e12;
        const ChannelSet ch = assemble_channels(hi, layout, nlos);
        const double resid = (ch.bs_surface - ch.bs_surface_los).norm();
        CHECK(resid <= 1e-5 * ch.bs_surface.norm());
        Eigen::JacobiSVD<CMat> svd(ch.bs_surface);
        CHECK(svd.singularValues()(1) <= 1e-6 * svd.singularValues()(0));
    }

    SUBCASE("pure-scatter limit") {
        Scenario lo = sc;
        lo.rician_kappa = 0.0;
        const ChannelSet ch = assemble_channels(lo, layout, nlos);
        const CMat expected = std::sqrt(ch.loss_bs_surface) * nlos.bs_surface;
        CHECK((ch.bs_surface - expected).norm() == 0.0);
    }

    SUBCASE("determinism and stochastic-part invariance") {
        const ChannelSet a = assemble_channels(sc, layout, nlos);
        const ChannelSet b = assemble_channels(sc, layout, draw_nlos(sc));
        CHECK((a.bs_surface - b.bs_surface).norm() == 0.0);
        CHECK((a.direct[0] - b.direct[0]).norm() == 0.0);

        ElementLayout moved = layout;
        moved.positions.col(0) += Vec2(0.001, -0.002);
        const ChannelSet c = assemble_channels(sc, moved, nlos);
        // moving elements changes only the geometric part
        const double los_w = std::sqrt(sc.rician_kappa / (sc.rician_kappa + 1.0));
        const CMat scatter_a = a.bs_surface - los_w * a.bs_surface_los;
        const CMat scatter_c = c.bs_surface - los_w * c.bs_surface_los;
        CHECK((scatter_a - scatter_c).norm() < 1e-18);
    }

    SUBCASE("surface-user links carry exact large-scale energy") {
        const ChannelSet ch = assemble_channels(sc, layout, nlos);
        for (int k = 0; k < sc.num_reflect(); ++k) {
            CHECK(ch.surface_reflect[k].squaredNorm() ==
                  doctest::Approx(ch.loss_reflect(k) * sc.num_elements).epsilon(1e-12));
        }
    }

    SUBCASE("layout size mismatch rejected") {
        ElementLayout bad;
        bad.positions = RMat::Zero(2, 3);
        CHECK_THROWS_AS(assemble_channels(sc, bad, nlos), std::invalid_argument);
    }
}
