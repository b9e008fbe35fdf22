#include <cmath>

#include "doctest.h"
#include "fstar/surface.hpp"
#include "test_helpers.hpp"

using namespace fstar;

TEST_CASE("uniform grid") {
    Scenario sc = test::paper_scenario();

    SUBCASE("single element sits at the center") {
        sc.num_elements = 1;
        const ElementLayout l = uniform_grid_layout(sc);
        CHECK(l.at(0).norm() == 0.0);
    }

    SUBCASE("2x2 grid pitch") {
        sc.num_elements = 4;
        const ElementLayout l = uniform_grid_layout(sc);
        double nn = 1e9;
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) nn = std::min(nn, (l.at(a) - l.at(b)).norm());
        CHECK(nn == doctest::Approx(sc.wavelength / 2));
    }

    SUBCASE("5x5 grid satisfies spacing") {
        const ElementLayout l = uniform_grid_layout(sc);
        CHECK(l.size() == 25);
        CHECK(validate_layout(l, sc).empty());
    }

    SUBCASE("grids over a range of counts are always valid") {
        for (int L : {2, 3, 6, 7, 12, 16, 20, 36}) {
            sc.num_elements = L;
            sc.aperture_side = std::max(sc.aperture_side,
                                        sc.min_spacing * std::ceil(std::sqrt(double(L))));
            CHECK(validate_layout(uniform_grid_layout(sc), sc).empty());
        }
    }

    SUBCASE("infeasible geometry rejected") {
        sc.num_elements = 25;
        sc.aperture_side = sc.wavelength;  // 5x5 at half-wavelength cannot fit
        CHECK_THROWS_AS(uniform_grid_layout(sc), std::invalid_argument);
    }
}

TEST_CASE("layout validation") {
    Scenario sc = test::paper_scenario();

    SUBCASE("coincident pair flagged with full-margin") {
        ElementLayout l;
        l.positions = RMat::Zero(2, 2);
        const auto v = validate_layout(l, sc);
        REQUIRE(v.size() == 1);
        CHECK(v[0].kind == "spacing");
        CHECK(v[0].margin == doctest::Approx(sc.min_spacing));
    }

    SUBCASE("outside the region flagged") {
        ElementLayout l;
        l.positions.resize(2, 1);
        l.positions.col(0) = Vec2(0.51 * sc.aperture_side, 0.51 * sc.aperture_side);
        const auto v = validate_layout(l, sc);
        REQUIRE(v.size() == 1);
        CHECK(v[0].kind == "region");
    }
}

TEST_CASE("coefficient validation") {
    SUBCASE("balanced split is feasible with equality") {
        SurfaceCoeffs c;
        c.transmit = CVec::Constant(4, cplx(1.0 / std::sqrt(2.0), 0.0));
        c.reflect = CVec::Constant(4, cplx(1.0 / std::sqrt(2.0), 0.0));
        CHECK(validate_coeffs(c).empty());
    }

    SUBCASE("over-unit split flagged with margin") {
        SurfaceCoeffs c;
        c.transmit = CVec::Constant(3, cplx(0.8, 0.0));
        c.reflect = CVec::Constant(3, cplx(0.8, 0.0));
        const auto v = validate_coeffs(c);
        REQUIRE(v.size() == 3);
        for (const auto& viol : v) {
            CHECK(viol.kind == "cap");
            CHECK(viol.margin == doctest::Approx(0.28));
        }
    }

    SUBCASE("reflect-only corner case") {
        SurfaceCoeffs c;
        c.transmit = CVec::Zero(5);
        c.reflect = CVec::Constant(5, cplx(0.0, 1.0));
        CHECK(validate_coeffs(c).empty());
    }

    SUBCASE("common phase rotation preserves validity") {
        std::mt19937_64 eng(7);
        std::uniform_real_distribution<double> amp(0.0, 1.0);
        std::uniform_real_distribution<double> ph(0.0, 2 * pi);
        SurfaceCoeffs c;
        c.transmit.resize(6);
        c.reflect.resize(6);
        for (int l = 0; l < 6; ++l) {
            const double a = amp(eng);
            c.transmit(l) = std::polar(a * 0.9, ph(eng));
            c.reflect(l) = std::polar(std::sqrt(1.0 - 0.81 * a * a), ph(eng));
        }
        REQUIRE(validate_coeffs(c).empty());
        const cplx rot = std::polar(1.0, 1.234);
        c.transmit *= rot;
        c.reflect *= rot;
        CHECK(validate_coeffs(c).empty());
    }
}

TEST_CASE("diagonal views round trip") {
    SurfaceCoeffs c;
    c.transmit = CVec::Zero(1);
    c.reflect = CVec::Zero(1);
    c.reflect(0) = cplx(0.0, 1.0);
    const auto [refl, trans] = coeffs_to_diagonals(c);
    CHECK(refl(0, 0) == cplx(0.0, 1.0));
    CHECK(trans(0, 0) == cplx(0.0, 0.0));

    std::mt19937_64 eng(3);
    SurfaceCoeffs r;
    r.transmit = 0.5 * test::random_cvec(8, eng);
    r.reflect = 0.5 * test::random_cvec(8, eng);
    const auto [R, T] = coeffs_to_diagonals(r);
    CHECK((CVec(R.diagonal()) - r.reflect).norm() == 0.0);
    CHECK((CVec(T.diagonal()) - r.transmit).norm() == 0.0);
    CHECK(R.norm() == doctest::Approx(r.reflect.norm()));  // off-diagonals all zero
}

TEST_CASE("csv round trips") {
    std::mt19937_64 eng(11);
    Scenario sc = test::paper_scenario();
    const ElementLayout l = uniform_grid_layout(sc);
    const ElementLayout l2 = layout_from_csv(layout_to_csv(l));
    CHECK((l.positions - l2.positions).norm() == 0.0);

    SurfaceCoeffs c;
    c.transmit = 0.3 * test::random_cvec(5, eng);
    c.reflect = 0.4 * test::random_cvec(5, eng);
    const SurfaceCoeffs c2 = coeffs_from_csv(coeffs_to_csv(c));
    CHECK((c.transmit - c2.transmit).norm() == 0.0);
    CHECK((c.reflect - c2.reflect).norm() == 0.0);
}
