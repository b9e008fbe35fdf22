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

#include "fstar/surface.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fstar {

ElementLayout uniform_grid_layout(const Scenario& sc) {
    const int L = sc.num_elements;
    ElementLayout layout;
    layout.positions.resize(2, L);
    if (L == 0) return layout;

    const double pitch = sc.wavelength / 2.0;
    const int side = static_cast<int>(std::ceil(std::sqrt(double(L))));
    const double extent = pitch * double(side - 1);
    if (pitch + kSurfaceTol < sc.min_spacing || extent > sc.aperture_side + kSurfaceTol)
        throw std::invalid_argument("uniform_grid_layout: grid does not fit the region");

    int placed = 0;
    for (int row = 0; row < side && placed < L; ++row) {
        for (int col = 0; col < side && placed < L; ++col, ++placed) {
            layout.positions(0, placed) = (double(col) - double(side - 1) / 2.0) * pitch;
            layout.positions(1, placed) = (double(row) - double(side - 1) / 2.0) * pitch;
        }
    }
    return layout;
}

std::vector<Violation> validate_layout(const ElementLayout& layout, const Scenario& sc) {
    std::vector<Violation> out;
    const double half = sc.aperture_side / 2.0;
    for (int l = 0; l < layout.size(); ++l) {
        const Vec2 p = layout.at(l);
        const double over = std::max(std::abs(p.x()), std::abs(p.y())) - half;
        if (over > kSurfaceTol) out.push_back({"region", l, -1, over});
    }
    for (int a = 0; a < layout.size(); ++a) {
        for (int b = a + 1; b < layout.size(); ++b) {
            const double gap = sc.min_spacing - (layout.at(a) - layout.at(b)).norm();
            if (gap > kSurfaceTol) out.push_back({"spacing", a, b, gap});
        }
    }
    return out;
}

std::vector<Violation> validate_coeffs(const SurfaceCoeffs& coeffs) {
    std::vector<Violation> out;
    for (int l = 0; l < coeffs.size(); ++l) {
        const double t2 = std::norm(coeffs.transmit(l));
        const double r2 = std::norm(coeffs.reflect(l));
        if (t2 + r2 > 1.0 + kSurfaceTol) out.push_back({"cap", l, -1, t2 + r2 - 1.0});
        if (t2 > 1.0 + kSurfaceTol) out.push_back({"amplitude", l, -1, std::sqrt(t2) - 1.0});
        if (r2 > 1.0 + kSurfaceTol) out.push_back({"amplitude", l, -1, std::sqrt(r2) - 1.0});
    }
    return out;
}

std::pair<CMat, CMat> coeffs_to_diagonals(const SurfaceCoeffs& coeffs) {
    const int L = coeffs.size();
    CMat refl = CMat::Zero(L, L);
    CMat trans = CMat::Zero(L, L);
    refl.diagonal() = coeffs.reflect;
    trans.diagonal() = coeffs.transmit;
    return {refl, trans};
}

namespace {

std::vector<std::vector<double>> parse_csv_rows(const std::string& text, int fields) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        if (static_cast<int>(row.size()) != fields)
            throw std::invalid_argument("csv row has wrong field count");
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::string layout_to_csv(const ElementLayout& layout) {
    std::ostringstream out;
    out.precision(17);
    for (int l = 0; l < layout.size(); ++l)
        out << layout.positions(0, l) << "," << layout.positions(1, l) << "\n";
    return out.str();
}

ElementLayout layout_from_csv(const std::string& text) {
    const auto rows = parse_csv_rows(text, 2);
    ElementLayout layout;
    layout.positions.resize(2, static_cast<int>(rows.size()));
    for (std::size_t l = 0; l < rows.size(); ++l) {
        layout.positions(0, static_cast<int>(l)) = rows[l][0];
        layout.positions(1, static_cast<int>(l)) = rows[l][1];
    }
    return layout;
}

std::string coeffs_to_csv(const SurfaceCoeffs& coeffs) {
    std::ostringstream out;
    out.precision(17);
    for (int l = 0; l < coeffs.size(); ++l)
        out << coeffs.transmit(l).real() << "," << coeffs.transmit(l).imag() << ","
            << coeffs.reflect(l).real() << "," << coeffs.reflect(l).imag() << "\n";
    return out.str();
}

SurfaceCoeffs coeffs_from_csv(const std::string& text) {
    const auto rows = parse_csv_rows(text, 4);
    SurfaceCoeffs coeffs;
    coeffs.transmit.resize(static_cast<int>(rows.size()));
    coeffs.reflect.resize(static_cast<int>(rows.size()));
    for (std::size_t l = 0; l < rows.size(); ++l) {
        coeffs.transmit(static_cast<int>(l)) = {rows[l][0], rows[l][1]};
        coeffs.reflect(static_cast<int>(l)) = {rows[l][2], rows[l][3]};
    }
    return coeffs;
}

}  // namespace fstar
