#include <catch2/catch_amalgamated.hpp>

#include <fcfem/geometry.hpp>
#include <fcfem/mesh.hpp>

#include <cmath>

using namespace fcfem;

TEST_CASE("vector algebra", "[geometry]") {
    const Vec<2> a{{1.0, 2.0}}, b{{3.0, -1.0}};
    REQUIRE(dot(a, b) == 1.0);
    REQUIRE(norm(Vec<2>{{3.0, 4.0}}) == 5.0);
    REQUIRE(distance(a, b) == std::sqrt(4.0 + 9.0));
    const Vec<3> e0{{1, 0, 0}}, e1{{0, 1, 0}};
    const Vec<3> c = cross(e0, e1);
    REQUIRE(c[0] == 0.0);
    REQUIRE(c[1] == 0.0);
    REQUIRE(c[2] == 1.0);
}

TEST_CASE("matrix inverse and determinant", "[geometry]") {
    Mat<2> m2;
    m2.a = {{{2, 1}, {1, 3}}};
    REQUIRE(m2.det() == 5.0);
    const Mat<2> inv2 = m2.inverse();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double s = 0;
            for (int k = 0; k < 2; ++k) s += m2.a[i][k] * inv2.a[k][j];
            REQUIRE(std::abs(s - (i == j ? 1.0 : 0.0)) < 1e-14);
        }

    Mat<3> m3;
    m3.a = {{{2, 1, 0}, {1, 3, 1}, {0, 1, 4}}};
    const Mat<3> inv3 = m3.inverse();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0;
            for (int k = 0; k < 3; ++k) s += m3.a[i][k] * inv3.a[k][j];
            REQUIRE(std::abs(s - (i == j ? 1.0 : 0.0)) < 1e-14);
        }
}

TEST_CASE("binomial and factorial", "[geometry]") {
    REQUIRE(binomial(6, 3) == 20);
    REQUIRE(binomial(10, 0) == 1);
    REQUIRE(binomial(4, 2) == 6);
    REQUIRE(factorial(5) == 120.0);
    REQUIRE(factorial(0) == 1.0);
}

TEST_CASE("reference simplex volumes", "[geometry]") {
    const std::array<Vec<2>, 3> tri = {{{{0, 0}}, {{1, 0}}, {{0, 1}}}};
    REQUIRE(simplex_signed_volume<2>(tri) == 0.5);
    const std::array<Vec<2>, 3> flipped = {{{{0, 0}}, {{0, 1}}, {{1, 0}}}};
    REQUIRE(simplex_signed_volume<2>(flipped) == -0.5);

    const std::array<Vec<3>, 4> tet = {{{{0, 0, 0}}, {{1, 0, 0}}, {{0, 1, 0}}, {{0, 0, 1}}}};
    REQUIRE(std::abs(simplex_signed_volume<3>(tet) - 1.0 / 6.0) < 1e-15);
}

TEST_CASE("facet measures", "[geometry]") {
    const std::array<Vec<2>, 2> edge = {{{{0, 0}}, {{3, 4}}}};
    REQUIRE(facet_measure<2>(edge) == 5.0);
    const std::array<Vec<3>, 3> tri = {{{{0, 0, 0}}, {{1, 0, 0}}, {{0, 1, 0}}}};
    REQUIRE(std::abs(facet_measure<3>(tri) - 0.5) < 1e-15);
}

TEST_CASE("cell geometry on structured meshes", "[geometry]") {
    const auto mesh = build_structured<2>(3);  // n = 4, 32 congruent cells
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const auto geo = cell_geometry(mesh, c);
        REQUIRE(std::abs(geo.volume - 1.0 / 32.0) < 1e-15);

        // barycentric gradients: grad(lambda_a) . (x_b - x_0) = delta_ab - delta_a0
        for (int a = 0; a <= 2; ++a)
            for (int b = 1; b <= 2; ++b) {
                const double expect = (a == b ? 1.0 : 0.0) - (a == 0 ? 1.0 : 0.0);
                REQUIRE(std::abs(dot(geo.bary_grad[a], geo.x[b] - geo.x[0]) - expect) < 1e-12);
            }

        // closed surface: sum of measure-weighted outward normals vanishes
        Vec<2> closure{};
        for (int f = 0; f <= 2; ++f) closure += geo.facets[f].measure * geo.facets[f].normal;
        REQUIRE(norm(closure) < 1e-14);

        // outwardness: normal points away from the opposite vertex
        for (int f = 0; f <= 2; ++f) {
            Vec<2> fc{};
            for (int v : facet_local_vertices<2>(f)) fc += geo.x[v];
            fc *= 0.5;
            REQUIRE(dot(geo.facets[f].normal, fc - geo.x[geo.facets[f].opposite]) > 0);
            REQUIRE(std::abs(norm(geo.facets[f].normal) - 1.0) < 1e-14);
        }
    }

    const auto m3 = build_structured<3>(2);
    for (int c = 0; c < m3.num_cells(); ++c) {
        const auto geo = cell_geometry(m3, c);
        REQUIRE(geo.volume > 0);
        Vec<3> closure{};
        for (int f = 0; f <= 3; ++f) closure += geo.facets[f].measure * geo.facets[f].normal;
        REQUIRE(norm(closure) < 1e-13);
        for (int a = 0; a <= 3; ++a)
            for (int b = 1; b <= 3; ++b) {
                const double expect = (a == b ? 1.0 : 0.0) - (a == 0 ? 1.0 : 0.0);
                REQUIRE(std::abs(dot(geo.bary_grad[a], geo.x[b] - geo.x[0]) - expect) < 1e-12);
            }
    }
}

TEST_CASE("degenerate cell is rejected", "[geometry]") {
    const std::array<Vec<2>, 3> degenerate = {{{{0, 0}}, {{1, 1}}, {{2, 2}}}};
    REQUIRE_THROWS_AS(cell_geometry_from_vertices<2>(degenerate), std::runtime_error);
}
