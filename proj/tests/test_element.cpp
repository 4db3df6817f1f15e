#include <catch2/catch_amalgamated.hpp>

#include <fcfem/element.hpp>
#include <fcfem/geometry.hpp>

#include <cmath>
#include <random>

using namespace fcfem;

namespace {

template <int D>
std::array<double, D + 1> random_bary(std::mt19937 &rng) {
    std::uniform_real_distribution<double> uni(0.05, 1.0);
    std::array<double, D + 1> lam;
    double s = 0;
    for (int a = 0; a <= D; ++a) {
        lam[a] = uni(rng);
        s += lam[a];
    }
    for (int a = 0; a <= D; ++a) lam[a] /= s;
    return lam;
}

} // namespace

TEST_CASE("node count matches the dimension formula", "[element]") {
    for (int k = 1; k <= 8; ++k)
        REQUIRE(LagrangeBasis<2>(k).count() == static_cast<int>(binomial(k + 2, 2)));
    for (int k = 1; k <= 5; ++k)
        REQUIRE(LagrangeBasis<3>(k).count() == static_cast<int>(binomial(k + 3, 3)));
}

namespace {

template <int D>
void check_kronecker(const LagrangeBasis<D> &basis) {
    std::vector<double> v;
    std::vector<std::array<double, D>> g;
    for (int j = 0; j < basis.count(); ++j) {
        basis.eval(basis.node_bary(j), v, g);
        for (int i = 0; i < basis.count(); ++i)
            REQUIRE(std::abs(v[i] - (i == j ? 1.0 : 0.0)) < 1e-12);
    }
}

} // namespace

TEST_CASE("kronecker property at the lattice nodes", "[element]") {
    check_kronecker(LagrangeBasis<2>(1));
    check_kronecker(LagrangeBasis<2>(3));
    check_kronecker(LagrangeBasis<2>(8));
    check_kronecker(LagrangeBasis<3>(2));
    check_kronecker(LagrangeBasis<3>(5));
}

TEST_CASE("partition of unity and gradient closure", "[element]") {
    std::mt19937 rng(7);
    auto check2 = [&](int k) {
        const LagrangeBasis<2> basis(k);
        std::vector<double> v;
        std::vector<std::array<double, 2>> g;
        for (int trial = 0; trial < 10; ++trial) {
            basis.eval(random_bary<2>(rng), v, g);
            double vs = 0, g0 = 0, g1 = 0;
            for (int i = 0; i < basis.count(); ++i) {
                vs += v[i];
                g0 += g[i][0];
                g1 += g[i][1];
            }
            REQUIRE(std::abs(vs - 1.0) < 1e-12);
            REQUIRE(std::abs(g0) < 1e-10);
            REQUIRE(std::abs(g1) < 1e-10);
        }
    };
    for (int k : {1, 2, 4, 6, 8}) check2(k);

    const LagrangeBasis<3> basis(4);
    std::vector<double> v;
    std::vector<std::array<double, 3>> g;
    for (int trial = 0; trial < 10; ++trial) {
        basis.eval(random_bary<3>(rng), v, g);
        double vs = 0;
        std::array<double, 3> gs{};
        for (int i = 0; i < basis.count(); ++i) {
            vs += v[i];
            for (int r = 0; r < 3; ++r) gs[r] += g[i][r];
        }
        REQUIRE(std::abs(vs - 1.0) < 1e-12);
        for (int r = 0; r < 3; ++r) REQUIRE(std::abs(gs[r]) < 1e-10);
    }
}

TEST_CASE("quadratic basis values at an edge midpoint", "[element]") {
    const LagrangeBasis<2> basis(2);
    std::vector<double> v;
    std::vector<std::array<double, 2>> g;
    basis.eval({0.0, 0.5, 0.5}, v, g);
    for (int i = 0; i < basis.count(); ++i) {
        const auto &node = basis.nodes[i];
        if (node[0] == 0 && node[1] == 1 && node[2] == 1)
            REQUIRE(std::abs(v[i] - 1.0) < 1e-14);  // the midpoint's own function
        if (node[0] == 0 && node[1] == 2 && node[2] == 0)
            REQUIRE(std::abs(v[i]) < 1e-14);  // vertex function vanishes there
    }
}

TEST_CASE("degree-k polynomial reproduction", "[element]") {
    std::mt19937 rng(11);
    for (int k : {2, 3, 5}) {
        const LagrangeBasis<2> basis(k);
        // p(lambda) = lambda_1^k plus a mixed lower term
        auto p = [k](const std::array<double, 3> &lam) {
            return std::pow(lam[1], k) + lam[0] * lam[2];
        };
        std::vector<double> v;
        std::vector<std::array<double, 2>> g;
        for (int trial = 0; trial < 5; ++trial) {
            const auto lam = random_bary<2>(rng);
            basis.eval(lam, v, g);
            double s = 0;
            for (int i = 0; i < basis.count(); ++i) s += p(basis.node_bary(i)) * v[i];
            REQUIRE(std::abs(s - p(lam)) < 1e-11);
        }
    }
}

TEST_CASE("reference gradients of the linear basis", "[element]") {
    const LagrangeBasis<2> basis(1);
    std::vector<double> v;
    std::vector<std::array<double, 2>> g;
    basis.eval({1.0 / 3, 1.0 / 3, 1.0 / 3}, v, g);
    // phi_0 = lambda_0 = 1 - x - y, phi at vertex order (k,0,0),(0,k,0),(0,0,k)
    for (int i = 0; i < 3; ++i) {
        const auto &node = basis.nodes[i];
        if (node[0] == 1) {
            REQUIRE(std::abs(g[i][0] + 1.0) < 1e-14);
            REQUIRE(std::abs(g[i][1] + 1.0) < 1e-14);
        }
        if (node[1] == 1) {
            REQUIRE(std::abs(g[i][0] - 1.0) < 1e-14);
            REQUIRE(std::abs(g[i][1]) < 1e-14);
        }
        if (node[2] == 1) {
            REQUIRE(std::abs(g[i][0]) < 1e-14);
            REQUIRE(std::abs(g[i][1] - 1.0) < 1e-14);
        }
    }
}

TEST_CASE("malformed barycentric input is rejected", "[element]") {
    const LagrangeBasis<2> basis(2);
    std::vector<double> v;
    std::vector<std::array<double, 2>> g;
    REQUIRE_THROWS_AS(basis.eval({0.5, 0.6, 0.2}, v, g), std::invalid_argument);
    REQUIRE_THROWS_AS(basis.eval({-0.1, 0.6, 0.5}, v, g), std::invalid_argument);
    REQUIRE_THROWS_AS(LagrangeBasis<2>(0), std::invalid_argument);
}

TEST_CASE("tabulation matches pointwise evaluation", "[element]") {
    const LagrangeBasis<3> basis(3);
    std::mt19937 rng(3);
    std::vector<std::array<double, 4>> pts;
    for (int i = 0; i < 6; ++i) pts.push_back(random_bary<3>(rng));
    const auto tab = tabulate_basis(basis, pts);
    REQUIRE(tab.npts == 6);
    REQUIRE(tab.nbasis == basis.count());
    std::vector<double> v;
    std::vector<std::array<double, 3>> g;
    for (int q = 0; q < tab.npts; ++q) {
        basis.eval(pts[q], v, g);
        for (int i = 0; i < tab.nbasis; ++i) {
            REQUIRE(std::abs(tab.value(q, i) - v[i]) < 1e-15);
            for (int r = 0; r < 3; ++r)
                REQUIRE(std::abs(tab.grad(q, i)[r] - g[i][r]) < 1e-15);
        }
    }
}
