#include <catch2/catch_amalgamated.hpp>

#include "fcvide/polynomial.hpp"
#include "fcvide/roots.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

using namespace fcvide;
using cplx = std::complex<double>;

namespace {

// true roots found within tol, multiplicities matching
void check_roots(const Polynomial& p, const std::vector<std::pair<cplx, int>>& expected, double tol) {
    auto found = poly_roots(p);
    REQUIRE(found.size() == expected.size());
    for (const auto& [r, m] : expected) {
        bool hit = false;
        for (const auto& [fr, fm] : found) {
            if (std::abs(fr - r) <= tol) {
                CHECK(fm == m);
                hit = true;
                break;
            }
        }
        INFO("missing root " << r.real() << "+" << r.imag() << "i");
        CHECK(hit);
    }
}

} // namespace

TEST_CASE("simple factorizations") {
    check_roots(Polynomial{{-1.0, 0.0, 1.0}}, {{1.0, 1}, {-1.0, 1}}, 1e-10);

    // p^2 + 2p - 1: roots -1 +- sqrt(2)
    check_roots(Polynomial{{-1.0, 2.0, 1.0}},
                {{cplx(-1.0 + std::sqrt(2.0), 0.0), 1}, {cplx(-1.0 - std::sqrt(2.0), 0.0), 1}}, 1e-10);

    // p(p^2 - 1)
    check_roots(Polynomial{{0.0, -1.0, 0.0, 1.0}}, {{0.0, 1}, {1.0, 1}, {-1.0, 1}}, 1e-10);

    // p^2 + 1: conjugate pair
    check_roots(Polynomial{{1.0, 0.0, 1.0}}, {{cplx(0.0, 1.0), 1}, {cplx(0.0, -1.0), 1}}, 1e-10);
}

TEST_CASE("degenerate inputs") {
    CHECK_THROWS_AS(poly_roots(Polynomial{}), ZeroPolynomial);
    CHECK(poly_roots(Polynomial{{5.0}}).empty());
}

TEST_CASE("multiple roots are clustered with their multiplicity") {
    // (p-1)^3
    check_roots(Polynomial{{-1.0, 3.0, -3.0, 1.0}}, {{1.0, 3}}, 1e-7);
    // (p+2)^2 (p-3)
    Polynomial p = Polynomial{{4.0, 4.0, 1.0}} * Polynomial{{-3.0, 1.0}};
    check_roots(p, {{-2.0, 2}, {3.0, 1}}, 1e-7);
    // conjugate pair squared: (p^2+4)^2
    Polynomial q = Polynomial{{4.0, 0.0, 1.0}} * Polynomial{{4.0, 0.0, 1.0}};
    check_roots(q, {{cplx(0.0, 2.0), 2}, {cplx(0.0, -2.0), 2}}, 1e-7);
}

TEST_CASE("planted roots recovered, degree <= 6, multiplicity <= 3") {
    std::mt19937 rng(101);
    std::uniform_int_distribution<int> mult(1, 3);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 120; ++trial) {
        // pick well-separated base points, real or conjugate pairs
        std::vector<std::pair<cplx, int>> planted;
        int degree_budget = 6;
        std::vector<cplx> taken;
        while (degree_budget > 0) {
            const int m = std::min(mult(rng), degree_budget);
            const bool make_pair = degree_budget >= 2 * m && unif(rng) < 0.4;
            cplx root;
            bool ok = false;
            for (int attempt = 0; attempt < 40 && !ok; ++attempt) {
                root = make_pair ? cplx(std::round(unif(rng) * 6.0 - 3.0), 1.0 + std::round(unif(rng) * 2.0))
                                 : cplx(std::round(unif(rng) * 12.0 - 6.0) / 2.0, 0.0);
                ok = true;
                for (cplx t : taken)
                    if (std::abs(t - root) < 0.4 || std::abs(std::conj(t) - root) < 0.4) ok = false;
            }
            if (!ok) break;
            taken.push_back(root);
            planted.push_back({root, m});
            degree_budget -= m;
            if (make_pair) {
                planted.push_back({std::conj(root), m});
                degree_budget -= m;
            }
        }
        if (planted.empty()) continue;
        const Polynomial p = poly_from_roots(planted, 1.0);
        check_roots(p, planted, 1e-7);
    }
}
