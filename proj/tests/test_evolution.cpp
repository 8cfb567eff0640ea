#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mehlerlab/evolution.hpp"

using namespace mehler;

namespace {

Vec random_vec(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec v = Vec::zero(dim);
    for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
    return v;
}

const double kPiSq = 9.869604401089358618834490999876;

}  // namespace

TEST_CASE("evolve closed forms") {
    const EvolutionFamily scalar = EvolutionFamily::scalar_contraction(1.0);
    const Vec x({2.0, -4.0, 6.0});
    CHECK(evolve(scalar, 0.0, std::log(2.0), x) ==
          Vec({1.0, -2.0, 3.0}));  // e^{-ln 2} = 1/2 exactly up to exp/log roundoff
    CHECK(evolve(scalar, 1.25, 1.25, x) == x);

    const EvolutionFamily lap = EvolutionFamily::diagonal_semigroup(DiagOp({kPiSq, 4.0 * kPiSq}));
    const Vec e2 = Vec::basis(2, 1);
    const Vec moved = evolve(lap, 0.0, 1.0, e2);
    CHECK(moved[0] == 0.0);
    CHECK(moved[1] == doctest::Approx(std::exp(-4.0 * kPiSq)).epsilon(1e-14));

    CHECK_THROWS_AS(evolve(scalar, 1.0, 0.0, x), std::domain_error);
}

TEST_CASE("evolve scalar halves at t = ln 2") {
    const EvolutionFamily scalar = EvolutionFamily::scalar_contraction(1.0);
    const Vec x({2.0, -4.0, 6.0});
    const Vec half = evolve(scalar, 0.0, std::log(2.0), x);
    for (int i = 0; i < 3; ++i) CHECK(half[i] == doctest::Approx(0.5 * x[i]).epsilon(1e-14));
}

TEST_CASE("contraction certificates") {
    const auto c1 = contraction_certificate(EvolutionFamily::scalar_contraction(1.0));
    CHECK(c1.c == 1.0);
    CHECK(c1.omega == 1.0);

    const auto c2 = contraction_certificate(
        EvolutionFamily::diagonal_semigroup(DiagOp({kPiSq, 4.0 * kPiSq})));
    CHECK(c2.c == 1.0);
    CHECK(c2.omega == doctest::Approx(kPiSq));

    const auto c3 = contraction_certificate(EvolutionFamily::periodic_scalar(1.0, 0.0, 1.0));
    CHECK(c3.c == 1.0);
    CHECK(c3.omega == 1.0);
}

TEST_CASE("sigma evaluation") {
    const Sigma constant = Sigma::constant(DiagOp::identity(3));
    CHECK(sigma_eval(constant, -4.7) == DiagOp::identity(3));

    const Sigma mod = Sigma::periodic_scalar_mod(DiagOp::identity(3), 0.5, 1.0);
    CHECK(sigma_eval(mod, 0.0)[0] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(sigma_eval(mod, 0.25)[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sigma_sup_norm(mod) == doctest::Approx(1.5));
}

TEST_CASE("cocycle property on random triples") {
    std::mt19937_64 rng(3001);
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    const std::vector<EvolutionFamily> families = {
        EvolutionFamily::scalar_contraction(0.7),
        EvolutionFamily::diagonal_semigroup(DiagOp({0.5, 1.0, 2.5, 4.0})),
        EvolutionFamily::periodic_scalar(1.0, 0.5, 1.0),
    };
    for (const auto& family : families) {
        const int dim = 4;
        for (int trial = 0; trial < 100; ++trial) {
            double s = uni(rng), r = uni(rng), t = uni(rng);
            if (s > r) std::swap(s, r);
            if (r > t) std::swap(r, t);
            if (s > r) std::swap(s, r);
            const Vec x = random_vec(dim, rng);
            const Vec two_step = evolve(family, r, t, evolve(family, s, r, x));
            const Vec one_step = evolve(family, s, t, x);
            CHECK(mehler::norm(sub(two_step, one_step)) <= 1e-12 * mehler::norm(x));
        }
    }
}

TEST_CASE("certified contraction bound holds on random pairs") {
    std::mt19937_64 rng(3002);
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    const std::vector<EvolutionFamily> families = {
        EvolutionFamily::scalar_contraction(0.7),
        EvolutionFamily::diagonal_semigroup(DiagOp({0.5, 1.0, 2.5, 4.0})),
        EvolutionFamily::periodic_scalar(1.0, 0.5, 1.0),
    };
    for (const auto& family : families) {
        const auto cert = contraction_certificate(family);
        for (int trial = 0; trial < 100; ++trial) {
            double s = uni(rng), t = uni(rng);
            if (s > t) std::swap(s, t);
            const Vec x = random_vec(4, rng);
            const double lhs = mehler::norm(evolve(family, s, t, x));
            const double rhs = cert.c * std::exp(-cert.omega * (t - s)) * mehler::norm(x);
            CHECK(lhs <= rhs * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("periodicity of the periodic family and sigma") {
    const EvolutionFamily family = EvolutionFamily::periodic_scalar(1.0, 0.5, 1.0);
    const Sigma mod = Sigma::periodic_scalar_mod(DiagOp::identity(3), 0.25, 1.0);
    std::mt19937_64 rng(3003);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        double s = uni(rng), t = uni(rng);
        if (s > t) std::swap(s, t);
        const Vec x = random_vec(3, rng);
        const Vec a = evolve(family, s + 1.0, t + 1.0, x);
        const Vec b = evolve(family, s, t, x);
        CHECK(mehler::norm(sub(a, b)) <= 1e-12 * (mehler::norm(x) + 1.0));
        const double r = uni(rng);
        CHECK(sigma_eval(mod, r + 1.0)[0] == doctest::Approx(sigma_eval(mod, r)[0]).epsilon(1e-12));
    }
}

TEST_CASE("declared period") {
    const Sigma constant = Sigma::constant(DiagOp::identity(2));
    CHECK(declared_period(EvolutionFamily::periodic_scalar(1.0, 0.5, 2.0), constant) == 2.0);
    CHECK_THROWS_AS(declared_period(EvolutionFamily::scalar_contraction(1.0), constant),
                    UndefinedForKindError);
    CHECK_THROWS_AS(
        declared_period(EvolutionFamily::periodic_scalar(1.0, 0.5, 2.0),
                        Sigma::periodic_scalar_mod(DiagOp::identity(2), 0.1, 3.0)),
        UndefinedForKindError);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(EvolutionFamily::scalar_contraction(0.0), StructuralError);
    CHECK_THROWS_AS(EvolutionFamily::diagonal_semigroup(DiagOp({1.0, -0.5})), StructuralError);
    CHECK_THROWS_AS(EvolutionFamily::periodic_scalar(1.0, 1.0, 1.0), StructuralError);
    CHECK_THROWS_AS(Sigma::periodic_scalar_mod(DiagOp::identity(2), -0.1, 1.0), StructuralError);
}
