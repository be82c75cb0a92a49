#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cantorwalk/evolution.hpp"
#include "cantorwalk/observables.hpp"
#include "oracles.hpp"

using namespace cantorwalk;
using std::numbers::pi;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

bool close(Amplitude a, Amplitude b, double tol = 1e-15) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_SUITE("evolution") {

TEST_CASE("coin matrix entries") {
    const auto zero = coin_matrix(0.0).entries;
    CHECK(zero[0][0] == 1.0);
    CHECK(zero[0][1] == 0.0);
    CHECK(zero[1][1] == -1.0);

    const auto flip = coin_matrix(pi / 2).entries;
    CHECK(flip[0][0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(flip[0][1] == 1.0);
    CHECK(flip[1][0] == 1.0);

    const auto hadamard = coin_matrix(pi / 4).entries;
    CHECK(hadamard[0][0] == doctest::Approx(kInvSqrt2));
    CHECK(hadamard[1][1] == doctest::Approx(-kInvSqrt2));

    CHECK_THROWS_AS(coin_matrix(std::nan("")), DomainError);
    CHECK_THROWS_AS(coin_matrix(INFINITY), DomainError);
}

TEST_CASE("coin matrix is orthogonal with determinant -1 for any angle") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(-20.0, 20.0);
    for (int i = 0; i < 200; ++i) {
        const auto m = coin_matrix(angle(rng)).entries;
        const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        CHECK(std::abs(det + 1.0) < 1e-14);
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                const double ctc = m[0][a] * m[0][b] + m[1][a] * m[1][b];
                CHECK(std::abs(ctc - (a == b ? 1.0 : 0.0)) < 1e-14);
            }
        }
    }
}

TEST_CASE("initial state") {
    const WalkerState s = initial_state(1093);
    CHECK(s.time() == 0);
    CHECK(s.reach() == 0);
    CHECK(close(s.right(0), {kInvSqrt2, 0.0}));
    CHECK(close(s.left(0), {0.0, kInvSqrt2}));
    const auto p = probability_distribution(s);
    CHECK(p[1093] == doctest::Approx(1.0));
    double rest = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i != 1093) rest += p[i];
    }
    CHECK(rest == 0.0);
}

TEST_CASE("one Hadamard step") {
    const CoinLayout layout = build_homogeneous(3, pi / 4);
    const WalkerState s = step(initial_state(3), layout);
    CHECK(s.time() == 1);
    CHECK(close(s.right(1), {0.5, 0.5}));
    CHECK(close(s.left(-1), {0.5, -0.5}));
    CHECK(close(s.right(-1), {0.0, 0.0}));
    CHECK(close(s.left(1), {0.0, 0.0}));
    const auto p = probability_distribution(s);
    CHECK(p[4] == doctest::Approx(0.5));
    CHECK(p[2] == doctest::Approx(0.5));
}

TEST_CASE("one step with a diagonal coin") {
    const WalkerState s = step(initial_state(2), build_homogeneous(2, 0.0));
    CHECK(close(s.right(1), {kInvSqrt2, 0.0}));
    CHECK(close(s.left(-1), {0.0, -kInvSqrt2}));
}

TEST_CASE("two Hadamard steps") {
    const CoinLayout layout = build_homogeneous(4, pi / 4);
    WalkerState s = initial_state(4);
    Propagator prop(layout);
    prop.evolve(s, 2);
    const auto p = probability_distribution(s);
    CHECK(p[4 + 2] == doctest::Approx(0.25));
    CHECK(p[4 - 2] == doctest::Approx(0.25));
    CHECK(p[4] == doctest::Approx(0.5));
}

TEST_CASE("step refuses to pass t = L or mismatched chains") {
    const CoinLayout layout = build_homogeneous(2, pi / 4);
    WalkerState s = initial_state(2);
    Propagator prop(layout);
    prop.step(s);
    prop.step(s);
    CHECK_THROWS_AS(prop.step(s), BoundaryViolation);
    CHECK(s.time() == 2);

    WalkerState other = initial_state(3);
    CHECK_THROWS_AS(prop.step(other), BoundaryViolation);
    WalkerState fresh = initial_state(2);
    CHECK_THROWS_AS(prop.evolve(fresh, 3), BoundaryViolation);
    CHECK(fresh.time() == 0);
    CHECK_THROWS_AS(step(initial_state(0), build_homogeneous(0)), BoundaryViolation);
}

TEST_CASE("evolve calls the recorder once per step and matches single steps") {
    const CoinLayout layout = build_cantor(4, pi / 8, pi / 4);
    WalkerState bulk = initial_state(layout.half_width());
    WalkerState single = initial_state(layout.half_width());
    Propagator prop(layout);
    int calls = 0;
    std::vector<double> sigmas;
    prop.evolve(bulk, 40, [&](const WalkerState& s) {
        ++calls;
        sigmas.push_back(std::sqrt(std::max(0.0, moment(s, 2) - moment(s, 1) * moment(s, 1))));
    });
    CHECK(calls == 40);
    for (int i = 0; i < 40; ++i) {
        prop.step(single);
        CHECK(std_dev(single) == sigmas[static_cast<std::size_t>(i)]);
    }
    for (Index x = -40; x <= 40; ++x) {
        REQUIRE(bulk.right(x) == single.right(x));
        REQUIRE(bulk.left(x) == single.left(x));
    }

    WalkerState untouched = initial_state(4);
    int zero_calls = 0;
    const WalkerState after =
        evolve(untouched, build_cantor(2), 0, [&](const WalkerState&) { ++zero_calls; });
    CHECK(zero_calls == 0);
    CHECK(after.time() == 0);
    CHECK(after.right(0) == untouched.right(0));
}

TEST_CASE("kernel matches the dense one-step unitary for L <= 6") {
    std::mt19937_64 rng(20240611);
    std::bernoulli_distribution coin_flip(0.5);
    for (Index half_width = 1; half_width <= 6; ++half_width) {
        std::vector<CoinLabel> mixed(static_cast<std::size_t>(2 * half_width + 1));
        for (auto& label : mixed) label = coin_flip(rng) ? CoinLabel::Type1 : CoinLabel::Type2;
        for (const CoinLayout& layout : {build_homogeneous(half_width, pi / 4),
                                         CoinLayout(mixed, std::nullopt, 0.3, 1.1)}) {
            const Eigen::MatrixXcd w = oracle::one_step_matrix(layout);
            const Eigen::MatrixXcd wdw = w.adjoint() * w;
            CHECK((wdw - Eigen::MatrixXcd::Identity(w.rows(), w.cols())).cwiseAbs().maxCoeff() < 1e-12);
            Propagator prop(layout);
            for (int k = 0; k < 20; ++k) {
                WalkerState s = oracle::random_state(half_width, rng);
                const Eigen::VectorXcd expected = w * oracle::to_vector(s);
                prop.step(s);
                CHECK((oracle::to_vector(s) - expected).cwiseAbs().maxCoeff() < 1e-12);
            }
        }
    }
}

TEST_CASE("adjoint step undoes a step") {
    std::mt19937_64 rng(99);
    const CoinLayout layout = build_cantor(3, 0.4, 1.3);
    Propagator prop(layout);
    for (int k = 0; k < 20; ++k) {
        const WalkerState before = oracle::random_state(layout.half_width(), rng);
        WalkerState s = before;
        prop.step(s);
        prop.step_adjoint(s);
        CHECK(s.time() == 0);
        for (Index x = -layout.half_width(); x <= layout.half_width(); ++x) {
            REQUIRE(std::abs(s.right(x) - before.right(x)) < 1e-12);
            REQUIRE(std::abs(s.left(x) - before.left(x)) < 1e-12);
        }
    }
    WalkerState origin = initial_state(layout.half_width());
    CHECK_THROWS_AS(prop.step_adjoint(origin), BoundaryViolation);
}

TEST_CASE("parity, support and edge silence from the origin") {
    const CoinLayout layout = build_cantor(5, pi / 8, pi / 4);
    const Index half_width = layout.half_width();
    WalkerState s = initial_state(half_width);
    Propagator prop(layout);
    bool ok = true;
    prop.evolve(s, half_width, [&](const WalkerState& st) {
        const Index t = st.time();
        for (Index x = -half_width; x <= half_width; ++x) {
            const bool must_vanish = ((x + t) % 2 != 0) || std::abs(x) > t;
            if (must_vanish && (st.right(x) != 0.0 || st.left(x) != 0.0)) ok = false;
        }
        if (t < half_width) {
            for (Index edge : {-half_width, half_width}) {
                if (std::norm(st.right(edge)) + std::norm(st.left(edge)) >= 1e-20) ok = false;
            }
        }
        if (std::abs(st.norm() - 1.0) > 1e-12 * static_cast<double>(t + 1)) ok = false;
    });
    CHECK(ok);
}

}  // TEST_SUITE
