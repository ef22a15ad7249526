#include <doctest.h>

#include "adhm/reflection.hpp"

using namespace adhm;

namespace {

std::shared_ptr<const AffineDiagram> make_diag(Kind k, int l) {
    return std::make_shared<const AffineDiagram>(AffineDiagram::build(k, l));
}

Eigen::VectorXi vec(std::initializer_list<int> xs) {
    Eigen::VectorXi v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index k = 0;
    for (int x : xs) v(k++) = x;
    return v;
}

// solved moduli point with zeta_R = 0 and a generic zeta_C
struct Solved {
    ADHMData data;
    Parameter zeta;
};

Solved solved_point(Kind k, int l, std::initializer_list<int> v, std::initializer_list<int> w,
                    std::uint64_t param_seed, std::uint64_t seed) {
    auto d = make_diag(k, l);
    Rng rng(param_seed);
    const Parameter z = random_level_zero(*d, rng, /*complex_only=*/true);
    for (std::uint64_t s = seed; s < seed + 6; ++s) {
        const SolveResult r = solve(d, vec(v), vec(w), z, s);
        if (r.converged) return {r.data, z};
    }
    throw std::runtime_error("test setup: solver did not converge");
}

}  // namespace

TEST_CASE("tau sigma = zeta_C Id on solved input; dimension transport by rank-nullity") {
    const Solved s = solved_point(Kind::A, 1, {1, 1}, {1, 0}, 101, 0);
    const auto& d = s.data.diag();
    auto [y, zy] = simple_reflection_functor(s.data, 1, s.zeta);
    // (s_1 * v)_1 = sum_j a_1j v_j + w_1 - v_1; A_1 has a_10 = 2
    CHECK(y.v(1) == 2 * 1 + 0 - 1);
    CHECK(y.v(0) == 1);
    // complex equation transported to s_i zeta_C
    CHECK(residual_complex(y, zy) <= 1e-8);
    CHECK(distance(zy, simple_reflection_param(s.zeta, 1, d)) < 1e-14);
}

TEST_CASE("reflection rejects vanishing zeta_C and off-level data") {
    const Solved s = solved_point(Kind::A, 2, {1, 1, 1}, {1, 0, 0}, 102, 0);
    Parameter z0 = s.zeta;
    z0.c(1) = 0;
    CHECK_THROWS_AS(simple_reflection_functor(s.data, 1, z0), validation_error);
    // random garbage is off the level set
    const ADHMData junk = random_adhm(s.data.diagram, s.data.v, s.data.w, 999);
    CHECK_THROWS_AS(simple_reflection_functor(junk, 1, s.zeta), validation_error);
    CHECK_THROWS_AS(simple_reflection_functor(s.data, 0, s.zeta), validation_error);
}

TEST_CASE("single-step level transport on a sweep of diagrams") {
    const std::vector<std::tuple<Kind, int, std::vector<int>, std::vector<int>>> cases = {
        {Kind::A, 1, {1, 1}, {1, 0}},
        {Kind::A, 2, {1, 1, 1}, {2, 0, 0}},
        {Kind::D, 4, {1, 1, 2, 1, 1}, {1, 0, 0, 0, 0}},
    };
    std::uint64_t pseed = 200;
    for (const auto& [k, l, vv, ww] : cases) {
        auto d = make_diag(k, l);
        Rng rng(pseed++);
        const Parameter z = random_level_zero(*d, rng, true);
        Eigen::VectorXi v(static_cast<Eigen::Index>(vv.size())),
            w(static_cast<Eigen::Index>(ww.size()));
        for (size_t i = 0; i < vv.size(); ++i) v(static_cast<Eigen::Index>(i)) = vv[i];
        for (size_t i = 0; i < ww.size(); ++i) w(static_cast<Eigen::Index>(i)) = ww[i];
        const SolveResult r = solve(d, v, w, z, 5);
        REQUIRE(r.converged);
        for (int i = 1; i <= l; ++i) {
            const Eigen::VectorXi target = reflected_dim(v, w, i, *d);
            if (target.minCoeff() < 0) continue;
            auto [y, zy] = simple_reflection_functor(r.data, i, z);
            CHECK(residual_complex(y, zy) <= 1e-8);
            CHECK(same_vec(y.v, target));
            // only component i moves
            for (int j = 0; j <= l; ++j)
                if (j != i) CHECK(y.v(j) == v(j));
        }
    }
}

TEST_CASE("reflecting twice at the same vertex returns the same moduli point") {
    const Solved s = solved_point(Kind::A, 1, {1, 1}, {1, 0}, 103, 2);
    auto [y1, z1] = simple_reflection_functor(s.data, 1, s.zeta);
    auto [y2, z2] = simple_reflection_functor(y1, 1, z1);
    CHECK(distance(z2, s.zeta) < 1e-12);
    REQUIRE(same_vec(y2.v, s.data.v));
    // rebalance the real equation before comparing unitary orbits
    const SolveResult reb = rebalance_real(y2, s.zeta);
    REQUIRE(reb.converged);
    CHECK(moduli_equal(reb.data, s.data, 1e-5));
}

TEST_CASE("w0 functor: dimension transport equals w0 * v, parameter equals w0 zeta") {
    const Solved s = solved_point(Kind::A, 2, {1, 1, 1}, {2, 0, 0}, 104, 1);
    const auto& d = s.data.diag();
    const WeylWord word = longest_element(d);
    auto [y, zy] = w0_functor(s.data, s.zeta, word);
    CHECK(same_vec(y.v, w0_star_v(s.data.v, s.data.w, d)));
    CHECK(distance(zy, act_weyl_param(s.zeta, word, d)) < 1e-12);
    CHECK(residual_complex(y, zy) <= 1e-8);
    CHECK(residual(y, zy) <= 1e-8);

    // applying w0 twice returns the original moduli point
    auto [yy, zyy] = w0_functor(y, zy, word);
    CHECK(distance(zyy, s.zeta) < 1e-12);
    REQUIRE(same_vec(yy.v, s.data.v));
    CHECK(moduli_equal(yy, s.data, 1e-5));
}

TEST_CASE("A_1 w0 functor is the single reflection") {
    const Solved s = solved_point(Kind::A, 1, {1, 1}, {2, 0}, 105, 3);
    const WeylWord word = longest_element(s.data.diag());
    REQUIRE(word.size() == 1);
    auto [y, zy] = w0_functor(s.data, s.zeta, word);
    CHECK(residual(y, zy) <= 1e-8);
}

TEST_CASE("A_2 word independence: (1,2,1) vs (2,1,2)") {
    const Solved s = solved_point(Kind::A, 2, {1, 1, 1}, {2, 0, 0}, 106, 4);
    auto [ya, za] = w0_functor(s.data, s.zeta, {1, 2, 1});
    auto [yb, zb] = w0_functor(s.data, s.zeta, {2, 1, 2});
    CHECK(distance(za, zb) < 1e-12);
    REQUIRE(same_vec(ya.v, yb.v));
    CHECK(moduli_equal(ya, yb, 1e-5));
}

TEST_CASE("w0 functor genericity check names the failing step") {
    const Solved s = solved_point(Kind::A, 2, {1, 1, 1}, {1, 0, 0}, 107, 5);
    Parameter z = s.zeta;
    // make the second intermediate level vanish: (s_1 z)_2 = z_2 + z_1 = 0
    z.c(2) = -z.c(1);
    z.c(0) = -z.c(1) - z.c(2);
    try {
        w0_functor(s.data, z, {1, 2, 1});
        CHECK(false);
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("step 1") != std::string::npos);
    }
}

TEST_CASE("degenerate functor is the identity at zeta = 0 and only there") {
    auto d = make_diag(Kind::A, 1);
    const ADHMData x = random_adhm(d, vec({1, 1}), vec({1, 0}), 31);
    const Parameter z0 = Parameter::zero(*d);
    const ADHMData y = functor_for_degenerate(x, z0);
    CHECK(pack_complex(y) == pack_complex(x));
    // idempotent
    CHECK(pack_complex(functor_for_degenerate(y, z0)) == pack_complex(x));
    Parameter z = z0;
    z.c(0) = 0.1;
    CHECK_THROWS_AS(functor_for_degenerate(x, z), validation_error);
}

TEST_CASE("word transport of dimensions matches w0_star_v on admissible samples") {
    Rng rng(301);
    for (auto [k, l] : {std::pair<Kind, int>{Kind::A, 1}, {Kind::A, 2}, {Kind::D, 4}}) {
        auto d = make_diag(k, l);
        const WeylWord word = longest_element(*d);
        int accepted = 0;
        while (accepted < 50) {
            Eigen::VectorXi v(d->num_vertices()), w(d->num_vertices());
            for (int i = 0; i < d->num_vertices(); ++i) {
                v(i) = static_cast<int>(rng.raw() % 3);
                w(i) = static_cast<int>(rng.raw() % 3);
            }
            Eigen::VectorXi got;
            try {
                got = word_dimension_transport(v, w, word, *d);
            } catch (const validation_error&) {
                continue;
            }
            ++accepted;
            CHECK(same_vec(got, w0_star_v(v, w, *d)));
        }
    }
}
