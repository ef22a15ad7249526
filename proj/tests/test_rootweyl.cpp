#include <doctest.h>

#include "adhm/rootweyl.hpp"
#include "oracles.hpp"

using namespace adhm;

namespace {

std::vector<std::pair<Kind, int>> all_types(int max_rank = 8) {
    std::vector<std::pair<Kind, int>> out;
    for (int l = 1; l <= max_rank; ++l) out.push_back({Kind::A, l});
    for (int l = 4; l <= max_rank; ++l) out.push_back({Kind::D, l});
    for (int l = 6; l <= 8; ++l) out.push_back({Kind::E, l});
    return out;
}

Parameter make_param(std::initializer_list<double> re,
                     std::initializer_list<std::complex<double>> c) {
    Parameter z;
    z.re = Eigen::VectorXd(static_cast<Eigen::Index>(re.size()));
    z.c = Eigen::VectorXcd(static_cast<Eigen::Index>(c.size()));
    Eigen::Index k = 0;
    for (double x : re) z.re(k++) = x;
    k = 0;
    for (auto x : c) z.c(k++) = x;
    return z;
}

}  // namespace

TEST_CASE("affine Cartan of A_1 and A_2") {
    const auto d1 = AffineDiagram::build(Kind::A, 1);
    Eigen::MatrixXi c1(2, 2);
    c1 << 2, -2, -2, 2;
    CHECK((d1.cartan() - c1).cwiseAbs().maxCoeff() == 0);

    const auto d2 = AffineDiagram::build(Kind::A, 2);
    const auto c2 = d2.cartan();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(c2(i, j) == (i == j ? 2 : -1));
}

TEST_CASE("simple reflection on parameters: A_1 hand value and involutivity") {
    const auto d = AffineDiagram::build(Kind::A, 1);
    const Parameter z = make_param({1.0, -1.0}, {{0, 1}, {0, -1}});
    const Parameter s = simple_reflection_param(z, 1, d);
    CHECK(s.re(0) == doctest::Approx(-1.0));
    CHECK(s.re(1) == doctest::Approx(1.0));
    const Parameter ss = simple_reflection_param(s, 1, d);
    CHECK(distance(ss, z) < 1e-14);
    CHECK(std::abs(level_re(s, d)) < 1e-14);
    CHECK_THROWS_AS(simple_reflection_param(z, 0, d), validation_error);
}

TEST_CASE("reflections preserve the level pairing on random data") {
    Rng rng(7);
    for (auto [k, l] : all_types(6)) {
        const auto d = AffineDiagram::build(k, l);
        Parameter z = random_level_zero(d, rng);
        const double lv0 = level_re(z, d);
        for (int i = 1; i <= l; ++i) {
            const Parameter s = simple_reflection_param(z, i, d);
            CHECK(std::abs(level_re(s, d) - lv0) < 1e-12);
            CHECK(std::abs(level_c(s, d) - level_c(z, d)) < 1e-12);
        }
    }
}

TEST_CASE("act_weyl_weight: identity, involution, A_1 hand value") {
    const auto d = AffineDiagram::build(Kind::A, 1);
    VecI64 lam(2);
    lam << 0, 1;
    CHECK((act_weyl_weight(lam, {}, d) - lam).cwiseAbs().maxCoeff() == 0);
    CHECK((act_weyl_weight(lam, {1, 1}, d) - lam).cwiseAbs().maxCoeff() == 0);
    const VecI64 out = act_weyl_weight(lam, {1}, d);
    CHECK(out(0) == 2);
    CHECK(out(1) == -1);
}

TEST_CASE("act_weyl_weight matches the brute-force matrix action") {
    Rng rng(11);
    for (auto [k, l] : all_types(6)) {
        const auto d = AffineDiagram::build(k, l);
        WeylWord word;
        for (int t = 0; t < 9; ++t)
            word.push_back(1 + static_cast<int>(rng.raw() % static_cast<unsigned>(l)));
        const Eigen::MatrixXd m = oracles::word_matrix(d.cartan(), word);
        VecI64 lam(d.num_vertices());
        for (int i = 0; i < d.num_vertices(); ++i)
            lam(i) = static_cast<long long>(rng.raw() % 7) - 3;
        const VecI64 got = act_weyl_weight(lam, word, d);
        const Eigen::VectorXd want = m * lam.cast<double>();
        for (int i = 0; i < d.num_vertices(); ++i)
            CHECK(static_cast<double>(got(i)) == doctest::Approx(want(i)));
    }
}

TEST_CASE("longest element: reduced length equals the positive root count") {
    for (auto [k, l] : all_types()) {
        const auto d = AffineDiagram::build(k, l);
        const WeylWord w0 = longest_element(d);
        CHECK(static_cast<int>(w0.size()) == oracles::positive_root_count(d.finite_cartan()));
        for (int i : w0) CHECK(i != 0);
        // sends the dominant chamber to the antidominant one
        VecI64 lam = VecI64::Zero(d.num_vertices());
        for (int i = 1; i <= l; ++i) lam(i) = 1;
        const VecI64 out = act_weyl_weight(lam, w0, d);
        for (int i = 1; i <= l; ++i) CHECK(out(i) <= 0);
    }
}

TEST_CASE("w0 squared is the identity on weights and parameters") {
    Rng rng(13);
    for (auto [k, l] : all_types()) {
        const auto d = AffineDiagram::build(k, l);
        const WeylWord w0 = longest_element(d);
        VecI64 lam(d.num_vertices());
        for (int i = 0; i < d.num_vertices(); ++i)
            lam(i) = static_cast<long long>(rng.raw() % 9) - 4;
        CHECK((act_weyl_weight(act_weyl_weight(lam, w0, d), w0, d) - lam).cwiseAbs().maxCoeff() ==
              0);
        const Parameter z = random_level_zero(d, rng);
        CHECK(distance(act_weyl_param(act_weyl_param(z, w0, d), w0, d), z) < 1e-12);
    }
}

TEST_CASE("word lengths: A_1=1, A_2=3, D_4=12") {
    CHECK(longest_element(AffineDiagram::build(Kind::A, 1)).size() == 1);
    CHECK(longest_element(AffineDiagram::build(Kind::A, 2)).size() == 3);
    CHECK(longest_element(AffineDiagram::build(Kind::D, 4)).size() == 12);
}

TEST_CASE("w0 * v: A_1 closed form and involutivity") {
    const auto d = AffineDiagram::build(Kind::A, 1);
    Eigen::VectorXi v(2), w(2);
    v << 1, 1;
    w << 2, 0;
    const Eigen::VectorXi vp = w0_star_v(v, w, d);
    CHECK(vp(0) == 1);
    CHECK(vp(1) == 1);  // w1 + 2 v0 - v1 = 0 + 2 - 1

    v << 0, 1;
    CHECK_THROWS_AS(w0_star_v(v, w, d), validation_error);  // v1' = -1

    Rng rng(17);
    for (auto [k, l] : all_types(5)) {
        const auto dd = AffineDiagram::build(k, l);
        for (int trial = 0; trial < 20; ++trial) {
            Eigen::VectorXi vv(dd.num_vertices()), ww(dd.num_vertices());
            for (int i = 0; i < dd.num_vertices(); ++i) {
                vv(i) = static_cast<int>(rng.raw() % 3);
                ww(i) = static_cast<int>(rng.raw() % 3);
            }
            Eigen::VectorXi vp2;
            try {
                vp2 = w0_star_v(vv, ww, dd);
            } catch (const validation_error&) {
                continue;  // transport went negative, legitimate
            }
            CHECK(vp2(0) == vv(0));
            CHECK(same_vec(w0_star_v(vp2, ww, dd), vv));
            // defining identity w0(w - C v) = w - C v'
            VecI64 lam = ww.cast<long long>() - (dd.cartan() * vv).cast<long long>();
            VecI64 rhs = ww.cast<long long>() - (dd.cartan() * vp2).cast<long long>();
            CHECK((act_weyl_weight(lam, longest_element(dd), dd) - rhs).cwiseAbs().maxCoeff() ==
                  0);
        }
    }
}

TEST_CASE("star on dimension vectors") {
    const auto d = AffineDiagram::build(Kind::A, 3);
    const auto inv = diagram_involution(d);
    Eigen::VectorXi v(4);
    v << 5, 1, 2, 3;
    const Eigen::VectorXi vs = star_dimvec(v, inv);
    Eigen::VectorXi expect(4);
    expect << 5, 3, 2, 1;
    CHECK(same_vec(vs, expect));
    CHECK(same_vec(star_dimvec(vs, inv), v));
    const auto d4 = AffineDiagram::build(Kind::D, 4);
    Eigen::VectorXi u(5);
    u << 1, 2, 3, 4, 5;
    CHECK(same_vec(star_dimvec(u, diagram_involution(d4)), u));
}

TEST_CASE("self-duality of level-0 parameters: A_1 hand case") {
    const auto d = AffineDiagram::build(Kind::A, 1);
    const Parameter z = make_param({1.0, -1.0}, {{0, 1}, {0, -1}});
    CHECK(check_self_dual_parameter(z, d, 1e-12));
    const Parameter off = make_param({1.0, 0.0}, {{0, 0}, {0, 0}});
    CHECK(!check_self_dual_parameter(off, d, 1e-10));
}

TEST_CASE("-w0 zeta* = zeta on the level-0 hyperplane, all types") {
    Rng rng(23);
    for (auto [k, l] : all_types()) {
        const auto d = AffineDiagram::build(k, l);
        for (int trial = 0; trial < 8; ++trial) {
            const Parameter z = random_level_zero(d, rng);
            CHECK(check_self_dual_parameter(z, d, 1e-10));
        }
    }
}

TEST_CASE("perturbing below the level breaks self-duality the stated way") {
    Rng rng(29);
    const std::vector<std::pair<Kind, int>> cases = {
        {Kind::A, 1}, {Kind::A, 4}, {Kind::D, 5}, {Kind::E, 6}};
    for (auto [k, l] : cases) {
        const auto d = AffineDiagram::build(k, l);
        Parameter z = random_level_zero(d, rng);
        const double eta = 0.5;
        Parameter zp = z;
        zp.re = perturb_below_level(z.re, eta, d);
        CHECK(level_re(zp, d) == doctest::Approx(-eta));
        CHECK(!check_self_dual_parameter(zp, d, 1e-10));
        // the image sits at level +eta, on the other side of the wall
        const Parameter img =
            negate(act_weyl_param(star_param(zp, diagram_involution(d)), longest_element(d), d));
        CHECK(level_re(img, d) == doctest::Approx(eta));
    }
    const auto d = AffineDiagram::build(Kind::A, 1);
    CHECK_THROWS_AS(perturb_below_level(Eigen::VectorXd::Zero(2), -1.0, d), validation_error);
}
