#include <doctest.h>

#include "adhm/adhm_data.hpp"

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

double data_distance(const ADHMData& x, const ADHMData& y) {
    double s = 0.0;
    for (size_t k = 0; k < x.B.size(); ++k) s += (x.B[k] - y.B[k]).squaredNorm();
    for (size_t k = 0; k < x.a.size(); ++k) s += (x.a[k] - y.a[k]).squaredNorm();
    for (size_t k = 0; k < x.b.size(); ++k) s += (x.b[k] - y.b[k]).squaredNorm();
    return std::sqrt(s);
}

bool data_identical(const ADHMData& x, const ADHMData& y) {
    if (x.dual_frame != y.dual_frame) return false;
    for (size_t k = 0; k < x.B.size(); ++k)
        if (x.B[k] != y.B[k]) return false;
    for (size_t k = 0; k < x.a.size(); ++k)
        if (x.a[k] != y.a[k]) return false;
    for (size_t k = 0; k < x.b.size(); ++k)
        if (x.b[k] != y.b[k]) return false;
    return true;
}

}  // namespace

TEST_CASE("random_adhm determinism and shapes") {
    auto d = make_diag(Kind::A, 2);
    const auto v = vec({1, 2, 1}), w = vec({1, 0, 1});
    const ADHMData x1 = random_adhm(d, v, w, 42);
    const ADHMData x2 = random_adhm(d, v, w, 42);
    CHECK(data_identical(x1, x2));
    const ADHMData x3 = random_adhm(d, v, w, 43);
    CHECK(data_distance(x1, x3) > 1e-3);
    x1.check_shapes();

    // degenerate shapes are fine
    const ADHMData z = random_adhm(d, vec({0, 0, 0}), w, 1);
    CHECK(z.frob_norm() == 0.0);
}

TEST_CASE("complex moment map: zero data, 1x1 hand value, trace identity") {
    auto d = make_diag(Kind::A, 1);
    const auto v = vec({1, 1}), w = vec({1, 0});
    {
        const ADHMData x = zero_adhm(d, v, w);
        for (const auto& m : complex_moment_map(x)) CHECK(m.norm() == 0.0);
    }
    {
        // x on the first Omega arrow 0->1, p on its reversal, all else zero.
        // Arrows into 0 carry eps = -1, so mu_C = (-p x, x p).
        ADHMData x = zero_adhm(d, v, w);
        const std::complex<double> xv{0.7, 0.1}, pv{-0.3, 0.5};
        x.B[0](0, 0) = xv;
        x.B[2](0, 0) = pv;
        const auto mu = complex_moment_map(x);
        CHECK(std::abs(mu[0](0, 0) - (-pv * xv)) < 1e-15);
        CHECK(std::abs(mu[1](0, 0) - xv * pv) < 1e-15);
    }
    // sum_i tr(mu_C,i - a_i b_i) = 0: the eps-paired arrow terms cancel
    for (auto [k, l] : {std::pair<Kind, int>{Kind::A, 2}, {Kind::D, 4}}) {
        auto dd = make_diag(k, l);
        Eigen::VectorXi vv = dd->marks(), ww = Eigen::VectorXi::Ones(dd->num_vertices());
        const ADHMData x = random_adhm(dd, vv, ww, 5);
        const auto mu = complex_moment_map(x);
        std::complex<double> tr = 0.0;
        for (int i = 0; i < dd->num_vertices(); ++i)
            tr += (mu[static_cast<size_t>(i)] -
                   x.a[static_cast<size_t>(i)] * x.b[static_cast<size_t>(i)])
                      .trace();
        CHECK(std::abs(tr) < 1e-12 * (1.0 + x.frob_norm() * x.frob_norm()));
    }
}

TEST_CASE("real moment map: hermitian, trace identity") {
    auto d = make_diag(Kind::D, 4);
    Eigen::VectorXi v = d->marks(), w = Eigen::VectorXi::Ones(5);
    const ADHMData x = random_adhm(d, v, w, 9);
    const auto mu = real_moment_map(x);
    double tr = 0.0, ab = 0.0;
    for (int i = 0; i < 5; ++i) {
        const auto& m = mu[static_cast<size_t>(i)];
        CHECK((m - m.adjoint()).norm() < 1e-14 * (1.0 + m.norm()));
        tr += m.trace().real();
        ab += 0.5 * (x.a[static_cast<size_t>(i)].squaredNorm() -
                     x.b[static_cast<size_t>(i)].squaredNorm());
    }
    CHECK(tr == doctest::Approx(ab).epsilon(1e-12));
}

TEST_CASE("residual: zero data against zeta") {
    auto d = make_diag(Kind::A, 1);
    const ADHMData x = zero_adhm(d, vec({1, 1}), vec({1, 0}));
    Parameter z = Parameter::zero(*d);
    CHECK(residual(x, z) == 0.0);
    z.c(0) = {0, 1};
    z.c(1) = {0, -1};
    CHECK(residual(x, z) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("gauge action: identity, composition, unitary residual invariance") {
    auto d = make_diag(Kind::A, 2);
    const auto v = vec({2, 1, 1}), w = vec({1, 1, 0});
    const ADHMData x = random_adhm(d, v, w, 3);
    CHECK(data_identical(gauge_act(identity_gauge(x), x), x));

    const GaugeElement g1 = random_unitary_gauge(v, 100);
    const GaugeElement g2 = random_unitary_gauge(v, 101);
    GaugeElement g12;
    g12.unitary = true;
    for (size_t i = 0; i < g1.g.size(); ++i) g12.g.push_back(g1.g[i] * g2.g[i]);
    CHECK(data_distance(gauge_act(g12, x), gauge_act(g1, gauge_act(g2, x))) < 1e-12);

    Rng rng(55);
    Parameter z = random_level_zero(*d, rng);
    CHECK(residual(gauge_act(g1, x), z) == doctest::Approx(residual(x, z)).epsilon(1e-10));

    GaugeElement bad = identity_gauge(x);
    bad.unitary = false;
    bad.g[0].setZero();
    CHECK_THROWS_AS(gauge_act(bad, x), validation_error);
}

TEST_CASE("dualize_t: exact involution") {
    auto d = make_diag(Kind::A, 2);
    const ADHMData x = random_adhm(d, vec({1, 2, 1}), vec({2, 0, 1}), 77);
    const ADHMData tx = dualize_t(x);
    CHECK(tx.dual_frame != x.dual_frame);
    const ADHMData ttx = dualize_t(tx);
    CHECK(data_identical(ttx, x));
}

TEST_CASE("dualize_t: moment maps flip sign through transpose") {
    Rng rng(31);
    for (auto [k, l] : {std::pair<Kind, int>{Kind::A, 1}, {Kind::A, 3}, {Kind::D, 4}}) {
        auto d = make_diag(k, l);
        Eigen::VectorXi v = d->marks(), w = Eigen::VectorXi::Ones(d->num_vertices());
        for (int trial = 0; trial < 5; ++trial) {
            const ADHMData x = random_adhm(d, v, w, static_cast<std::uint64_t>(trial));
            const Parameter z = random_level_zero(*d, rng);
            const auto [tx, tz] = dualize_t(x, z);
            const auto mx = complex_moment_map(x);
            const auto mtx = complex_moment_map(tx);
            const auto rx = real_moment_map(x);
            const auto rtx = real_moment_map(tx);
            for (int i = 0; i < d->num_vertices(); ++i) {
                CHECK((mtx[static_cast<size_t>(i)] + mx[static_cast<size_t>(i)].transpose())
                          .norm() < 1e-12 * (1.0 + mx[static_cast<size_t>(i)].norm()));
                CHECK((rtx[static_cast<size_t>(i)] + rx[static_cast<size_t>(i)].transpose())
                          .norm() < 1e-12 * (1.0 + rx[static_cast<size_t>(i)].norm()));
            }
            CHECK(residual(tx, tz) == doctest::Approx(residual(x, z)).epsilon(1e-12));
        }
    }
}

TEST_CASE("normalize_frame is a moment-preserving presentation change") {
    auto d = make_diag(Kind::A, 2);
    const ADHMData x = random_adhm(d, vec({1, 1, 1}), vec({1, 0, 0}), 8);
    const ADHMData tx = dualize_t(x);
    const ADHMData ntx = normalize_frame(tx);
    CHECK(!ntx.dual_frame);
    const auto m1 = complex_moment_map(tx);
    const auto m2 = complex_moment_map(ntx);
    for (int i = 0; i < 3; ++i)
        CHECK((m1[static_cast<size_t>(i)] - m2[static_cast<size_t>(i)]).norm() < 1e-14);
    CHECK(data_identical(normalize_frame(x), x));
}

TEST_CASE("apply_star: identity involution leaves data unchanged") {
    auto d = make_diag(Kind::D, 4);
    const auto star = make_star_data(*d, diagram_involution(*d));
    Eigen::VectorXi v = d->marks(), w = vec({1, 0, 2, 0, 1});
    const ADHMData x = random_adhm(d, v, w, 21);
    CHECK(data_identical(apply_star(x, star), x));
}

TEST_CASE("apply_star: residual equivariance under the level permutation") {
    Rng rng(37);
    for (auto [k, l] : {std::pair<Kind, int>{Kind::A, 3}, {Kind::A, 2}, {Kind::E, 6}}) {
        auto d = make_diag(k, l);
        const auto inv = diagram_involution(*d);
        const auto star = make_star_data(*d, inv);
        Eigen::VectorXi v = d->marks();
        Eigen::VectorXi w = Eigen::VectorXi::Ones(d->num_vertices());
        const ADHMData x = random_adhm(d, v, w, 4);
        const Parameter z = random_level_zero(*d, rng);
        const ADHMData sx = apply_star(x, star);
        // mu_C(x*)_i = mu_C(x)_{i*}
        const auto mx = complex_moment_map(x);
        const auto msx = complex_moment_map(sx);
        for (int i = 0; i < d->num_vertices(); ++i)
            CHECK((msx[static_cast<size_t>(i)] - mx[static_cast<size_t>(inv.star(i))]).norm() <
                  1e-12 * (1.0 + x.frob_norm() * x.frob_norm()));
        CHECK(residual(sx, star_param(z, inv)) ==
              doctest::Approx(residual(x, z)).epsilon(1e-10));
    }
}

TEST_CASE("apply_star twice on A_3 returns the data exactly") {
    auto d = make_diag(Kind::A, 3);
    const auto star = make_star_data(*d, diagram_involution(*d));
    const ADHMData x = random_adhm(d, vec({1, 2, 1, 2}), vec({1, 1, 0, 1}), 6);
    const ADHMData ssx = apply_star(apply_star(x, star), star);
    CHECK(data_identical(ssx, x));
}

TEST_CASE("stabilizer dimension") {
    auto d = make_diag(Kind::A, 2);
    {
        // free scalar at one vertex, nothing else
        const ADHMData x = zero_adhm(d, vec({1, 0, 0}), vec({0, 0, 0}));
        CHECK(stabilizer_dimension(x) == 1);
    }
    {
        const ADHMData x = zero_adhm(d, vec({0, 0, 0}), vec({1, 1, 0}));
        CHECK(stabilizer_dimension(x) == 0);
    }
    {
        // zero data: every vertex contributes its full gl(v_i)
        const ADHMData x = zero_adhm(d, vec({1, 2, 0}), vec({0, 0, 0}));
        CHECK(stabilizer_dimension(x) == 5);
    }
}

TEST_CASE("path invariants: zero data, gauge invariance, length-0 blocks") {
    auto d = make_diag(Kind::A, 2);
    const auto v = vec({1, 1, 1}), w = vec({2, 1, 0});
    {
        const ADHMData x = zero_adhm(d, v, w);
        for (const auto& p : path_invariants(x, 3)) CHECK(p.value.norm() == 0.0);
    }
    const ADHMData x = random_adhm(d, v, w, 12);
    const auto inv = path_invariants(x, 3);
    bool found_00 = false;
    for (const auto& p : inv)
        if (p.arrows.empty() && p.src == 0) {
            found_00 = true;
            const CMat expect = x.b[0] * x.a[0];
            CHECK((p.value - expect).norm() < 1e-14);
        }
    CHECK(found_00);

    const ADHMData gx = gauge_act(random_unitary_gauge(v, 500), x);
    const auto inv2 = path_invariants(gx, 3);
    REQUIRE(inv.size() == inv2.size());
    for (size_t k = 0; k < inv.size(); ++k)
        CHECK((inv[k].value - inv2[k].value).norm() < 1e-8 * (1.0 + inv[k].value.norm()));
    CHECK_THROWS_AS(path_invariants(x, 0), validation_error);
}

TEST_CASE("moduli_equal: gauge orbits compare equal, different points do not") {
    auto d = make_diag(Kind::A, 1);
    const auto v = vec({1, 1}), w = vec({1, 1});
    const ADHMData x = random_adhm(d, v, w, 71);
    const ADHMData gx = gauge_act(random_unitary_gauge(v, 72), x);
    CHECK(moduli_equal(x, gx, 1e-6));
    CHECK(moduli_equal(x, x, 1e-6));

    const ADHMData y = random_adhm(d, v, w, 73);
    CHECK(!moduli_equal(x, y, 1e-6));

    const ADHMData z = random_adhm(d, vec({1, 0}), w, 74);
    CHECK_THROWS_AS(moduli_equal(x, z, 1e-6), validation_error);
}
