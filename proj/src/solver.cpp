#include "adhm/solver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace adhm {

namespace {

// flat real coordinates on the data space: Re/Im of every entry of every
// block, arrows first, then a, then b
struct Packing {
    explicit Packing(const ADHMData& x) : proto(x) {
        count = 0;
        for (const auto& m : x.B) count += 2 * m.size();
        for (const auto& m : x.a) count += 2 * m.size();
        for (const auto& m : x.b) count += 2 * m.size();
    }

    Eigen::VectorXd pack(const ADHMData& x) const {
        Eigen::VectorXd out(count);
        Eigen::Index k = 0;
        auto put = [&](const CMat& m) {
            for (Eigen::Index r = 0; r < m.rows(); ++r)
                for (Eigen::Index c = 0; c < m.cols(); ++c) {
                    out(k++) = m(r, c).real();
                    out(k++) = m(r, c).imag();
                }
        };
        for (const auto& m : x.B) put(m);
        for (const auto& m : x.a) put(m);
        for (const auto& m : x.b) put(m);
        return out;
    }

    ADHMData unpack(const Eigen::VectorXd& xv) const {
        ADHMData x = proto;
        Eigen::Index k = 0;
        auto get = [&](CMat& m) {
            for (Eigen::Index r = 0; r < m.rows(); ++r)
                for (Eigen::Index c = 0; c < m.cols(); ++c) {
                    m(r, c) = {xv(k), xv(k + 1)};
                    k += 2;
                }
        };
        for (auto& m : x.B) get(m);
        for (auto& m : x.a) get(m);
        for (auto& m : x.b) get(m);
        return x;
    }

    ADHMData proto;
    Eigen::Index count = 0;
};

void append_block(Eigen::VectorXd& out, Eigen::Index& k, const CMat& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            out(k++) = m(r, c).real();
            out(k++) = m(r, c).imag();
        }
}

// stacked residual entries: complex then real moment map, vertex by vertex
Eigen::VectorXd moment_residual_vec(const ADHMData& x, const Parameter& z, bool complex_only) {
    const auto mc = complex_moment_map(x);
    std::vector<CMat> mr;
    if (!complex_only) mr = real_moment_map(x);
    Eigen::Index M = 0;
    for (int i = 0; i < x.diag().num_vertices(); ++i)
        M += (complex_only ? 2 : 4) * static_cast<Eigen::Index>(x.v(i)) * x.v(i);
    Eigen::VectorXd out(M);
    Eigen::Index k = 0;
    for (int i = 0; i < x.diag().num_vertices(); ++i) {
        const Eigen::Index n = x.v(i);
        append_block(out, k, mc[static_cast<size_t>(i)] - z.c(i) * CMat::Identity(n, n));
        if (!complex_only)
            append_block(out, k, mr[static_cast<size_t>(i)] - z.re(i) * CMat::Identity(n, n));
    }
    return out;
}

// The moment maps are quadratic in the flat coordinates, so a central
// difference with unit step is the exact Jacobian.
Eigen::MatrixXd moment_jacobian(const Packing& pk, const Eigen::VectorXd& xv,
                                const Parameter& z, bool complex_only) {
    const Eigen::Index N = pk.count;
    const Eigen::VectorXd f0 = moment_residual_vec(pk.unpack(xv), z, complex_only);
    Eigen::MatrixXd J(f0.size(), N);
    for (Eigen::Index kcol = 0; kcol < N; ++kcol) {
        Eigen::VectorXd xp = xv, xm = xv;
        xp(kcol) += 1.0;
        xm(kcol) -= 1.0;
        J.col(kcol) = 0.5 * (moment_residual_vec(pk.unpack(xp), z, complex_only) -
                             moment_residual_vec(pk.unpack(xm), z, complex_only));
    }
    return J;
}

SolveResult lm_minimize(const Packing& pk, Eigen::VectorXd xv, const Parameter& z,
                        bool complex_only, int max_iters, double tol) {
    Eigen::VectorXd r = moment_residual_vec(pk.unpack(xv), z, complex_only);
    double rn = r.norm();
    double lambda = 1e-3;
    int it = 0;
    for (; it < max_iters && rn > tol; ++it) {
        const Eigen::MatrixXd J = moment_jacobian(pk, xv, z, complex_only);
        const Eigen::MatrixXd JtJ = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * r;
        bool stepped = false;
        for (int tries = 0; tries < 60; ++tries) {
            Eigen::MatrixXd A = JtJ;
            A.diagonal().array() += lambda;
            const Eigen::VectorXd dlt = A.ldlt().solve(-g);
            const Eigen::VectorXd xn = xv + dlt;
            const Eigen::VectorXd rnew = moment_residual_vec(pk.unpack(xn), z, complex_only);
            if (rnew.norm() < rn) {
                xv = xn;
                r = rnew;
                rn = rnew.norm();
                lambda = std::max(lambda / 3.0, 1e-14);
                stepped = true;
                break;
            }
            lambda *= 4.0;
            if (lambda > 1e14) break;
        }
        if (!stepped) break;
    }
    SolveResult res;
    res.data = pk.unpack(xv);
    res.residual = rn;
    res.iters = it;
    res.converged = rn <= tol;
    return res;
}

}  // namespace

SolveResult rebalance_real(const ADHMData& x, const Parameter& zeta, const SolveOptions& opts) {
    const auto& d = x.diag();
    ADHMData cur = x;
    auto phi = [&](const ADHMData& y) {
        const auto mr = real_moment_map(y);
        double s = 0.0;
        for (int i = 0; i < d.num_vertices(); ++i) {
            const Eigen::Index n = y.v(i);
            s += (mr[static_cast<size_t>(i)] - zeta.re(i) * CMat::Identity(n, n)).squaredNorm();
        }
        return s;
    };
    double f = phi(cur);
    double tau = 0.1;
    int it = 0;
    for (; it < opts.rebalance_max_iters; ++it) {
        if (std::sqrt(f) <= opts.tol) break;
        const auto mr = real_moment_map(cur);
        GaugeElement g;
        g.unitary = false;
        g.g.resize(static_cast<size_t>(d.num_vertices()));
        bool improved = false;
        for (int tries = 0; tries < 50; ++tries) {
            for (int i = 0; i < d.num_vertices(); ++i) {
                const Eigen::Index n = cur.v(i);
                CMat E = mr[static_cast<size_t>(i)] - zeta.re(i) * CMat::Identity(n, n);
                if (n == 0) {
                    g.g[static_cast<size_t>(i)] = E;
                    continue;
                }
                Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (E + E.adjoint()));
                const Eigen::VectorXd ev = (-tau * es.eigenvalues()).array().exp();
                g.g[static_cast<size_t>(i)] =
                    es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
            }
            ADHMData nxt = gauge_act(g, cur);
            const double fn = phi(nxt);
            if (fn < f) {
                cur = std::move(nxt);
                f = fn;
                tau = std::min(tau * 1.3, 10.0);
                improved = true;
                break;
            }
            tau *= 0.4;
            if (tau < 1e-16) break;
        }
        if (!improved) break;
    }
    SolveResult res;
    res.data = std::move(cur);
    res.residual = std::sqrt(f);
    res.iters = it;
    res.converged = res.residual <= opts.tol;
    return res;
}

SolveResult polish(const ADHMData& x, const Parameter& zeta, const SolveOptions& opts) {
    const Packing pk(x);
    return lm_minimize(pk, pk.pack(x), zeta, false, opts.max_iters, opts.tol);
}

SolveResult solve_in_subspace(const ADHMData& proto, const Eigen::MatrixXcd& basis,
                              const Eigen::VectorXcd& y0, const Parameter& zeta,
                              const SolveOptions& opts) {
    if (basis.rows() != complex_dimension(proto))
        throw validation_error("subspace basis does not match the data space");
    const Eigen::Index dim = basis.cols();
    // real coordinates on the subspace
    auto to_data = [&](const Eigen::VectorXd& t) {
        Eigen::VectorXcd y(dim);
        for (Eigen::Index k = 0; k < dim; ++k) y(k) = {t(2 * k), t(2 * k + 1)};
        return unpack_complex(proto, basis * y);
    };
    Eigen::VectorXd t(2 * dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        t(2 * k) = y0(k).real();
        t(2 * k + 1) = y0(k).imag();
    }
    Eigen::VectorXd r = moment_residual_vec(to_data(t), zeta, false);
    double rn = r.norm();
    double lambda = 1e-3;
    int it = 0;
    for (; it < opts.max_iters && rn > opts.tol; ++it) {
        Eigen::MatrixXd J(r.size(), 2 * dim);
        for (Eigen::Index k = 0; k < 2 * dim; ++k) {
            Eigen::VectorXd tp = t, tm = t;
            tp(k) += 1.0;
            tm(k) -= 1.0;
            J.col(k) = 0.5 * (moment_residual_vec(to_data(tp), zeta, false) -
                              moment_residual_vec(to_data(tm), zeta, false));
        }
        const Eigen::MatrixXd JtJ = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * r;
        bool stepped = false;
        for (int tries = 0; tries < 60; ++tries) {
            Eigen::MatrixXd A = JtJ;
            A.diagonal().array() += lambda;
            const Eigen::VectorXd tn = t + A.ldlt().solve(-g).eval();
            const Eigen::VectorXd rnew = moment_residual_vec(to_data(tn), zeta, false);
            if (rnew.norm() < rn) {
                t = tn;
                r = rnew;
                rn = rnew.norm();
                lambda = std::max(lambda / 3.0, 1e-14);
                stepped = true;
                break;
            }
            lambda *= 4.0;
            if (lambda > 1e14) break;
        }
        if (!stepped) break;
    }
    SolveResult res;
    res.data = to_data(t);
    res.residual = rn;
    res.iters = it;
    res.converged = rn <= opts.tol;
    return res;
}

SolveResult solve(std::shared_ptr<const AffineDiagram> diagram, const Eigen::VectorXi& v,
                  const Eigen::VectorXi& w, const Parameter& zeta, std::uint64_t seed,
                  const SolveOptions& opts) {
    if (v.sum() > 0) {
        const double lr = std::abs(level_re(zeta, *diagram));
        const double lc = std::abs(level_c(zeta, *diagram));
        const double scale = 1.0 + zeta.re.cwiseAbs().maxCoeff() + zeta.c.cwiseAbs().maxCoeff();
        if (lr > opts.level_tol * scale || lc > opts.level_tol * scale)
            throw validation_error("moment-map level is off the zeta . delta = 0 hyperplane");
    }
    ADHMData x0 = random_adhm(std::move(diagram), v, w, seed);
    const Packing pk(x0);
    if (pk.count == 0) {
        // nothing to vary; the residual is whatever the empty data gives
        SolveResult res;
        res.residual = residual(x0, zeta);
        res.data = std::move(x0);
        res.converged = res.residual <= opts.tol;
        return res;
    }
    if (opts.strategy == SolveStrategy::full_least_squares)
        return lm_minimize(pk, pk.pack(x0), zeta, false, opts.max_iters, opts.tol);

    // two-stage: complex equation by least squares, then the real one by
    // Kempf-Ness inside the complexified orbit
    SolveResult stage1 = lm_minimize(pk, pk.pack(x0), zeta, true, opts.max_iters,
                                     std::min(opts.tol, 1e-12));
    if (!stage1.converged) {
        stage1.converged = false;
        stage1.residual = residual(stage1.data, zeta);
        return stage1;
    }
    SolveOptions kn = opts;
    kn.rebalance_max_iters = std::min(opts.rebalance_max_iters, 5000);
    SolveResult stage2 = rebalance_real(stage1.data, zeta, kn);
    stage2.residual = residual(stage2.data, zeta);
    stage2.converged = stage2.residual <= opts.tol;
    if (stage2.converged) return stage2;
    // the descent can stall on a non-stable orbit; polish off the orbit
    return lm_minimize(pk, pk.pack(stage2.data), zeta, false, opts.max_iters, opts.tol);
}

int expected_tangent_dimension(const Eigen::VectorXi& v, const Eigen::VectorXi& w,
                               const AffineDiagram& d) {
    const Eigen::VectorXi cv = d.cartan() * v;
    return 2 * (2 * v.dot(w) - v.dot(cv));
}

int tangent_dimension(const ADHMData& x, const Parameter& zeta, double rank_tol) {
    const double res = residual(x, zeta);
    if (res > 1e-8 * (1.0 + x.frob_norm()))
        throw validation_error("tangent space requested away from the level set (residual " +
                               std::to_string(res) + ")");
    const Packing pk(x);
    const Eigen::Index N = pk.count;
    if (N == 0) return 0;
    const Eigen::VectorXd xv = pk.pack(x);
    const Eigen::MatrixXd J = moment_jacobian(pk, xv, zeta, false);

    Eigen::JacobiSVD<Eigen::MatrixXd> svdJ(J);
    int rankJ = 0;
    {
        const auto& sv = svdJ.singularValues();
        const double cut = sv.size() ? rank_tol * sv(0) : 0.0;
        for (Eigen::Index k = 0; k < sv.size(); ++k)
            if (sv(k) > cut) ++rankJ;
    }
    const int nullity = static_cast<int>(N) - rankJ;

    // unitary gauge directions: anti-Hermitian xi per vertex
    const auto& d = x.diag();
    int gdim = 0;
    for (int i = 0; i < d.num_vertices(); ++i) gdim += x.v(i) * x.v(i);
    Eigen::MatrixXd G(N, gdim);
    int colidx = 0;
    for (int i = 0; i < d.num_vertices(); ++i) {
        const Eigen::Index n = x.v(i);
        std::vector<CMat> basis;
        for (Eigen::Index k = 0; k < n; ++k) {
            CMat m = CMat::Zero(n, n);
            m(k, k) = std::complex<double>(0, 1);
            basis.push_back(m);
        }
        for (Eigen::Index k = 0; k < n; ++k)
            for (Eigen::Index l = k + 1; l < n; ++l) {
                CMat m = CMat::Zero(n, n);
                m(k, l) = 1;
                m(l, k) = -1;
                basis.push_back(m);
                CMat m2 = CMat::Zero(n, n);
                m2(k, l) = std::complex<double>(0, 1);
                m2(l, k) = std::complex<double>(0, 1);
                basis.push_back(m2);
            }
        for (const auto& xi : basis) {
            ADHMData dir = zero_adhm(x.diagram, x.v, x.w);
            for (int h = 0; h < d.num_arrows(); ++h) {
                const int vin = d.arrow(h).in, vout = d.arrow(h).out;
                if (vin == i) dir.B[static_cast<size_t>(h)] += xi * x.B[static_cast<size_t>(h)];
                if (vout == i) dir.B[static_cast<size_t>(h)] -= x.B[static_cast<size_t>(h)] * xi;
            }
            dir.a[static_cast<size_t>(i)] = xi * x.a[static_cast<size_t>(i)];
            dir.b[static_cast<size_t>(i)] = -x.b[static_cast<size_t>(i)] * xi;
            G.col(colidx++) = pk.pack(dir);
        }
    }
    int rankG = 0;
    if (gdim > 0) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svdG(G);
        const auto& sv = svdG.singularValues();
        const double cut = sv.size() ? rank_tol * sv(0) : 0.0;
        for (Eigen::Index k = 0; k < sv.size(); ++k)
            if (sv(k) > cut) ++rankG;
    }
    return nullity - rankG;
}

}  // namespace adhm
