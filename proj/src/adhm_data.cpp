#include "adhm/adhm_data.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace adhm {

double ADHMData::frob_norm() const {
    double s = 0.0;
    for (const auto& m : B) s += m.squaredNorm();
    for (const auto& m : a) s += m.squaredNorm();
    for (const auto& m : b) s += m.squaredNorm();
    return std::sqrt(s);
}

bool ADHMData::same_shape(const ADHMData& o) const {
    return diagram && o.diagram && diagram->kind() == o.diagram->kind() &&
           diagram->rank() == o.diagram->rank() && v.size() == o.v.size() &&
           (v.array() == o.v.array()).all() && (w.array() == o.w.array()).all() &&
           dual_frame == o.dual_frame;
}

void ADHMData::check_shapes() const {
    const auto& d = diag();
    if (v.size() != d.num_vertices() || w.size() != d.num_vertices())
        throw validation_error("dimension vectors do not match the diagram");
    if (v.minCoeff() < 0 || w.minCoeff() < 0)
        throw validation_error("dimension vectors must be nonnegative");
    if (static_cast<int>(B.size()) != d.num_arrows() ||
        static_cast<int>(a.size()) != d.num_vertices() ||
        static_cast<int>(b.size()) != d.num_vertices())
        throw validation_error("matrix block count mismatch");
    for (int h = 0; h < d.num_arrows(); ++h) {
        if (B[static_cast<size_t>(h)].rows() != v(d.arrow(h).in) ||
            B[static_cast<size_t>(h)].cols() != v(d.arrow(h).out))
            throw validation_error("arrow matrix " + std::to_string(h) + " has wrong shape");
        if (!B[static_cast<size_t>(h)].allFinite())
            throw validation_error("arrow matrix " + std::to_string(h) + " has non-finite entries");
    }
    for (int i = 0; i < d.num_vertices(); ++i) {
        if (a[static_cast<size_t>(i)].rows() != v(i) || a[static_cast<size_t>(i)].cols() != w(i))
            throw validation_error("a[" + std::to_string(i) + "] has wrong shape");
        if (b[static_cast<size_t>(i)].rows() != w(i) || b[static_cast<size_t>(i)].cols() != v(i))
            throw validation_error("b[" + std::to_string(i) + "] has wrong shape");
    }
}

ADHMData zero_adhm(std::shared_ptr<const AffineDiagram> diagram,
                   const Eigen::VectorXi& v, const Eigen::VectorXi& w) {
    ADHMData x;
    x.diagram = std::move(diagram);
    x.v = v;
    x.w = w;
    const auto& d = x.diag();
    x.B.resize(static_cast<size_t>(d.num_arrows()));
    for (int h = 0; h < d.num_arrows(); ++h)
        x.B[static_cast<size_t>(h)] = CMat::Zero(v(d.arrow(h).in), v(d.arrow(h).out));
    x.a.resize(static_cast<size_t>(d.num_vertices()));
    x.b.resize(static_cast<size_t>(d.num_vertices()));
    for (int i = 0; i < d.num_vertices(); ++i) {
        x.a[static_cast<size_t>(i)] = CMat::Zero(v(i), w(i));
        x.b[static_cast<size_t>(i)] = CMat::Zero(w(i), v(i));
    }
    x.check_shapes();
    return x;
}

ADHMData random_adhm(std::shared_ptr<const AffineDiagram> diagram,
                     const Eigen::VectorXi& v, const Eigen::VectorXi& w,
                     std::uint64_t seed) {
    ADHMData x = zero_adhm(std::move(diagram), v, w);
    Rng rng(seed);
    // fill order frozen: arrows by id, then a, then b, row-major
    for (auto& m : x.B)
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index cidx = 0; cidx < m.cols(); ++cidx) m(r, cidx) = rng.cgaussian();
    for (auto& m : x.a)
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index cidx = 0; cidx < m.cols(); ++cidx) m(r, cidx) = rng.cgaussian();
    for (auto& m : x.b)
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index cidx = 0; cidx < m.cols(); ++cidx) m(r, cidx) = rng.cgaussian();
    return x;
}

std::vector<CMat> complex_moment_map(const ADHMData& x) {
    const auto& d = x.diag();
    std::vector<CMat> mu(static_cast<size_t>(d.num_vertices()));
    for (int i = 0; i < d.num_vertices(); ++i) {
        CMat m = x.a[static_cast<size_t>(i)] * x.b[static_cast<size_t>(i)];
        for (int h : d.arrows_in(i))
            m += x.eps(h) * x.B[static_cast<size_t>(h)] * x.B[static_cast<size_t>(d.reverse(h))];
        mu[static_cast<size_t>(i)] = std::move(m);
    }
    return mu;
}

std::vector<CMat> real_moment_map(const ADHMData& x) {
    const auto& d = x.diag();
    std::vector<CMat> mu(static_cast<size_t>(d.num_vertices()));
    for (int i = 0; i < d.num_vertices(); ++i) {
        CMat m = x.a[static_cast<size_t>(i)] * x.a[static_cast<size_t>(i)].adjoint() -
                 x.b[static_cast<size_t>(i)].adjoint() * x.b[static_cast<size_t>(i)];
        for (int h : d.arrows_in(i))
            m += x.B[static_cast<size_t>(h)] * x.B[static_cast<size_t>(h)].adjoint();
        for (int h : d.arrows_out(i))
            m -= x.B[static_cast<size_t>(h)].adjoint() * x.B[static_cast<size_t>(h)];
        mu[static_cast<size_t>(i)] = 0.5 * m;
    }
    return mu;
}

double residual(const ADHMData& x, const Parameter& z) {
    const auto mc = complex_moment_map(x);
    const auto mr = real_moment_map(x);
    double s = 0.0;
    for (int i = 0; i < x.diag().num_vertices(); ++i) {
        const Eigen::Index n = x.v(i);
        s += (mc[static_cast<size_t>(i)] - z.c(i) * CMat::Identity(n, n)).squaredNorm();
        s += (mr[static_cast<size_t>(i)] - z.re(i) * CMat::Identity(n, n)).squaredNorm();
    }
    return std::sqrt(s);
}

double residual_complex(const ADHMData& x, const Parameter& z) {
    const auto mc = complex_moment_map(x);
    double s = 0.0;
    for (int i = 0; i < x.diag().num_vertices(); ++i) {
        const Eigen::Index n = x.v(i);
        s += (mc[static_cast<size_t>(i)] - z.c(i) * CMat::Identity(n, n)).squaredNorm();
    }
    return std::sqrt(s);
}

GaugeElement identity_gauge(const ADHMData& x) {
    GaugeElement g;
    g.unitary = true;
    g.g.resize(static_cast<size_t>(x.v.size()));
    for (int i = 0; i < x.v.size(); ++i)
        g.g[static_cast<size_t>(i)] = CMat::Identity(x.v(i), x.v(i));
    return g;
}

GaugeElement random_unitary_gauge(const Eigen::VectorXi& v, std::uint64_t seed) {
    Rng rng(seed);
    GaugeElement g;
    g.unitary = true;
    g.g.resize(static_cast<size_t>(v.size()));
    for (int i = 0; i < v.size(); ++i) {
        const Eigen::Index n = v(i);
        CMat z(n, n);
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index c = 0; c < n; ++c) z(r, c) = rng.cgaussian();
        if (n == 0) {
            g.g[static_cast<size_t>(i)] = z;
            continue;
        }
        Eigen::HouseholderQR<CMat> qr(z);
        CMat q = qr.householderQ() * CMat::Identity(n, n);
        CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (Eigen::Index k = 0; k < n; ++k) {
            const std::complex<double> rk = r(k, k);
            q.col(k) *= (std::abs(rk) > 0) ? rk / std::abs(rk) : 1.0;
        }
        g.g[static_cast<size_t>(i)] = q;
    }
    return g;
}

ADHMData gauge_act(const GaugeElement& g, const ADHMData& x) {
    const auto& d = x.diag();
    std::vector<CMat> ginv(g.g.size());
    for (size_t i = 0; i < g.g.size(); ++i) {
        if (g.g[i].rows() == 0) {
            ginv[i] = g.g[i];
            continue;
        }
        if (g.unitary) {
            ginv[i] = g.g[i].adjoint();
        } else {
            Eigen::FullPivLU<CMat> lu(g.g[i]);
            if (!lu.isInvertible()) throw validation_error("singular gauge element");
            ginv[i] = lu.inverse();
        }
    }
    ADHMData y = x;
    for (int h = 0; h < d.num_arrows(); ++h)
        y.B[static_cast<size_t>(h)] = g.g[static_cast<size_t>(d.arrow(h).in)] *
                                      x.B[static_cast<size_t>(h)] *
                                      ginv[static_cast<size_t>(d.arrow(h).out)];
    for (int i = 0; i < d.num_vertices(); ++i) {
        y.a[static_cast<size_t>(i)] = g.g[static_cast<size_t>(i)] * x.a[static_cast<size_t>(i)];
        y.b[static_cast<size_t>(i)] = x.b[static_cast<size_t>(i)] * ginv[static_cast<size_t>(i)];
    }
    return y;
}

ADHMData dualize_t(const ADHMData& x) {
    const auto& d = x.diag();
    const double s = x.dual_frame ? -1.0 : 1.0;
    ADHMData y = x;
    y.dual_frame = !x.dual_frame;
    for (int h = 0; h < d.num_arrows(); ++h)
        y.B[static_cast<size_t>(h)] = x.B[static_cast<size_t>(d.reverse(h))].transpose();
    for (int i = 0; i < d.num_vertices(); ++i) {
        y.a[static_cast<size_t>(i)] = s * x.b[static_cast<size_t>(i)].transpose();
        y.b[static_cast<size_t>(i)] = -s * x.a[static_cast<size_t>(i)].transpose();
    }
    return y;
}

std::pair<ADHMData, Parameter> dualize_t(const ADHMData& x, const Parameter& z) {
    return {dualize_t(x), negate(z)};
}

ADHMData normalize_frame(const ADHMData& x) {
    if (!x.dual_frame) return x;
    const auto& d = x.diag();
    ADHMData y = x;
    y.dual_frame = false;
    for (int h = d.num_edges(); h < d.num_arrows(); ++h)
        y.B[static_cast<size_t>(h)] = -x.B[static_cast<size_t>(h)];
    return y;
}

ADHMData apply_star(const ADHMData& x, const StarData& star, const WFrameTwist* wtwist) {
    const auto& d = x.diag();
    ADHMData y = x;
    const auto st = [&](int i) { return star.vertex[static_cast<size_t>(i)]; };
    for (int i = 0; i < d.num_vertices(); ++i) y.v(i) = x.v(st(i));
    if (wtwist) {
        for (int i = 0; i < d.num_vertices(); ++i)
            if (x.w(st(i)) != x.w(i))
                throw validation_error("W-twisted star needs a star-symmetric framing");
    } else {
        for (int i = 0; i < d.num_vertices(); ++i) y.w(i) = x.w(st(i));
    }
    for (int h = 0; h < d.num_arrows(); ++h)
        y.B[static_cast<size_t>(h)] =
            static_cast<double>(star.sign[static_cast<size_t>(h)]) *
            x.B[static_cast<size_t>(star.arrow[static_cast<size_t>(h)])];
    for (int i = 0; i < d.num_vertices(); ++i) {
        CMat ai = x.a[static_cast<size_t>(st(i))];
        CMat bi = x.b[static_cast<size_t>(st(i))];
        if (wtwist) {
            const CMat& u = wtwist->u[static_cast<size_t>(i)];  // W_i -> W_{i*}
            if (u.rows() != x.w(st(i)) || u.cols() != x.w(i))
                throw validation_error("W twist at vertex " + std::to_string(i) +
                                       " has wrong shape");
            ai = ai * u;
            if (u.rows() > 0) bi = u.fullPivLu().solve(bi);
        }
        y.a[static_cast<size_t>(i)] = std::move(ai);
        y.b[static_cast<size_t>(i)] = std::move(bi);
    }
    y.check_shapes();
    return y;
}

int stabilizer_dimension(const ADHMData& x, double rank_tol) {
    const auto& d = x.diag();
    const int n = d.num_vertices();
    std::vector<int> off(static_cast<size_t>(n) + 1, 0);
    for (int i = 0; i < n; ++i) off[static_cast<size_t>(i) + 1] = off[static_cast<size_t>(i)] + x.v(i) * x.v(i);
    const int N = off[static_cast<size_t>(n)];
    if (N == 0) return 0;

    // rows: xi_in B_h - B_h xi_out = 0, xi_i a_i = 0, b_i xi_i = 0
    int M = 0;
    for (int h = 0; h < d.num_arrows(); ++h)
        M += x.v(d.arrow(h).in) * x.v(d.arrow(h).out);
    for (int i = 0; i < n; ++i) M += 2 * x.v(i) * x.w(i);
    if (M == 0) return N;  // no constraints at all

    CMat K = CMat::Zero(M, N);
    const auto col = [&](int i, Eigen::Index r, Eigen::Index c) {
        return off[static_cast<size_t>(i)] + static_cast<int>(r * x.v(i) + c);
    };
    int row = 0;
    for (int h = 0; h < d.num_arrows(); ++h) {
        const int vin = d.arrow(h).in, vout = d.arrow(h).out;
        const CMat& Bh = x.B[static_cast<size_t>(h)];
        for (Eigen::Index r = 0; r < x.v(vin); ++r)
            for (Eigen::Index c = 0; c < x.v(vout); ++c) {
                // d/dxi [ xi_vin B - B xi_vout ](r,c)
                for (Eigen::Index k = 0; k < x.v(vin); ++k)
                    K(row, col(vin, r, k)) += Bh(k, c);
                for (Eigen::Index k = 0; k < x.v(vout); ++k)
                    K(row, col(vout, k, c)) -= Bh(r, k);
                ++row;
            }
    }
    for (int i = 0; i < n; ++i) {
        const CMat& ai = x.a[static_cast<size_t>(i)];
        const CMat& bi = x.b[static_cast<size_t>(i)];
        for (Eigen::Index r = 0; r < x.v(i); ++r)
            for (Eigen::Index c = 0; c < x.w(i); ++c) {
                for (Eigen::Index k = 0; k < x.v(i); ++k) K(row, col(i, r, k)) += ai(k, c);
                ++row;
            }
        for (Eigen::Index r = 0; r < x.w(i); ++r)
            for (Eigen::Index c = 0; c < x.v(i); ++c) {
                for (Eigen::Index k = 0; k < x.v(i); ++k) K(row, col(i, k, c)) += bi(r, k);
                ++row;
            }
    }
    Eigen::JacobiSVD<CMat> svd(K);
    const auto& sv = svd.singularValues();
    const double cut = rank_tol * (sv.size() > 0 ? sv(0) : 0.0);
    int rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > cut) ++rank;
    return N - rank;
}

PathInvariantSet path_invariants(const ADHMData& x, int max_len) {
    if (max_len < 1) throw validation_error("path length bound must be >= 1");
    const auto& d = x.diag();
    PathInvariantSet out;
    for (int i = 0; i < d.num_vertices(); ++i) {
        if (x.w(i) == 0 || x.v(i) == 0) continue;
        PathInvariant p;
        p.src = p.dst = i;
        p.value = x.b[static_cast<size_t>(i)] * x.a[static_cast<size_t>(i)];
        out.push_back(std::move(p));
    }
    // depth-first over arrow sequences, in arrow-id order for determinism
    struct Frame {
        int vertex;
        CMat accum;  // product B_{h_k}...B_{h_1} a_src
    };
    for (int src = 0; src < d.num_vertices(); ++src) {
        if (x.w(src) == 0 || x.v(src) == 0) continue;
        std::vector<int> arrows;
        std::function<void(int, const CMat&, int)> dfs = [&](int at, const CMat& acc, int depth) {
            if (depth == max_len) return;
            for (int h : d.arrows_out(at)) {
                const int nxt = d.arrow(h).in;
                if (x.v(nxt) == 0) continue;
                CMat acc2 = x.B[static_cast<size_t>(h)] * acc;
                arrows.push_back(h);
                if (x.w(nxt) > 0) {
                    PathInvariant p;
                    p.src = src;
                    p.dst = nxt;
                    p.arrows = arrows;
                    p.value = x.b[static_cast<size_t>(nxt)] * acc2;
                    out.push_back(std::move(p));
                }
                dfs(nxt, acc2, depth + 1);
                arrows.pop_back();
            }
        };
        dfs(src, x.a[static_cast<size_t>(src)], 0);
    }
    return out;
}

namespace {

// one Procrustes sweep: for each vertex, the unitary maximizing
// Re tr(g_i T_i) with everything else held fixed
double procrustes_pass(const ADHMData& x, const ADHMData& y, GaugeElement& g) {
    const auto& d = x.diag();
    for (int i = 0; i < d.num_vertices(); ++i) {
        const Eigen::Index n = x.v(i);
        if (n == 0) continue;
        CMat T = CMat::Zero(n, n);
        for (int h : d.arrows_in(i)) {
            const int o = d.arrow(h).out;
            T += x.B[static_cast<size_t>(h)] * g.g[static_cast<size_t>(o)].adjoint() *
                 y.B[static_cast<size_t>(h)].adjoint();
        }
        for (int h : d.arrows_out(i)) {
            const int t = d.arrow(h).in;
            T += x.B[static_cast<size_t>(h)].adjoint() * g.g[static_cast<size_t>(t)].adjoint() *
                 y.B[static_cast<size_t>(h)];
        }
        T += x.a[static_cast<size_t>(i)] * y.a[static_cast<size_t>(i)].adjoint();
        T += x.b[static_cast<size_t>(i)].adjoint() * y.b[static_cast<size_t>(i)];
        Eigen::JacobiSVD<CMat> svd(T, Eigen::ComputeFullU | Eigen::ComputeFullV);
        g.g[static_cast<size_t>(i)] = svd.matrixV() * svd.matrixU().adjoint();
    }
    ADHMData gx = gauge_act(g, x);
    double s = 0.0;
    for (size_t k = 0; k < gx.B.size(); ++k) s += (gx.B[k] - y.B[k]).squaredNorm();
    for (size_t k = 0; k < gx.a.size(); ++k) s += (gx.a[k] - y.a[k]).squaredNorm();
    for (size_t k = 0; k < gx.b.size(); ++k) s += (gx.b[k] - y.b[k]).squaredNorm();
    return std::sqrt(s);
}

}  // namespace

std::pair<double, GaugeElement> best_alignment(const ADHMData& x, const ADHMData& y,
                                               const ModuliOptions& opt) {
    if (!x.same_shape(y)) throw validation_error("alignment needs matching (v, w) and frame");
    double best = std::numeric_limits<double>::infinity();
    GaugeElement bestg = identity_gauge(x);
    for (int trial = 0; trial <= opt.restarts; ++trial) {
        GaugeElement g = trial == 0 ? identity_gauge(x)
                                    : random_unitary_gauge(x.v, opt.seed + static_cast<std::uint64_t>(trial));
        g.unitary = true;
        double prev = std::numeric_limits<double>::infinity();
        for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
            const double dist = procrustes_pass(x, y, g);
            if (dist < best) {
                best = dist;
                bestg = g;
            }
            if (dist < 1e-14 || prev - dist < 1e-14 + 1e-9 * dist) break;
            prev = dist;
        }
    }
    return {best / (1.0 + std::max(x.frob_norm(), y.frob_norm())), bestg};
}

double align_distance(const ADHMData& x, const ADHMData& y, const ModuliOptions& opt) {
    return best_alignment(x, y, opt).first;
}

Eigen::Index complex_dimension(const ADHMData& proto) {
    Eigen::Index n = 0;
    for (const auto& m : proto.B) n += m.size();
    for (const auto& m : proto.a) n += m.size();
    for (const auto& m : proto.b) n += m.size();
    return n;
}

Eigen::VectorXcd pack_complex(const ADHMData& x) {
    Eigen::VectorXcd out(complex_dimension(x));
    Eigen::Index k = 0;
    auto put = [&](const CMat& m) {
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c) out(k++) = m(r, c);
    };
    for (const auto& m : x.B) put(m);
    for (const auto& m : x.a) put(m);
    for (const auto& m : x.b) put(m);
    return out;
}

ADHMData unpack_complex(const ADHMData& proto, const Eigen::VectorXcd& vec) {
    ADHMData x = proto;
    Eigen::Index k = 0;
    auto get = [&](CMat& m) {
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = vec(k++);
    };
    for (auto& m : x.B) get(m);
    for (auto& m : x.a) get(m);
    for (auto& m : x.b) get(m);
    return x;
}

ADHMData lincomb(std::complex<double> alpha, const ADHMData& x, std::complex<double> beta,
                 const ADHMData& y) {
    if (!x.same_shape(y)) throw validation_error("lincomb needs matching shapes");
    ADHMData z = x;
    for (size_t k = 0; k < z.B.size(); ++k) z.B[k] = alpha * x.B[k] + beta * y.B[k];
    for (size_t k = 0; k < z.a.size(); ++k) z.a[k] = alpha * x.a[k] + beta * y.a[k];
    for (size_t k = 0; k < z.b.size(); ++k) z.b[k] = alpha * x.b[k] + beta * y.b[k];
    return z;
}

bool moduli_equal(const ADHMData& x, const ADHMData& y, double tol, const ModuliOptions& opt) {
    if (!x.same_shape(y)) throw validation_error("moduli comparison needs matching (v, w)");
    const auto px = path_invariants(x, opt.invariant_len);
    const auto py = path_invariants(y, opt.invariant_len);
    if (px.size() != py.size()) return false;
    double scale = 1.0;
    for (const auto& p : px) scale = std::max(scale, p.value.cwiseAbs().maxCoeff());
    for (const auto& p : py) scale = std::max(scale, p.value.cwiseAbs().maxCoeff());
    for (size_t k = 0; k < px.size(); ++k) {
        if ((px[k].value - py[k].value).cwiseAbs().maxCoeff() > tol * scale) return false;
    }
    return align_distance(x, y, opt) <= tol;
}

}  // namespace adhm
