#include "adhm/reflection.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace adhm {

Eigen::VectorXi reflected_dim(const Eigen::VectorXi& v, const Eigen::VectorXi& w, int i,
                              const AffineDiagram& d) {
    Eigen::VectorXi out = v;
    int s = w(i) - v(i);
    for (int j = 0; j < d.num_vertices(); ++j) s += d.adjacency()(i, j) * v(j);
    out(i) = s;
    return out;
}

Eigen::VectorXi word_dimension_transport(const Eigen::VectorXi& v, const Eigen::VectorXi& w,
                                         const WeylWord& word, const AffineDiagram& d) {
    Eigen::VectorXi cur = v;
    for (size_t k = 0; k < word.size(); ++k) {
        cur = reflected_dim(cur, w, word[k], d);
        if (cur.minCoeff() < 0)
            throw validation_error("dimension transport went negative at step " +
                                   std::to_string(k));
    }
    return cur;
}

std::pair<ADHMData, Parameter> simple_reflection_functor(const ADHMData& x, int vertex,
                                                         const Parameter& zeta,
                                                         const ReflectionOptions& opts) {
    const auto& d = x.diag();
    const int i = vertex;
    if (i <= 0 || i >= d.num_vertices())
        throw validation_error("reflection functor vertex must be a finite vertex");
    const std::complex<double> zc = zeta.c(i);
    const double zscale = 1.0 + zeta.c.cwiseAbs().maxCoeff();
    if (std::abs(zc) <= opts.admissible_tol * zscale)
        throw validation_error("reflection at vertex " + std::to_string(i) +
                               " is inadmissible: zeta_C vanishes there");

    // E_i = (+)_{in(h)=i} V_out(h)  (+)  W_i, slots in arrow-id order.
    const auto& in_arrows = d.arrows_in(i);
    Eigen::Index mE = x.w(i);
    for (int h : in_arrows) mE += x.v(d.arrow(h).out);
    const Eigen::Index vi = x.v(i);

    CMat tau = CMat::Zero(vi, mE);
    CMat sig = CMat::Zero(mE, vi);
    {
        Eigen::Index off = 0;
        for (int h : in_arrows) {
            const Eigen::Index nb = x.v(d.arrow(h).out);
            tau.middleCols(off, nb) = x.eps(h) * x.B[static_cast<size_t>(h)];
            sig.middleRows(off, nb) = x.B[static_cast<size_t>(d.reverse(h))];
            off += nb;
        }
        tau.rightCols(x.w(i)) = x.a[static_cast<size_t>(i)];
        sig.bottomRows(x.w(i)) = x.b[static_cast<size_t>(i)];
    }

    // tau sigma is the i-th complex moment map block; the input must sit on
    // the zeta_C level set.
    const double onlevel =
        (tau * sig - zc * CMat::Identity(vi, vi)).norm();
    if (onlevel > opts.level_tol * (1.0 + x.frob_norm() * x.frob_norm()))
        throw validation_error("reflection input is off the complex level set at vertex " +
                               std::to_string(i));

    const Eigen::VectorXi v_new = reflected_dim(x.v, x.w, i, d);
    if (v_new(i) < 0)
        throw validation_error("reflection target dimension is negative at vertex " +
                               std::to_string(i));

    // kernel of tau, orthonormal basis
    Eigen::JacobiSVD<CMat> svd(tau, Eigen::ComputeFullV);
    Eigen::Index rank = 0;
    {
        const auto& sv = svd.singularValues();
        const double cut = sv.size() ? opts.rank_tol * sv(0) : 0.0;
        for (Eigen::Index k = 0; k < sv.size(); ++k)
            if (sv(k) > cut) ++rank;
    }
    if (rank != vi)
        throw numeric_error("tau is not surjective at vertex " + std::to_string(i) +
                            "; the moduli point is not regular enough to reflect");
    const Eigen::Index dim_new = mE - rank;
    if (dim_new != v_new(i))
        throw std::logic_error("internal: kernel dimension disagrees with rank-nullity");
    const CMat incl = svd.matrixV().rightCols(dim_new);  // E_i <- V_i'

    // tau' = -zc (Id - sigma tau / zc) corestricted to V_i'
    const CMat taup = -zc * (incl.adjoint() - (incl.adjoint() * sig) * tau / zc);

    ADHMData y = x;
    y.v = v_new;
    {
        Eigen::Index off = 0;
        for (int h : in_arrows) {
            const Eigen::Index nb = x.v(d.arrow(h).out);
            y.B[static_cast<size_t>(d.reverse(h))] = incl.middleRows(off, nb);
            y.B[static_cast<size_t>(h)] = x.eps(h) * taup.middleCols(off, nb);
            off += nb;
        }
        y.b[static_cast<size_t>(i)] = incl.bottomRows(x.w(i));
        y.a[static_cast<size_t>(i)] = taup.rightCols(x.w(i));
    }
    y.check_shapes();
    return {std::move(y), simple_reflection_param(zeta, i, d)};
}

std::pair<ADHMData, Parameter> w0_functor(const ADHMData& x, const Parameter& zeta,
                                          const WeylWord& word,
                                          const ReflectionOptions& opts) {
    const auto& d = x.diag();
    // genericity of every intermediate level, checked upfront
    {
        Parameter z = zeta;
        const double zscale = 1.0 + zeta.c.cwiseAbs().maxCoeff();
        for (size_t k = 0; k < word.size(); ++k) {
            if (std::abs(z.c(word[k])) <= opts.admissible_tol * zscale)
                throw validation_error("w0 functor inadmissible at step " + std::to_string(k) +
                                       " (vertex " + std::to_string(word[k]) + ")");
            z = simple_reflection_param(z, word[k], d);
        }
    }
    word_dimension_transport(x.v, x.w, word, d);

    ADHMData cur = x;
    Parameter z = zeta;
    for (int i : word) {
        auto [nxt, znxt] = simple_reflection_functor(cur, i, z, opts);
        cur = std::move(nxt);
        z = std::move(znxt);
    }
    SolveOptions ropts = opts.rebalance;
    SolveResult reb = rebalance_real(cur, z, ropts);
    if (!reb.converged)
        throw numeric_error("real rebalancing after the w0 functor stalled at residual " +
                            std::to_string(reb.residual));
    return {std::move(reb.data), std::move(z)};
}

ADHMData functor_for_degenerate(const ADHMData& x, const Parameter& zeta) {
    if (!zeta.is_zero(0.0))
        throw validation_error("degenerate reflection functor requires zeta = 0");
    return x;
}

}  // namespace adhm
