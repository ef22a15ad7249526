#include "adhm/sosp.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>

namespace adhm {

std::string class_name(InstantonClass c) { return c == InstantonClass::SO ? "so" : "sp"; }

InstantonClass class_from_string(const std::string& s) {
    if (s == "so" || s == "SO") return InstantonClass::SO;
    if (s == "sp" || s == "Sp" || s == "SP") return InstantonClass::Sp;
    throw validation_error("unknown instanton class '" + s + "' (expected so or sp)");
}

int total_rank(const Eigen::VectorXi& w, const AffineDiagram& d) {
    if (w.size() != d.num_vertices())
        throw validation_error("framing vector does not match the diagram");
    return w.dot(d.marks());
}

namespace {

CMat standard_sym(Eigen::Index n) { return CMat::Identity(n, n); }

CMat standard_asym(Eigen::Index n) {
    // [[0, Id], [-Id, 0]]
    CMat j = CMat::Zero(n, n);
    const Eigen::Index m = n / 2;
    j.topRightCorner(m, m) = CMat::Identity(m, m);
    j.bottomLeftCorner(m, m) = -CMat::Identity(m, m);
    return j;
}

// true when the slot at a self-dual vertex must carry a symmetric form
bool symmetric_slot(InstantonClass cls, FormType ft) {
    return (cls == InstantonClass::SO) == (ft == FormType::orthogonal);
}

std::vector<CMat> standard_forms(const Eigen::VectorXi& dims, const AffineDiagram& d,
                                 const Involution& inv, const FormTypeMap& ftypes,
                                 InstantonClass cls, bool opposite_parity, int pair_sign,
                                 std::vector<int>* signs_out) {
    const int n = d.num_vertices();
    for (int i = 0; i < n; ++i)
        if (dims(inv.star(i)) != dims(i))
            throw validation_error("not self-dual framing: dimension differs at vertex " +
                                   std::to_string(i) + " and its dual");
    std::vector<CMat> phi(static_cast<size_t>(n));
    std::vector<int> sign(static_cast<size_t>(n), 1);
    for (int i = 0; i < n; ++i) {
        const int is = inv.star(i);
        if (is == i) {
            bool sym = symmetric_slot(cls, ftypes.at(i));
            if (opposite_parity) sym = !sym;
            if (sym) {
                phi[static_cast<size_t>(i)] = standard_sym(dims(i));
                sign[static_cast<size_t>(i)] = 1;
            } else {
                if (dims(i) % 2 != 0)
                    throw validation_error("parity obstruction at vertex " + std::to_string(i) +
                                           ": antisymmetric form needs even dimension");
                phi[static_cast<size_t>(i)] = standard_asym(dims(i));
                sign[static_cast<size_t>(i)] = -1;
            }
        } else if (i < is) {
            phi[static_cast<size_t>(i)] = CMat::Identity(dims(i), dims(i));
            phi[static_cast<size_t>(is)] =
                static_cast<double>(pair_sign) * CMat::Identity(dims(i), dims(i));
            sign[static_cast<size_t>(i)] = pair_sign;
            sign[static_cast<size_t>(is)] = pair_sign;
        }
    }
    if (signs_out) *signs_out = std::move(sign);
    return phi;
}

}  // namespace

FormData build_w_forms(const Eigen::VectorXi& w, const AffineDiagram& d, const Involution& inv,
                       const FormTypeMap& ftypes, InstantonClass cls) {
    FormData f;
    f.cls = cls;
    f.phi = standard_forms(w, d, inv, ftypes, cls, /*opposite_parity=*/false,
                           cls == InstantonClass::SO ? 1 : -1, &f.sign);
    return f;
}

VFormData build_v_forms(const Eigen::VectorXi& v, const Eigen::VectorXi& w,
                        const FormData& wforms, const AffineDiagram& d, const Involution& inv) {
    const int n = d.num_vertices();
    for (int i = 0; i < n; ++i)
        if (v(inv.star(i)) != v(i))
            throw validation_error("fixed-point ansatz needs star-symmetric v");

    // kappa_i = +1 for symmetric psi_i, -1 for antisymmetric.  Forced to the
    // opposite of the W form at framed self-dual vertices; alternates across
    // edges.  Swapped pairs carry the opposite of the W pair sign instead.
    std::vector<int> kappa(static_cast<size_t>(n), 0);
    for (int i = 0; i < n; ++i)
        if (inv.star(i) == i && w(i) > 0)
            kappa[static_cast<size_t>(i)] = -wforms.sign[static_cast<size_t>(i)];
    bool changed = true;
    bool seeded = false;
    for (int i = 0; i < n; ++i) seeded |= kappa[static_cast<size_t>(i)] != 0;
    if (!seeded) kappa[0] = 1;
    while (changed) {
        changed = false;
        for (int i = 0; i < n; ++i) {
            if (kappa[static_cast<size_t>(i)] == 0) continue;
            for (int j = 0; j < n; ++j) {
                if (d.adjacency()(i, j) == 0) continue;
                const int want = -kappa[static_cast<size_t>(i)];
                if (kappa[static_cast<size_t>(j)] == 0) {
                    kappa[static_cast<size_t>(j)] = want;
                    changed = true;
                } else if (kappa[static_cast<size_t>(j)] != want) {
                    throw validation_error(
                        "parity obstruction: framing forms at vertices " + std::to_string(i) +
                        " and " + std::to_string(j) + " force conflicting V parities");
                }
            }
        }
    }

    VFormData f;
    f.psi.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int is = inv.star(i);
        if (is == i) {
            if (kappa[static_cast<size_t>(i)] >= 0) {
                f.psi[static_cast<size_t>(i)] = standard_sym(v(i));
            } else {
                if (v(i) % 2 != 0)
                    throw validation_error("parity obstruction at vertex " + std::to_string(i) +
                                           ": antisymmetric form needs even dimension");
                f.psi[static_cast<size_t>(i)] = standard_asym(v(i));
            }
        } else if (i < is) {
            const int pair = -wforms.sign[static_cast<size_t>(i)];
            f.psi[static_cast<size_t>(i)] = CMat::Identity(v(i), v(i));
            f.psi[static_cast<size_t>(is)] =
                static_cast<double>(pair) * CMat::Identity(v(i), v(i));
        }
    }
    return f;
}

std::pair<ADHMData, Parameter> duality_involution_sigma(const ADHMData& x, const Parameter& zeta,
                                                        const FormData& forms,
                                                        const WeylWord& word,
                                                        const SigmaOptions& opts) {
    const auto& d = x.diag();
    if (!check_self_dual_parameter(zeta, d, opts.param_tol))
        throw validation_error("sigma needs a self-dual parameter (-w0 zeta* = zeta)");
    const Involution inv = diagram_involution(d);
    const StarData star = make_star_data(d, inv);

    ADHMData y = x;
    Parameter z = zeta;
    if (!zeta.is_zero(0.0)) {
        auto [ry, rz] = w0_functor(x, zeta, word, opts.reflection);
        y = std::move(ry);
        z = std::move(rz);
    }
    WFrameTwist twist{forms.phi};
    y = apply_star(y, star, &twist);
    z = star_param(z, inv);
    auto [ty, tz] = dualize_t(y, z);
    ty = normalize_frame(ty);
    if (distance(tz, zeta) > opts.param_tol * (1.0 + zeta.re.cwiseAbs().maxCoeff() +
                                               zeta.c.cwiseAbs().maxCoeff()))
        throw std::logic_error("internal: sigma did not return to the input parameter");
    return {std::move(ty), zeta};
}

bool is_fixed_point(const ADHMData& x, const Parameter& zeta, const FormData& forms,
                    const WeylWord& word, double tol, const SigmaOptions& opts) {
    const auto& d = x.diag();
    const Involution inv = diagram_involution(d);
    const Eigen::VectorXi vstar = star_dimvec(x.v, inv);
    if (!same_vec(w0_star_v(vstar, x.w, d), x.v) ||
        !same_vec(star_dimvec(x.w, inv), x.w))
        throw validation_error("not in the self-dual class: w0 * v* differs from v");
    auto [sx, sz] = duality_involution_sigma(x, zeta, forms, word, opts);
    (void)sz;
    return moduli_equal(sx, x, tol, opts.moduli);
}

namespace {

// linear map and fixed subspace of the psi-gauged sigma at zeta = 0
Eigen::MatrixXcd sigma_gauged_matrix(const ADHMData& proto, const FormData& forms,
                                     const VFormData& vforms) {
    const auto& d = proto.diag();
    const Involution inv = diagram_involution(d);
    const StarData star = make_star_data(d, inv);
    GaugeElement gpsi;
    gpsi.unitary = true;  // Id and J are unitary
    gpsi.g = vforms.psi;
    const Eigen::Index N = complex_dimension(proto);
    Eigen::MatrixXcd T(N, N);
    WFrameTwist twist{forms.phi};
    for (Eigen::Index k = 0; k < N; ++k) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(N);
        e(k) = 1.0;
        ADHMData probe = unpack_complex(proto, e);
        ADHMData img = normalize_frame(dualize_t(apply_star(probe, star, &twist)));
        T.col(k) = pack_complex(gauge_act(gpsi, img));
    }
    return T;
}

Eigen::MatrixXcd fixed_subspace_basis(const ADHMData& proto, const FormData& forms,
                                      const VFormData& vforms) {
    const Eigen::MatrixXcd T = sigma_gauged_matrix(proto, forms, vforms);
    const Eigen::Index N = T.rows();
    if ((T * T - Eigen::MatrixXcd::Identity(N, N)).norm() > 1e-10 * (1.0 + N))
        throw std::logic_error("internal: gauged sigma is not involutive; form parities broken");
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(T - Eigen::MatrixXcd::Identity(N, N),
                                           Eigen::ComputeFullV);
    Eigen::Index rank = 0;
    const auto& sv = svd.singularValues();
    const double cut = sv.size() ? 1e-10 * std::max(1.0, sv(0)) : 0.0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > cut) ++rank;
    return svd.matrixV().rightCols(N - rank);
}

}  // namespace

Eigen::Index fixed_subspace_dimension(std::shared_ptr<const AffineDiagram> diagram,
                                      const Eigen::VectorXi& v, const Eigen::VectorXi& w,
                                      InstantonClass cls) {
    const auto& d = *diagram;
    const Involution inv = diagram_involution(d);
    const FormTypeMap ft = form_type_assignment(d, inv);
    const FormData forms = build_w_forms(w, d, inv, ft, cls);
    const VFormData vforms = build_v_forms(v, w, forms, d, inv);
    ADHMData proto = zero_adhm(std::move(diagram), v, w);
    return fixed_subspace_basis(proto, forms, vforms).cols();
}

ADHMData construct_fixed_degenerate(std::shared_ptr<const AffineDiagram> diagram,
                                    const Eigen::VectorXi& v, const Eigen::VectorXi& w,
                                    InstantonClass cls, std::uint64_t seed,
                                    const FixedPointOptions& opts) {
    const auto& d = *diagram;
    const Involution inv = diagram_involution(d);
    if (!same_vec(star_dimvec(v, inv), v) || !same_vec(star_dimvec(w, inv), w))
        throw validation_error("fixed-point construction needs star-symmetric (v, w)");
    const FormTypeMap ft = form_type_assignment(d, inv);
    const FormData forms = build_w_forms(w, d, inv, ft, cls);
    const VFormData vforms = build_v_forms(v, w, forms, d, inv);

    ADHMData proto = zero_adhm(diagram, v, w);
    const Eigen::MatrixXcd basis = fixed_subspace_basis(proto, forms, vforms);

    Rng rng(seed);
    Eigen::VectorXcd y0(basis.cols());
    for (Eigen::Index k = 0; k < y0.size(); ++k) y0(k) = rng.cgaussian();

    const Parameter z0 = Parameter::zero(d);
    SolveResult res = solve_in_subspace(proto, basis, y0, z0, opts.solve);
    if (!res.converged)
        throw numeric_error("constrained moment solve stalled at residual " +
                            std::to_string(res.residual));
    return res.data;
}

FixedSolveResult solve_fixed(std::shared_ptr<const AffineDiagram> diagram,
                             const Eigen::VectorXi& v, const Eigen::VectorXi& w,
                             const Parameter& zeta, InstantonClass cls, std::uint64_t seed,
                             const FixedPointOptions& opts) {
    const auto& d = *diagram;
    const Involution inv = diagram_involution(d);
    if (!check_self_dual_parameter(zeta, d, opts.sigma.param_tol))
        throw validation_error("solve_fixed needs a self-dual parameter");
    if (!same_vec(w0_star_v(star_dimvec(v, inv), w, d), v) ||
        !same_vec(star_dimvec(w, inv), w))
        throw validation_error("not in the self-dual class: w0 * v* differs from v");
    const FormTypeMap ft = form_type_assignment(d, inv);
    const FormData forms = build_w_forms(w, d, inv, ft, cls);
    const WeylWord word = longest_element(d);

    FixedSolveResult out;
    if (zeta.is_zero(0.0)) {
        out.data = construct_fixed_degenerate(diagram, v, w, cls, seed, opts);
        out.residual = residual(out.data, zeta);
        out.fixed_distance = 0.0;
        auto [sx, sz] = duality_involution_sigma(out.data, zeta, forms, word, opts.sigma);
        (void)sz;
        out.fixed_distance = align_distance(sx, out.data, opts.sigma.moduli);
        out.converged = out.residual <= opts.solve.tol && out.fixed_distance <= opts.fixed_tol;
        return out;
    }

    SolveResult base = solve(diagram, v, w, zeta, seed, opts.solve);
    ADHMData x = std::move(base.data);
    double dist = std::numeric_limits<double>::infinity();
    for (int outer = 0; outer < opts.max_outer; ++outer) {
        auto [sx, sz] = duality_involution_sigma(x, zeta, forms, word, opts.sigma);
        (void)sz;
        auto [adist, g] = best_alignment(sx, x, opts.sigma.moduli);
        dist = adist;
        if (dist <= opts.fixed_tol) break;
        const ADHMData aligned = gauge_act(g, sx);
        ADHMData mid = lincomb(0.5, x, 0.5, aligned);
        SolveResult pol = polish(mid, zeta, opts.solve);
        if (!pol.converged) break;
        x = std::move(pol.data);
    }
    out.residual = residual(x, zeta);
    out.fixed_distance = dist;
    out.data = std::move(x);
    out.converged = out.residual <= opts.solve.tol && out.fixed_distance <= opts.fixed_tol;
    return out;
}

}  // namespace adhm
