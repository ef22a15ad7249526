#include "adhm/rootweyl.hpp"

#include <cmath>

namespace adhm {

Parameter Parameter::zero(const AffineDiagram& d) {
    Parameter z;
    z.re = Eigen::VectorXd::Zero(d.num_vertices());
    z.c = Eigen::VectorXcd::Zero(d.num_vertices());
    return z;
}

bool Parameter::is_zero(double tol) const {
    return re.cwiseAbs().maxCoeff() <= tol && c.cwiseAbs().maxCoeff() <= tol;
}

double level_re(const Parameter& z, const AffineDiagram& d) {
    return z.re.dot(d.marks().cast<double>());
}

std::complex<double> level_c(const Parameter& z, const AffineDiagram& d) {
    // plain bilinear pairing, no conjugation
    std::complex<double> s = 0.0;
    for (int i = 0; i < z.size(); ++i) s += z.c(i) * static_cast<double>(d.marks()(i));
    return s;
}

Parameter negate(const Parameter& z) { return {-z.re, -z.c}; }

double distance(const Parameter& x, const Parameter& y) {
    const double dr = (x.re - y.re).cwiseAbs().maxCoeff();
    const double dc = (x.c - y.c).cwiseAbs().maxCoeff();
    return std::max(dr, dc);
}

Parameter simple_reflection_param(const Parameter& z, int i, const AffineDiagram& d) {
    if (i <= 0 || i >= d.num_vertices())
        throw validation_error("reflection vertex must be a finite vertex (1..rank)");
    Eigen::MatrixXi C = d.cartan();
    Parameter out = z;
    for (int j = 0; j < d.num_vertices(); ++j) {
        out.re(j) -= C(i, j) * z.re(i);
        out.c(j) -= static_cast<double>(C(i, j)) * z.c(i);
    }
    return out;
}

Parameter act_weyl_param(const Parameter& z, const WeylWord& word, const AffineDiagram& d) {
    Parameter out = z;
    for (auto it = word.rbegin(); it != word.rend(); ++it)
        out = simple_reflection_param(out, *it, d);
    return out;
}

VecI64 act_weyl_weight(const VecI64& lambda, const WeylWord& word, const AffineDiagram& d) {
    Eigen::MatrixXi C = d.cartan();
    VecI64 out = lambda;
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        const int i = *it;
        if (i <= 0 || i >= d.num_vertices())
            throw validation_error("weight reflection at vertex 0 or out of range");
        const long long li = out(i);
        for (int j = 0; j < d.num_vertices(); ++j) out(j) -= C(j, i) * li;
    }
    return out;
}

WeylWord longest_element(const AffineDiagram& d) {
    const int l = d.rank();
    Eigen::MatrixXi C = d.finite_cartan();
    VecI64 lam = VecI64::Ones(l);
    WeylWord word;
    for (;;) {
        int pick = -1;
        for (int i = 0; i < l; ++i)
            if (lam(i) > 0) { pick = i; break; }
        if (pick < 0) break;
        const long long li = lam(pick);
        for (int j = 0; j < l; ++j) lam(j) -= C(j, pick) * li;
        word.push_back(pick + 1);  // finite vertex labels
    }
    return word;
}

Eigen::VectorXi w0_star_v(const Eigen::VectorXi& v, const Eigen::VectorXi& w,
                          const AffineDiagram& d) {
    const int n = d.num_vertices();
    if (v.size() != n || w.size() != n)
        throw validation_error("dimension vector size does not match the diagram");
    if (v.minCoeff() < 0 || w.minCoeff() < 0)
        throw validation_error("dimension vectors must be nonnegative");
    Eigen::MatrixXi C = d.cartan();
    const WeylWord word = longest_element(d);

    VecI64 lam = w.cast<long long>() - (C * v).cast<long long>();
    VecI64 lamp = act_weyl_weight(lam, word, d);
    VecI64 rhs = w.cast<long long>() - lamp;

    // Solve C v' = rhs with v'_0 = v_0; the finite block is invertible.
    const int l = d.rank();
    Eigen::MatrixXd Cf = C.bottomRightCorner(l, l).cast<double>();
    Eigen::VectorXd b(l);
    for (int i = 0; i < l; ++i)
        b(i) = static_cast<double>(rhs(i + 1)) - static_cast<double>(C(i + 1, 0)) * v(0);
    Eigen::VectorXd u = Cf.fullPivLu().solve(b);

    Eigen::VectorXi vp(n);
    vp(0) = v(0);
    for (int i = 0; i < l; ++i) vp(i + 1) = static_cast<int>(std::llround(u(i)));

    // Exact verification in integer arithmetic; the affine row 0 must hold
    // automatically (delta spans the kernel).
    VecI64 check = (C.cast<long long>() * vp.cast<long long>()) - rhs;
    for (int i = 1; i < n; ++i)
        if (check(i) != 0)
            throw validation_error("unrealizable dimension vector: w0 * v is not integral");
    if (check(0) != 0)
        throw std::logic_error("internal: affine row of the transported system broke");
    if (vp.minCoeff() < 0)
        throw validation_error("unrealizable dimension vector: w0 * v has a negative entry");
    return vp;
}

Eigen::VectorXi star_dimvec(const Eigen::VectorXi& v, const Involution& inv) {
    Eigen::VectorXi out(v.size());
    for (int i = 0; i < v.size(); ++i) out(i) = v(inv.star(i));
    return out;
}

Parameter star_param(const Parameter& z, const Involution& inv) {
    Parameter out = z;
    for (int i = 0; i < z.size(); ++i) {
        out.re(i) = z.re(inv.star(i));
        out.c(i) = z.c(inv.star(i));
    }
    return out;
}

bool check_self_dual_parameter(const Parameter& z, const AffineDiagram& d, double tol) {
    const Involution inv = diagram_involution(d);
    const WeylWord word = longest_element(d);
    const Parameter img = negate(act_weyl_param(star_param(z, inv), word, d));
    return distance(img, z) <= tol;
}

Eigen::VectorXd perturb_below_level(const Eigen::VectorXd& zr, double eta,
                                    const AffineDiagram& d) {
    if (eta <= 0) throw validation_error("perturbation eta must be positive");
    const Eigen::VectorXd delta = d.marks().cast<double>();
    const double lv = zr.dot(delta);
    if (std::abs(lv) > 1e-9 * (1.0 + zr.cwiseAbs().maxCoeff()))
        throw validation_error("perturb_below_level expects a level-0 input");
    return zr - (eta / delta.squaredNorm()) * delta;
}

Parameter random_level_zero(const AffineDiagram& d, Rng& rng, bool complex_only) {
    const int n = d.num_vertices();
    const Eigen::VectorXd delta = d.marks().cast<double>();
    Parameter z;
    z.re = Eigen::VectorXd::Zero(n);
    z.c = Eigen::VectorXcd::Zero(n);
    for (int i = 0; i < n; ++i) z.c(i) = rng.cgaussian();
    if (!complex_only)
        for (int i = 0; i < n; ++i) z.re(i) = rng.gaussian();
    const double d2 = delta.squaredNorm();
    z.re -= (z.re.dot(delta) / d2) * delta;
    const std::complex<double> lc = level_c(z, d);
    z.c -= (lc / d2) * delta.cast<std::complex<double>>();
    return z;
}

}  // namespace adhm
