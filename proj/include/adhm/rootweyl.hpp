#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "adhm/diagram.hpp"
#include "adhm/rng.hpp"

namespace adhm {

using VecI64 = Eigen::Matrix<long long, Eigen::Dynamic, 1>;

inline bool same_vec(const Eigen::VectorXi& a, const Eigen::VectorXi& b) {
    return a.size() == b.size() && (a.array() == b.array()).all();
}

// Hyperkahler moment-map level zeta in (R + C)^I.  ALE parameters satisfy
// zeta . delta = 0 in both parts.
struct Parameter {
    Eigen::VectorXd re;   // real part, one entry per vertex
    Eigen::VectorXcd c;   // complex part

    static Parameter zero(const AffineDiagram& d);
    int size() const { return static_cast<int>(re.size()); }
    bool is_zero(double tol = 0.0) const;
};

double level_re(const Parameter& z, const AffineDiagram& d);
std::complex<double> level_c(const Parameter& z, const AffineDiagram& d);
Parameter negate(const Parameter& z);
double distance(const Parameter& x, const Parameter& y);  // sup norm over both parts

// Reduced word for a Weyl group element; entries are finite vertices (never 0).
using WeylWord = std::vector<int>;

// Simple reflection s_i on parameters through the affine Cartan matrix:
// (s_i z)_j = z_j - C_ij z_i.  Acting with all rank+1 components is what
// preserves the delta-pairing.  i = 0 is rejected.
Parameter simple_reflection_param(const Parameter& z, int i, const AffineDiagram& d);

// Apply a word right-to-left (last letter acts first).
Parameter act_weyl_param(const Parameter& z, const WeylWord& word, const AffineDiagram& d);

// Same reflection on integer weight vectors.
VecI64 act_weyl_weight(const VecI64& lambda, const WeylWord& word, const AffineDiagram& d);

// Reduced word for the longest element of the finite Weyl group, found by
// driving a strictly dominant vector to the antidominant chamber.
WeylWord longest_element(const AffineDiagram& d);

// Dimension-vector transport v' = w0 * v solving C v' = w - w0(w - C v)
// with v'_0 = v_0 pinning the delta ambiguity.  Throws validation_error
// when no nonnegative integer solution exists.
Eigen::VectorXi w0_star_v(const Eigen::VectorXi& v, const Eigen::VectorXi& w,
                          const AffineDiagram& d);

Eigen::VectorXi star_dimvec(const Eigen::VectorXi& v, const Involution& inv);
Parameter star_param(const Parameter& z, const Involution& inv);

// True iff ||-w0(z*) - z||_inf <= tol; the self-duality that the level-0
// hyperplane satisfies.
bool check_self_dual_parameter(const Parameter& z, const AffineDiagram& d, double tol);

// Shift a level-0 real vector to level -eta (eta > 0).
Eigen::VectorXd perturb_below_level(const Eigen::VectorXd& zr, double eta,
                                    const AffineDiagram& d);

// Random parameter projected onto the level-0 hyperplane; real part zeroed
// when complex_only.
Parameter random_level_zero(const AffineDiagram& d, Rng& rng, bool complex_only = false);

}  // namespace adhm
