#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "adhm/diagram.hpp"
#include "adhm/rng.hpp"
#include "adhm/rootweyl.hpp"

namespace adhm {

using CMat = Eigen::MatrixXcd;

// Quiver matrix data (B_h, a_i, b_i) on I-graded spaces of dimensions (v, w).
//
// The frame flag tracks which orientation class the data is presented in.
// The transpose duality sends a presentation in Omega to one in the reversed
// orientation; re-expressing it back in Omega costs a sign that would break
// exact involutivity, so we keep the flag instead and read epsilon through
// it.  All other operations preserve the frame.
struct ADHMData {
    std::shared_ptr<const AffineDiagram> diagram;
    Eigen::VectorXi v, w;
    std::vector<CMat> B;  // indexed by arrow id; B[h] is v[in] x v[out]
    std::vector<CMat> a;  // a[i] is v_i x w_i
    std::vector<CMat> b;  // b[i] is w_i x v_i
    bool dual_frame = false;

    const AffineDiagram& diag() const { return *diagram; }
    double eps(int h) const {
        return (dual_frame ? -1.0 : 1.0) * diagram->epsilon(h);
    }
    double frob_norm() const;
    bool same_shape(const ADHMData& o) const;
    void check_shapes() const;  // throws validation_error on mismatch
};

ADHMData zero_adhm(std::shared_ptr<const AffineDiagram> diagram,
                   const Eigen::VectorXi& v, const Eigen::VectorXi& w);

// Deterministic complex-Gaussian fill from a 64-bit seed.
ADHMData random_adhm(std::shared_ptr<const AffineDiagram> diagram,
                     const Eigen::VectorXi& v, const Eigen::VectorXi& w,
                     std::uint64_t seed);

// mu_C(x)_i = sum_{in(h)=i} eps(h) B_h B_hbar + a_i b_i
std::vector<CMat> complex_moment_map(const ADHMData& x);

// mu_R(x)_i = 1/2 [ sum_{in(h)=i} B_h B_h^+  -  sum_{out(h)=i} B_h^+ B_h
//                   + a_i a_i^+ - b_i^+ b_i ]
std::vector<CMat> real_moment_map(const ADHMData& x);

// sqrt( sum_i |mu_C,i - zc_i|_F^2 + |mu_R,i - zr_i|_F^2 )
double residual(const ADHMData& x, const Parameter& z);
double residual_complex(const ADHMData& x, const Parameter& z);  // mu_C part only

struct GaugeElement {
    std::vector<CMat> g;  // g[i] invertible v_i x v_i
    bool unitary = false;
};

GaugeElement identity_gauge(const ADHMData& x);
GaugeElement random_unitary_gauge(const Eigen::VectorXi& v, std::uint64_t seed);

// B_h -> g_in B_h g_out^-1, a -> g a, b -> b g^-1.
ADHMData gauge_act(const GaugeElement& g, const ADHMData& x);

// Transpose duality t: solutions at zeta map to solutions at -zeta and
// t(t(x)) == x exactly.  Flips the frame.
ADHMData dualize_t(const ADHMData& x);
std::pair<ADHMData, Parameter> dualize_t(const ADHMData& x, const Parameter& z);

// Canonical isomorphism from the reversed-orientation presentation back to
// the primary one (negates the Omega-bar blocks).  Identity on primary data.
ADHMData normalize_frame(const ADHMData& x);

// Optional W-twists used when the diagram involution relabels framing spaces
// through chosen forms.  u[i] maps W_i -> W_{i*}; the inverse is applied on
// the b side so the moment map is untouched.
struct WFrameTwist {
    std::vector<CMat> u;
};

// Relabel all data through the diagram involution; the sign compensation in
// StarData keeps moment-map levels transforming by plain permutation.
ADHMData apply_star(const ADHMData& x, const StarData& star,
                    const WFrameTwist* wtwist = nullptr);

// Complex dimension of the joint stabilizer Lie algebra of the data.
int stabilizer_dimension(const ADHMData& x, double rank_tol = 1e-8);

struct PathInvariant {
    int src = 0, dst = 0;
    std::vector<int> arrows;  // empty = the b_i a_i block
    CMat value;               // w_dst x w_src
};

using PathInvariantSet = std::vector<PathInvariant>;

// Gauge-invariant matrix coefficients b_dst B_{h_k} ... B_{h_1} a_src over
// quiver paths of length <= max_len.
PathInvariantSet path_invariants(const ADHMData& x, int max_len);

// Flat complex coordinates on the data space (arrows, then a, then b,
// row-major); used by subspace-constrained solves and linear-map probes.
Eigen::Index complex_dimension(const ADHMData& proto);
Eigen::VectorXcd pack_complex(const ADHMData& x);
ADHMData unpack_complex(const ADHMData& proto, const Eigen::VectorXcd& vec);

// alpha * x + beta * y blockwise (same shapes).
ADHMData lincomb(std::complex<double> alpha, const ADHMData& x, std::complex<double> beta,
                 const ADHMData& y);

struct ModuliOptions {
    int max_sweeps = 400;
    int restarts = 4;
    int invariant_len = 4;
    std::uint64_t seed = 9001;
};

// Best aligning unitary gauge (distance, gauge with gauge_act(g, x) ~ y).
std::pair<double, GaugeElement> best_alignment(const ADHMData& x, const ADHMData& y,
                                               const ModuliOptions& opt = {});

// Best unitary alignment distance min_g |g.x - y| (alternating per-vertex
// Procrustes), normalized by 1 + max data norm.
double align_distance(const ADHMData& x, const ADHMData& y, const ModuliOptions& opt = {});

// Orbit equality test: path invariants within tol AND alignment within tol.
// Inconclusive alignments report false, never true.
bool moduli_equal(const ADHMData& x, const ADHMData& y, double tol,
                  const ModuliOptions& opt = {});

}  // namespace adhm
