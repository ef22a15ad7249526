#pragma once

#include "adhm/adhm_data.hpp"
#include "adhm/reflection.hpp"
#include "adhm/solver.hpp"

namespace adhm {

enum class InstantonClass { SO, Sp };

std::string class_name(InstantonClass c);
InstantonClass class_from_string(const std::string& s);

// Identifications f_i : W_i -> W*_{i*} realizing the chosen symmetric or
// symplectic form on the framing.  sign[i] is the factor in t(phi_{i*}) =
// sign[i] * phi_i.
struct FormData {
    std::vector<CMat> phi;  // phi[i] is w_{i*} x w_i
    std::vector<int> sign;
    InstantonClass cls = InstantonClass::SO;
    int class_sign() const { return cls == InstantonClass::SO ? 1 : -1; }
};

// The analogous identifications on the V side used by fixed-point ansatze;
// parity opposite to the W rule at every vertex.
struct VFormData {
    std::vector<CMat> psi;  // psi[i] is v_{i*} x v_i
};

// n = sum_i w_i delta_i, the rank of the framing flat connection.
int total_rank(const Eigen::VectorXi& w, const AffineDiagram& d);

// Standard forms: identity for symmetric slots, the block J for antisymmetric
// ones.  A self-dual vertex gets a symmetric phi_i exactly when the class and
// the representation type agree (SO with orthogonal, Sp with symplectic).
// Antisymmetric slots of odd dimension are parity obstructions.
FormData build_w_forms(const Eigen::VectorXi& w, const AffineDiagram& d, const Involution& inv,
                       const FormTypeMap& ftypes, InstantonClass cls);

// V-side forms for the psi-gauged fixed-point ansatz.  The parity at a
// framed vertex is opposite to the W form there, and parities alternate
// across every edge (both forced by squaring the gauged involution).
VFormData build_v_forms(const Eigen::VectorXi& v, const Eigen::VectorXi& w,
                        const FormData& wforms, const AffineDiagram& d, const Involution& inv);

struct SigmaOptions {
    double param_tol = 1e-10;
    ReflectionOptions reflection;
    ModuliOptions moduli;
};

// The involution sigma = t o * o F.  Output lives at the input parameter
// (-w0 zeta* = zeta) and dimension vector w0 * (v*).
std::pair<ADHMData, Parameter> duality_involution_sigma(const ADHMData& x, const Parameter& zeta,
                                                        const FormData& forms,
                                                        const WeylWord& word,
                                                        const SigmaOptions& opts = {});

bool is_fixed_point(const ADHMData& x, const Parameter& zeta, const FormData& forms,
                    const WeylWord& word, double tol, const SigmaOptions& opts = {});

struct FixedPointOptions {
    SolveOptions solve;
    SigmaOptions sigma;
    int max_outer = 60;
    double fixed_tol = 1e-8;
};

// zeta = 0 construction: cut the data space down to the subspace fixed by the
// psi-gauged sigma (a linear involution there) and least-squares solve the
// moment equations inside it.
ADHMData construct_fixed_degenerate(std::shared_ptr<const AffineDiagram> diagram,
                                    const Eigen::VectorXi& v, const Eigen::VectorXi& w,
                                    InstantonClass cls, std::uint64_t seed,
                                    const FixedPointOptions& opts = {});

// Complex dimension of the sigma-fixed linear subspace at zeta = 0.
Eigen::Index fixed_subspace_dimension(std::shared_ptr<const AffineDiagram> diagram,
                                      const Eigen::VectorXi& v, const Eigen::VectorXi& w,
                                      InstantonClass cls);

struct FixedSolveResult {
    ADHMData data;
    double residual = 0.0;
    double fixed_distance = 0.0;
    bool converged = false;
};

// Penalty search for a sigma-fixed solution at general self-dual zeta.
FixedSolveResult solve_fixed(std::shared_ptr<const AffineDiagram> diagram,
                             const Eigen::VectorXi& v, const Eigen::VectorXi& w,
                             const Parameter& zeta, InstantonClass cls, std::uint64_t seed,
                             const FixedPointOptions& opts = {});

}  // namespace adhm
