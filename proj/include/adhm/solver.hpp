#pragma once

#include "adhm/adhm_data.hpp"

namespace adhm {

enum class SolveStrategy { full_least_squares, two_stage };

struct SolveOptions {
    int max_iters = 500;
    double tol = 1e-10;
    SolveStrategy strategy = SolveStrategy::full_least_squares;
    int rebalance_max_iters = 50000;
    double level_tol = 1e-8;
};

struct SolveResult {
    ADHMData data;
    double residual = 0.0;
    int iters = 0;
    bool converged = false;
};

// Find data with residual(data, zeta) <= opts.tol starting from
// random_adhm(seed).  Levenberg-Marquardt on the stacked moment equations;
// the two-stage mode solves the complex equation first and then restores the
// real one inside the complexified gauge orbit.  Off-level zeta is rejected.
SolveResult solve(std::shared_ptr<const AffineDiagram> diagram,
                  const Eigen::VectorXi& v, const Eigen::VectorXi& w,
                  const Parameter& zeta, std::uint64_t seed,
                  const SolveOptions& opts = {});

// Kempf-Ness descent: drive mu_R to the zeta_R level by positive-definite
// gauge moves, which leave a scalar mu_C level set untouched.
SolveResult rebalance_real(const ADHMData& x, const Parameter& zeta,
                           const SolveOptions& opts = {});

// Polish existing data by Levenberg-Marquardt on the full system.
SolveResult polish(const ADHMData& x, const Parameter& zeta, const SolveOptions& opts = {});

// Least squares on the moment equations restricted to an affine-free complex
// subspace of the data space: x = unpack_complex(proto, basis * y).
SolveResult solve_in_subspace(const ADHMData& proto, const Eigen::MatrixXcd& basis,
                              const Eigen::VectorXcd& y0, const Parameter& zeta,
                              const SolveOptions& opts = {});

// Real dimension of ker(d mu) minus the unitary gauge directions at a solved
// point; equals 2(2 v.w - v^T C v) at regular points.
int tangent_dimension(const ADHMData& x, const Parameter& zeta, double rank_tol = 1e-7);

int expected_tangent_dimension(const Eigen::VectorXi& v, const Eigen::VectorXi& w,
                               const AffineDiagram& d);

}  // namespace adhm
