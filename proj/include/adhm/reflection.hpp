#pragma once

#include "adhm/adhm_data.hpp"
#include "adhm/solver.hpp"

namespace adhm {

struct ReflectionOptions {
    double level_tol = 1e-8;       // how exactly the complex equation must hold on entry
    double admissible_tol = 1e-10; // |zeta_C,i| below this is inadmissible
    double rank_tol = 1e-9;
    SolveOptions rebalance;        // used by the composite functor's final rebalance
};

// Dimension transport of one reflection: only component i changes, to
// sum_j a_ij v_j + w_i - v_i.
Eigen::VectorXi reflected_dim(const Eigen::VectorXi& v, const Eigen::VectorXi& w, int i,
                              const AffineDiagram& d);

// Fold of reflected_dim along a word (applied first letter first); throws
// when an intermediate component would go negative.
Eigen::VectorXi word_dimension_transport(const Eigen::VectorXi& v, const Eigen::VectorXi& w,
                                         const WeylWord& word, const AffineDiagram& d);

// Reflection functor at a single vertex.  The input must satisfy the complex
// moment equation at zeta_C; the output satisfies it at (s_i zeta)_C and has
// dim V_i' = sum a_ij v_j + w_i - v_i.  The real equation is not preserved;
// the composite rebalances once at the end.
std::pair<ADHMData, Parameter> simple_reflection_functor(const ADHMData& x, int vertex,
                                                         const Parameter& zeta,
                                                         const ReflectionOptions& opts = {});

// Composite functor along a reduced word for w0, with one Kempf-Ness real
// rebalance at the end.  Intermediate admissibility is checked upfront; the
// error names the failing step.
std::pair<ADHMData, Parameter> w0_functor(const ADHMData& x, const Parameter& zeta,
                                          const WeylWord& word,
                                          const ReflectionOptions& opts = {});

// At zeta = 0 the reflection functor degenerates to the identity.
ADHMData functor_for_degenerate(const ADHMData& x, const Parameter& zeta);

}  // namespace adhm
