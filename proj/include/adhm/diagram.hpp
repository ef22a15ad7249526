#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "adhm/errors.hpp"

namespace adhm {

enum class Kind { A, D, E };

std::string kind_name(Kind k);
Kind kind_from_string(const std::string& s);

// One arrow of the doubled McKay quiver.
struct Arrow {
    int out = 0;  // source vertex
    int in = 0;   // target vertex
};

// Affine ADE (McKay) diagram in Kac labeling.  Vertices 0..rank, vertex 0
// the affine node.  Arrows come in reversal pairs: ids [0, m) are the chosen
// orientation Omega (lower-index vertex is the source), ids [m, 2m) their
// reversals, where m is the edge count with multiplicity.
class AffineDiagram {
public:
    static AffineDiagram build(Kind kind, int rank);

    Kind kind() const { return kind_; }
    int rank() const { return rank_; }
    int num_vertices() const { return rank_ + 1; }

    const Eigen::MatrixXi& adjacency() const { return adj_; }
    const Eigen::VectorXi& marks() const { return marks_; }

    // Affine Cartan matrix 2*Id - adjacency.  Annihilates the marks.
    Eigen::MatrixXi cartan() const;
    // Finite Cartan block (rows/cols 1..rank).
    Eigen::MatrixXi finite_cartan() const;

    int num_edges() const { return static_cast<int>(arrows_.size() / 2); }
    int num_arrows() const { return static_cast<int>(arrows_.size()); }
    const Arrow& arrow(int h) const { return arrows_[static_cast<size_t>(h)]; }
    const std::vector<Arrow>& arrows() const { return arrows_; }

    int reverse(int h) const {
        const int m = num_edges();
        return h < m ? h + m : h - m;
    }
    bool in_omega(int h) const { return h < num_edges(); }
    int epsilon(int h) const { return in_omega(h) ? 1 : -1; }

    const std::vector<int>& arrows_in(int i) const { return in_at_[static_cast<size_t>(i)]; }
    const std::vector<int>& arrows_out(int i) const { return out_at_[static_cast<size_t>(i)]; }

    // Omega arrow id of the k-th parallel edge between i and j (i != j),
    // -1 if absent.
    int omega_arrow(int i, int j, int copy) const;

private:
    Kind kind_ = Kind::A;
    int rank_ = 1;
    Eigen::MatrixXi adj_;
    Eigen::VectorXi marks_;
    std::vector<Arrow> arrows_;
    std::vector<std::vector<int>> in_at_, out_at_;

    void finish();  // derive arrows and incidence from adjacency
};

// McKay adjacency of the cyclic group Z/n computed from character inner
// products; independent oracle for build(A, n-1).
Eigen::MatrixXi mckay_adjacency_cyclic(int n);

// Duality involution i -> i* induced by dualizing irreducibles.
class Involution {
public:
    Involution() = default;
    explicit Involution(std::vector<int> star) : star_(std::move(star)) {}
    int star(int i) const { return star_[static_cast<size_t>(i)]; }
    int size() const { return static_cast<int>(star_.size()); }
    bool is_identity() const;
    const std::vector<int>& permutation() const { return star_; }

private:
    std::vector<int> star_;
};

Involution diagram_involution(const AffineDiagram& d);

enum class FormType { orthogonal, symplectic };

// Orthogonal/symplectic type of each self-dual vertex.
using FormTypeMap = std::map<int, FormType>;

FormTypeMap form_type_assignment(const AffineDiagram& d, const Involution& inv);

// Star lifted to arrows, with the sign compensation that makes the complex
// moment map transform by plain permutation of its levels.  star_sign is the
// factor c(h) in B'_h = c(h) B_{h*}.
struct StarData {
    std::vector<int> vertex;      // i -> i*
    std::vector<int> arrow;       // h -> h*
    std::vector<int> sign;        // c(h) in {+1,-1}
    std::vector<bool> stays_in_omega;  // for h in Omega: is h* in Omega?
};

StarData make_star_data(const AffineDiagram& d, const Involution& inv);

// choose_orientation report: the deterministic Omega plus the record of how
// the involution displaces it.
struct OrientationInfo {
    std::vector<Arrow> omega;
    std::vector<bool> star_in_omega;
};

OrientationInfo choose_orientation(const AffineDiagram& d, const Involution& inv);

}  // namespace adhm
