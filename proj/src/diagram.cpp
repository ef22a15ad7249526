#include "adhm/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>

namespace adhm {

std::string kind_name(Kind k) {
    switch (k) {
        case Kind::A: return "A";
        case Kind::D: return "D";
        case Kind::E: return "E";
    }
    return "?";
}

Kind kind_from_string(const std::string& s) {
    if (s == "A" || s == "a") return Kind::A;
    if (s == "D" || s == "d") return Kind::D;
    if (s == "E" || s == "e") return Kind::E;
    throw validation_error("unknown diagram kind '" + s + "' (expected A, D or E)");
}

namespace {

// Edge list (i < j, with multiplicity) of the affine diagram in Kac labeling.
std::vector<std::pair<int, int>> kac_edges(Kind kind, int rank) {
    std::vector<std::pair<int, int>> e;
    switch (kind) {
        case Kind::A:
            if (rank == 1) {
                e = {{0, 1}, {0, 1}};  // double edge
            } else {
                for (int i = 0; i < rank; ++i) e.emplace_back(i, i + 1);
                e.emplace_back(0, rank);
            }
            break;
        case Kind::D:
            e = {{0, 2}, {1, 2}};
            for (int i = 2; i + 1 <= rank - 2; ++i) e.emplace_back(i, i + 1);
            e.emplace_back(rank - 2, rank - 1);
            e.emplace_back(rank - 2, rank);
            break;
        case Kind::E:
            if (rank == 6) {
                e = {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {3, 6}, {0, 6}};
            } else if (rank == 7) {
                e = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {3, 7}};
            } else {
                e = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {5, 8}};
            }
            break;
    }
    std::sort(e.begin(), e.end());
    return e;
}

Eigen::VectorXi kac_marks(Kind kind, int rank) {
    Eigen::VectorXi d(rank + 1);
    switch (kind) {
        case Kind::A:
            d.setOnes();
            break;
        case Kind::D:
            d.setConstant(2);
            d(0) = d(1) = d(rank - 1) = d(rank) = 1;
            break;
        case Kind::E:
            if (rank == 6) {
                d << 1, 1, 2, 3, 2, 1, 2;
            } else if (rank == 7) {
                d << 1, 2, 3, 4, 3, 2, 1, 2;
            } else {
                d << 1, 2, 3, 4, 5, 6, 4, 2, 3;
            }
            break;
    }
    return d;
}

}  // namespace

void AffineDiagram::finish() {
    const int n = num_vertices();
    const int m = static_cast<int>(arrows_.size());  // currently Omega only
    arrows_.reserve(2 * static_cast<size_t>(m));
    for (int h = 0; h < m; ++h) arrows_.push_back({arrows_[static_cast<size_t>(h)].in, arrows_[static_cast<size_t>(h)].out});
    in_at_.assign(static_cast<size_t>(n), {});
    out_at_.assign(static_cast<size_t>(n), {});
    for (int h = 0; h < 2 * m; ++h) {
        in_at_[static_cast<size_t>(arrows_[static_cast<size_t>(h)].in)].push_back(h);
        out_at_[static_cast<size_t>(arrows_[static_cast<size_t>(h)].out)].push_back(h);
    }
}

AffineDiagram AffineDiagram::build(Kind kind, int rank) {
    switch (kind) {
        case Kind::A:
            if (rank < 1) throw validation_error("type A needs rank >= 1");
            break;
        case Kind::D:
            if (rank < 4) throw validation_error("type D needs rank >= 4");
            break;
        case Kind::E:
            if (rank < 6 || rank > 8) throw validation_error("type E needs rank in {6,7,8}");
            break;
    }
    AffineDiagram d;
    d.kind_ = kind;
    d.rank_ = rank;
    const int n = rank + 1;
    d.adj_ = Eigen::MatrixXi::Zero(n, n);
    for (auto [i, j] : kac_edges(kind, rank)) {
        d.adj_(i, j) += 1;
        d.adj_(j, i) += 1;
        d.arrows_.push_back({i, j});
    }
    d.marks_ = kac_marks(kind, rank);
    d.finish();

    // Defining property of the marks: the affine Cartan matrix kills them.
    Eigen::VectorXi cd = d.cartan() * d.marks_;
    if (cd.cwiseAbs().maxCoeff() != 0 || d.marks_(0) != 1)
        throw std::logic_error("internal: marks are not the Cartan kernel");
    return d;
}

Eigen::MatrixXi AffineDiagram::cartan() const {
    const int n = num_vertices();
    return 2 * Eigen::MatrixXi::Identity(n, n) - adj_;
}

Eigen::MatrixXi AffineDiagram::finite_cartan() const {
    return cartan().bottomRightCorner(rank_, rank_);
}

int AffineDiagram::omega_arrow(int i, int j, int copy) const {
    if (i > j) std::swap(i, j);
    int seen = 0;
    const int m = num_edges();
    for (int h = 0; h < m; ++h) {
        if (arrows_[static_cast<size_t>(h)].out == i && arrows_[static_cast<size_t>(h)].in == j) {
            if (seen == copy) return h;
            ++seen;
        }
    }
    return -1;
}

Eigen::MatrixXi mckay_adjacency_cyclic(int n) {
    if (n < 2) throw validation_error("cyclic McKay adjacency needs n >= 2");
    const double tau = 2.0 * 3.14159265358979323846 / n;
    Eigen::MatrixXi a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            // dim Hom(rho_i, rho_j (x) Q) with Q = chi_1 + chi_{n-1}
            std::complex<double> s = 0.0;
            for (int g = 0; g < n; ++g) {
                const std::complex<double> chi_i = std::polar(1.0, tau * i * g);
                const std::complex<double> chi_j = std::polar(1.0, tau * j * g);
                const std::complex<double> chi_q =
                    std::polar(1.0, tau * g) + std::polar(1.0, tau * (n - 1) * g);
                s += std::conj(chi_i) * chi_j * chi_q;
            }
            const double val = s.real() / n;
            const int r = static_cast<int>(std::lround(val));
            if (std::abs(val - r) > 1e-9 || std::abs(s.imag()) > 1e-9 * n)
                throw numeric_error("character sum did not land on an integer");
            a(i, j) = r;
        }
    }
    return a;
}

bool Involution::is_identity() const {
    for (int i = 0; i < size(); ++i)
        if (star_[static_cast<size_t>(i)] != i) return false;
    return true;
}

Involution diagram_involution(const AffineDiagram& d) {
    const int n = d.num_vertices();
    std::vector<int> star(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) star[static_cast<size_t>(i)] = i;
    const int l = d.rank();
    switch (d.kind()) {
        case Kind::A:
            for (int i = 1; i <= l; ++i) star[static_cast<size_t>(i)] = l - i + 1;
            break;
        case Kind::D:
            if (l % 2 == 1) {
                star[static_cast<size_t>(l)] = l - 1;
                star[static_cast<size_t>(l - 1)] = l;
            }
            break;
        case Kind::E:
            if (l == 6) {
                star[1] = 5;
                star[5] = 1;
                star[2] = 4;
                star[4] = 2;
            }
            break;
    }
    return Involution(std::move(star));
}

FormTypeMap form_type_assignment(const AffineDiagram& d, const Involution& inv) {
    FormTypeMap out;
    out[0] = FormType::orthogonal;
    const int l = d.rank();
    if (d.kind() == Kind::A) {
        // The cycle has no parity propagation; the middle vertex rule is
        // explicit.  Even rank: vertex 0 is the only self-dual vertex.
        if (l % 2 == 1) out[(l + 1) / 2] = FormType::orthogonal;
        return out;
    }
    // D/E: the vertex next to the affine node carries the defining
    // 2-dimensional representation, which is quaternionic.
    const int i0 = d.arrow(d.arrows_out(0).front()).in;
    out[i0] = FormType::symplectic;
    // Alternate over self-dual vertices, breadth first from the two seeds.
    std::queue<int> q;
    q.push(0);
    q.push(i0);
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int w = 0; w < d.num_vertices(); ++w) {
            if (d.adjacency()(u, w) == 0 || inv.star(w) != w) continue;
            const FormType want =
                out[u] == FormType::orthogonal ? FormType::symplectic : FormType::orthogonal;
            auto it = out.find(w);
            if (it == out.end()) {
                out[w] = want;
                q.push(w);
            } else if (it->second != want) {
                throw std::logic_error("internal: inconsistent form-type alternation");
            }
        }
    }
    return out;
}

StarData make_star_data(const AffineDiagram& d, const Involution& inv) {
    StarData s;
    s.vertex = inv.permutation();
    const int H = d.num_arrows();
    s.arrow.assign(static_cast<size_t>(H), -1);
    s.sign.assign(static_cast<size_t>(H), 1);

    // Arrow star: the k-th parallel arrow i->j maps to the k-th parallel
    // arrow i*->j*.
    const int m = d.num_edges();
    std::vector<int> copy_index(static_cast<size_t>(m), 0);
    {
        std::map<std::pair<int, int>, int> seen;
        for (int e = 0; e < m; ++e) {
            auto key = std::make_pair(d.arrow(e).out, d.arrow(e).in);
            copy_index[static_cast<size_t>(e)] = seen[key]++;
        }
    }
    for (int e = 0; e < m; ++e) {
        const int i = d.arrow(e).out, j = d.arrow(e).in;
        const int is = inv.star(i), js = inv.star(j);
        const int img = d.omega_arrow(is, js, copy_index[static_cast<size_t>(e)]);
        if (img < 0) throw std::logic_error("internal: involution is not a graph automorphism");
        const bool flipped = !(d.arrow(img).out == is && d.arrow(img).in == js);
        // image of the Omega arrow e: img if it points i*->j*, else reverse
        s.arrow[static_cast<size_t>(e)] = flipped ? d.reverse(img) : img;
        s.arrow[static_cast<size_t>(d.reverse(e))] = flipped ? img : d.reverse(img);
    }

    // Sign compensation c(h).  Needed so that the complex moment map of the
    // relabeled data is the relabeled moment map.  Three orbit shapes:
    //   h* = h           : c = 1
    //   h* = hbar        : c(h) = 1 on Omega, -1 on the reversal
    //   4-arrow orbits   : same-class -> all 1; class-flipping -> alternate,
    //                      anchored at the representative edge's Omega arrow
    for (int h = 0; h < H; ++h) {
        const int hs = s.arrow[static_cast<size_t>(h)];
        if (hs == h) {
            s.sign[static_cast<size_t>(h)] = 1;
        } else if (hs == d.reverse(h)) {
            s.sign[static_cast<size_t>(h)] = d.in_omega(h) ? 1 : -1;
        } else if (d.in_omega(h) == d.in_omega(hs)) {
            s.sign[static_cast<size_t>(h)] = 1;
        } else {
            // representative edge: smaller Omega id in the orbit {e, e*}
            const int e = d.in_omega(h) ? h : d.reverse(h);
            const int es_omega = d.in_omega(s.arrow[static_cast<size_t>(e)])
                                     ? s.arrow[static_cast<size_t>(e)]
                                     : d.reverse(s.arrow[static_cast<size_t>(e)]);
            const bool rep = e < es_omega;
            // on the representative edge: Omega arrow +1, reversal -1;
            // on the image edge: Omega arrow -1, reversal +1
            if (rep)
                s.sign[static_cast<size_t>(h)] = d.in_omega(h) ? 1 : -1;
            else
                s.sign[static_cast<size_t>(h)] = d.in_omega(h) ? -1 : 1;
        }
    }
    return s;
}

OrientationInfo choose_orientation(const AffineDiagram& d, const Involution& inv) {
    OrientationInfo info;
    const StarData s = make_star_data(d, inv);
    const int m = d.num_edges();
    info.omega.reserve(static_cast<size_t>(m));
    info.star_in_omega.reserve(static_cast<size_t>(m));
    for (int e = 0; e < m; ++e) {
        info.omega.push_back(d.arrow(e));
        info.star_in_omega.push_back(d.in_omega(s.arrow[static_cast<size_t>(e)]));
    }
    return info;
}

}  // namespace adhm
