#include "adhm/io.hpp"

#include <fstream>

namespace adhm {

namespace {

json matrix_to_json(const CMat& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

CMat matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols,
                      const std::string& where) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
        throw validation_error(where + ": expected " + std::to_string(rows) + " rows");
    CMat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json& row = j[static_cast<size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw validation_error(where + ": row " + std::to_string(r) + " has wrong length");
        for (Eigen::Index c = 0; c < cols; ++c) {
            const json& e = row[static_cast<size_t>(c)];
            if (!e.is_array() || e.size() != 2)
                throw validation_error(where + ": entries must be [re, im] pairs");
            m(r, c) = {e[0].get<double>(), e[1].get<double>()};
        }
    }
    return m;
}

Eigen::VectorXi vec_from_json(const json& j, int n, const std::string& where) {
    if (!j.is_array() || static_cast<int>(j.size()) != n)
        throw validation_error(where + ": expected an array of length " + std::to_string(n));
    Eigen::VectorXi v(n);
    for (int i = 0; i < n; ++i) v(i) = j[static_cast<size_t>(i)].get<int>();
    return v;
}

}  // namespace

json diagram_to_json(const AffineDiagram& d) {
    json j;
    j["kind"] = kind_name(d.kind());
    j["rank"] = d.rank();
    json adj = json::array();
    for (int i = 0; i < d.num_vertices(); ++i) {
        json row = json::array();
        for (int k = 0; k < d.num_vertices(); ++k) row.push_back(d.adjacency()(i, k));
        adj.push_back(std::move(row));
    }
    j["adjacency"] = std::move(adj);
    json marks = json::array();
    for (int i = 0; i < d.num_vertices(); ++i) marks.push_back(d.marks()(i));
    j["marks"] = std::move(marks);
    json omega = json::array();
    for (int e = 0; e < d.num_edges(); ++e)
        omega.push_back(json::array({d.arrow(e).out, d.arrow(e).in}));
    j["orientation"] = std::move(omega);
    return j;
}

json parameter_to_json(const Parameter& z) {
    json j;
    json re = json::array();
    for (int i = 0; i < z.size(); ++i) re.push_back(z.re(i));
    json c = json::array();
    for (int i = 0; i < z.size(); ++i)
        c.push_back(json::array({z.c(i).real(), z.c(i).imag()}));
    j["zeta_re"] = std::move(re);
    j["zeta_c"] = std::move(c);
    return j;
}

Parameter parameter_from_json(const json& j, const AffineDiagram& d) {
    const int n = d.num_vertices();
    if (!j.contains("zeta_re") || !j.contains("zeta_c"))
        throw validation_error("parameter file needs zeta_re and zeta_c");
    const json& re = j["zeta_re"];
    const json& c = j["zeta_c"];
    if (!re.is_array() || static_cast<int>(re.size()) != n)
        throw validation_error("zeta_re: expected length " + std::to_string(n));
    if (!c.is_array() || static_cast<int>(c.size()) != n)
        throw validation_error("zeta_c: expected length " + std::to_string(n));
    Parameter z;
    z.re = Eigen::VectorXd(n);
    z.c = Eigen::VectorXcd(n);
    for (int i = 0; i < n; ++i) {
        z.re(i) = re[static_cast<size_t>(i)].get<double>();
        const json& e = c[static_cast<size_t>(i)];
        if (!e.is_array() || e.size() != 2)
            throw validation_error("zeta_c entries must be [re, im] pairs");
        z.c(i) = {e[0].get<double>(), e[1].get<double>()};
    }
    return z;
}

json adhm_to_json(const ADHMData& x) {
    const auto& d = x.diag();
    json j;
    j["diagram"] = {{"kind", kind_name(d.kind())}, {"rank", d.rank()}};
    json v = json::array(), w = json::array();
    for (int i = 0; i < d.num_vertices(); ++i) {
        v.push_back(x.v(i));
        w.push_back(x.w(i));
    }
    j["v"] = std::move(v);
    j["w"] = std::move(w);
    json B = json::object();
    for (int h = 0; h < d.num_arrows(); ++h)
        B[std::to_string(h)] = matrix_to_json(x.B[static_cast<size_t>(h)]);
    j["B"] = std::move(B);
    json a = json::object(), b = json::object();
    for (int i = 0; i < d.num_vertices(); ++i) {
        a[std::to_string(i)] = matrix_to_json(x.a[static_cast<size_t>(i)]);
        b[std::to_string(i)] = matrix_to_json(x.b[static_cast<size_t>(i)]);
    }
    j["a"] = std::move(a);
    j["b"] = std::move(b);
    j["dual_frame"] = x.dual_frame;
    return j;
}

ADHMData adhm_from_json(const json& j) {
    if (!j.contains("diagram") || !j["diagram"].contains("kind") ||
        !j["diagram"].contains("rank"))
        throw validation_error("adhm file: missing diagram.kind / diagram.rank");
    const Kind kind = kind_from_string(j["diagram"]["kind"].get<std::string>());
    const int rank = j["diagram"]["rank"].get<int>();
    auto diagram = std::make_shared<const AffineDiagram>(AffineDiagram::build(kind, rank));
    const int n = diagram->num_vertices();
    if (!j.contains("v") || !j.contains("w"))
        throw validation_error("adhm file: missing v / w");
    const Eigen::VectorXi v = vec_from_json(j["v"], n, "v");
    const Eigen::VectorXi w = vec_from_json(j["w"], n, "w");
    ADHMData x = zero_adhm(diagram, v, w);
    if (j.contains("dual_frame")) x.dual_frame = j["dual_frame"].get<bool>();
    if (!j.contains("B") || !j.contains("a") || !j.contains("b"))
        throw validation_error("adhm file: missing B / a / b");
    for (int h = 0; h < diagram->num_arrows(); ++h) {
        const std::string key = std::to_string(h);
        if (!j["B"].contains(key))
            throw validation_error("adhm file: B." + key + " missing");
        x.B[static_cast<size_t>(h)] =
            matrix_from_json(j["B"][key], v(diagram->arrow(h).in), v(diagram->arrow(h).out),
                             "B." + key);
    }
    for (int i = 0; i < n; ++i) {
        const std::string key = std::to_string(i);
        if (!j["a"].contains(key) || !j["b"].contains(key))
            throw validation_error("adhm file: a." + key + " or b." + key + " missing");
        x.a[static_cast<size_t>(i)] = matrix_from_json(j["a"][key], v(i), w(i), "a." + key);
        x.b[static_cast<size_t>(i)] = matrix_from_json(j["b"][key], w(i), v(i), "b." + key);
    }
    x.check_shapes();
    return x;
}

json forms_to_json(const FormData& f) {
    json j;
    json phi = json::object();
    for (size_t i = 0; i < f.phi.size(); ++i) phi[std::to_string(i)] = matrix_to_json(f.phi[i]);
    j["phi"] = std::move(phi);
    j["sign"] = f.class_sign();
    j["class"] = class_name(f.cls);
    return j;
}

FormData forms_from_json(const json& j, const AffineDiagram& d) {
    FormData f;
    if (j.contains("class"))
        f.cls = class_from_string(j["class"].get<std::string>());
    else if (j.contains("sign"))
        f.cls = j["sign"].get<int>() >= 0 ? InstantonClass::SO : InstantonClass::Sp;
    else
        throw validation_error("forms file: missing class / sign");
    if (!j.contains("phi")) throw validation_error("forms file: missing phi");
    const Involution inv = diagram_involution(d);
    f.phi.resize(static_cast<size_t>(d.num_vertices()));
    f.sign.assign(static_cast<size_t>(d.num_vertices()), f.class_sign());
    for (int i = 0; i < d.num_vertices(); ++i) {
        const std::string key = std::to_string(i);
        if (!j["phi"].contains(key))
            throw validation_error("forms file: phi." + key + " missing");
        const json& m = j["phi"][key];
        const auto rows = static_cast<Eigen::Index>(m.size());
        Eigen::Index cols = rows;
        if (rows > 0) cols = static_cast<Eigen::Index>(m[0].size());
        f.phi[static_cast<size_t>(i)] = matrix_from_json(m, rows, cols, "phi." + key);
        if (inv.star(i) == i && rows > 0) {
            const CMat& p = f.phi[static_cast<size_t>(i)];
            f.sign[static_cast<size_t>(i)] =
                (p - p.transpose()).norm() <= 1e-12 * (1.0 + p.norm()) ? 1 : -1;
        }
    }
    return f;
}

json report_to_json(const Report& r) {
    json j;
    j["residual"] = r.residual;
    j["stabilizer_dim"] = r.stabilizer_dim;
    if (r.tangent_dim >= 0) j["tangent_dim"] = r.tangent_dim;
    if (r.has_fixed) j["fixed"] = r.fixed;
    return j;
}

std::string dump_canonical(const json& j) { return j.dump(1) + "\n"; }

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw validation_error("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot write " + path);
    out << dump_canonical(j);
}

}  // namespace adhm
