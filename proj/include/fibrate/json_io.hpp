#pragma once

#include "fibrate/fibration.hpp"
#include "fibrate/quaternionic.hpp"

#include <json.hpp>

#include <string>

namespace fibrate {

using nlohmann::json;

/// A structural problem in an input file; carries the offending field so the
/// CLI can name it.
class SchemaError : public Error {
public:
    SchemaError(const std::string& field, const std::string& why)
        : Error("schema violation in field \"" + field + "\": " + why), field_(field) {}

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

namespace detail {

inline const json& require_field(const json& j, const std::string& field) {
    if (!j.is_object()) throw SchemaError(field, "enclosing value is not an object");
    auto it = j.find(field);
    if (it == j.end()) throw SchemaError(field, "missing");
    return *it;
}

inline double require_number(const json& j, const std::string& field) {
    const json& v = require_field(j, field);
    if (!v.is_number()) throw SchemaError(field, "expected a number");
    return v.get<double>();
}

inline std::string require_string(const json& j, const std::string& field) {
    const json& v = require_field(j, field);
    if (!v.is_string()) throw SchemaError(field, "expected a string");
    return v.get<std::string>();
}

inline void check_schema_version(const json& j) {
    if (j.is_object() && j.contains("schema")) {
        if (!j["schema"].is_number_integer() || j["schema"].get<int>() != 1)
            throw SchemaError("schema", "unsupported version");
    }
}

}  // namespace detail

// ---- Matrix ----------------------------------------------------------------

inline json matrix_to_json(const Matrix& m) {
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline Matrix matrix_from_json(const json& j) {
    detail::check_schema_version(j);
    const json& rows_j = detail::require_field(j, "rows");
    const json& cols_j = detail::require_field(j, "cols");
    if (!rows_j.is_number_integer() || rows_j.get<long long>() < 0)
        throw SchemaError("rows", "expected a nonnegative integer");
    if (!cols_j.is_number_integer() || cols_j.get<long long>() < 0)
        throw SchemaError("cols", "expected a nonnegative integer");
    const auto rows = rows_j.get<Eigen::Index>();
    const auto cols = cols_j.get<Eigen::Index>();
    const json& data = detail::require_field(j, "data");
    if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != rows * cols)
        throw SchemaError("data", "expected an array of rows*cols numbers");
    Matrix m(rows, cols);
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j2 = 0; j2 < cols; ++j2) {
            const json& e = data[static_cast<std::size_t>(idx++)];
            if (!e.is_number()) throw SchemaError("data", "non-numeric entry");
            m(i, j2) = e.get<double>();
        }
    if (!m.allFinite()) throw SchemaError("data", "non-finite entry");
    return m;
}

// ---- vectors ---------------------------------------------------------------

inline json vector_to_json(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

inline Vector vector_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) throw SchemaError(field, "expected a nonempty array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw SchemaError(field, "non-numeric entry");
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

// ---- Bivector --------------------------------------------------------------

inline json bivector_to_json(const Bivector& a) {
    return json{{"coords", a.coords}};
}

inline Bivector bivector_from_json(const json& j) {
    detail::check_schema_version(j);
    const json& coords = detail::require_field(j, "coords");
    if (!coords.is_array() || coords.size() != 6)
        throw SchemaError("coords", "expected an array of 6 numbers");
    Bivector a;
    for (std::size_t i = 0; i < 6; ++i) {
        if (!coords[i].is_number()) throw SchemaError("coords", "non-numeric entry");
        a[i] = coords[i].get<double>();
    }
    if (!a.all_finite()) throw SchemaError("coords", "non-finite entry");
    return a;
}

// ---- OrientedPlane ---------------------------------------------------------

inline json plane_to_json(const OrientedPlane& p) {
    return json{{"u", vector_to_json(p.u)}, {"v", vector_to_json(p.v)}};
}

inline OrientedPlane plane_from_json(const json& j) {
    detail::check_schema_version(j);
    const Vector u = vector_from_json(detail::require_field(j, "u"), "u");
    const Vector v = vector_from_json(detail::require_field(j, "v"), "v");
    if (u.size() != v.size()) throw SchemaError("v", "dimension differs from u");
    try {
        return plane(u, v);
    } catch (const DependentInput&) {
        throw SchemaError("v", "u and v do not span a plane");
    }
}

// ---- ComplexStructure ------------------------------------------------------

inline json complex_structure_to_json(const ComplexStructure& cs) {
    json j = matrix_to_json(cs.matrix());
    j["n"] = cs.pairs();
    return j;
}

inline ComplexStructure complex_structure_from_json(const json& j) {
    const Matrix m = matrix_from_json(j);
    if (j.contains("n")) {
        if (!j["n"].is_number_integer() || j["n"].get<Eigen::Index>() * 2 != m.rows())
            throw SchemaError("n", "inconsistent with matrix dimension");
    }
    try {
        return ComplexStructure::validate(m);
    } catch (const NotComplexStructure& e) {
        throw SchemaError("data", e.what());
    }
}

// ---- QuatStructure ---------------------------------------------------------

inline json quat_structure_to_json(const QuatStructure& q) {
    return json{{"I", matrix_to_json(q.i().matrix())},
                {"J", matrix_to_json(q.j().matrix())},
                {"K", matrix_to_json(q.k().matrix())}};
}

inline QuatStructure quat_structure_from_json(const json& j) {
    detail::check_schema_version(j);
    const Matrix i = matrix_from_json(detail::require_field(j, "I"));
    const Matrix jj = matrix_from_json(detail::require_field(j, "J"));
    const Matrix k = matrix_from_json(detail::require_field(j, "K"));
    try {
        return QuatStructure::validate(i, jj, k);
    } catch (const NotQuaternionic& e) {
        throw SchemaError("I", e.what());
    }
}

// ---- SphereMap and Fibration -----------------------------------------------

inline json sphere_map_to_json(const SphereMap& f) {
    json j{{"kind", f.kind == SphereMap::Kind::constant ? "constant" : "contraction"},
           {"c", json::array({f.target(0), f.target(1), f.target(2)})}};
    if (f.kind == SphereMap::Kind::contraction) {
        j["lambda"] = f.lambda;
        json rot = json::array();
        for (int r = 0; r < 3; ++r)
            rot.push_back(json::array({f.rotation(r, 0), f.rotation(r, 1), f.rotation(r, 2)}));
        j["rotation"] = std::move(rot);
    }
    return j;
}

inline SphereMap sphere_map_from_json(const json& j) {
    const std::string kind = detail::require_string(j, "kind");
    const Vector c4 = vector_from_json(detail::require_field(j, "c"), "c");
    if (c4.size() != 3) throw SchemaError("c", "expected 3 components");
    Eigen::Vector3d c(c4(0), c4(1), c4(2));
    if (std::abs(c.norm() - 1.0) > 1e-8) throw SchemaError("c", "not a unit vector");
    c.normalize();
    if (kind == "constant") return SphereMap::constant(c);
    if (kind != "contraction") throw SchemaError("kind", "expected constant or contraction");
    const double lambda = detail::require_number(j, "lambda");
    if (!(lambda >= 0.0 && lambda < 1.0)) throw SchemaError("lambda", "must lie in [0, 1)");
    Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
    if (j.contains("rotation")) {
        const json& r = j["rotation"];
        if (!r.is_array() || r.size() != 3) throw SchemaError("rotation", "expected 3 rows");
        for (int a = 0; a < 3; ++a) {
            if (!r[static_cast<std::size_t>(a)].is_array() ||
                r[static_cast<std::size_t>(a)].size() != 3)
                throw SchemaError("rotation", "expected 3x3 entries");
            for (int b = 0; b < 3; ++b) {
                const json& e = r[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
                if (!e.is_number()) throw SchemaError("rotation", "non-numeric entry");
                rot(a, b) = e.get<double>();
            }
        }
        if ((rot * rot.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-8)
            throw SchemaError("rotation", "not orthogonal");
    }
    try {
        return SphereMap::contraction(c, lambda, rot);
    } catch (const std::exception& e) {
        throw SchemaError("lambda", e.what());
    }
}

inline json fibration_to_json(const Fibration& f) {
    if (f.is_hopf())
        return json{{"schema", 1},
                    {"variant", "hopf"},
                    {"J", complex_structure_to_json(f.structure())}};
    return json{{"schema", 1},
                {"variant", "graph"},
                {"p", vector_to_json(f.basepoint())},
                {"chirality", f.chirality() == Chirality::positive ? "positive" : "negative"},
                {"map", sphere_map_to_json(f.map())}};
}

inline Fibration fibration_from_json(const json& j) {
    detail::check_schema_version(j);
    const std::string variant = detail::require_string(j, "variant");
    if (variant == "hopf") {
        ComplexStructure cs = complex_structure_from_json(detail::require_field(j, "J"));
        if (cs.dim() != 4) throw SchemaError("J", "hopf fibration structure must be 4x4");
        return Fibration::hopf(std::move(cs));
    }
    if (variant != "graph") throw SchemaError("variant", "expected hopf or graph");
    Vector p = vector_from_json(detail::require_field(j, "p"), "p");
    if (p.size() != 4) throw SchemaError("p", "expected 4 components");
    if (std::abs(p.norm() - 1.0) > 1e-8) throw SchemaError("p", "not a unit vector");
    p.normalize();
    const std::string chir = detail::require_string(j, "chirality");
    if (chir != "positive" && chir != "negative")
        throw SchemaError("chirality", "expected positive or negative");
    SphereMap map = sphere_map_from_json(detail::require_field(j, "map"));
    return Fibration::graph(std::move(p), std::move(map),
                            chir == "positive" ? Chirality::positive : Chirality::negative);
}

// ---- DarbouxForm and KernelResult -------------------------------------------

inline json darboux_to_json(const DarbouxForm& d) {
    return json{{"schema", 1},
                {"a", d.a},
                {"P", plane_to_json(d.p)},
                {"b", d.b},
                {"Q", plane_to_json(d.q)}};
}

inline json kernel_to_json(const KernelResult& k) {
    json basis = json::array();
    for (Eigen::Index c = 0; c < k.basis.cols(); ++c)
        basis.push_back(vector_to_json(k.basis.col(c)));
    json j{{"dimension", k.dimension}, {"basis", std::move(basis)}};
    j["spectral_gap"] = std::isfinite(k.spectral_gap) ? json(k.spectral_gap) : json();
    return j;
}

// ---- Report ------------------------------------------------------------------

inline json report_to_json(const Report& r) {
    json checks = json::array();
    for (const Check& c : r.checks) {
        const char* status = c.status == CheckStatus::pass   ? "pass"
                             : c.status == CheckStatus::fail ? "fail"
                                                             : "skip";
        checks.push_back(json{{"name", c.name},
                              {"status", status},
                              {"details", c.details},
                              {"stats", c.stats}});
    }
    return json{{"schema", 1},
                {"suite", r.suite},
                {"seed", r.seed},
                {"tolerances", r.tolerances},
                {"checks", std::move(checks)},
                {"elapsed_ms", r.elapsed_ms}};
}

}  // namespace fibrate
