#include "bn/instance.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace bn {

namespace {

using nlohmann::json;

Polynomial parse_entry(const json& j, std::size_t d, const std::string& where) {
    if (!j.is_string())
        throw BnError(where + ": polynomial entries must be strings");
    try {
        return parse_polynomial(j.get<std::string>(), d);
    } catch (const BnError& e) {
        throw BnError(where + ": " + e.what());
    }
}

DifferentialForm parse_form(const json& j, std::size_t d, std::size_t degree,
                            const std::string& where) {
    DifferentialForm w(d, degree);
    if (!j.is_array()) throw BnError(where + ": expected an array of entries");
    for (const auto& entry : j) {
        if (!entry.is_array() || entry.size() != degree + 1)
            throw BnError(where + ": each entry needs " + std::to_string(degree) +
                          " indices and one polynomial");
        std::vector<unsigned> idx(degree);
        for (std::size_t k = 0; k < degree; ++k) {
            if (!entry[k].is_number_unsigned() || entry[k].get<std::size_t>() < 1 ||
                entry[k].get<std::size_t>() > d)
                throw BnError(where + ": coordinate indices must lie in 1.." +
                              std::to_string(d));
            idx[k] = static_cast<unsigned>(entry[k].get<std::size_t>()) - 1;
            if (k > 0 && idx[k] <= idx[k - 1])
                throw BnError(where + ": indices must be strictly increasing");
        }
        w.set(idx, parse_entry(entry[degree], d, where));
    }
    return w;
}

Algebroid algebroid_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dim"))
        throw BnError("algebroid: missing \"dim\"");
    if (!j["dim"].is_number_unsigned() || j["dim"].get<std::size_t>() == 0)
        throw BnError("algebroid: \"dim\" must be a positive integer");
    std::size_t d = j["dim"].get<std::size_t>();
    DifferentialForm F2(d, 2), H3(d, 3);
    if (j.contains("twist")) {
        const json& t = j["twist"];
        if (!t.is_object()) throw BnError("algebroid: \"twist\" must be an object");
        if (t.contains("F2")) F2 = parse_form(t["F2"], d, 2, "twist.F2");
        if (t.contains("H3")) H3 = parse_form(t["H3"], d, 3, "twist.H3");
    }
    return Algebroid(d, std::move(F2), std::move(H3));
}

PolyMat parse_matrix(const json& j, std::size_t d, std::size_t N, const std::string& where) {
    if (!j.is_array() || j.size() != N * N)
        throw BnError(where + ": expected " + std::to_string(N * N) +
                      " row-major polynomial strings");
    PolyMat m(N, N, d);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < N; ++k)
            m(i, k) = parse_entry(j[i * N + k], d, where);
    return m;
}

Instance instance_from_json(const json& j) {
    if (!j.is_object()) throw BnError("instance: top level must be an object");
    if (!j.contains("algebroid")) return {algebroid_from_json(j), std::nullopt};
    Algebroid E = algebroid_from_json(j["algebroid"]);
    std::size_t d = E.d(), N = E.rank();
    if (!j.contains("F") || !j.contains("u0"))
        throw BnError("instance: structure files need \"F\" and \"u0\"");
    BnStructure S{parse_matrix(j["F"], d, N, "F"), {}, std::nullopt};
    if (!j["u0"].is_array() || j["u0"].size() != N)
        throw BnError("u0: expected " + std::to_string(N) + " polynomial strings");
    S.u0.reserve(N);
    for (std::size_t i = 0; i < N; ++i) S.u0.push_back(parse_entry(j["u0"][i], d, "u0"));
    if (j.contains("Gend")) S.Gend = parse_matrix(j["Gend"], d, N, "Gend");
    return {std::move(E), std::move(S)};
}

json form_to_json(const DifferentialForm& w) {
    json arr = json::array();
    for (const auto& [idx, p] : w.comps()) {
        json entry = json::array();
        for (unsigned i : idx) entry.push_back(i + 1);
        entry.push_back(p.to_string());
        arr.push_back(std::move(entry));
    }
    return arr;
}

json matrix_to_json(const PolyMat& m) {
    json arr = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t k = 0; k < m.cols(); ++k) arr.push_back(m(i, k).to_string());
    return arr;
}

json algebroid_to_json(const Algebroid& E) {
    json j;
    j["dim"] = E.d();
    if (E.twisted()) {
        json t = json::object();
        if (!E.F2().is_zero()) t["F2"] = form_to_json(E.F2());
        if (!E.H3().is_zero()) t["H3"] = form_to_json(E.H3());
        j["twist"] = std::move(t);
    }
    return j;
}

}  // namespace

Algebroid algebroid_from_json_text(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw BnError("instance: invalid JSON");
    return algebroid_from_json(j);
}

Instance instance_from_json_text(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw BnError("instance: invalid JSON");
    return instance_from_json(j);
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BnError("cannot open instance file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return instance_from_json_text(buf.str());
}

std::string instance_to_json(const Algebroid& E, const BnStructure* S) {
    json j;
    if (!S) {
        j = algebroid_to_json(E);
    } else {
        j["algebroid"] = algebroid_to_json(E);
        j["F"] = matrix_to_json(S->F);
        json u0 = json::array();
        for (const auto& p : S->u0) u0.push_back(p.to_string());
        j["u0"] = std::move(u0);
        if (S->Gend) j["Gend"] = matrix_to_json(*S->Gend);
    }
    return j.dump(2) + "\n";
}

}  // namespace bn
