// model_io.cpp — model file parsing with field-path diagnostics

#include "qrobust/model_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qrobust {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& source, const std::string& path, const std::string& msg) {
    throw ParseError(source + ": " + path + ": " + msg);
}

cplx parse_entry(const json& e, const std::string& source, const std::string& path) {
    if (e.is_number()) return cplx(e.get<double>(), 0.0);
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
        return cplx(e[0].get<double>(), e[1].get<double>());
    fail(source, path, "expected [re, im]");
}

MatrixXc parse_matrix(const json& j, int dim, const std::string& source, const std::string& path) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        fail(source, path, "expected " + std::to_string(dim) + " rows");
    MatrixXc m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const std::string rp = path + "[" + std::to_string(r) + "]";
        if (!j[r].is_array() || static_cast<int>(j[r].size()) != dim)
            fail(source, rp, "expected " + std::to_string(dim) + " entries");
        for (int c = 0; c < dim; ++c)
            m(r, c) = parse_entry(j[r][c], source, rp + "[" + std::to_string(c) + "]");
    }
    return m;
}

JumpTerm parse_jump(const json& j, int dim, const std::string& source, const std::string& path) {
    if (!j.is_object()) fail(source, path, "expected object with fields V, rate");
    if (!j.contains("V")) fail(source, path + ".V", "missing field");
    JumpTerm jt{parse_matrix(j.at("V"), dim, source, path + ".V"), 1.0};
    if (j.contains("rate")) {
        if (!j.at("rate").is_number()) fail(source, path + ".rate", "expected number");
        jt.rate = j.at("rate").get<double>();
    }
    if (!(jt.rate >= 0.0)) throw ValidationError(source + ": " + path + ".rate: must be >= 0");
    return jt;
}

LoadedModel cavity_builtin(const std::string& name, const CavityParams& p) {
    LoadedModel m{name, cavity_system(p), {}, p};
    for (int k = 1; k <= kNumStructures; ++k) m.structures.push_back(cavity_structure(k));
    return m;
}

} // namespace

std::vector<std::string> LoadedModel::structure_ids() const {
    std::vector<std::string> ids;
    for (const auto& s : structures) ids.push_back(s.id);
    return ids;
}

bool is_builtin_model(const std::string& name) {
    return name == "cavity" || name == "cavity:gain" || name == "cavity:mu" || name == "dephasing";
}

LoadedModel builtin_model(const std::string& name) {
    if (name == "cavity" || name == "cavity:gain") return cavity_builtin(name, nominal_gain());
    if (name == "cavity:mu") return cavity_builtin(name, nominal_mu());
    if (name == "dephasing") {
        const MatrixXc sz = pauli::z();
        LoadedModel m{name, OpenSystem(HermitianOperator(0.5 * sz)), {}, std::nullopt};
        StructureDef d;
        d.id = "D";
        d.jump_term = sz;
        m.structures.push_back(d);
        return m;
    }
    throw ValidationError("unknown built-in model '" + name + "'");
}

LoadedModel parse_model_json(const std::string& text, const std::string& source) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(source + ": invalid JSON: " + e.what());
    }
    if (!j.is_object()) fail(source, "$", "expected object");
    if (!j.contains("dim") || !j.at("dim").is_number_integer()) fail(source, "dim", "expected integer");
    const int dim = j.at("dim").get<int>();
    if (dim < 2) throw ValidationError(source + ": dim: must be >= 2");
    if (!j.contains("H")) fail(source, "H", "missing field");
    const MatrixXc H = parse_matrix(j.at("H"), dim, source, "H");
    if (hermiticity_defect(H) > HermitianOperator::kTolerance)
        throw ValidationError(source + ": H: matrix is not Hermitian");

    std::vector<JumpTerm> jumps;
    if (j.contains("jumps")) {
        if (!j.at("jumps").is_array()) fail(source, "jumps", "expected array");
        for (size_t i = 0; i < j.at("jumps").size(); ++i)
            jumps.push_back(parse_jump(j.at("jumps")[i], dim, source, "jumps[" + std::to_string(i) + "]"));
    }

    LoadedModel model{source, OpenSystem(HermitianOperator(H), jumps), {}, std::nullopt};
    if (j.contains("structures")) {
        const json& js = j.at("structures");
        if (!js.is_array()) fail(source, "structures", "expected array");
        for (size_t i = 0; i < js.size(); ++i) {
            const std::string p = "structures[" + std::to_string(i) + "]";
            const json& e = js[i];
            if (!e.is_object()) fail(source, p, "expected object");
            if (!e.contains("id") || !e.at("id").is_string()) fail(source, p + ".id", "expected string");
            StructureDef def;
            def.id = e.at("id").get<std::string>();
            if (e.contains("hamiltonian_term") && !e.at("hamiltonian_term").is_null()) {
                def.hamiltonian_term =
                    parse_matrix(e.at("hamiltonian_term"), dim, source, p + ".hamiltonian_term");
                if (hermiticity_defect(*def.hamiltonian_term) > HermitianOperator::kTolerance)
                    throw ValidationError(source + ": " + p + ".hamiltonian_term: not Hermitian");
            }
            if (e.contains("jump_term") && !e.at("jump_term").is_null()) {
                const JumpTerm jt = parse_jump(e.at("jump_term"), dim, source, p + ".jump_term");
                def.jump_term = jt.V;
                def.jump_rate = jt.rate;
            }
            for (const auto& prev : model.structures)
                if (prev.id == def.id) throw ValidationError(source + ": " + p + ".id: duplicate id");
            model.structures.push_back(std::move(def));
        }
    }
    return model;
}

LoadedModel load_model(const std::string& path_or_builtin) {
    if (is_builtin_model(path_or_builtin)) return builtin_model(path_or_builtin);
    std::ifstream in(path_or_builtin);
    if (!in) throw ParseError(path_or_builtin + ": cannot open model file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model_json(ss.str(), path_or_builtin);
}

} // namespace qrobust
