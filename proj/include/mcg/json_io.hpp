#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mcg/permgrp.hpp"

namespace mcg {

using Json = nlohmann::ordered_json;

// Interchange schema for permutation representations, shared by the coset
// module, the form module, the golden data files and the CLI:
//   { "degree": m,
//     "generators": [ { "name": "T0", "cycles": "(1 3)(2 5)" }, ... ],
//     "metadata": { ... },            optional
//     "fingerprint": "hex64" }        optional, over degree + generator list

inline std::string rep_fingerprint_text(const PermRep& rep) {
    std::ostringstream os;
    os << rep.degree << '\n';
    for (auto& [name, p] : rep.gens) os << name << ':' << perm_to_cycles(p) << '\n';
    return os.str();
}

inline std::string rep_fingerprint(const PermRep& rep) {
    return hex64(fnv1a64(rep_fingerprint_text(rep)));
}

inline Json rep_to_json(const PermRep& rep, Json metadata = Json(), bool with_fingerprint = false) {
    Json j;
    j["degree"] = rep.degree;
    j["generators"] = Json::array();
    for (auto& [name, p] : rep.gens)
        j["generators"].push_back(Json{{"name", name}, {"cycles", perm_to_cycles(p)}});
    if (!metadata.is_null()) j["metadata"] = std::move(metadata);
    if (with_fingerprint) j["fingerprint"] = rep_fingerprint(rep);
    return j;
}

inline PermRep rep_from_json(const Json& j) {
    PermRep rep;
    rep.degree = j.at("degree").get<int>();
    for (auto& g : j.at("generators"))
        rep.add(g.at("name").get<std::string>(),
                perm_from_cycles(g.at("cycles").get<std::string>(), rep.degree));
    if (j.contains("fingerprint")) {
        std::string want = j.at("fingerprint").get<std::string>();
        if (want != rep_fingerprint(rep))
            throw error("rep_from_json: fingerprint mismatch (corrupted table?)");
    }
    return rep;
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open " + path);
    Json j;
    in >> j;
    return j;
}

inline void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw error("cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace mcg
