// model_io.hpp — JSON model files and built-in models

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qrobust/bloch_model.hpp"
#include "qrobust/cavity.hpp"

namespace qrobust {

struct LoadedModel {
    std::string name;
    OpenSystem system;
    std::vector<StructureDef> structures;
    std::optional<CavityParams> cavity;  // set for the built-in cavity models

    BlochModel bloch() const { return assemble(system, structures); }
    std::vector<std::string> structure_ids() const;
};

// Built-ins: "cavity" / "cavity:gain" (Delta = 1), "cavity:mu" (Delta = 0.1),
// "dephasing" (H = sigma_z / 2, structure "D" = unit-rate sigma_z dephasing).
bool is_builtin_model(const std::string& name);
LoadedModel builtin_model(const std::string& name);

// Loads a built-in by name or parses a JSON file:
// { "dim": N, "H": [[[re, im], ...], ...], "jumps": [{"V": matrix, "rate": r}],
//   "structures": [{"id": s, "hamiltonian_term": matrix|null,
//                   "jump_term": {"V": matrix, "rate": r}|null}] }
// Throws ParseError (with the offending field path) or ValidationError.
LoadedModel load_model(const std::string& path_or_builtin);
LoadedModel parse_model_json(const std::string& text, const std::string& source = "<string>");

} // namespace qrobust
