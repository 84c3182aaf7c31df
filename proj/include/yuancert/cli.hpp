#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "yuancert/cone.hpp"
#include "yuancert/matrix.hpp"
#include "yuancert/nlp.hpp"
#include "yuancert/quadprob.hpp"

namespace yuancert::cli {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kSchemaVersion = "1";

enum ExitCode : int {
    kExitOk = 0,
    kExitRefuted = 1,
    kExitHypothesis = 2,
    kExitInput = 3,
    kExitNumerical = 4,
};

/// A parsed instance file: {"schema_version": "1", "kind": ..., "payload": {...}}.
struct Instance {
    std::string kind;  // family | kkt | quadprob | cone
    nlohmann::json payload;
};

/// Parses instance text. Syntax errors carry line and column; schema errors carry the JSON
/// path of the offending value. Both are thrown as InputError.
Instance parse_instance(std::string_view text, const std::string& source = "<input>");
Instance read_instance(const std::string& path);
std::string serialize_instance(const Instance& inst);

/// Family payload: {"matrices": [[row, ...], ...], "symmetric": true}.
struct FamilyPayload {
    std::vector<Matrix> matrices;
    bool symmetric = true;

    std::vector<SymMatrix> symmetric_members() const;
};

FamilyPayload family_from_json(const nlohmann::json& payload);
nlohmann::json to_json(const FamilyPayload& family);

/// Cone payload: {"ambient_dim": n, "subspace": [[...], ...], "ray": [...] | null}.
FirstOrderCone cone_from_json(const nlohmann::json& payload);
nlohmann::json to_json(const FirstOrderCone& k);

KKTData kkt_from_json(const nlohmann::json& payload);
nlohmann::json to_json(const KKTData& data);

/// Quadprob payload: {"matrices": [...], "ray_constant": a}.
QuadProblem quadprob_from_json(const nlohmann::json& payload);
nlohmann::json to_json(const QuadProblem& prob);

/// Hex SHA-256 of the given bytes.
std::string digest(std::string_view bytes);

/// Runs one command. `args` excludes the program name. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace yuancert::cli
