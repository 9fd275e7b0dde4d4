#pragma once

// graph-based identifiability rules: structural criteria that decide model-
// or parameter-level verdicts from the shape of the compartment graph alone.
// rule ids and citation tags are stable; the README lists the catalog.

#include <linident/model.hpp>

namespace linident {

struct RuleHit {
    std::string rule_id;
    std::string citation; // stable catalog tag
    // "model-identifiable" | "model-unidentifiable" |
    // "param-globally-identifiable" | "param-unidentifiable"
    std::string verdict;
    std::vector<std::string> affected_params; // param-level verdicts only
    std::string note;
};

// two structural rules contradicting each other is a program bug, not a
// property of the model
struct InternalRuleConflict : std::logic_error {
    using std::logic_error::logic_error;
};

std::vector<RuleHit> classify(const CompModel& m);

// leak interlacing on a directed-cycle model: for every ordered pair of
// cyclically consecutive leaks (l, l'), the arc strictly after l up to and
// including l' must contain an input or output compartment
bool cycle_leaks_interlace(const CompModel& m);

// parameters forced unidentifiable because their source compartment reaches
// no output: the leak of such a compartment and every edge leaving it
std::vector<std::string> unidentifiable_params_by_reachability(const CompModel& m);

// candidate identifiable functions read off the graph: products of edge
// rates along simple directed cycles and along simple input-to-output paths
struct MonomialCandidate {
    std::string kind;         // "cycle" | "io-path"
    std::vector<int> comps;   // vertex sequence (0-based)
    std::string monomial;     // display form
    std::vector<int> exponent; // over the model's parameter order
};

std::vector<MonomialCandidate> cycle_path_monomials(const CompModel& m,
                                                    int cap = 10000,
                                                    bool* truncated = nullptr);

} // namespace linident
