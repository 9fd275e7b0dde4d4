#pragma once

// compartmental model description: directed graph with input, output and
// leak annotations, canonical parameter ordering, the symbolic system
// matrix, and derived graph structure.

#include <linident/poly.hpp>

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace linident {

enum class ModelErrorCode {
    DuplicateEdge,
    SelfLoop,
    IndexOutOfRange,
    EmptyInputs,
    EmptyOutputs,
    ParseError,
};

struct ModelError : std::runtime_error {
    ModelErrorCode code;
    ModelError(ModelErrorCode c, const std::string& what)
        : std::runtime_error(what), code(c) {}
};

const char* model_error_name(ModelErrorCode c);

// violated operation preconditions (distinct from malformed models): the
// cli maps these to their own exit code
enum class PrecondCode {
    NotSISO,
    NotObservable,
    SpecTooLarge,
    DenominatorVanishes,
};

struct PrecondError : std::runtime_error {
    PrecondCode code;
    PrecondError(PrecondCode c, const std::string& what)
        : std::runtime_error(what), code(c) {}
};

const char* precond_error_name(PrecondCode c);

// model as written by the user: 1-based compartment labels
struct RawModel {
    int compartments = 0;
    std::vector<std::pair<int, int>> edges; // (from, to)
    std::vector<int> inputs, outputs, leaks;
    bool leaks_are_total_outflow = false;
    std::string name;
};

// one model parameter: either the rate of edge from->to (named a{to}{from})
// or the leak rate of a compartment (named a0{j})
struct ParamIndex {
    bool is_leak = false;
    int from = -1, to = -1; // 0-based, edges only
    int comp = -1;          // 0-based, leaks only
    std::string name;
};

// validated model; compartments are 0-based internally, all display names
// use the external 1-based labels
struct CompModel {
    int n = 0;
    std::vector<std::pair<int, int>> edges; // (from, to), sorted by (to, from)
    std::vector<int> inputs, outputs, leaks; // sorted ascending
    bool leaks_are_total_outflow = false;
    std::string name;
    std::vector<ParamIndex> params; // edges first (by (to,from)), then leaks

    int num_params() const { return (int)params.size(); }
    std::vector<std::string> param_names() const;
    int param_ordinal(const std::string& name) const; // -1 if unknown
    bool has_edge(int from, int to) const;
    int edge_param(int from, int to) const; // ordinal, -1 if absent
    int leak_param(int comp) const;         // ordinal, -1 if absent

    // canonical text encoding (used for hashing, dedup and memo keys)
    std::string canonical_key() const;
    std::uint64_t hash() const;
};

CompModel validate_model(const RawModel& raw);

std::string param_name(int to_1b, int from_1b); // edge rate display name
std::string leak_name(int comp_1b);

// symbolic system matrix over the model's parameter ring.
// default convention: A[t][f] = a_{tf} for each edge, diagonal
// A[i][i] = -leak(i) - sum of outflow rates; with leaks_are_total_outflow
// the diagonal of a leak compartment is just -a0i (the leak absorbs
// outflows), matching models specified directly by their rate matrix.
PolyMatrix compartmental_matrix(const CompModel& m);

struct GraphProps {
    bool strongly_connected = false;
    bool strongly_io_connected = false;
    bool is_bidirected_tree = false;
    bool is_directed_cycle = false; // requires n >= 3
    bool is_directed_path = false;
    bool is_catenary = false;   // bidirected chain covering all compartments
    bool is_mammillary = false; // bidirected star; center stored below
    int mammillary_center = -1;
    std::optional<int> io_distance; // defined only for single-input single-output; -1 = unreachable
    std::vector<std::set<int>> output_reachable; // per output: compartments that reach it
};

GraphProps graph_props(const CompModel& m);

// compartments with a directed path to the given compartment (inclusive)
std::set<int> reaches(const CompModel& m, int target);

// relabel compartments by perm (new label of i is perm[i]); parameters are
// re-sorted into canonical order. used by enumeration dedup and tests.
CompModel relabeled(const CompModel& m, const std::vector<int>& perm);

} // namespace linident
