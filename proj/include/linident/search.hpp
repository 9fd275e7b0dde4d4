#pragma once

// adjustment search (minimal added outputs, minimal parameter fixings) and
// exhaustive family enumeration into classification databases.

#include <linident/rank.hpp>

#include <functional>

namespace linident {

struct SearchOptions {
    int budget = 3;            // largest adjustment cardinality explored
    bool include_inputs = false; // also consider placing new inputs
    RankOptions rank;
};

struct SearchAtom {
    bool is_input = false;
    int comp = -1; // 0-based
    std::string label;
};

struct AdjustmentResult {
    std::string kind; // "add-outputs" | "fix-params"
    int budget = 0;
    int min_size = -1;          // -1: nothing found within the budget
    bool within_budget = false;
    long long evaluations = 0;  // rank queries made
    std::vector<SearchAtom> atoms; // candidate universe (add-outputs only)
    // every minimum-cardinality success, sorted; entries are indices into
    // atoms for add-outputs and parameter ordinals for fix-params
    std::vector<std::vector<int>> sets;
    std::vector<std::vector<std::string>> set_labels;
};

// breadth-first over added output sets by cardinality 0..budget; every
// returned set makes the model generically locally identifiable, and no
// proper subset does
AdjustmentResult minimal_output_additions(const CompModel& m,
                                          const SearchOptions& opt = {});

// parameter subsets treated as known constants (their jacobian columns
// removed); no set smaller than kernel_dim can work, so the search starts
// there
AdjustmentResult minimal_parameter_fixings(const CompModel& m,
                                           const SearchOptions& opt = {});

struct FamilySpec {
    // directed-cycle | bidirected-tree | catenary | mammillary |
    // directed-path | all-digraphs
    std::string family;
    int n_min = 1, n_max = 1;
    // placement sizes; -1 means all subsets (inputs and outputs nonempty)
    int in_size = -1, out_size = -1, leak_size = -1;
    bool dedup = true; // canonical form up to the family's symmetry
};

struct DbRow {
    long long seq = 0;
    CompModel model;
    IdentReport report;
};

struct FamilySummary {
    long long rows = 0;
    long long identifiable = 0;
    long long agree = 0; // rows whose structural rules match the rank verdict
};

// exhaustive, deduplicated enumeration in a fixed canonical order; throws
// PrecondError{SpecTooLarge} beyond the documented limits
FamilySummary enumerate_family(const FamilySpec& spec, const RankOptions& opt,
                               const std::function<void(const DbRow&)>& sink);

} // namespace linident
