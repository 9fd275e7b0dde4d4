#pragma once

// human-readable and machine-readable output: model files, analysis
// reports, and the classification database writers.

#include <linident/reparam.hpp>
#include <linident/search.hpp>

#include <json.hpp>

#include <iosfwd>

namespace linident {

inline constexpr const char* kToolVersion = "0.1.0";

using OrderedJson = nlohmann::ordered_json;

// model files: json with keys compartments, edges, inputs, outputs, leaks,
// optional name/notes/leaks_are_total_outflow; unknown keys are rejected.
// the edge convention [from, to] -> a_{to,from} is repeated in every parse
// error so orientation mistakes are caught early.
RawModel model_from_json(const OrderedJson& doc);
CompModel read_model_file(const std::string& path);

OrderedJson model_json(const CompModel& m);

std::string report_text(const IdentReport& r, const RankOptions& opt);
OrderedJson report_json(const IdentReport& r, const RankOptions& opt);

std::string rules_text(const std::vector<RuleHit>& hits);
OrderedJson rules_json(const std::vector<RuleHit>& hits);

std::string io_equations_text(const CompModel& m);
OrderedJson io_equations_json(const CompModel& m);

std::string functions_text(const std::vector<FunctionVerdict>& v);
OrderedJson functions_json(const std::vector<FunctionVerdict>& v);

std::string scaling_text(const CompModel& m, const ScalingSymmetry& s);
OrderedJson scaling_json(const ScalingSymmetry& s);

std::string reparam_text(const CompModel& m, const LinearReparam& r);
OrderedJson reparam_json(const CompModel& m, const LinearReparam& r);

std::string adjustment_text(const AdjustmentResult& r);
OrderedJson adjustment_json(const AdjustmentResult& r);

// streaming database writer ("csv" or "jsonl"); identical spec + seed
// produce byte-identical files — no timestamps, no environment leakage
class DatabaseWriter {
public:
    DatabaseWriter(std::ostream& out, std::string format,
                   const FamilySpec& spec, const RankOptions& opt);
    void row(const DbRow& r);
    void finish(const FamilySummary& s);

private:
    std::ostream& out_;
    std::string format_;
};

} // namespace linident
