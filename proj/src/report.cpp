#include <linident/report.hpp>

#include <linident/ioeq.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace linident {

namespace {

const char* kEdgeHint = "edges are [from, to] pairs: [f, t] is the flow f -> t "
                        "with rate a_{tf}";

std::string fmt_bound(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::string hash_hex(std::uint64_t h) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return buf;
}

std::string verdict_statement(bool identifiable, int kernel_dim) {
    if (identifiable)
        return "generically locally identifiable (global status undetermined)";
    return "generically unidentifiable (" + std::to_string(kernel_dim) +
           " degree" + (kernel_dim == 1 ? "" : "s") + " of freedom)";
}

std::vector<int> one_based(const std::vector<int>& v) {
    std::vector<int> r;
    r.reserve(v.size());
    for (int c : v) r.push_back(c + 1);
    return r;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += v[i];
    }
    return s;
}

std::string edge_list_str(const CompModel& m) {
    std::vector<std::string> parts;
    for (auto [f, t] : m.edges)
        parts.push_back(std::to_string(f + 1) + "->" + std::to_string(t + 1));
    return join(parts, ";");
}

std::string int_list_str(const std::vector<int>& v) {
    std::vector<std::string> parts;
    for (int c : v) parts.push_back(std::to_string(c + 1));
    return join(parts, ";");
}

} // namespace

RawModel model_from_json(const OrderedJson& doc) {
    if (!doc.is_object())
        throw ModelError(ModelErrorCode::ParseError,
                         std::string("model file must be a json object; ") + kEdgeHint);
    RawModel raw;
    for (const auto& [key, value] : doc.items()) {
        try {
            if (key == "compartments") {
                raw.compartments = value.get<int>();
            } else if (key == "edges") {
                for (const auto& e : value) {
                    if (!e.is_array() || e.size() != 2)
                        throw ModelError(ModelErrorCode::ParseError,
                                         std::string("each edge must be a [from, to] "
                                                     "pair; ") + kEdgeHint);
                    raw.edges.push_back({e[0].get<int>(), e[1].get<int>()});
                }
            } else if (key == "inputs") {
                raw.inputs = value.get<std::vector<int>>();
            } else if (key == "outputs") {
                raw.outputs = value.get<std::vector<int>>();
            } else if (key == "leaks") {
                raw.leaks = value.get<std::vector<int>>();
            } else if (key == "leaks_are_total_outflow") {
                raw.leaks_are_total_outflow = value.get<bool>();
            } else if (key == "name") {
                raw.name = value.get<std::string>();
            } else if (key == "notes") {
                // free-form, ignored
            } else {
                throw ModelError(ModelErrorCode::ParseError,
                                 "unknown key '" + key + "'; " + kEdgeHint);
            }
        } catch (const OrderedJson::exception& e) {
            throw ModelError(ModelErrorCode::ParseError,
                             "bad value for '" + key + "': " + e.what() + "; " +
                                 kEdgeHint);
        }
    }
    return raw;
}

CompModel read_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ModelError(ModelErrorCode::ParseError, "cannot open " + path);
    OrderedJson doc;
    try {
        doc = OrderedJson::parse(in);
    } catch (const OrderedJson::exception& e) {
        throw ModelError(ModelErrorCode::ParseError,
                         path + ": " + e.what() + "; " + kEdgeHint);
    }
    RawModel raw = model_from_json(doc);
    if (raw.name.empty()) {
        auto slash = path.find_last_of('/');
        raw.name = slash == std::string::npos ? path : path.substr(slash + 1);
    }
    return validate_model(raw);
}

OrderedJson model_json(const CompModel& m) {
    OrderedJson j;
    j["name"] = m.name;
    j["hash"] = hash_hex(m.hash());
    j["compartments"] = m.n;
    OrderedJson edges = OrderedJson::array();
    for (auto [f, t] : m.edges) edges.push_back({f + 1, t + 1});
    j["edges"] = std::move(edges);
    j["inputs"] = one_based(m.inputs);
    j["outputs"] = one_based(m.outputs);
    j["leaks"] = one_based(m.leaks);
    if (m.leaks_are_total_outflow) j["leaks_are_total_outflow"] = true;
    j["parameters"] = m.param_names();
    return j;
}

std::string rules_text(const std::vector<RuleHit>& hits) {
    if (hits.empty()) return "structural rules: none applicable\n";
    std::ostringstream os;
    os << "structural rules:\n";
    for (const auto& h : hits) {
        os << "  - " << h.rule_id << " [" << h.citation << "]: " << h.verdict;
        if (!h.affected_params.empty()) os << " (" << join(h.affected_params, ", ") << ")";
        if (!h.note.empty()) os << " — " << h.note;
        os << "\n";
    }
    return os.str();
}

OrderedJson rules_json(const std::vector<RuleHit>& hits) {
    OrderedJson arr = OrderedJson::array();
    for (const auto& h : hits) {
        OrderedJson j;
        j["rule"] = h.rule_id;
        j["citation"] = h.citation;
        j["verdict"] = h.verdict;
        j["parameters"] = h.affected_params;
        if (!h.note.empty()) j["note"] = h.note;
        arr.push_back(std::move(j));
    }
    return arr;
}

std::string report_text(const IdentReport& r, const RankOptions& opt) {
    std::ostringstream os;
    os << "model: " << (r.model_name.empty() ? "(unnamed)" : r.model_name) << " — "
       << r.n << " compartment" << (r.n == 1 ? "" : "s") << ", " << r.num_params
       << " parameter" << (r.num_params == 1 ? "" : "s") << "\n";
    os << "rank: " << r.rank << " of " << r.num_params << " (kernel dimension "
       << r.kernel_dim << ")\n";
    os << "verdict: " << verdict_statement(r.identifiable, r.kernel_dim) << "\n";
    if (!r.per_param.empty()) {
        os << "parameters:\n";
        for (const auto& p : r.per_param)
            os << "  " << p.name << ": "
               << (p.identifiable ? "locally identifiable" : "unidentifiable") << "\n";
    }
    os << rules_text(r.rule_hits);
    os << "rules agree with the rank verdict: " << (r.rules_agree ? "yes" : "NO")
       << "\n";
    os << "prime " << FP61_PRIME << ", seed " << opt.seed << ", " << opt.trials
       << " trial" << (opt.trials == 1 ? "" : "s") << " (per-trial ranks";
    for (int t : r.detail.per_trial) os << " " << t;
    os << ")\n";
    os << "schwartz-zippel failure bound: " << fmt_bound(r.detail.per_trial_failure_bound)
       << " per trial, " << fmt_bound(r.detail.overall_failure_bound) << " overall\n";
    for (const auto& w : r.warnings) os << "warning: " << w << "\n";
    return os.str();
}

OrderedJson report_json(const IdentReport& r, const RankOptions& opt) {
    OrderedJson j;
    j["tool"] = "linident";
    j["version"] = kToolVersion;
    j["model"]["name"] = r.model_name;
    j["model"]["key"] = r.model_key;
    j["model"]["compartments"] = r.n;
    j["model"]["parameters"] = r.num_params;
    j["rank"]["value"] = r.rank;
    j["rank"]["kernel_dim"] = r.kernel_dim;
    j["rank"]["per_trial"] = r.detail.per_trial;
    j["rank"]["trial_seeds"] = r.detail.seeds;
    j["rank"]["trials_disagree"] = r.detail.trials_disagree;
    j["rank"]["prime"] = FP61_PRIME;
    j["rank"]["seed"] = opt.seed;
    j["rank"]["trials"] = opt.trials;
    j["rank"]["per_trial_failure_bound"] = r.detail.per_trial_failure_bound;
    j["rank"]["overall_failure_bound"] = r.detail.overall_failure_bound;
    j["verdict"]["identifiable"] = r.identifiable;
    j["verdict"]["statement"] = verdict_statement(r.identifiable, r.kernel_dim);
    OrderedJson params = OrderedJson::array();
    for (const auto& p : r.per_param) {
        OrderedJson pj;
        pj["name"] = p.name;
        pj["identifiable"] = p.identifiable;
        params.push_back(std::move(pj));
    }
    j["parameters"] = std::move(params);
    j["rules"] = rules_json(r.rule_hits);
    j["rules_agree"] = r.rules_agree;
    j["warnings"] = r.warnings;
    return j;
}

std::string io_equations_text(const CompModel& m) {
    std::ostringstream os;
    for (const auto& eq : io_equations(m)) {
        if ((int)eq.subsystem.size() < m.n)
            os << "subsystem for y" << eq.output + 1 << ": x"
               << join([&] {
                      std::vector<std::string> parts;
                      for (int c : eq.subsystem) parts.push_back(std::to_string(c + 1));
                      return parts;
                  }(), ", x")
               << "\n";
        os << io_equation_str(m, eq) << "\n";
    }
    return os.str();
}

OrderedJson io_equations_json(const CompModel& m) {
    auto names = m.param_names();
    OrderedJson arr = OrderedJson::array();
    for (const auto& eq : io_equations(m)) {
        OrderedJson j;
        j["output"] = eq.output + 1;
        j["subsystem"] = one_based(eq.subsystem);
        j["equation"] = io_equation_str(m, eq);
        OrderedJson den = OrderedJson::array();
        for (const auto& p : eq.den) den.push_back(p.str(names));
        j["denominator"] = std::move(den); // index = operator power
        OrderedJson nums;
        for (const auto& [in, coeffs] : eq.num) {
            OrderedJson cs = OrderedJson::array();
            for (const auto& p : coeffs) cs.push_back(p.str(names));
            nums["u" + std::to_string(in + 1)] = std::move(cs);
        }
        j["numerators"] = std::move(nums);
        arr.push_back(std::move(j));
    }
    return arr;
}

std::string functions_text(const std::vector<FunctionVerdict>& v) {
    std::ostringstream os;
    for (const auto& f : v) {
        os << f.expr << ": "
           << (f.identifiable ? "locally identifiable" : "unidentifiable");
        if (f.resamples) os << " (resampled " << f.resamples << ")";
        os << "\n";
    }
    return os.str();
}

OrderedJson functions_json(const std::vector<FunctionVerdict>& v) {
    OrderedJson arr = OrderedJson::array();
    for (const auto& f : v) {
        OrderedJson j;
        j["expr"] = f.expr;
        j["identifiable"] = f.identifiable;
        j["resamples"] = f.resamples;
        arr.push_back(std::move(j));
    }
    return arr;
}

std::string scaling_text(const CompModel& m, const ScalingSymmetry& s) {
    auto names = m.param_names();
    std::ostringstream os;
    os << "scaling symmetries: dimension " << s.dim << " (kernel dimension "
       << s.kernel_dim << ", " << (s.complete ? "complete" : "incomplete") << ")\n";
    for (size_t k = 0; k < s.basis_v.size(); ++k) {
        os << "  state weights (";
        for (size_t c = 0; c < s.basis_v[k].size(); ++c)
            os << (c ? ", " : "") << s.basis_v[k][c];
        os << "); parameter weights:";
        bool any = false;
        for (size_t p = 0; p < s.weights[k].size(); ++p)
            if (s.weights[k][p] != 0) {
                os << " " << names[p] << (s.weights[k][p] > 0 ? ":+" : ":")
                   << s.weights[k][p];
                any = true;
            }
        if (!any) os << " none";
        os << "\n";
    }
    if (!s.invariant_monomials.empty()) {
        os << "invariant monomial generators:\n";
        for (size_t g = 0; g < s.invariant_monomials.size(); ++g)
            os << "  k" << g + 1 << " = " << s.invariant_monomials[g] << "\n";
    }
    os << "verified: " << (s.verified ? "yes" : "no") << "\n";
    for (const auto& n : s.notes) os << "note: " << n << "\n";
    return os.str();
}

OrderedJson scaling_json(const ScalingSymmetry& s) {
    OrderedJson j;
    j["dim"] = s.dim;
    j["kernel_dim"] = s.kernel_dim;
    j["complete"] = s.complete;
    j["state_weights"] = s.basis_v;
    j["parameter_weights"] = s.weights;
    j["invariant_monomials"] = s.invariant_monomials;
    j["verified"] = s.verified;
    j["notes"] = s.notes;
    return j;
}

namespace {

std::string poly_row_str(const PolyMatrix& T, int row,
                         const std::vector<std::string>& names) {
    std::vector<std::string> parts;
    for (int j = 0; j < T.cols; ++j) {
        const MPoly& p = T.at(row, j);
        if (p.is_zero()) continue;
        std::string xs = "x" + std::to_string(j + 1);
        if (p.is_one())
            parts.push_back(xs);
        else if ((-p).is_one())
            parts.push_back("-" + xs);
        else
            parts.push_back("(" + p.str(names) + ")*" + xs);
    }
    if (parts.empty()) return "0";
    return join(parts, " + ");
}

} // namespace

std::string reparam_text(const CompModel& m, const LinearReparam& r) {
    auto names = m.param_names();
    std::ostringstream os;
    os << "reparametrization: " << r.kind << " ("
       << (r.verified ? "verified" : "NOT verified") << ")\n";
    if (r.kind == "siso-canonical") {
        os << "new states (X = T x):\n";
        for (int i = 0; i < r.T.rows; ++i)
            os << "  X" << i + 1 << " = " << poly_row_str(r.T, i, names) << "\n";
    } else if (!r.state_scalings.empty()) {
        os << "new states:\n";
        for (const auto& s : r.state_scalings) os << "  " << s << "\n";
    }
    if (!r.new_A_display.empty()) {
        os << "new dynamics:\n";
        for (const auto& row : r.new_A_display) {
            os << "  [";
            for (size_t j = 0; j < row.size(); ++j) os << (j ? ", " : "") << row[j];
            os << "]\n";
        }
    }
    if (!r.new_B_display.empty()) {
        os << "input column" << (r.kind == "siso-canonical" ? " (markov parameters)" : "")
           << ":\n";
        for (const auto& b : r.new_B_display) os << "  " << b << "\n";
    }
    for (const auto& o : r.new_outputs) os << "output: " << o << "\n";
    if (!r.new_param_names.empty()) {
        os << "new parameters:\n";
        for (size_t k = 0; k < r.new_param_names.size(); ++k)
            os << "  " << r.new_param_names[k] << " = " << r.new_param_values[k]
               << "\n";
    }
    if (!r.dropped_compartments.empty()) {
        os << "dropped compartments:";
        for (int c : r.dropped_compartments) os << " x" << c + 1;
        os << "\n";
    }
    for (const auto& n : r.notes) os << "note: " << n << "\n";
    return os.str();
}

OrderedJson reparam_json(const CompModel& m, const LinearReparam& r) {
    auto names = m.param_names();
    OrderedJson j;
    j["kind"] = r.kind;
    j["verified"] = r.verified;
    if (r.kind == "siso-canonical") {
        OrderedJson t = OrderedJson::array();
        for (int i = 0; i < r.T.rows; ++i) {
            OrderedJson row = OrderedJson::array();
            for (int c = 0; c < r.T.cols; ++c) row.push_back(r.T.at(i, c).str(names));
            t.push_back(std::move(row));
        }
        j["transform"] = std::move(t);
    }
    if (!r.state_scalings.empty()) j["state_scalings"] = r.state_scalings;
    j["new_dynamics"] = r.new_A_display;
    j["input_column"] = r.new_B_display;
    j["outputs"] = r.new_outputs;
    OrderedJson params = OrderedJson::array();
    for (size_t k = 0; k < r.new_param_names.size(); ++k) {
        OrderedJson pj;
        pj["name"] = r.new_param_names[k];
        pj["value"] = r.new_param_values[k];
        params.push_back(std::move(pj));
    }
    j["new_parameters"] = std::move(params);
    if (!r.kept_compartments.empty()) j["kept"] = one_based(r.kept_compartments);
    if (!r.dropped_compartments.empty())
        j["dropped"] = one_based(r.dropped_compartments);
    j["notes"] = r.notes;
    return j;
}

std::string adjustment_text(const AdjustmentResult& r) {
    std::ostringstream os;
    os << "adjustment: " << r.kind << " (budget " << r.budget << ", "
       << r.evaluations << " rank quer" << (r.evaluations == 1 ? "y" : "ies")
       << ")\n";
    if (!r.within_budget) {
        os << "no solution within the budget\n";
        return os.str();
    }
    if (r.min_size == 0) {
        os << "already identifiable: nothing to "
           << (r.kind == "fix-params" ? "fix" : "add") << "\n";
        return os.str();
    }
    os << "minimum cardinality: " << r.min_size << "\n";
    os << "solutions:\n";
    for (const auto& labels : r.set_labels) os << "  {" << join(labels, ", ") << "}\n";
    return os.str();
}

OrderedJson adjustment_json(const AdjustmentResult& r) {
    OrderedJson j;
    j["kind"] = r.kind;
    j["budget"] = r.budget;
    j["within_budget"] = r.within_budget;
    j["min_size"] = r.min_size;
    j["evaluations"] = r.evaluations;
    j["solutions"] = r.set_labels;
    return j;
}

namespace {

std::string size_str(int s) { return s < 0 ? "all" : std::to_string(s); }

} // namespace

DatabaseWriter::DatabaseWriter(std::ostream& out, std::string format,
                               const FamilySpec& spec, const RankOptions& opt)
    : out_(out), format_(std::move(format)) {
    if (format_ == "csv") {
        out_ << "# linident " << kToolVersion << "\n";
        out_ << "# family=" << spec.family << " n=" << spec.n_min << ".."
             << spec.n_max << " in=" << size_str(spec.in_size) << " out="
             << size_str(spec.out_size) << " leak=" << size_str(spec.leak_size)
             << " dedup=" << (spec.dedup ? 1 : 0) << "\n";
        out_ << "# seed=" << opt.seed << " trials=" << opt.trials << " prime="
             << FP61_PRIME << "\n";
        out_ << "hash,n,edges,inputs,outputs,leaks,rank,kernel_dim,verdict,"
                "rule_hits,agreement\n";
    } else {
        OrderedJson meta;
        meta["meta"]["tool"] = "linident";
        meta["meta"]["version"] = kToolVersion;
        meta["meta"]["family"] = spec.family;
        meta["meta"]["n_min"] = spec.n_min;
        meta["meta"]["n_max"] = spec.n_max;
        meta["meta"]["in_size"] = spec.in_size;
        meta["meta"]["out_size"] = spec.out_size;
        meta["meta"]["leak_size"] = spec.leak_size;
        meta["meta"]["dedup"] = spec.dedup;
        meta["meta"]["seed"] = opt.seed;
        meta["meta"]["trials"] = opt.trials;
        meta["meta"]["prime"] = FP61_PRIME;
        out_ << meta.dump() << "\n";
    }
}

void DatabaseWriter::row(const DbRow& r) {
    std::vector<std::string> hits;
    for (const auto& h : r.report.rule_hits) hits.push_back(h.rule_id);
    if (format_ == "csv") {
        out_ << hash_hex(r.model.hash()) << "," << r.model.n << ","
             << edge_list_str(r.model) << "," << int_list_str(r.model.inputs) << ","
             << int_list_str(r.model.outputs) << "," << int_list_str(r.model.leaks)
             << "," << r.report.rank << "," << r.report.kernel_dim << ","
             << (r.report.identifiable ? "identifiable" : "unidentifiable") << ","
             << join(hits, ";") << "," << (r.report.rules_agree ? 1 : 0) << "\n";
    } else {
        OrderedJson j;
        j["seq"] = r.seq;
        j["hash"] = hash_hex(r.model.hash());
        j["n"] = r.model.n;
        OrderedJson edges = OrderedJson::array();
        for (auto [f, t] : r.model.edges) edges.push_back({f + 1, t + 1});
        j["edges"] = std::move(edges);
        j["inputs"] = one_based(r.model.inputs);
        j["outputs"] = one_based(r.model.outputs);
        j["leaks"] = one_based(r.model.leaks);
        j["rank"] = r.report.rank;
        j["kernel_dim"] = r.report.kernel_dim;
        j["identifiable"] = r.report.identifiable;
        j["rule_hits"] = hits;
        j["agree"] = r.report.rules_agree;
        out_ << j.dump() << "\n";
    }
}

void DatabaseWriter::finish(const FamilySummary& s) {
    if (format_ == "csv") {
        out_ << "# rows=" << s.rows << " identifiable=" << s.identifiable
             << " agree=" << s.agree << "\n";
    } else {
        OrderedJson j;
        j["summary"]["rows"] = s.rows;
        j["summary"]["identifiable"] = s.identifiable;
        j["summary"]["agree"] = s.agree;
        out_ << j.dump() << "\n";
    }
}

} // namespace linident
