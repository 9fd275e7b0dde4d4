#include <linident/report.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace linident;

namespace {

int run_analyze(const std::string& path, const RankOptions& ropt, bool json) {
    CompModel m = read_model_file(path);
    IdentReport rep = local_identifiability(m, ropt);
    if (json)
        std::cout << report_json(rep, ropt).dump(2) << "\n";
    else
        std::cout << report_text(rep, ropt);
    return 0;
}

int run_classify(const std::string& path, bool json) {
    CompModel m = read_model_file(path);
    auto hits = classify(m);
    if (json)
        std::cout << rules_json(hits).dump(2) << "\n";
    else
        std::cout << rules_text(hits);
    return 0;
}

int run_ioeq(const std::string& path, bool json) {
    CompModel m = read_model_file(path);
    if (json)
        std::cout << io_equations_json(m).dump(2) << "\n";
    else
        std::cout << io_equations_text(m);
    return 0;
}

int run_functions(const std::string& path, std::vector<std::string> exprs,
                  const std::string& expr_file, bool auto_monomials,
                  const RankOptions& ropt, bool json) {
    CompModel m = read_model_file(path);
    if (!expr_file.empty()) {
        std::ifstream in(expr_file);
        if (!in)
            throw ModelError(ModelErrorCode::ParseError,
                             "cannot open " + expr_file);
        std::string line;
        while (std::getline(in, line)) {
            auto from = line.find_first_not_of(" \t");
            if (from == std::string::npos || line[from] == '#') continue;
            auto to = line.find_last_not_of(" \t\r");
            exprs.push_back(line.substr(from, to - from + 1));
        }
    }
    std::vector<FunctionVerdict> verdicts;
    for (const auto& e : exprs)
        verdicts.push_back(function_identifiability(m, e, ropt));
    if (auto_monomials) {
        bool truncated = false;
        for (const auto& c : cycle_path_monomials(m, 10000, &truncated))
            verdicts.push_back(function_identifiability(m, c.monomial, ropt));
        if (truncated)
            std::cerr << "note: cycle enumeration truncated at the cap\n";
    }
    if (verdicts.empty())
        throw ModelError(ModelErrorCode::ParseError,
                         "no expressions given (use --expr, --file or --auto)");
    if (json)
        std::cout << functions_json(verdicts).dump(2) << "\n";
    else
        std::cout << functions_text(verdicts);
    return 0;
}

int run_reparam(const std::string& path, const std::string& mode,
                const RankOptions& ropt, bool json) {
    CompModel m = read_model_file(path);
    LinearReparam r;
    if (mode == "siso") {
        r = siso_canonical_reparam(m);
    } else {
        auto sym = scaling_symmetries(m, ropt);
        if (!json) std::cout << scaling_text(m, sym);
        r = scaling_reparam(m, sym);
    }
    if (json)
        std::cout << reparam_json(m, r).dump(2) << "\n";
    else
        std::cout << reparam_text(m, r);
    return 0;
}

int run_suggest(const std::string& path, const std::string& what, int max_size,
                bool with_inputs, const RankOptions& ropt, bool json) {
    CompModel m = read_model_file(path);
    SearchOptions sopt;
    sopt.budget = max_size;
    sopt.include_inputs = with_inputs;
    sopt.rank = ropt;
    AdjustmentResult r = what == "outputs" ? minimal_output_additions(m, sopt)
                                           : minimal_parameter_fixings(m, sopt);
    if (json)
        std::cout << adjustment_json(r).dump(2) << "\n";
    else
        std::cout << adjustment_text(r);
    return 0;
}

int run_enumerate(const FamilySpec& spec, const std::string& out_path,
                  std::string format, const RankOptions& ropt) {
    if (format.empty())
        format = out_path.size() >= 4 &&
                         out_path.compare(out_path.size() - 4, 4, ".csv") == 0
                     ? "csv"
                     : "jsonl";
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw ModelError(ModelErrorCode::ParseError, "cannot open " + out_path);
    DatabaseWriter writer(out, format, spec, ropt);
    FamilySummary sum = enumerate_family(
        spec, ropt, [&](const DbRow& row) { writer.row(row); });
    writer.finish(sum);
    std::cout << "rows=" << sum.rows << " identifiable=" << sum.identifiable
              << " agree=" << sum.agree << " -> " << out_path << "\n";
    return 0;
}

// size range "a..b" or a single size
bool parse_range(const std::string& s, int& lo, int& hi) {
    auto dots = s.find("..");
    try {
        if (dots == std::string::npos) {
            lo = hi = std::stoi(s);
        } else {
            lo = std::stoi(s.substr(0, dots));
            hi = std::stoi(s.substr(dots + 2));
        }
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"generic local identifiability of linear compartmental models"};
    app.require_subcommand(1);

    RankOptions ropt;
    bool json = false;
    app.add_option("--seed", ropt.seed, "evaluation seed (default 0)");
    app.add_option("--trials", ropt.trials, "evaluation points per rank query")
        ->check(CLI::PositiveNumber);
    app.add_flag("--json", json, "machine-readable output");

    std::string model_path, mode = "siso", what, expr_file, range = "3",
                out_path, format;
    std::vector<std::string> exprs;
    bool auto_monomials = false, with_inputs = false, no_dedup = false;
    int max_size = 3;
    FamilySpec spec;

    auto* analyze = app.add_subcommand("analyze", "full identifiability report");
    analyze->add_option("model", model_path)->required();

    auto* cls = app.add_subcommand("classify", "structural rules only");
    cls->add_option("model", model_path)->required();

    auto* ioeq = app.add_subcommand("io-eq", "print the input-output equations");
    ioeq->add_option("model", model_path)->required();

    auto* fns = app.add_subcommand("functions",
                                   "identifiability of parameter functions");
    fns->add_option("model", model_path)->required();
    fns->add_option("--expr", exprs, "rational expression in the parameters");
    fns->add_option("--file", expr_file, "file with one expression per line");
    fns->add_flag("--auto", auto_monomials,
                  "also test cycle and input-output path monomials");

    auto* rep = app.add_subcommand("reparam", "exact reparametrization");
    rep->add_option("model", model_path)->required();
    rep->add_option("--mode", mode, "siso | scaling")
        ->check(CLI::IsMember({"siso", "scaling"}));

    auto* sug = app.add_subcommand("suggest", "minimal adjustments");
    sug->add_option("model", model_path)->required();
    sug->add_option("--what", what, "outputs | fix")
        ->required()
        ->check(CLI::IsMember({"outputs", "fix"}));
    sug->add_option("--max-size", max_size, "largest set size searched");
    sug->add_flag("--with-inputs", with_inputs,
                  "also consider placing new inputs");

    auto* enu = app.add_subcommand("enumerate", "family classification database");
    enu->add_option("--family", spec.family,
                    "directed-cycle | bidirected-tree | catenary | mammillary | "
                    "directed-path | all-digraphs")
        ->required();
    enu->add_option("--n", range, "size or size range a..b")->required();
    enu->add_option("--in", spec.in_size, "input-set size (default: all)");
    enu->add_option("--out-size", spec.out_size, "output-set size (default: all)");
    enu->add_option("--leak", spec.leak_size, "leak-set size (default: all)");
    enu->add_flag("--no-dedup", no_dedup, "keep symmetric duplicates");
    enu->add_option("--out", out_path, "database file path")->required();
    enu->add_option("--format", format, "csv | jsonl (default: by extension)")
        ->check(CLI::IsMember({"csv", "jsonl"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return run_analyze(model_path, ropt, json);
        if (cls->parsed()) return run_classify(model_path, json);
        if (ioeq->parsed()) return run_ioeq(model_path, json);
        if (fns->parsed())
            return run_functions(model_path, exprs, expr_file, auto_monomials,
                                 ropt, json);
        if (rep->parsed()) return run_reparam(model_path, mode, ropt, json);
        if (sug->parsed())
            return run_suggest(model_path, what, max_size, with_inputs, ropt, json);
        if (enu->parsed()) {
            if (!parse_range(range, spec.n_min, spec.n_max)) {
                std::cerr << "error: ParseError: bad size range '" << range
                          << "'\n";
                return 1;
            }
            spec.dedup = !no_dedup;
            return run_enumerate(spec, out_path, format, ropt);
        }
    } catch (const ModelError& e) {
        std::cerr << "error: " << model_error_name(e.code) << ": " << e.what()
                  << "\n";
        return 1;
    } catch (const PrecondError& e) {
        std::cerr << "error: " << precond_error_name(e.code) << ": " << e.what()
                  << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: Internal: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
