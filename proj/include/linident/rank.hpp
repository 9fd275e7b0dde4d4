#pragma once

// probabilistic rank of the coefficient map's jacobian over F_p, and the
// identifiability verdicts built on it: model-level, per-parameter,
// per-function, and scaling symmetries with their invariant lattice.

#include <linident/criteria.hpp>
#include <linident/expr.hpp>
#include <linident/ioeq.hpp>
#include <linident/lattice.hpp>

namespace linident {

struct RankOptions {
    std::uint64_t seed = 0;
    int trials = 3;
};

std::uint64_t trial_seed(std::uint64_t seed, int trial);

struct RankResult {
    int rank = 0;
    int num_entries = 0;
    int num_params = 0;
    std::vector<int> per_trial;
    std::vector<std::uint64_t> seeds;
    bool trials_disagree = false;       // max is taken; disagreement logged
    double per_trial_failure_bound = 0; // schwartz-zippel: D/p, D = n * #params
    double overall_failure_bound = 0;   // (D/p)^trials
};

// rank of the jacobian of the symbolic coefficient map (reference route)
RankResult generic_rank(const CoefficientMap& c, const RankOptions& opt = {});

// fast route: values and jacobian of the model's coefficient map at a point
// via faddeev-leverrier over dual numbers, no symbolic polynomials. entry
// order matches io_coefficient_map exactly.
struct ModelEvalResult {
    std::vector<std::uint64_t> values;
    std::vector<std::vector<std::uint64_t>> jacobian;
};
ModelEvalResult model_eval_at(const CompModel& m, const FieldPoint& pt);

RankResult model_generic_rank(const CompModel& m, const RankOptions& opt = {});

struct ParamVerdict {
    std::string name;
    bool identifiable = false; // generically locally
};

struct IdentReport {
    std::string model_name;
    std::string model_key;
    int n = 0;
    int num_params = 0;
    int rank = 0;
    int kernel_dim = 0;
    bool identifiable = false; // generically locally; global status undetermined
    RankResult detail;
    std::vector<ParamVerdict> per_param;
    std::vector<RuleHit> rule_hits;
    bool rules_agree = true; // structural rules vs rank cross-check
    std::vector<std::string> warnings;
};

IdentReport local_identifiability(const CompModel& m, const RankOptions& opt = {});

// gradient-in-row-space test for one parameter at each trial point
bool parameter_identifiability(const CompModel& m, int ordinal,
                               const RankOptions& opt = {});

struct FunctionVerdict {
    std::string expr;
    bool identifiable = false;
    int resamples = 0; // points discarded for a vanishing denominator
};

FunctionVerdict function_identifiability(const CompModel& m,
                                         const std::string& expr,
                                         const RankOptions& opt = {});
FunctionVerdict function_identifiability(const CompModel& m,
                                         const RationalExpr& f,
                                         const std::string& display,
                                         const RankOptions& opt = {});

// one-parameter state-scaling symmetries: integer vectors v on compartments,
// zero on inputs and outputs, whose induced parameter weights w(v) leave the
// coefficient map invariant. basis vectors are chosen with Z-independent
// weight vectors, so dim counts only directions that act on parameters.
struct ScalingSymmetry {
    int dim = 0;
    int kernel_dim = 0;
    bool complete = false; // dim == kernel_dim
    std::vector<std::vector<long long>> basis_v;   // per vector: length n
    std::vector<std::vector<long long>> weights;   // induced w(v) per parameter
    std::vector<std::vector<long long>> invariant_exponents; // hnf rows (complete only)
    std::vector<std::string> invariant_monomials;
    bool verified = false;
    std::vector<std::string> notes;
};

ScalingSymmetry scaling_symmetries(const CompModel& m, const RankOptions& opt = {});

// reduced-row-echelon workspace over F_p with membership queries
class FpEchelon {
public:
    explicit FpEchelon(std::vector<std::vector<std::uint64_t>> rows);
    int rank() const { return (int)rows_.size(); }
    bool contains(std::vector<std::uint64_t> v) const;

private:
    std::vector<std::vector<std::uint64_t>> rows_; // rref, pivot-normalized
    std::vector<int> pivots_;
};

} // namespace linident
