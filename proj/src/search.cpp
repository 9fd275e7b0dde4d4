#include <linident/search.hpp>

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace linident {

namespace {

RawModel to_raw(const CompModel& m) {
    RawModel raw;
    raw.compartments = m.n;
    for (auto [f, t] : m.edges) raw.edges.push_back({f + 1, t + 1});
    for (int c : m.inputs) raw.inputs.push_back(c + 1);
    for (int c : m.outputs) raw.outputs.push_back(c + 1);
    for (int c : m.leaks) raw.leaks.push_back(c + 1);
    raw.leaks_are_total_outflow = m.leaks_are_total_outflow;
    raw.name = m.name;
    return raw;
}

// lexicographic size-k index combinations of 0..n-1
bool next_combination(std::vector<int>& c, int n) {
    int k = (int)c.size();
    for (int i = k - 1; i >= 0; --i) {
        if (c[(size_t)i] < n - k + i) {
            ++c[(size_t)i];
            for (int j = i + 1; j < k; ++j) c[(size_t)j] = c[(size_t)(j - 1)] + 1;
            return true;
        }
    }
    return false;
}

std::vector<int> first_combination(int k) {
    std::vector<int> c((size_t)k);
    std::iota(c.begin(), c.end(), 0);
    return c;
}

} // namespace

AdjustmentResult minimal_output_additions(const CompModel& m,
                                          const SearchOptions& opt) {
    AdjustmentResult res;
    res.kind = "add-outputs";
    res.budget = opt.budget;

    std::set<int> outs(m.outputs.begin(), m.outputs.end());
    std::set<int> ins(m.inputs.begin(), m.inputs.end());
    for (int c = 0; c < m.n; ++c)
        if (!outs.count(c))
            res.atoms.push_back({false, c, "y" + std::to_string(c + 1)});
    if (opt.include_inputs)
        for (int c = 0; c < m.n; ++c)
            if (!ins.count(c))
                res.atoms.push_back({true, c, "u" + std::to_string(c + 1)});

    std::map<std::string, bool> memo;
    auto works = [&](const std::vector<int>& atom_set) {
        RawModel raw = to_raw(m);
        for (int idx : atom_set) {
            const SearchAtom& a = res.atoms[(size_t)idx];
            (a.is_input ? raw.inputs : raw.outputs).push_back(a.comp + 1);
        }
        CompModel cand = validate_model(raw);
        auto key = cand.canonical_key();
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        bool ok;
        if (!unidentifiable_params_by_reachability(cand).empty()) {
            ok = false; // sound fail-fast: some parameter stays unreachable
        } else {
            auto rr = model_generic_rank(cand, opt.rank);
            ++res.evaluations;
            ok = rr.rank == rr.num_params;
        }
        memo.emplace(std::move(key), ok);
        return ok;
    };

    int na = (int)res.atoms.size();
    for (int s = 0; s <= opt.budget && s <= na; ++s) {
        std::vector<std::vector<int>> found;
        auto c = first_combination(s);
        do {
            if (works(c)) found.push_back(c);
        } while (s > 0 && next_combination(c, na));
        if (!found.empty()) {
            res.min_size = s;
            res.within_budget = true;
            res.sets = std::move(found);
            break;
        }
    }

    // explicit minimality re-check of the returned sets (identifiability is
    // monotone under added outputs, so one-smaller subsets suffice)
    if (res.min_size > 0) {
        std::vector<std::vector<int>> kept;
        for (const auto& s : res.sets) {
            bool minimal = true;
            for (size_t drop = 0; drop < s.size() && minimal; ++drop) {
                std::vector<int> sub;
                for (size_t i = 0; i < s.size(); ++i)
                    if (i != drop) sub.push_back(s[i]);
                if (works(sub)) minimal = false;
            }
            if (minimal) kept.push_back(s);
        }
        res.sets = std::move(kept);
    }

    for (const auto& s : res.sets) {
        std::vector<std::string> labels;
        for (int idx : s) labels.push_back(res.atoms[(size_t)idx].label);
        res.set_labels.push_back(std::move(labels));
    }
    return res;
}

AdjustmentResult minimal_parameter_fixings(const CompModel& m,
                                           const SearchOptions& opt) {
    AdjustmentResult res;
    res.kind = "fix-params";
    res.budget = opt.budget;

    int np = m.num_params();
    auto base = model_generic_rank(m, opt.rank);
    ++res.evaluations;
    int kernel = np - base.rank;

    if (kernel == 0) {
        res.min_size = 0;
        res.within_budget = true;
        res.sets.push_back({});
        res.set_labels.push_back({});
        return res;
    }

    // jacobians once per trial; a fixing set passes when the remaining
    // columns reach full rank at some trial point
    std::vector<std::vector<std::vector<std::uint64_t>>> jac;
    for (int t = 0; t < opt.rank.trials; ++t) {
        auto pt = make_field_point(np, trial_seed(opt.rank.seed, t));
        jac.push_back(model_eval_at(m, pt).jacobian);
    }
    auto works = [&](const std::vector<int>& fixed) {
        ++res.evaluations;
        int keep_n = np - (int)fixed.size();
        std::vector<char> is_fixed((size_t)np, 0);
        for (int p : fixed) is_fixed[(size_t)p] = 1;
        for (const auto& J : jac) {
            std::vector<std::vector<std::uint64_t>> sub;
            sub.reserve(J.size());
            for (const auto& row : J) {
                std::vector<std::uint64_t> r;
                r.reserve((size_t)keep_n);
                for (int p = 0; p < np; ++p)
                    if (!is_fixed[(size_t)p]) r.push_back(row[(size_t)p]);
                sub.push_back(std::move(r));
            }
            if (fp_rank(std::move(sub)) == keep_n) return true;
        }
        return false;
    };

    auto names = m.param_names();
    for (int s = kernel; s <= opt.budget && s <= np; ++s) {
        std::vector<std::vector<int>> found;
        auto c = first_combination(s);
        do {
            if (works(c)) found.push_back(c);
        } while (next_combination(c, np));
        if (!found.empty()) {
            res.min_size = s;
            res.within_budget = true;
            res.sets = std::move(found);
            break;
        }
    }

    // sets smaller than kernel_dim cannot work, so minimality is automatic
    // at min_size == kernel_dim; otherwise re-check one-smaller subsets
    if (res.min_size > kernel) {
        std::vector<std::vector<int>> kept;
        for (const auto& s : res.sets) {
            bool minimal = true;
            for (size_t drop = 0; drop < s.size() && minimal; ++drop) {
                std::vector<int> sub;
                for (size_t i = 0; i < s.size(); ++i)
                    if (i != drop) sub.push_back(s[i]);
                if (works(sub)) minimal = false;
            }
            if (minimal) kept.push_back(s);
        }
        res.sets = std::move(kept);
    }

    for (const auto& s : res.sets) {
        std::vector<std::string> labels;
        for (int p : s) labels.push_back(names[(size_t)p]);
        res.set_labels.push_back(std::move(labels));
    }
    return res;
}

namespace {

using EdgeList = std::vector<std::pair<int, int>>; // 0-based (from, to)

std::vector<EdgeList> labeled_trees(int n) {
    if (n == 1) return {{}};
    if (n == 2) return {{{0, 1}}};
    std::vector<EdgeList> trees;
    std::vector<int> seq((size_t)(n - 2), 0);
    for (;;) {
        // decode the sequence into its unique labeled tree
        std::vector<int> degree((size_t)n, 1);
        for (int v : seq) ++degree[(size_t)v];
        EdgeList edges;
        std::vector<char> used((size_t)n, 0);
        for (int v : seq) {
            int leaf = -1;
            for (int u = 0; u < n; ++u)
                if (!used[(size_t)u] && degree[(size_t)u] == 1) {
                    leaf = u;
                    break;
                }
            edges.push_back({leaf, v});
            used[(size_t)leaf] = 1;
            --degree[(size_t)v];
        }
        std::vector<int> last;
        for (int u = 0; u < n; ++u)
            if (!used[(size_t)u] && degree[(size_t)u] == 1) last.push_back(u);
        edges.push_back({last[0], last[1]});
        trees.push_back(std::move(edges));

        int i = n - 3;
        while (i >= 0 && seq[(size_t)i] == n - 1) seq[(size_t)i--] = 0;
        if (i < 0) break;
        ++seq[(size_t)i];
    }
    return trees;
}

// canonical string of a vertex-colored unrooted tree: minimum over roots of
// the sorted-subtree encoding
std::string colored_tree_canon(int n, const EdgeList& und,
                               const std::vector<int>& color) {
    std::vector<std::vector<int>> adj((size_t)n);
    for (auto [u, v] : und) {
        adj[(size_t)u].push_back(v);
        adj[(size_t)v].push_back(u);
    }
    std::function<std::string(int, int)> enc = [&](int v, int parent) {
        std::vector<std::string> kids;
        for (int u : adj[(size_t)v])
            if (u != parent) kids.push_back(enc(u, v));
        std::sort(kids.begin(), kids.end());
        std::string s = "(";
        s += (char)('0' + color[(size_t)v]);
        for (const auto& k : kids) s += k;
        s += ")";
        return s;
    };
    std::string best;
    for (int r = 0; r < n; ++r) {
        std::string s = enc(r, -1);
        if (best.empty() || s < best) best = std::move(s);
    }
    return best;
}

int popcount(unsigned x) { return __builtin_popcount(x); }

std::vector<int> mask_to_list(unsigned mask, int n) {
    std::vector<int> v;
    for (int c = 0; c < n; ++c)
        if (mask & (1u << c)) v.push_back(c);
    return v;
}

long long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

long long placement_count(int n, int size, bool allow_empty) {
    if (size >= 0) return binom(n, size);
    long long all = 1ll << n;
    return allow_empty ? all : all - 1;
}

std::vector<int> rotation_perm(int n, int r) {
    std::vector<int> p((size_t)n);
    for (int i = 0; i < n; ++i) p[(size_t)i] = (i + r) % n;
    return p;
}

} // namespace

FamilySummary enumerate_family(const FamilySpec& spec, const RankOptions& opt,
                               const std::function<void(const DbRow&)>& sink) {
    const std::string& fam = spec.family;
    bool known = fam == "directed-cycle" || fam == "bidirected-tree" ||
                 fam == "catenary" || fam == "mammillary" ||
                 fam == "directed-path" || fam == "all-digraphs";
    if (!known)
        throw ModelError(ModelErrorCode::ParseError, "unknown family: " + fam);
    if (spec.n_min < 1 || spec.n_max < spec.n_min)
        throw ModelError(ModelErrorCode::ParseError, "bad size range");

    int limit = fam == "directed-cycle" ? 8
                : fam == "bidirected-tree" ? 6
                : fam == "all-digraphs" ? 4
                : 10;
    if (spec.n_max > limit)
        throw PrecondError(PrecondCode::SpecTooLarge,
                           fam + " enumeration is limited to n <= " +
                               std::to_string(limit));

    // cap the generated-configuration count before any work happens
    long long generated = 0;
    for (int n = spec.n_min; n <= spec.n_max; ++n) {
        if (fam == "directed-cycle" && n < 3) continue;
        long long graphs = 1;
        if (fam == "bidirected-tree") {
            graphs = 1;
            for (int i = 0; i < n - 2; ++i) graphs *= n;
        } else if (fam == "all-digraphs") {
            graphs = 1ll << (n * (n - 1));
        }
        generated += graphs * placement_count(n, spec.in_size, false) *
                     placement_count(n, spec.out_size, false) *
                     placement_count(n, spec.leak_size, true);
        if (generated > 8000000ll)
            throw PrecondError(PrecondCode::SpecTooLarge,
                               "enumeration would generate more than 8e6 "
                               "configurations; constrain the placements");
    }

    FamilySummary sum;
    long long seq = 0;
    std::set<std::string> seen;

    for (int n = spec.n_min; n <= spec.n_max; ++n) {
        if (fam == "directed-cycle" && n < 3) continue;

        std::vector<EdgeList> graphs;
        std::vector<EdgeList> und_trees; // undirected skeletons, trees only
        if (fam == "directed-cycle") {
            EdgeList e;
            for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
            graphs.push_back(std::move(e));
        } else if (fam == "bidirected-tree") {
            und_trees = labeled_trees(n);
            for (const auto& t : und_trees) {
                EdgeList e;
                for (auto [u, v] : t) {
                    e.push_back({u, v});
                    e.push_back({v, u});
                }
                graphs.push_back(std::move(e));
            }
        } else if (fam == "catenary") {
            EdgeList e;
            for (int i = 0; i + 1 < n; ++i) {
                e.push_back({i, i + 1});
                e.push_back({i + 1, i});
            }
            graphs.push_back(std::move(e));
        } else if (fam == "mammillary") {
            EdgeList e;
            for (int l = 1; l < n; ++l) {
                e.push_back({0, l});
                e.push_back({l, 0});
            }
            graphs.push_back(std::move(e));
        } else if (fam == "directed-path") {
            EdgeList e;
            for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
            graphs.push_back(std::move(e));
        } else { // all-digraphs
            std::vector<std::pair<int, int>> pairs;
            for (int f = 0; f < n; ++f)
                for (int t = 0; t < n; ++t)
                    if (t != f) pairs.push_back({f, t});
            for (unsigned mask = 0; mask < (1u << pairs.size()); ++mask) {
                EdgeList e;
                for (size_t b = 0; b < pairs.size(); ++b)
                    if (mask & (1u << b)) e.push_back(pairs[b]);
                graphs.push_back(std::move(e));
            }
        }

        for (size_t gi = 0; gi < graphs.size(); ++gi) {
            for (unsigned im = 1; im < (1u << n); ++im) {
                if (spec.in_size >= 0 && popcount(im) != spec.in_size) continue;
                for (unsigned om = 1; om < (1u << n); ++om) {
                    if (spec.out_size >= 0 && popcount(om) != spec.out_size) continue;
                    for (unsigned lm = 0; lm < (1u << n); ++lm) {
                        if (spec.leak_size >= 0 && popcount(lm) != spec.leak_size)
                            continue;

                        RawModel raw;
                        raw.compartments = n;
                        for (auto [f, t] : graphs[gi])
                            raw.edges.push_back({f + 1, t + 1});
                        for (int c : mask_to_list(im, n)) raw.inputs.push_back(c + 1);
                        for (int c : mask_to_list(om, n)) raw.outputs.push_back(c + 1);
                        for (int c : mask_to_list(lm, n)) raw.leaks.push_back(c + 1);
                        CompModel model = validate_model(raw);

                        if (spec.dedup) {
                            std::string key;
                            if (fam == "directed-cycle") {
                                for (int r = 0; r < n; ++r) {
                                    auto k = relabeled(model, rotation_perm(n, r))
                                                 .canonical_key();
                                    if (key.empty() || k < key) key = std::move(k);
                                }
                            } else if (fam == "bidirected-tree") {
                                std::vector<int> color((size_t)n, 0);
                                for (int c = 0; c < n; ++c)
                                    color[(size_t)c] = ((im >> c) & 1) * 4 +
                                                       ((om >> c) & 1) * 2 +
                                                       ((lm >> c) & 1);
                                key = colored_tree_canon(n, und_trees[gi], color);
                            } else if (fam == "catenary") {
                                std::vector<int> rev((size_t)n);
                                for (int i = 0; i < n; ++i) rev[(size_t)i] = n - 1 - i;
                                key = std::min(model.canonical_key(),
                                               relabeled(model, rev).canonical_key());
                            } else if (fam == "mammillary") {
                                std::vector<int> digits;
                                for (int c = 1; c < n; ++c)
                                    digits.push_back(((im >> c) & 1) * 4 +
                                                     ((om >> c) & 1) * 2 +
                                                     ((lm >> c) & 1));
                                std::sort(digits.begin(), digits.end());
                                std::ostringstream os;
                                os << "M" << ((im & 1) * 4 + (om & 1) * 2 + (lm & 1));
                                for (int d : digits) os << d;
                                key = os.str();
                            } else if (fam == "all-digraphs") {
                                std::vector<int> perm((size_t)n);
                                std::iota(perm.begin(), perm.end(), 0);
                                do {
                                    auto k = relabeled(model, perm).canonical_key();
                                    if (key.empty() || k < key) key = std::move(k);
                                } while (std::next_permutation(perm.begin(), perm.end()));
                            } else { // directed-path: no symmetry
                                key = model.canonical_key();
                            }
                            if (!seen.insert(std::move(key)).second) continue;
                        }

                        DbRow row;
                        row.seq = seq++;
                        row.model = model;
                        row.report = local_identifiability(model, opt);
                        ++sum.rows;
                        if (row.report.identifiable) ++sum.identifiable;
                        if (row.report.rules_agree) ++sum.agree;
                        sink(row);
                    }
                }
            }
        }
    }
    return sum;
}

} // namespace linident
