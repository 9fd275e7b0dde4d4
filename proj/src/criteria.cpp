#include <linident/criteria.hpp>

#include <algorithm>
#include <set>
#include <sstream>

namespace linident {

namespace {

bool is_singleton(const std::vector<int>& v) { return v.size() == 1; }

std::set<int> io_union(const CompModel& m) {
    std::set<int> s(m.inputs.begin(), m.inputs.end());
    s.insert(m.outputs.begin(), m.outputs.end());
    return s;
}

} // namespace

bool cycle_leaks_interlace(const CompModel& m) {
    GraphProps g = graph_props(m);
    if (!g.is_directed_cycle)
        throw std::logic_error("cycle_leaks_interlace: model is not a directed cycle");
    if (m.leaks.empty()) return true;
    std::vector<int> succ((size_t)m.n, -1);
    for (auto [f, t] : m.edges) succ[(size_t)f] = t;
    // Degenerate single-input/single-output placement: when the output feeds
    // the input directly, the path from input to output wraps the whole cycle
    // and the transfer-function numerator collapses to a bare edge product
    // with no root information.  That pays for at most one leak, even when
    // the leaks formally alternate with the input and output.
    if (m.inputs.size() == 1 && m.outputs.size() == 1 && m.leaks.size() >= 2 &&
        m.outputs[0] != m.inputs[0] &&
        succ[(size_t)m.outputs[0]] == m.inputs[0])
        return false;
    auto sep = io_union(m);
    std::set<int> leak_set(m.leaks.begin(), m.leaks.end());
    // leaks in cyclic order starting from compartment 0's orbit
    std::vector<int> order;
    for (int v = 0, k = 0; k < m.n; v = succ[(size_t)v], ++k)
        if (leak_set.count(v)) order.push_back(v);
    for (size_t i = 0; i < order.size(); ++i) {
        int l = order[i];
        int lnext = order[(i + 1) % order.size()];
        bool separated = false;
        int v = l;
        do {
            v = succ[(size_t)v];
            if (sep.count(v)) { separated = true; break; }
        } while (v != lnext);
        if (!separated) return false;
    }
    return true;
}

std::vector<std::string> unidentifiable_params_by_reachability(const CompModel& m) {
    std::set<int> reachable;
    for (int out : m.outputs) {
        auto r = reaches(m, out);
        reachable.insert(r.begin(), r.end());
    }
    std::vector<std::string> out;
    for (const auto& p : m.params) {
        int source = p.is_leak ? p.comp : p.from;
        if (!reachable.count(source)) out.push_back(p.name);
    }
    return out;
}

std::vector<RuleHit> classify(const CompModel& m) {
    GraphProps g = graph_props(m);
    std::vector<RuleHit> hits;
    bool siso = is_singleton(m.inputs) && is_singleton(m.outputs);
    int nleaks = (int)m.leaks.size();
    auto sep = io_union(m);

    if (g.is_bidirected_tree && siso) {
        int dist = g.io_distance.value_or(-1);
        if (nleaks <= 1 && dist >= 0 && dist <= 1) {
            hits.push_back({"bidirected-tree-identifiable", "tree-cycle.1",
                            "model-identifiable", {},
                            "bidirected tree, one input, one output, at most one "
                            "leak, input-output distance at most 1"});
        }
        if (nleaks >= 2) {
            hits.push_back({"bidirected-tree-two-leaks", "tree-cycle.1",
                            "model-unidentifiable", {},
                            "bidirected tree with one input, one output and at "
                            "least two leaks"});
        }
        if (dist >= 2) {
            hits.push_back({"bidirected-tree-distant-output", "tree-cycle.1",
                            "model-unidentifiable", {},
                            "bidirected tree with input-output distance at least 2"});
        }
    }

    if (g.is_directed_cycle) {
        if (cycle_leaks_interlace(m)) {
            hits.push_back({"directed-cycle-interlacing", "tree-cycle.2",
                            "model-identifiable", {},
                            "directed cycle whose leaks interlace with inputs "
                            "and outputs"});
        } else {
            hits.push_back({"directed-cycle-non-interlacing", "tree-cycle.2",
                            "model-unidentifiable", {},
                            "directed cycle with non-interlacing leaks"});
        }
    }

    if (g.is_directed_path && m.n >= 2 && siso) {
        // path orientation: unique source and sink
        std::vector<int> outdeg((size_t)m.n, 0), indeg((size_t)m.n, 0);
        for (auto [f, t] : m.edges) {
            ++outdeg[(size_t)f];
            ++indeg[(size_t)t];
        }
        int src = -1, snk = -1;
        for (int v = 0; v < m.n; ++v) {
            if (indeg[(size_t)v] == 0) src = v;
            if (outdeg[(size_t)v] == 0) snk = v;
        }
        std::vector<int> want{std::min(src, snk), std::max(src, snk)};
        if (m.inputs[0] == src && m.outputs[0] == snk && m.leaks == want) {
            hits.push_back({"directed-path-end-leaks", "path-end-leaks",
                            "model-identifiable", {},
                            "directed path with input at the source, output at "
                            "the sink and leaks exactly at both ends"});
        }
    }

    if (g.strongly_connected && is_singleton(m.inputs) &&
        nleaks > (int)sep.size()) {
        hits.push_back({"strongly-connected-excess-leaks", "leak-bound",
                        "model-unidentifiable", {},
                        "strongly connected, one input, more leaks than "
                        "input-output compartments"});
    }
    if (g.strongly_io_connected && is_singleton(m.outputs) &&
        nleaks > (int)sep.size()) {
        hits.push_back({"strongly-io-connected-excess-leaks", "leak-bound",
                        "model-unidentifiable", {},
                        "strongly input-output connected, one output, more "
                        "leaks than input-output compartments"});
    }

    if (g.strongly_connected) {
        std::vector<std::string> edge_params;
        for (int in : m.inputs)
            for (int out : m.outputs) {
                int e = m.edge_param(in, out);
                if (e >= 0) edge_params.push_back(m.params[(size_t)e].name);
            }
        std::sort(edge_params.begin(), edge_params.end());
        edge_params.erase(std::unique(edge_params.begin(), edge_params.end()),
                          edge_params.end());
        if (!edge_params.empty()) {
            hits.push_back({"input-output-edge", "io-edge",
                            "param-globally-identifiable", edge_params,
                            "strongly connected model with an edge from an "
                            "input compartment to an output compartment"});
        }
    }

    if (g.is_catenary && siso && m.inputs == m.outputs && nleaks <= 1) {
        // the input-output compartment must sit at an end of the chain
        int e = m.inputs[0];
        int deg = 0;
        for (auto [f, t] : m.edges)
            if (f == e) ++deg;
        if (m.n == 1 || deg == 1) {
            hits.push_back({"catenary-all-params", "catenary",
                            "param-globally-identifiable", m.param_names(),
                            "catenary with input and output at one end of the "
                            "chain and at most one leak"});
        }
    }

    if (g.is_mammillary && siso && m.leaks.empty()) {
        int c = g.mammillary_center;
        int j = m.outputs[0];
        int dist = g.io_distance.value_or(-1);
        // both rates between the center and the output leaf are globally
        // identifiable; with the output at the center there is no claim
        if (dist >= 0 && dist <= 1 && j != c) {
            std::vector<std::string> ps{
                m.params[(size_t)m.edge_param(j, c)].name,
                m.params[(size_t)m.edge_param(c, j)].name};
            std::sort(ps.begin(), ps.end());
            hits.push_back({"mammillary-center-params", "mammillary",
                            "param-globally-identifiable", ps,
                            "mammillary model, no leaks, input-output "
                            "distance at most 1"});
        }
    }

    {
        auto ps = unidentifiable_params_by_reachability(m);
        if (!ps.empty()) {
            hits.push_back({"output-unreachable-params", "output-reachable",
                            "param-unidentifiable", ps,
                            "parameters rooted in compartments that reach no "
                            "output"});
        }
    }

    // consistency: structural rules must not contradict each other
    bool says_ident = false, says_unident = false;
    for (const auto& h : hits) {
        if (h.verdict == "model-identifiable") says_ident = true;
        if (h.verdict == "model-unidentifiable") says_unident = true;
    }
    if (says_ident && says_unident)
        throw InternalRuleConflict("conflicting model-level rule verdicts for " +
                                   m.canonical_key());
    std::set<std::string> glob, unid;
    for (const auto& h : hits)
        for (const auto& p : h.affected_params) {
            if (h.verdict == "param-globally-identifiable") glob.insert(p);
            if (h.verdict == "param-unidentifiable") unid.insert(p);
        }
    for (const auto& p : glob)
        if (unid.count(p))
            throw InternalRuleConflict("conflicting parameter verdicts for " + p +
                                       " in " + m.canonical_key());
    if (says_ident && !unid.empty())
        throw InternalRuleConflict(
            "model-identifiable rule coexists with unidentifiable-parameter rule for " +
            m.canonical_key());

    return hits;
}

namespace {

void emit_candidate(const CompModel& m, const std::string& kind,
                    const std::vector<int>& comps,
                    std::vector<MonomialCandidate>& out) {
    MonomialCandidate c;
    c.kind = kind;
    c.comps = comps;
    c.exponent.assign((size_t)m.num_params(), 0);
    std::ostringstream os;
    size_t steps = kind == "cycle" ? comps.size() : comps.size() - 1;
    for (size_t k = 0; k < steps; ++k) {
        int f = comps[k];
        int t = comps[(k + 1) % comps.size()];
        int e = m.edge_param(f, t);
        c.exponent[(size_t)e] += 1;
        if (k) os << "*";
        os << m.params[(size_t)e].name;
    }
    c.monomial = os.str();
    out.push_back(std::move(c));
}

} // namespace

std::vector<MonomialCandidate> cycle_path_monomials(const CompModel& m, int cap,
                                                    bool* truncated) {
    std::vector<MonomialCandidate> out;
    if (truncated) *truncated = false;
    std::vector<std::vector<int>> adj((size_t)m.n);
    for (auto [f, t] : m.edges) adj[(size_t)f].push_back(t);
    for (auto& a : adj) std::sort(a.begin(), a.end());
    bool full = false;

    // simple cycles, deduplicated by rooting each at its smallest vertex
    std::vector<int> path;
    std::vector<char> on((size_t)m.n, 0);
    auto dfs_cycle = [&](auto&& self, int root, int v) -> void {
        if (full) return;
        for (int w : adj[(size_t)v]) {
            if (w == root && path.size() >= 2) {
                if ((int)out.size() >= cap) { full = true; return; }
                emit_candidate(m, "cycle", path, out);
            } else if (w > root && !on[(size_t)w]) {
                on[(size_t)w] = 1;
                path.push_back(w);
                self(self, root, w);
                path.pop_back();
                on[(size_t)w] = 0;
            }
        }
    };
    for (int root = 0; root < m.n && !full; ++root) {
        std::fill(on.begin(), on.end(), 0);
        on[(size_t)root] = 1;
        path = {root};
        dfs_cycle(dfs_cycle, root, root);
    }

    // simple input-to-output paths
    std::set<int> outs(m.outputs.begin(), m.outputs.end());
    auto dfs_path = [&](auto&& self, int v) -> void {
        if (full) return;
        if (outs.count(v) && path.size() >= 2) {
            if ((int)out.size() >= cap) { full = true; return; }
            emit_candidate(m, "io-path", path, out);
        }
        for (int w : adj[(size_t)v]) {
            if (on[(size_t)w]) continue;
            on[(size_t)w] = 1;
            path.push_back(w);
            self(self, w);
            path.pop_back();
            on[(size_t)w] = 0;
        }
    };
    for (int in : m.inputs) {
        if (full) break;
        std::fill(on.begin(), on.end(), 0);
        on[(size_t)in] = 1;
        path = {in};
        dfs_path(dfs_path, in);
    }

    if (full && truncated) *truncated = true;
    return out;
}

} // namespace linident
