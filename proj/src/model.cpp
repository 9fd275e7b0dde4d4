#include <linident/model.hpp>

#include <algorithm>
#include <queue>
#include <sstream>

namespace linident {

const char* model_error_name(ModelErrorCode c) {
    switch (c) {
        case ModelErrorCode::DuplicateEdge: return "DuplicateEdge";
        case ModelErrorCode::SelfLoop: return "SelfLoop";
        case ModelErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ModelErrorCode::EmptyInputs: return "EmptyInputs";
        case ModelErrorCode::EmptyOutputs: return "EmptyOutputs";
        case ModelErrorCode::ParseError: return "ParseError";
    }
    return "?";
}

const char* precond_error_name(PrecondCode c) {
    switch (c) {
        case PrecondCode::NotSISO: return "NotSISO";
        case PrecondCode::NotObservable: return "NotObservable";
        case PrecondCode::SpecTooLarge: return "SpecTooLarge";
        case PrecondCode::DenominatorVanishes: return "DenominatorVanishes";
    }
    return "?";
}

std::string param_name(int to_1b, int from_1b) {
    std::ostringstream os;
    if (to_1b <= 9 && from_1b <= 9)
        os << "a" << to_1b << from_1b;
    else
        os << "a" << to_1b << "_" << from_1b;
    return os.str();
}

std::string leak_name(int comp_1b) {
    std::ostringstream os;
    if (comp_1b <= 9)
        os << "a0" << comp_1b;
    else
        os << "a0_" << comp_1b;
    return os.str();
}

CompModel validate_model(const RawModel& raw) {
    if (raw.compartments < 1)
        throw ModelError(ModelErrorCode::IndexOutOfRange,
                         "compartment count must be at least 1");
    auto check = [&](int c, const char* what) {
        if (c < 1 || c > raw.compartments) {
            std::ostringstream os;
            os << what << " index " << c << " outside 1.." << raw.compartments;
            throw ModelError(ModelErrorCode::IndexOutOfRange, os.str());
        }
    };
    for (auto [f, t] : raw.edges) {
        check(f, "edge");
        check(t, "edge");
        if (f == t) {
            std::ostringstream os;
            os << "self-loop edge (" << f << "," << t << ")";
            throw ModelError(ModelErrorCode::SelfLoop, os.str());
        }
    }
    {
        auto es = raw.edges;
        std::sort(es.begin(), es.end());
        auto dup = std::adjacent_find(es.begin(), es.end());
        if (dup != es.end()) {
            std::ostringstream os;
            os << "duplicate edge (" << dup->first << "," << dup->second << ")";
            throw ModelError(ModelErrorCode::DuplicateEdge, os.str());
        }
    }
    for (int c : raw.inputs) check(c, "input");
    for (int c : raw.outputs) check(c, "output");
    for (int c : raw.leaks) check(c, "leak");
    if (raw.inputs.empty())
        throw ModelError(ModelErrorCode::EmptyInputs, "input set is empty");
    if (raw.outputs.empty())
        throw ModelError(ModelErrorCode::EmptyOutputs, "output set is empty");

    CompModel m;
    m.n = raw.compartments;
    m.name = raw.name;
    m.leaks_are_total_outflow = raw.leaks_are_total_outflow;
    for (auto [f, t] : raw.edges) m.edges.push_back({f - 1, t - 1});
    std::sort(m.edges.begin(), m.edges.end(),
              [](const auto& a, const auto& b) {
                  return std::pair(a.second, a.first) < std::pair(b.second, b.first);
              });
    auto dedup_sorted = [](std::vector<int> v) {
        for (auto& c : v) c -= 1;
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    };
    m.inputs = dedup_sorted(raw.inputs);
    m.outputs = dedup_sorted(raw.outputs);
    m.leaks = dedup_sorted(raw.leaks);

    for (auto [f, t] : m.edges) {
        ParamIndex p;
        p.is_leak = false;
        p.from = f;
        p.to = t;
        p.name = param_name(t + 1, f + 1);
        m.params.push_back(std::move(p));
    }
    for (int c : m.leaks) {
        ParamIndex p;
        p.is_leak = true;
        p.comp = c;
        p.name = leak_name(c + 1);
        m.params.push_back(std::move(p));
    }
    return m;
}

std::vector<std::string> CompModel::param_names() const {
    std::vector<std::string> v;
    v.reserve(params.size());
    for (const auto& p : params) v.push_back(p.name);
    return v;
}

int CompModel::param_ordinal(const std::string& nm) const {
    for (size_t i = 0; i < params.size(); ++i)
        if (params[i].name == nm) return (int)i;
    return -1;
}

bool CompModel::has_edge(int from, int to) const {
    return edge_param(from, to) >= 0;
}

int CompModel::edge_param(int from, int to) const {
    for (size_t i = 0; i < params.size(); ++i)
        if (!params[i].is_leak && params[i].from == from && params[i].to == to)
            return (int)i;
    return -1;
}

int CompModel::leak_param(int comp) const {
    for (size_t i = 0; i < params.size(); ++i)
        if (params[i].is_leak && params[i].comp == comp) return (int)i;
    return -1;
}

std::string CompModel::canonical_key() const {
    std::ostringstream os;
    os << "n=" << n << ";E=";
    for (auto [f, t] : edges) os << "(" << f << "," << t << ")";
    os << ";I=";
    for (int c : inputs) os << c << ",";
    os << ";O=";
    for (int c : outputs) os << c << ",";
    os << ";L=";
    for (int c : leaks) os << c << ",";
    if (leaks_are_total_outflow) os << ";total-outflow";
    return os.str();
}

std::uint64_t CompModel::hash() const {
    std::uint64_t h = 1469598103934665603ull; // fnv-1a
    for (unsigned char c : canonical_key()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

PolyMatrix compartmental_matrix(const CompModel& m) {
    int np = m.num_params();
    PolyMatrix A(m.n, m.n, np);
    for (size_t i = 0; i < m.params.size(); ++i) {
        const auto& p = m.params[i];
        if (p.is_leak) continue;
        A.at(p.to, p.from) += MPoly::variable(np, (int)i);
    }
    for (int c = 0; c < m.n; ++c) {
        int lk = m.leak_param(c);
        MPoly diag(np);
        if (lk >= 0) diag += MPoly::variable(np, lk);
        if (lk < 0 || !m.leaks_are_total_outflow) {
            for (size_t i = 0; i < m.params.size(); ++i) {
                const auto& p = m.params[i];
                if (!p.is_leak && p.from == c) diag += MPoly::variable(np, (int)i);
            }
        }
        A.at(c, c) -= diag;
    }
    return A;
}

namespace {

std::vector<std::vector<int>> out_adjacency(const CompModel& m) {
    std::vector<std::vector<int>> adj((size_t)m.n);
    for (auto [f, t] : m.edges) adj[(size_t)f].push_back(t);
    return adj;
}

std::set<int> reachable_from(const std::vector<std::vector<int>>& adj, int src) {
    std::set<int> seen{src};
    std::queue<int> q;
    q.push(src);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int w : adj[(size_t)v])
            if (seen.insert(w).second) q.push(w);
    }
    return seen;
}

} // namespace

std::set<int> reaches(const CompModel& m, int target) {
    // reverse-edge reachability
    std::vector<std::vector<int>> radj((size_t)m.n);
    for (auto [f, t] : m.edges) radj[(size_t)t].push_back(f);
    return reachable_from(radj, target);
}

GraphProps graph_props(const CompModel& m) {
    GraphProps g;
    auto adj = out_adjacency(m);

    std::vector<std::set<int>> reach((size_t)m.n);
    for (int v = 0; v < m.n; ++v) reach[(size_t)v] = reachable_from(adj, v);

    g.strongly_connected = true;
    for (int v = 0; v < m.n; ++v)
        if ((int)reach[(size_t)v].size() != m.n) g.strongly_connected = false;

    for (int o : m.outputs) g.output_reachable.push_back(reaches(m, o));

    // weak connectivity
    std::vector<std::vector<int>> und((size_t)m.n);
    for (auto [f, t] : m.edges) {
        und[(size_t)f].push_back(t);
        und[(size_t)t].push_back(f);
    }
    bool weakly_connected = (int)reachable_from(und, 0).size() == m.n;

    // strongly input-output connected: weakly connected and every edge lies
    // on a cycle or on a directed path from an input to an output
    g.strongly_io_connected = weakly_connected;
    for (auto [f, t] : m.edges) {
        bool on_cycle = reach[(size_t)t].count(f) > 0;
        bool on_io_path = false;
        for (int in : m.inputs) {
            if (!reach[(size_t)in].count(f)) continue;
            for (int out : m.outputs)
                if (reach[(size_t)t].count(out)) { on_io_path = true; break; }
            if (on_io_path) break;
        }
        if (!on_cycle && !on_io_path) { g.strongly_io_connected = false; break; }
    }

    // bidirected tree: symmetric edge set whose skeleton is a tree
    bool symmetric = true;
    for (auto [f, t] : m.edges)
        if (!m.has_edge(t, f)) { symmetric = false; break; }
    int undirected_pairs = (int)m.edges.size() / 2;
    g.is_bidirected_tree = symmetric && weakly_connected &&
                           (int)m.edges.size() % 2 == 0 &&
                           undirected_pairs == m.n - 1;

    // degree tallies on the skeleton
    std::vector<int> udeg((size_t)m.n, 0);
    if (symmetric)
        for (auto [f, t] : m.edges)
            if (f < t) { ++udeg[(size_t)f]; ++udeg[(size_t)t]; }

    g.is_catenary = g.is_bidirected_tree &&
                    std::count(udeg.begin(), udeg.end(), 1) == (m.n == 1 ? 0 : 2) &&
                    std::all_of(udeg.begin(), udeg.end(), [](int d) { return d <= 2; });
    if (m.n == 1) g.is_catenary = g.is_bidirected_tree;

    g.is_mammillary = false;
    if (g.is_bidirected_tree && m.n >= 2) {
        for (int c = 0; c < m.n; ++c) {
            if (udeg[(size_t)c] != m.n - 1) continue;
            bool star = true;
            for (int v = 0; v < m.n; ++v)
                if (v != c && udeg[(size_t)v] != 1) star = false;
            if (star) {
                g.is_mammillary = true;
                g.mammillary_center = c;
                break;
            }
        }
    }

    // directed cycle covering all compartments; reserved for n >= 3 so the
    // bidirected pair keeps its tree classification
    g.is_directed_cycle = false;
    if (m.n >= 3 && (int)m.edges.size() == m.n && g.strongly_connected) {
        std::vector<int> outdeg((size_t)m.n, 0), indeg((size_t)m.n, 0);
        for (auto [f, t] : m.edges) {
            ++outdeg[(size_t)f];
            ++indeg[(size_t)t];
        }
        g.is_directed_cycle =
            std::all_of(outdeg.begin(), outdeg.end(), [](int d) { return d == 1; }) &&
            std::all_of(indeg.begin(), indeg.end(), [](int d) { return d == 1; });
    }

    // directed path covering all compartments
    g.is_directed_path = false;
    if ((int)m.edges.size() == m.n - 1) {
        std::vector<int> outdeg((size_t)m.n, 0), indeg((size_t)m.n, 0);
        for (auto [f, t] : m.edges) {
            ++outdeg[(size_t)f];
            ++indeg[(size_t)t];
        }
        int sources = 0, sinks = 0;
        bool ok = true;
        for (int v = 0; v < m.n; ++v) {
            if (outdeg[(size_t)v] > 1 || indeg[(size_t)v] > 1) ok = false;
            if (indeg[(size_t)v] == 0) ++sources;
            if (outdeg[(size_t)v] == 0) ++sinks;
        }
        g.is_directed_path = ok && weakly_connected && sources == 1 && sinks == 1;
        if (m.n == 1) g.is_directed_path = true;
    }

    // input-to-output distance for single-input single-output models
    if (m.inputs.size() == 1 && m.outputs.size() == 1) {
        int src = m.inputs[0], dst = m.outputs[0];
        std::vector<int> dist((size_t)m.n, -1);
        dist[(size_t)src] = 0;
        std::queue<int> q;
        q.push(src);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int w : adj[(size_t)v])
                if (dist[(size_t)w] < 0) {
                    dist[(size_t)w] = dist[(size_t)v] + 1;
                    q.push(w);
                }
        }
        g.io_distance = dist[(size_t)dst]; // -1 when unreachable
    }

    return g;
}

CompModel relabeled(const CompModel& m, const std::vector<int>& perm) {
    RawModel raw;
    raw.compartments = m.n;
    raw.leaks_are_total_outflow = m.leaks_are_total_outflow;
    raw.name = m.name;
    for (auto [f, t] : m.edges)
        raw.edges.push_back({perm[(size_t)f] + 1, perm[(size_t)t] + 1});
    for (int c : m.inputs) raw.inputs.push_back(perm[(size_t)c] + 1);
    for (int c : m.outputs) raw.outputs.push_back(perm[(size_t)c] + 1);
    for (int c : m.leaks) raw.leaks.push_back(perm[(size_t)c] + 1);
    return validate_model(raw);
}

} // namespace linident
