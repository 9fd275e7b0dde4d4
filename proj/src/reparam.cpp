#include <linident/reparam.hpp>

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>

namespace linident {

std::vector<MPoly> numerator_coeffs(const PolyMatrix& A,
                                    const std::vector<MPoly>& bcol,
                                    int out_row) {
    assert(A.rows == A.cols && (int)bcol.size() == A.rows);
    int r = A.rows;
    int np = r ? A.at(0, 0).nvars() : 0;
    PolyMatrix M(r, r, np + 1);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            M.at(i, j) = -A.at(i, j).embedded(np + 1);
            if (i == j) M.at(i, j) += MPoly::variable(np + 1, np);
        }
    MPoly num(np + 1);
    for (int j = 0; j < r; ++j) {
        if (bcol[(size_t)j].is_zero()) continue;
        MPoly minor = (r == 1) ? MPoly::constant(np + 1, 1)
                               : det(M.submatrix_without(j, out_row));
        if ((j + out_row) % 2 == 1) minor = -minor;
        num += minor * bcol[(size_t)j].embedded(np + 1);
    }
    std::vector<MPoly> coeffs;
    coeffs.reserve((size_t)r);
    for (int k = 0; k < r; ++k) coeffs.push_back(num.coeff_of(np, k));
    return coeffs;
}

namespace {

// companion matrix with bottom row -c_0 .. -c_{n-1}
PolyMatrix companion(const std::vector<MPoly>& cs, int nvars) {
    int n = (int)cs.size();
    PolyMatrix a(n, n, nvars);
    for (int i = 0; i + 1 < n; ++i) a.at(i, i + 1) = MPoly::constant(nvars, 1);
    for (int j = 0; j < n; ++j) a.at(n - 1, j) = -cs[(size_t)j];
    return a;
}

// markov parameters from ascending numerator/denominator coefficients:
// m_k = num_{n-k} - sum_{j=1}^{k-1} den_{n-j} m_{k-j}
std::vector<MPoly> markov_column(const std::vector<MPoly>& den,
                                 const std::vector<MPoly>& num) {
    int n = (int)den.size();
    int nv = n ? den[0].nvars() : 0;
    std::vector<MPoly> mk((size_t)n, MPoly(nv));
    for (int k = 1; k <= n; ++k) {
        MPoly v = num[(size_t)(n - k)];
        for (int j = 1; j < k; ++j)
            v -= den[(size_t)(n - j)] * mk[(size_t)(k - j - 1)];
        mk[(size_t)(k - 1)] = v;
    }
    return mk;
}

bool verify_siso(const CompModel& m, const LinearReparam& r, std::string* why) {
    int n = m.n;
    int np = m.num_params();
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (r.T.rows != n || r.T.cols != n) return fail("transform has wrong shape");
    PolyMatrix A = compartmental_matrix(m);
    PolyMatrix Ac = companion(r.den_coeffs, np);

    // T conjugates the dynamics into the companion form: T A = Ac T
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            MPoly lhs(np), rhs(np);
            for (int l = 0; l < n; ++l) {
                lhs += r.T.at(i, l) * A.at(l, j);
                rhs += Ac.at(i, l) * r.T.at(l, j);
            }
            if (lhs != rhs) return fail("T*A != Ac*T");
        }

    // the transformed input column equals the markov parameters, so the
    // series-division recurrence is checked against C A^k b directly
    int in = m.inputs[0];
    for (int k = 0; k < n; ++k)
        if (r.T.at(k, in) != r.markov[(size_t)k]) return fail("T*b != markov column");

    // the companion system reproduces the io-equation exactly
    auto den_new = char_poly(Ac);
    auto eqs = io_equations(m);
    const IOEquation& eq = eqs[0];
    if ((int)eq.subsystem.size() != n) return fail("subsystem is not the whole model");
    for (int k = 0; k <= n; ++k)
        if (den_new[(size_t)k] != eq.den[(size_t)k])
            return fail("companion system changes the denominator");
    auto num_new = numerator_coeffs(Ac, r.markov, 0);
    auto it = eq.num.find(in);
    if (it == eq.num.end()) return fail("input column missing from io-equation");
    for (int k = 0; k < n; ++k)
        if (num_new[(size_t)k] != it->second[(size_t)k])
            return fail("companion system changes the numerator");
    return true;
}

std::string monomial_str(const IntVec& e, const std::vector<std::string>& names) {
    std::ostringstream num, den;
    for (size_t v = 0; v < e.size(); ++v) {
        if (e[v] == 0) continue;
        std::ostringstream& os = e[v] > 0 ? num : den;
        Int a = e[v] > 0 ? e[v] : Int(-e[v]);
        if (os.tellp() > 0) os << "*";
        os << names[v];
        if (a != 1) os << "^" << a;
    }
    std::string ns = num.str(), ds = den.str();
    if (ns.empty()) ns = "1";
    if (ds.empty()) return ns;
    if (ds.find('*') != std::string::npos) ds = "(" + ds + ")";
    return ns + "/" + ds;
}

IntMat transpose(const IntMat& a) {
    if (a.empty()) return {};
    IntMat t(a[0].size(), IntVec(a.size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

IntMat to_intmat(const std::vector<std::vector<long long>>& a) {
    IntMat m;
    for (const auto& row : a) {
        IntVec r;
        for (long long x : row) r.push_back(x);
        m.push_back(std::move(r));
    }
    return m;
}

} // namespace

LinearReparam siso_canonical_reparam(const CompModel& m) {
    if (m.inputs.size() != 1 || m.outputs.size() != 1)
        throw PrecondError(PrecondCode::NotSISO,
                           "canonical form needs exactly one input and one output");
    int n = m.n;
    if (n > 8)
        throw PrecondError(PrecondCode::SpecTooLarge,
                           "canonical form supported up to 8 compartments");
    int np = m.num_params();
    PolyMatrix A = compartmental_matrix(m);
    int out = m.outputs[0];
    int in = m.inputs[0];

    LinearReparam r;
    r.kind = "siso-canonical";

    // observability matrix: rows C, CA, ..., CA^(n-1)
    r.T = PolyMatrix(n, n, np);
    r.T.at(0, out) = MPoly::constant(np, 1);
    for (int k = 1; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            MPoly s(np);
            for (int l = 0; l < n; ++l) s += r.T.at(k - 1, l) * A.at(l, j);
            r.T.at(k, j) = std::move(s);
        }
    if (det(r.T).is_zero())
        throw PrecondError(PrecondCode::NotObservable,
                           "observability matrix is singular");

    // with T invertible every compartment reaches the output, so the
    // io-equation lives on the whole model
    auto eqs = io_equations(m);
    const IOEquation& eq = eqs[0];
    assert((int)eq.subsystem.size() == n);
    r.den_coeffs.assign(eq.den.begin(), eq.den.end() - 1);
    auto itn = eq.num.find(in);
    assert(itn != eq.num.end());
    r.num_coeffs = itn->second;
    r.markov = markov_column(r.den_coeffs, r.num_coeffs);

    auto names = m.param_names();
    for (int k = 0; k < n; ++k) {
        r.new_param_names.push_back("c" + std::to_string(k));
        r.new_param_values.push_back(r.den_coeffs[(size_t)k].str(names));
    }
    for (int k = 0; k < n; ++k) {
        r.new_param_names.push_back("b" + std::to_string(k));
        r.new_param_values.push_back(r.num_coeffs[(size_t)k].str(names));
    }

    // presentation: companion dynamics and the input column written in the
    // abstract coefficients (denominator first, then numerator)
    r.new_A_display.assign((size_t)n, std::vector<std::string>((size_t)n, "0"));
    for (int i = 0; i + 1 < n; ++i) r.new_A_display[(size_t)i][(size_t)(i + 1)] = "1";
    for (int j = 0; j < n; ++j)
        r.new_A_display[(size_t)(n - 1)][(size_t)j] = "-c" + std::to_string(j);
    {
        int na = 2 * n;
        std::vector<MPoly> aden, anum;
        for (int k = 0; k < n; ++k) aden.push_back(MPoly::variable(na, k));
        for (int k = 0; k < n; ++k) anum.push_back(MPoly::variable(na, n + k));
        auto amark = markov_column(aden, anum);
        for (const auto& p : amark) r.new_B_display.push_back(p.str(r.new_param_names));
    }
    r.new_outputs.push_back("y" + std::to_string(out + 1) + " = X1");

    std::string why;
    r.verified = verify_siso(m, r, &why);
    if (!r.verified) r.notes.push_back("verification failed: " + why);
    return r;
}

namespace {

// weight matrix (one row per symmetry) and per-compartment targets
IntMat weight_matrix(const ScalingSymmetry& sym) {
    IntMat w;
    for (const auto& row : sym.weights) {
        IntVec r;
        for (long long x : row) r.push_back(x);
        w.push_back(std::move(r));
    }
    return w;
}

IntVec compartment_target(const ScalingSymmetry& sym, int c) {
    IntVec t;
    for (const auto& v : sym.basis_v) t.push_back(v[(size_t)c]);
    return t;
}

bool verify_scaling(const CompModel& m, const LinearReparam& r, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (!r.sym.complete) return fail("symmetries do not span the kernel");
    if (!r.sym.verified) return fail("symmetry basis failed its own check");
    int np = m.num_params();
    size_t nk = r.kept_compartments.size();
    if (r.state_exponents.size() != nk) return fail("missing state scalings");

    IntMat W = weight_matrix(r.sym);
    std::vector<int> pos((size_t)m.n, -1);
    for (size_t k = 0; k < nk; ++k) pos[(size_t)r.kept_compartments[k]] = (int)k;

    // each scaling must carry weight v_k on its compartment, and must be
    // trivial on pinned compartments
    std::set<int> pinned(m.inputs.begin(), m.inputs.end());
    pinned.insert(m.outputs.begin(), m.outputs.end());
    for (size_t k = 0; k < nk; ++k) {
        int c = r.kept_compartments[k];
        const IntVec& x = r.state_exponents[k];
        if ((int)x.size() != np) return fail("state scaling has wrong length");
        IntVec t = compartment_target(r.sym, c);
        for (size_t i = 0; i < W.size(); ++i) {
            Int acc = 0;
            for (int v = 0; v < np; ++v) acc += W[i][(size_t)v] * x[(size_t)v];
            if (acc != t[i]) return fail("state scaling has the wrong weight");
        }
        if (pinned.count(c))
            for (const Int& e : x)
                if (e != 0) return fail("input/output compartment rescaled");
    }

    // every transformed entry must be a product of the invariant generators
    PolyMatrix A = compartmental_matrix(m);
    IntMat L = to_intmat(r.sym.invariant_exponents);
    for (size_t i = 0; i < nk; ++i)
        for (size_t j = 0; j < nk; ++j) {
            const MPoly& p = A.at(r.kept_compartments[i], r.kept_compartments[j]);
            for (const auto& t : p.terms()) {
                IntVec e((size_t)np);
                for (int v = 0; v < np; ++v)
                    e[(size_t)v] = (long long)t.exp[(size_t)v] + r.state_exponents[j][(size_t)v] -
                                   r.state_exponents[i][(size_t)v];
                if (!lattice_contains(L, e))
                    return fail("transformed coefficient is not invariant");
            }
        }
    return true;
}

} // namespace

LinearReparam scaling_reparam(const CompModel& m, const ScalingSymmetry& sym) {
    LinearReparam r;
    r.kind = "scaling";
    r.sym = sym;
    int np = m.num_params();
    auto names = m.param_names();

    // output-reachable part; the rest is invisible and dropped
    std::set<int> keep;
    for (int out : m.outputs)
        for (int c : reaches(m, out)) keep.insert(c);
    r.kept_compartments.assign(keep.begin(), keep.end());
    for (int c = 0; c < m.n; ++c)
        if (!keep.count(c)) r.dropped_compartments.push_back(c);
    if (!r.dropped_compartments.empty())
        r.notes.push_back("compartments reaching no output were dropped");

    if (!sym.complete) {
        r.notes.push_back(
            "not applicable: scaling symmetries do not span the unidentifiable "
            "directions");
        return r;
    }
    if (sym.dim == 0) {
        r.notes.push_back("no scaling symmetries; parameters are already locally "
                          "identifiable up to finitely many points");
        r.verified = sym.verified;
        for (int v = 0; v < np; ++v) {
            r.new_param_names.push_back(names[(size_t)v]);
            r.new_param_values.push_back(names[(size_t)v]);
        }
        for (size_t k = 0; k < r.kept_compartments.size(); ++k)
            r.state_exponents.push_back(IntVec((size_t)np));
        return r;
    }

    IntMat W = weight_matrix(sym);

    // one parameter monomial per kept state, with the weight of that state
    // under every symmetry; pinned states get the trivial monomial
    for (int c : r.kept_compartments) {
        auto x = solve_integer(W, compartment_target(sym, c));
        if (!x) {
            r.notes.push_back("not applicable: state weights have no integral "
                              "monomial solution");
            r.state_exponents.clear();
            return r;
        }
        r.state_exponents.push_back(*x);
    }

    size_t nk = r.kept_compartments.size();
    for (size_t k = 0; k < nk; ++k) {
        int c = r.kept_compartments[k];
        std::string lam = monomial_str(r.state_exponents[k], names);
        std::string xs = "x" + std::to_string(c + 1);
        r.state_scalings.push_back("X" + std::to_string(c + 1) + " = " +
                                   (lam == "1" ? xs : xs + " / (" + lam + ")"));
    }

    int ng = (int)sym.invariant_exponents.size();
    for (int g = 0; g < ng; ++g) {
        r.new_param_names.push_back("k" + std::to_string(g + 1));
        r.new_param_values.push_back(sym.invariant_monomials[(size_t)g]);
    }

    // rewrite the reduced system's entries as products of the generators
    PolyMatrix A = compartmental_matrix(m);
    IntMat Lt = transpose(to_intmat(sym.invariant_exponents));
    bool ok = true;
    r.new_A_display.assign(nk, std::vector<std::string>(nk, "0"));
    for (size_t i = 0; i < nk && ok; ++i)
        for (size_t j = 0; j < nk && ok; ++j) {
            const MPoly& p = A.at(r.kept_compartments[i], r.kept_compartments[j]);
            if (p.is_zero()) continue;
            std::ostringstream os;
            bool first = true;
            for (const auto& t : p.terms()) {
                IntVec e((size_t)np);
                for (int v = 0; v < np; ++v)
                    e[(size_t)v] = (long long)t.exp[(size_t)v] +
                                   r.state_exponents[j][(size_t)v] -
                                   r.state_exponents[i][(size_t)v];
                auto z = solve_integer(Lt, e);
                if (!z) {
                    ok = false;
                    break;
                }
                Int c = t.coeff;
                if (!first) os << (c > 0 ? " + " : " - ");
                else if (c < 0) os << "-";
                first = false;
                Int mag = c > 0 ? c : Int(-c);
                std::string mono = monomial_str(*z, r.new_param_names);
                if (mag != 1) os << mag << (mono == "1" ? "" : "*");
                if (mono != "1" || mag == 1) os << mono;
            }
            r.new_A_display[i][j] = os.str();
        }
    if (!ok) {
        r.notes.push_back("not applicable: transformed coefficient is not a "
                          "product of the invariant generators");
        r.new_A_display.clear();
        return r;
    }

    for (int in : m.inputs) {
        auto it = keep.find(in);
        if (it == keep.end()) {
            r.notes.push_back("input " + std::to_string(in + 1) +
                              " reaches no output and was dropped");
            continue;
        }
        // pinned states carry the trivial monomial, so the column is unchanged
        r.new_B_display.push_back("u" + std::to_string(in + 1) + " -> X" +
                                  std::to_string(in + 1));
    }
    for (int out : m.outputs)
        r.new_outputs.push_back("y" + std::to_string(out + 1) + " = X" +
                                std::to_string(out + 1));

    std::string why;
    r.verified = verify_scaling(m, r, &why);
    if (!r.verified) r.notes.push_back("verification failed: " + why);
    return r;
}

bool verify_reparam(const CompModel& m, const LinearReparam& r, std::string* why) {
    if (r.kind == "siso-canonical") return verify_siso(m, r, why);
    if (r.kind == "scaling") return verify_scaling(m, r, why);
    if (why) *why = "unknown reparametrization kind";
    return false;
}

} // namespace linident
