#include <linident/poly.hpp>

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>
#include <stdexcept>

namespace linident {

bool exp_lex_greater(const ExpVec& a, const ExpVec& b) {
    assert(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] > b[i];
    return false;
}

MPoly MPoly::constant(int nvars, Int c) {
    MPoly p(nvars);
    if (c != 0) p.terms_.push_back({ExpVec((size_t)nvars, 0), std::move(c)});
    return p;
}

MPoly MPoly::variable(int nvars, int idx) {
    assert(idx >= 0 && idx < nvars);
    ExpVec e((size_t)nvars, 0);
    e[(size_t)idx] = 1;
    return monomial(nvars, std::move(e), 1);
}

MPoly MPoly::monomial(int nvars, ExpVec exp, Int c) {
    assert((int)exp.size() == nvars);
    MPoly p(nvars);
    if (c != 0) p.terms_.push_back({std::move(exp), std::move(c)});
    return p;
}

bool MPoly::is_one() const {
    return terms_.size() == 1 && terms_[0].coeff == 1 &&
           std::all_of(terms_[0].exp.begin(), terms_[0].exp.end(),
                       [](std::uint16_t e) { return e == 0; });
}

int MPoly::total_degree() const {
    int d = 0;
    for (const auto& t : terms_) {
        int s = 0;
        for (auto e : t.exp) s += e;
        d = std::max(d, s);
    }
    return d;
}

void MPoly::normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& x, const Term& y) { return exp_lex_greater(x.exp, y.exp); });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
        if (!out.empty() && out.back().exp == t.exp)
            out.back().coeff += t.coeff;
        else
            out.push_back(std::move(t));
        if (!out.empty() && out.back().coeff == 0) out.pop_back();
    }
    terms_ = std::move(out);
}

void MPoly::add_term(const ExpVec& exp, const Int& c) {
    if (c == 0) return;
    terms_.push_back({exp, c});
    normalize();
}

MPoly operator+(const MPoly& a, const MPoly& b) {
    assert(a.nvars_ == b.nvars_);
    MPoly r(a.nvars_);
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
        if (j == b.terms_.size() ||
            (i < a.terms_.size() && exp_lex_greater(a.terms_[i].exp, b.terms_[j].exp))) {
            r.terms_.push_back(a.terms_[i++]);
        } else if (i == a.terms_.size() || exp_lex_greater(b.terms_[j].exp, a.terms_[i].exp)) {
            r.terms_.push_back(b.terms_[j++]);
        } else {
            Int c = a.terms_[i].coeff + b.terms_[j].coeff;
            if (c != 0) r.terms_.push_back({a.terms_[i].exp, std::move(c)});
            ++i; ++j;
        }
    }
    return r;
}

MPoly MPoly::operator-() const {
    MPoly r(*this);
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
}

MPoly operator-(const MPoly& a, const MPoly& b) { return a + (-b); }

MPoly operator*(const MPoly& a, const MPoly& b) {
    assert(a.nvars_ == b.nvars_);
    std::map<ExpVec, Int, bool (*)(const ExpVec&, const ExpVec&)> acc(exp_lex_greater);
    ExpVec e((size_t)a.nvars_);
    for (const auto& ta : a.terms_)
        for (const auto& tb : b.terms_) {
            for (size_t k = 0; k < e.size(); ++k)
                e[k] = (std::uint16_t)(ta.exp[k] + tb.exp[k]);
            acc[e] += ta.coeff * tb.coeff;
        }
    MPoly r(a.nvars_);
    r.terms_.reserve(acc.size());
    for (auto& [exp, c] : acc)
        if (c != 0) r.terms_.push_back({exp, std::move(c)});
    return r;
}

MPoly MPoly::scaled(const Int& c) const {
    if (c == 0) return MPoly(nvars_);
    MPoly r(*this);
    for (auto& t : r.terms_) t.coeff *= c;
    return r;
}

MPoly MPoly::pow(unsigned e) const {
    MPoly r = constant(nvars_, 1);
    MPoly b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

MPoly MPoly::derivative(int var) const {
    MPoly r(nvars_);
    for (const auto& t : terms_) {
        if (t.exp[(size_t)var] == 0) continue;
        Term d = t;
        d.coeff *= (int)t.exp[(size_t)var];
        d.exp[(size_t)var] -= 1;
        r.terms_.push_back(std::move(d));
    }
    r.normalize();
    return r;
}

MPoly MPoly::embedded(int new_nvars) const {
    assert(new_nvars >= nvars_);
    MPoly r(new_nvars);
    r.terms_ = terms_;
    for (auto& t : r.terms_) t.exp.resize((size_t)new_nvars, 0);
    r.normalize();
    return r;
}

MPoly MPoly::coeff_of(int var, int k) const {
    MPoly r(nvars_ - 1);
    for (const auto& t : terms_) {
        if ((int)t.exp[(size_t)var] != k) continue;
        Term u;
        u.coeff = t.coeff;
        u.exp = t.exp;
        u.exp.erase(u.exp.begin() + var);
        r.terms_.push_back(std::move(u));
    }
    r.normalize();
    return r;
}

int MPoly::degree_in(int var) const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, (int)t.exp[(size_t)var]);
    return d;
}

MPoly MPoly::substituted(const std::vector<MPoly>& images, int out_nvars) const {
    assert((int)images.size() == nvars_);
    MPoly r(out_nvars);
    for (const auto& t : terms_) {
        MPoly m = MPoly::constant(out_nvars, t.coeff);
        for (int v = 0; v < nvars_; ++v)
            if (t.exp[(size_t)v] > 0) m = m * images[(size_t)v].pow(t.exp[(size_t)v]);
        r = r + m;
    }
    return r;
}

Int MPoly::eval_int(const std::vector<Int>& x) const {
    assert((int)x.size() == nvars_);
    Int acc = 0;
    for (const auto& t : terms_) {
        Int v = t.coeff;
        for (int k = 0; k < nvars_; ++k)
            for (int e = 0; e < (int)t.exp[(size_t)k]; ++e) v *= x[(size_t)k];
        acc += v;
    }
    return acc;
}

std::uint64_t fp_of_int(const Int& c) {
    Int m = c % (long long)FP61_PRIME;
    if (m < 0) m += (long long)FP61_PRIME;
    return m.convert_to<std::uint64_t>();
}

std::uint64_t MPoly::eval_mod_p(const std::vector<std::uint64_t>& x) const {
    assert((int)x.size() == nvars_);
    std::uint64_t acc = 0;
    for (const auto& t : terms_) {
        std::uint64_t v = fp_of_int(t.coeff);
        for (int k = 0; k < nvars_; ++k)
            if (t.exp[(size_t)k]) v = fp61::mul(v, fp61::pow(x[(size_t)k], t.exp[(size_t)k]));
        acc = fp61::add(acc, v);
    }
    return acc;
}

std::string MPoly::str(const std::vector<std::string>& var_names) const {
    assert((int)var_names.size() == nvars_);
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        Int c = t.coeff;
        bool neg = c < 0;
        if (neg) c = -c;
        if (first) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        first = false;
        bool has_vars = std::any_of(t.exp.begin(), t.exp.end(),
                                    [](std::uint16_t e) { return e != 0; });
        bool printed = false;
        if (c != 1 || !has_vars) {
            os << c;
            printed = true;
        }
        for (int v = 0; v < nvars_; ++v) {
            if (t.exp[(size_t)v] == 0) continue;
            if (printed) os << "*";
            os << var_names[(size_t)v];
            if (t.exp[(size_t)v] > 1) os << "^" << (int)t.exp[(size_t)v];
            printed = true;
        }
    }
    return os.str();
}

MPoly divide_exact(const MPoly& a, const MPoly& b) {
    assert(a.nvars_ == b.nvars_);
    if (b.is_zero()) throw std::logic_error("divide_exact: division by zero");
    MPoly rem = a;
    MPoly quot(a.nvars_);
    const Term& lb = b.terms_.front();
    while (!rem.is_zero()) {
        const Term& lr = rem.terms_.front();
        ExpVec e((size_t)a.nvars_);
        for (size_t k = 0; k < e.size(); ++k) {
            if (lr.exp[k] < lb.exp[k])
                throw std::logic_error("divide_exact: not divisible (exponent)");
            e[k] = (std::uint16_t)(lr.exp[k] - lb.exp[k]);
        }
        if (lr.coeff % lb.coeff != 0)
            throw std::logic_error("divide_exact: not divisible (coefficient)");
        MPoly q = MPoly::monomial(a.nvars_, std::move(e), lr.coeff / lb.coeff);
        quot = quot + q;
        rem = rem - q * b;
    }
    return quot;
}

PolyMatrix PolyMatrix::submatrix_without(int drop_row, int drop_col) const {
    int nv = a.empty() ? 0 : a[0].nvars();
    PolyMatrix s(rows - 1, cols - 1, nv);
    for (int i = 0, si = 0; i < rows; ++i) {
        if (i == drop_row) continue;
        for (int j = 0, sj = 0; j < cols; ++j) {
            if (j == drop_col) continue;
            s.at(si, sj) = at(i, j);
            ++sj;
        }
        ++si;
    }
    return s;
}

MPoly det_bareiss(const PolyMatrix& m) {
    assert(m.rows == m.cols);
    int n = m.rows;
    int nv = n ? m.at(0, 0).nvars() : 0;
    if (n == 0) return MPoly::constant(nv, 1);
    PolyMatrix w = m;
    MPoly prev = MPoly::constant(nv, 1);
    int sign = 1;
    for (int r = 0; r < n - 1; ++r) {
        if (w.at(r, r).is_zero()) {
            int piv = -1;
            for (int i = r + 1; i < n; ++i)
                if (!w.at(i, r).is_zero()) { piv = i; break; }
            if (piv < 0) return MPoly(nv); // zero column -> singular
            for (int j = 0; j < n; ++j) std::swap(w.at(r, j), w.at(piv, j));
            sign = -sign;
        }
        for (int i = r + 1; i < n; ++i)
            for (int j = r + 1; j < n; ++j)
                w.at(i, j) = divide_exact(
                    w.at(r, r) * w.at(i, j) - w.at(i, r) * w.at(r, j), prev);
        prev = w.at(r, r);
    }
    MPoly d = w.at(n - 1, n - 1);
    return sign < 0 ? -d : d;
}

namespace {

// laplace expansion along rows with memoization on the set of unused columns
MPoly det_expand_rec(const PolyMatrix& m, unsigned mask,
                     std::vector<std::pair<bool, MPoly>>& memo) {
    int n = m.rows;
    int nv = m.at(0, 0).nvars();
    if (mask == 0) return MPoly::constant(nv, 1);
    auto& slot = memo[mask];
    if (slot.first) return slot.second;
    int row = n - __builtin_popcount(mask); // rows 0..row-1 already consumed
    MPoly acc(nv);
    int sign = 1;
    for (int c = 0; c < n; ++c) {
        if (!(mask & (1u << c))) continue;
        if (!m.at(row, c).is_zero()) {
            MPoly sub = det_expand_rec(m, mask & ~(1u << c), memo);
            MPoly contrib = m.at(row, c) * sub;
            acc = (sign > 0) ? acc + contrib : acc - contrib;
        }
        sign = -sign;
    }
    slot = {true, acc};
    return acc;
}

} // namespace

MPoly det_expansion(const PolyMatrix& m) {
    assert(m.rows == m.cols);
    int n = m.rows;
    int nv = n ? m.at(0, 0).nvars() : 0;
    if (n == 0) return MPoly::constant(nv, 1);
    assert(n <= 16);
    std::vector<std::pair<bool, MPoly>> memo(1u << n, {false, MPoly(nv)});
    return det_expand_rec(m, (1u << n) - 1, memo);
}

MPoly det(const PolyMatrix& m) {
    return m.rows <= 4 ? det_expansion(m) : det_bareiss(m);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

FieldPoint make_field_point(int nvars, std::uint64_t seed) {
    FieldPoint pt;
    pt.seed = seed;
    std::mt19937_64 rng(seed);
    pt.values.reserve((size_t)nvars);
    for (int i = 0; i < nvars; ++i)
        pt.values.push_back(rng() % (FP61_PRIME - 1) + 1); // nonzero residue
    return pt;
}

FpValueGrad eval_value_grad(const MPoly& f, const FieldPoint& pt) {
    int nv = f.nvars();
    assert((int)pt.values.size() == nv);
    std::vector<std::uint64_t> inv((size_t)nv);
    for (int v = 0; v < nv; ++v) inv[(size_t)v] = fp61::inv(pt.values[(size_t)v]);
    FpValueGrad out;
    out.grad.assign((size_t)nv, 0);
    for (const auto& t : f.terms()) {
        std::uint64_t val = fp_of_int(t.coeff);
        for (int v = 0; v < nv; ++v)
            if (t.exp[(size_t)v])
                val = fp61::mul(val, fp61::pow(pt.values[(size_t)v], t.exp[(size_t)v]));
        out.value = fp61::add(out.value, val);
        for (int v = 0; v < nv; ++v) {
            std::uint16_t e = t.exp[(size_t)v];
            if (!e) continue;
            std::uint64_t g = fp61::mul(fp61::mul(val, inv[(size_t)v]), e);
            out.grad[(size_t)v] = fp61::add(out.grad[(size_t)v], g);
        }
    }
    return out;
}

std::vector<std::vector<std::uint64_t>> jacobian_eval(
    const std::vector<MPoly>& fs, const FieldPoint& pt, JacobianMode mode) {
    std::vector<std::vector<std::uint64_t>> rows;
    rows.reserve(fs.size());
    for (const auto& f : fs) {
        if (mode == JacobianMode::dual) {
            rows.push_back(eval_value_grad(f, pt).grad);
        } else {
            std::vector<std::uint64_t> row;
            row.reserve((size_t)f.nvars());
            for (int v = 0; v < f.nvars(); ++v)
                row.push_back(f.derivative(v).eval_mod_p(pt.values));
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

int fp_rank(std::vector<std::vector<std::uint64_t>> m) {
    if (m.empty()) return 0;
    size_t cols = m[0].size();
    int rank = 0;
    size_t row = 0;
    for (size_t c = 0; c < cols && row < m.size(); ++c) {
        size_t piv = row;
        while (piv < m.size() && m[piv][c] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[row], m[piv]);
        std::uint64_t pinv = fp61::inv(m[row][c]);
        for (size_t j = c; j < cols; ++j) m[row][j] = fp61::mul(m[row][j], pinv);
        for (size_t i = 0; i < m.size(); ++i) {
            if (i == row || m[i][c] == 0) continue;
            std::uint64_t f = m[i][c];
            for (size_t j = c; j < cols; ++j)
                m[i][j] = fp61::sub(m[i][j], fp61::mul(f, m[row][j]));
        }
        ++row;
        ++rank;
    }
    return rank;
}

} // namespace linident
