#include <linident/lattice.hpp>

#include <algorithm>
#include <cassert>

namespace linident {

namespace {

// euclidean row reduction to echelon form with optional transform tracking
void echelonize(IntMat& a, IntMat* u) {
    if (a.empty()) return;
    size_t rows = a.size(), cols = a[0].size();
    size_t rank_row = 0;
    for (size_t c = 0; c < cols && rank_row < rows; ++c) {
        // gcd-chain all entries of column c below rank_row into one row
        while (true) {
            size_t nz = rows;
            for (size_t i = rank_row; i < rows; ++i)
                if (a[i][c] != 0) { nz = i; break; }
            if (nz == rows) break;
            // move the row with the smallest nonzero magnitude to the top
            size_t best = nz;
            for (size_t i = nz + 1; i < rows; ++i)
                if (a[i][c] != 0 && abs(a[i][c]) < abs(a[best][c])) best = i;
            std::swap(a[rank_row], a[best]);
            if (u) std::swap((*u)[rank_row], (*u)[best]);
            bool clean = true;
            for (size_t i = rank_row + 1; i < rows; ++i) {
                if (a[i][c] == 0) continue;
                Int q = a[i][c] / a[rank_row][c]; // truncated division
                if (q != 0) {
                    for (size_t j = 0; j < cols; ++j) a[i][j] -= q * a[rank_row][j];
                    if (u)
                        for (size_t j = 0; j < (*u)[i].size(); ++j)
                            (*u)[i][j] -= q * (*u)[rank_row][j];
                }
                if (a[i][c] != 0) clean = false;
            }
            if (clean) break;
        }
        if (a[rank_row][c] == 0) continue;
        if (a[rank_row][c] < 0) {
            for (auto& x : a[rank_row]) x = -x;
            if (u)
                for (auto& x : (*u)[rank_row]) x = -x;
        }
        // reduce entries above the pivot into [0, pivot)
        for (size_t i = 0; i < rank_row; ++i) {
            Int q;
            // floor division so the remainder lands in [0, pivot)
            Int num = a[i][c], den = a[rank_row][c];
            q = num / den;
            if (num % den < 0) q -= 1;
            if (q != 0) {
                for (size_t j = 0; j < cols; ++j) a[i][j] -= q * a[rank_row][j];
                if (u)
                    for (size_t j = 0; j < (*u)[i].size(); ++j)
                        (*u)[i][j] -= q * (*u)[rank_row][j];
            }
        }
        ++rank_row;
    }
}

} // namespace

HnfTransform hnf_with_transform(IntMat a) {
    HnfTransform t;
    size_t rows = a.size();
    t.u.assign(rows, IntVec(rows, 0));
    for (size_t i = 0; i < rows; ++i) t.u[i][i] = 1;
    echelonize(a, &t.u);
    t.h = std::move(a);
    return t;
}

IntMat hnf_row(IntMat a) {
    echelonize(a, nullptr);
    while (!a.empty() &&
           std::all_of(a.back().begin(), a.back().end(), [](const Int& x) { return x == 0; }))
        a.pop_back();
    return a;
}

IntMat kernel_basis(const IntMat& a) {
    if (a.empty()) return {};
    size_t rows = a.size(), cols = a[0].size();
    // transform rows of the transpose; zero rows of the echelon form pick out
    // unimodular combinations of the columns (= kernel vectors of a)
    IntMat at(cols, IntVec(rows));
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j) at[j][i] = a[i][j];
    auto t = hnf_with_transform(std::move(at));
    IntMat basis;
    for (size_t i = 0; i < t.h.size(); ++i) {
        bool zero = std::all_of(t.h[i].begin(), t.h[i].end(),
                                [](const Int& x) { return x == 0; });
        if (zero) basis.push_back(t.u[i]);
    }
    return hnf_row(std::move(basis));
}

int int_rank(const IntMat& a) {
    return (int)hnf_row(a).size();
}

bool lattice_contains(const IntMat& basis, const IntVec& v) {
    IntMat h = hnf_row(basis);
    IntVec w = v;
    size_t cols = w.size();
    for (const auto& row : h) {
        size_t piv = cols;
        for (size_t j = 0; j < cols; ++j)
            if (row[j] != 0) { piv = j; break; }
        if (piv == cols) continue;
        if (w[piv] == 0) continue;
        if (w[piv] % row[piv] != 0) return false;
        Int q = w[piv] / row[piv];
        for (size_t j = 0; j < cols; ++j) w[j] -= q * row[j];
    }
    return std::all_of(w.begin(), w.end(), [](const Int& x) { return x == 0; });
}

std::optional<IntVec> solve_integer(const IntMat& a, const IntVec& b) {
    if (a.empty())
        return std::all_of(b.begin(), b.end(), [](const Int& x) { return x == 0; })
                   ? std::optional<IntVec>(IntVec{})
                   : std::nullopt;
    size_t rows = a.size(), cols = a[0].size();
    assert(b.size() == rows);
    // row-echelonize the transpose with transform: u * a^T = h, so for any
    // combination y of h-rows, x = u^T-combination solves a x over columns.
    IntMat at(cols, IntVec(rows));
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j) at[j][i] = a[i][j];
    auto t = hnf_with_transform(std::move(at));
    // h rows span the row lattice of a^T, i.e. the column lattice of a.
    // express b in that span: greedy reduction against echelon rows.
    IntVec w = b;
    IntVec y(t.h.size(), 0);
    for (size_t i = 0; i < t.h.size(); ++i) {
        size_t piv = rows;
        for (size_t j = 0; j < rows; ++j)
            if (t.h[i][j] != 0) { piv = j; break; }
        if (piv == rows) continue;
        if (w[piv] == 0) continue;
        if (w[piv] % t.h[i][piv] != 0) return std::nullopt;
        Int q = w[piv] / t.h[i][piv];
        y[i] = q;
        for (size_t j = 0; j < rows; ++j) w[j] -= q * t.h[i][j];
    }
    if (!std::all_of(w.begin(), w.end(), [](const Int& x) { return x == 0; }))
        return std::nullopt;
    IntVec x(cols, 0);
    for (size_t i = 0; i < t.h.size(); ++i)
        if (y[i] != 0)
            for (size_t j = 0; j < cols; ++j) x[j] += y[i] * t.u[i][j];
    return x;
}

} // namespace linident
