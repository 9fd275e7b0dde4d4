#pragma once

// exact integer linear algebra on small matrices: hermite normal form,
// saturated kernels, lattice membership and integral solves.

#include <linident/poly.hpp>

#include <optional>
#include <vector>

namespace linident {

using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;

// row-style hermite normal form of the lattice spanned by the rows:
// row echelon, positive pivots, entries above a pivot reduced into
// [0, pivot). zero rows dropped. canonical for the row lattice.
IntMat hnf_row(IntMat a);

// unimodular transform u with u*a in row echelon form; returns both
struct HnfTransform {
    IntMat h; // echelon form, zero rows kept at the bottom
    IntMat u; // unimodular, u*a == h
};
HnfTransform hnf_with_transform(IntMat a);

// basis of {x : a x = 0} over the integers (saturated lattice)
IntMat kernel_basis(const IntMat& a);

int int_rank(const IntMat& a);

// membership of v in the row lattice of basis (basis in hnf or not)
bool lattice_contains(const IntMat& basis, const IntVec& v);

// one integral solution of a x = b, if any
std::optional<IntVec> solve_integer(const IntMat& a, const IntVec& b);

} // namespace linident
