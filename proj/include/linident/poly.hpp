#pragma once

// exact sparse multivariate polynomials with arbitrary-precision integer
// coefficients, polynomial matrices and determinants, and evaluation of
// values/jacobians over the 61-bit prime field.

#include <linident/fp61.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace linident {

using Int = boost::multiprecision::cpp_int;
using ExpVec = std::vector<std::uint16_t>;

// descending lexicographic order on exponent vectors of equal length
bool exp_lex_greater(const ExpVec& a, const ExpVec& b);

struct Term {
    ExpVec exp;
    Int coeff;
    bool operator==(const Term& o) const {
        return exp == o.exp && coeff == o.coeff;
    }
};

// polynomial in a fixed number of variables; terms sorted descending-lex,
// coefficients nonzero — the representation is canonical.
class MPoly {
public:
    MPoly() = default;
    explicit MPoly(int nvars) : nvars_(nvars) {}

    static MPoly constant(int nvars, Int c);
    static MPoly variable(int nvars, int idx);
    static MPoly monomial(int nvars, ExpVec exp, Int c);

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    int num_terms() const { return (int)terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }
    int total_degree() const;

    friend MPoly operator+(const MPoly& a, const MPoly& b);
    friend MPoly operator-(const MPoly& a, const MPoly& b);
    friend MPoly operator*(const MPoly& a, const MPoly& b);
    MPoly operator-() const;
    MPoly& operator+=(const MPoly& o) { *this = *this + o; return *this; }
    MPoly& operator-=(const MPoly& o) { *this = *this - o; return *this; }
    MPoly& operator*=(const MPoly& o) { *this = *this * o; return *this; }
    bool operator==(const MPoly& o) const {
        return nvars_ == o.nvars_ && terms_ == o.terms_;
    }
    bool operator!=(const MPoly& o) const { return !(*this == o); }

    MPoly scaled(const Int& c) const;
    MPoly pow(unsigned e) const;
    MPoly derivative(int var) const;

    // widen to a ring with more variables (exponents padded with zeros)
    MPoly embedded(int new_nvars) const;

    // terms whose exponent in `var` equals k, with that variable deleted
    MPoly coeff_of(int var, int k) const;
    int degree_in(int var) const;

    // image under var -> images[var]; all images share out_nvars variables
    MPoly substituted(const std::vector<MPoly>& images, int out_nvars) const;

    Int eval_int(const std::vector<Int>& x) const;
    std::uint64_t eval_mod_p(const std::vector<std::uint64_t>& x) const;

    std::string str(const std::vector<std::string>& var_names) const;

    // building block used by arithmetic: insert term, keeping canonical form
    void add_term(const ExpVec& exp, const Int& c);

private:
    int nvars_ = 0;
    std::vector<Term> terms_;
    void normalize();
    friend MPoly divide_exact(const MPoly& a, const MPoly& b);
};

// exact polynomial division (throws std::logic_error if not divisible);
// used by the fraction-free determinant
MPoly divide_exact(const MPoly& a, const MPoly& b);

struct PolyMatrix {
    int rows = 0, cols = 0;
    std::vector<MPoly> a;

    PolyMatrix() = default;
    PolyMatrix(int r, int c, int nvars)
        : rows(r), cols(c), a((size_t)r * c, MPoly(nvars)) {}
    MPoly& at(int i, int j) { return a[(size_t)i * cols + j]; }
    const MPoly& at(int i, int j) const { return a[(size_t)i * cols + j]; }
    PolyMatrix submatrix_without(int drop_row, int drop_col) const;
};

// determinants of square polynomial matrices: fraction-free bareiss and a
// memoized laplace expansion; det() picks one by size, tests cross-check them
MPoly det_bareiss(const PolyMatrix& m);
MPoly det_expansion(const PolyMatrix& m);
MPoly det(const PolyMatrix& m);

// evaluation point in F_p: one nonzero residue per variable
struct FieldPoint {
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> values;
};

FieldPoint make_field_point(int nvars, std::uint64_t seed);

// value and full gradient of f at pt, both mod p, via one sweep over the
// terms (grad_v accumulates e_v * term / x_v with precomputed inverses)
struct FpValueGrad {
    std::uint64_t value = 0;
    std::vector<std::uint64_t> grad;
};
FpValueGrad eval_value_grad(const MPoly& f, const FieldPoint& pt);

// jacobian of fs at pt: one row per polynomial, one column per variable.
// mode "dual" uses eval_value_grad; mode "symbolic" differentiates first.
enum class JacobianMode { dual, symbolic };
std::vector<std::vector<std::uint64_t>> jacobian_eval(
    const std::vector<MPoly>& fs, const FieldPoint& pt,
    JacobianMode mode = JacobianMode::dual);

// rank of a matrix over F_p by gaussian elimination (destroys its copy)
int fp_rank(std::vector<std::vector<std::uint64_t>> m);

std::uint64_t fp_of_int(const Int& c);
std::uint64_t splitmix64(std::uint64_t x);

} // namespace linident
