#include <linident/ioeq.hpp>

#include <algorithm>
#include <cassert>
#include <sstream>

namespace linident {

std::vector<MPoly> char_poly(const PolyMatrix& a) {
    assert(a.rows == a.cols);
    int r = a.rows;
    int np = r ? a.at(0, 0).nvars() : 0;
    // operator as an extra last ring variable
    PolyMatrix M(r, r, np + 1);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            M.at(i, j) = -a.at(i, j).embedded(np + 1);
            if (i == j) M.at(i, j) += MPoly::variable(np + 1, np);
        }
    MPoly d = det(M);
    std::vector<MPoly> coeffs;
    coeffs.reserve((size_t)r + 1);
    for (int k = 0; k <= r; ++k) coeffs.push_back(d.coeff_of(np, k));
    assert(coeffs.back().is_one());
    return coeffs;
}

std::vector<IOEquation> io_equations(const CompModel& m) {
    PolyMatrix A = compartmental_matrix(m);
    int np = m.num_params();
    std::vector<IOEquation> eqs;
    for (int out : m.outputs) {
        IOEquation eq;
        eq.output = out;
        auto R = reaches(m, out);
        eq.subsystem.assign(R.begin(), R.end());
        int r = (int)eq.subsystem.size();
        std::vector<int> pos((size_t)m.n, -1);
        for (int k = 0; k < r; ++k) pos[(size_t)eq.subsystem[(size_t)k]] = k;

        PolyMatrix sub(r, r, np);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j)
                sub.at(i, j) = A.at(eq.subsystem[(size_t)i], eq.subsystem[(size_t)j]);
        eq.den = char_poly(sub);

        // numerator for input j: (-1)^(i+j) * minor of (D*I - A_R) with row
        // of the input and column of the output removed
        PolyMatrix M(r, r, np + 1);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
                M.at(i, j) = -sub.at(i, j).embedded(np + 1);
                if (i == j) M.at(i, j) += MPoly::variable(np + 1, np);
            }
        int oc = pos[(size_t)out];
        for (int in : m.inputs) {
            if (pos[(size_t)in] < 0) continue; // input does not act on this subsystem
            int ic = pos[(size_t)in];
            MPoly minor = (r == 1) ? MPoly::constant(np + 1, 1)
                                   : det(M.submatrix_without(ic, oc));
            if ((ic + oc) % 2 == 1) minor = -minor;
            std::vector<MPoly> coeffs;
            for (int k = 0; k < r; ++k) coeffs.push_back(minor.coeff_of(np, k));
            eq.num[in] = std::move(coeffs);
        }
        eqs.push_back(std::move(eq));
    }
    return eqs;
}

std::vector<MPoly> CoefficientMap::polys() const {
    std::vector<MPoly> v;
    v.reserve(entries.size());
    for (const auto& e : entries) v.push_back(e.poly);
    return v;
}

CoefficientMap io_coefficient_map(const CompModel& m) {
    CoefficientMap c;
    c.num_params = m.num_params();
    c.model_n = m.n;
    c.param_names = m.param_names();
    for (const auto& eq : io_equations(m)) {
        int r = (int)eq.subsystem.size();
        for (int k = r - 1; k >= 0; --k) {
            CoeffEntry e;
            e.output = eq.output;
            e.is_denominator = true;
            e.power = k;
            e.poly = eq.den[(size_t)k];
            c.entries.push_back(std::move(e));
        }
        for (const auto& [in, coeffs] : eq.num) {
            for (int k = r - 1; k >= 0; --k) {
                CoeffEntry e;
                e.output = eq.output;
                e.is_denominator = false;
                e.input = in;
                e.power = k;
                e.poly = coeffs[(size_t)k];
                c.entries.push_back(std::move(e));
            }
        }
    }
    return c;
}

std::string coeff_entry_label(const CoeffEntry& e) {
    std::ostringstream os;
    os << "y" << e.output + 1 << "|";
    if (e.is_denominator)
        os << "den";
    else
        os << "u" << e.input + 1;
    os << "|D^" << e.power;
    return os.str();
}

std::string io_equation_str(const CompModel& m, const IOEquation& eq) {
    auto names = m.param_names();
    auto side = [&](const std::vector<MPoly>& coeffs, const std::string& fn,
                    bool monic_top) {
        std::ostringstream os;
        bool first = true;
        for (int k = (int)coeffs.size() - 1; k >= 0; --k) {
            const MPoly& p = coeffs[(size_t)k];
            if (p.is_zero()) continue;
            if (!first) os << " + ";
            first = false;
            bool trivial = p.is_one();
            if (monic_top && k == (int)coeffs.size() - 1 && trivial) {
                // fall through to operator display only
            } else if (trivial) {
                // coefficient 1 on a lower power still displays bare operator
            } else {
                os << "(" << p.str(names) << ")*";
            }
            if (k == 0)
                os << fn;
            else if (k == 1)
                os << "D[" << fn << "]";
            else
                os << "D^" << k << "[" << fn << "]";
        }
        if (first) os << "0";
        return os.str();
    };
    std::ostringstream os;
    os << side(eq.den, "y" + std::to_string(eq.output + 1), true);
    os << " = ";
    bool any = false;
    for (const auto& [in, coeffs] : eq.num) {
        std::string rhs = side(coeffs, "u" + std::to_string(in + 1), false);
        if (rhs == "0") continue;
        if (any) os << " + ";
        any = true;
        os << rhs;
    }
    if (!any) os << "0";
    return os.str();
}

} // namespace linident
