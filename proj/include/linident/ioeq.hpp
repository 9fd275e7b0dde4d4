#pragma once

// input-output equations and the coefficient map. each output's equation is
// formed on the subsystem induced by the compartments that can reach that
// output; inputs outside the subsystem do not enter it.

#include <linident/model.hpp>

#include <map>

namespace linident {

// io-equation for one output: den(D) y = sum_j num_j(D) u_j over the
// output-reachable subsystem, with D the differential operator
struct IOEquation {
    int output = -1;                  // 0-based compartment
    std::vector<int> subsystem;       // ascending, contains output
    std::vector<MPoly> den;           // by operator power 0..r, monic
    std::map<int, std::vector<MPoly>> num; // input comp -> coeffs by power 0..r-1
};

std::vector<IOEquation> io_equations(const CompModel& m);

// char poly coefficients of (D*I - A) for a square parameter matrix,
// by operator power 0..rows (leading coefficient 1)
std::vector<MPoly> char_poly(const PolyMatrix& a);

// one coefficient-map entry; the map lists, for outputs ascending, the
// denominator coefficients (power descending, leading 1 dropped) and then
// each reachable input's numerator coefficients (power descending).
// zero and constant entries keep their slots so the shape is canonical.
struct CoeffEntry {
    int output = -1;
    bool is_denominator = false;
    int input = -1; // numerators only
    int power = 0;
    MPoly poly;
};

struct CoefficientMap {
    int num_params = 0;
    int model_n = 0; // degree bound input for the confidence estimate
    std::vector<std::string> param_names;
    std::vector<CoeffEntry> entries;

    std::vector<MPoly> polys() const;
};

CoefficientMap io_coefficient_map(const CompModel& m);

std::string io_equation_str(const CompModel& m, const IOEquation& eq);
std::string coeff_entry_label(const CoeffEntry& e); // e.g. "y1|den|D^2"

} // namespace linident
