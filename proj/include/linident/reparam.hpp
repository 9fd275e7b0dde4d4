#pragma once

// exact reparametrizations: the observable canonical form for single-input
// single-output models, and quotienting by complete scaling symmetries.

#include <linident/rank.hpp>

namespace linident {

struct LinearReparam {
    std::string kind; // "siso-canonical" | "scaling"

    // siso-canonical: new states X = T x with T rows C, CA, ..., CA^(n-1);
    // target system is the companion form with abstract coefficients
    PolyMatrix T;                      // over the original parameter ring
    std::vector<MPoly> den_coeffs;     // c_k, ascending power 0..n-1
    std::vector<MPoly> num_coeffs;     // b_k, ascending power 0..n-1
    std::vector<MPoly> markov;         // input column of the new system

    // presentation shared by both kinds
    std::vector<std::string> new_param_names;
    std::vector<std::string> new_param_values; // in the original parameters
    std::vector<std::vector<std::string>> new_A_display;
    std::vector<std::string> new_B_display;
    std::vector<std::string> new_outputs;

    // scaling: states of the output-reachable part rescaled by parameter
    // monomials; compartments that reach no output are dropped (silent)
    std::vector<int> kept_compartments; // 0-based
    std::vector<int> dropped_compartments;
    std::vector<std::string> state_scalings;
    IntMat state_exponents; // per kept compartment: exponent vector of lambda
    ScalingSymmetry sym;

    bool verified = false;
    std::vector<std::string> notes;
};

// numerator coefficients (ascending operator power, length = rows) of the
// io-equation of x' = A x + b u, y = x_{out_row}
std::vector<MPoly> numerator_coeffs(const PolyMatrix& A,
                                    const std::vector<MPoly>& bcol,
                                    int out_row);

// canonical reparametrization for a single-input single-output observable
// model; throws PrecondError{NotSISO | NotObservable | SpecTooLarge}
LinearReparam siso_canonical_reparam(const CompModel& m);

// quotient by the model's scaling symmetries; meaningful when the symmetry
// dimension equals the kernel dimension (sym.complete)
LinearReparam scaling_reparam(const CompModel& m, const ScalingSymmetry& sym);

// re-run the symbolic checks backing a reparametrization
bool verify_reparam(const CompModel& m, const LinearReparam& r,
                    std::string* why = nullptr);

} // namespace linident
