#include <doctest.h>

#include <linident/reparam.hpp>

#include "oracles.hpp"

#include <random>

using namespace linident;
using testutil::make_model;

namespace {

CompModel cycle3_rate_matrix() {
    return make_model(3, {{1, 2}, {2, 3}, {3, 1}}, {1}, {1}, {1, 2, 3}, true,
                      "cycle3");
}

} // namespace

TEST_CASE("reparam: numerator coefficients") {
    int np = 4;
    MPoly a = MPoly::variable(np, 0), b = MPoly::variable(np, 1);
    MPoly c = MPoly::variable(np, 2), d = MPoly::variable(np, 3);
    PolyMatrix A(2, 2, np);
    A.at(0, 0) = a; A.at(0, 1) = b; A.at(1, 0) = c; A.at(1, 1) = d;

    std::vector<MPoly> e0{MPoly::constant(np, 1), MPoly(np)};
    std::vector<MPoly> e1{MPoly(np), MPoly::constant(np, 1)};

    auto n00 = numerator_coeffs(A, e0, 0);
    REQUIRE(n00.size() == 2);
    CHECK(n00[0] == -d);
    CHECK(n00[1].is_one());

    auto n01 = numerator_coeffs(A, e1, 0);
    CHECK(n01[0] == b);
    CHECK(n01[1].is_zero());

    auto n10 = numerator_coeffs(A, e0, 1);
    CHECK(n10[0] == c);
    CHECK(n10[1].is_zero());

    // linearity in the input column
    std::vector<MPoly> bc{a + b, c * d};
    auto mix = numerator_coeffs(A, bc, 0);
    for (int k = 0; k < 2; ++k)
        CHECK(mix[(size_t)k] ==
              (a + b) * n00[(size_t)k] + c * d * n01[(size_t)k]);

    // consistency with the io-equation of the two-compartment exchange
    CompModel m = make_model(2, {{1, 2}, {2, 1}}, {1}, {1}, {1});
    auto eqs = io_equations(m);
    std::vector<MPoly> ein{MPoly::constant(3, 1), MPoly(3)};
    auto nc = numerator_coeffs(compartmental_matrix(m), ein, 0);
    CHECK(nc == eqs[0].num.at(0));
}

TEST_CASE("reparam: canonical form of the two-compartment exchange") {
    CompModel m = make_model(2, {{1, 2}, {2, 1}}, {1}, {1}, {1});
    LinearReparam r = siso_canonical_reparam(m);
    CHECK(r.kind == "siso-canonical");
    CHECK(r.verified);
    CHECK(r.notes.empty());
    CHECK(verify_reparam(m, r));

    int np = 3; // a12 a21 a01
    MPoly a12 = MPoly::variable(np, 0), a21 = MPoly::variable(np, 1),
          a01 = MPoly::variable(np, 2);
    REQUIRE(r.T.rows == 2);
    CHECK(r.T.at(0, 0).is_one());
    CHECK(r.T.at(0, 1).is_zero());
    CHECK(r.T.at(1, 0) == -(a01 + a21));
    CHECK(r.T.at(1, 1) == a12);

    REQUIRE(r.markov.size() == 2);
    CHECK(r.markov[0].is_one());
    CHECK(r.markov[1] == -(a01 + a21));

    REQUIRE(r.den_coeffs.size() == 2);
    CHECK(r.den_coeffs[0] == a01 * a12);
    CHECK(r.den_coeffs[1] == a01 + a12 + a21);
    REQUIRE(r.num_coeffs.size() == 2);
    CHECK(r.num_coeffs[0] == a12);
    CHECK(r.num_coeffs[1].is_one());

    CHECK(r.new_param_names ==
          std::vector<std::string>{"c0", "c1", "b0", "b1"});
    CHECK(r.new_param_values ==
          std::vector<std::string>{"a12*a01", "a12 + a21 + a01", "a12", "1"});
    REQUIRE(r.new_A_display.size() == 2);
    CHECK(r.new_A_display[0] == std::vector<std::string>{"0", "1"});
    CHECK(r.new_A_display[1] == std::vector<std::string>{"-c0", "-c1"});
    CHECK(r.new_B_display == std::vector<std::string>{"b1", "-c1*b1 + b0"});
    CHECK(r.new_outputs == std::vector<std::string>{"y1 = X1"});
}

TEST_CASE("reparam: canonical form of the rate-matrix model") {
    CompModel m = testutil::siso3_model();
    LinearReparam r = siso_canonical_reparam(m);
    CHECK(r.verified);

    int np = 7;
    auto v = [&](int i) { return MPoly::variable(np, i); };
    MPoly a13 = v(0), a32 = v(3), a01 = v(4), a03 = v(6);

    // T rows: C, CA, CA^2
    REQUIRE(r.T.rows == 3);
    CHECK(r.T.at(0, 0).is_one());
    CHECK(r.T.at(1, 0) == -a01);
    CHECK(r.T.at(1, 1).is_zero());
    CHECK(r.T.at(1, 2) == a13);
    CHECK(r.T.at(2, 0) == a01 * a01);
    CHECK(r.T.at(2, 1) == a13 * a32);
    CHECK(r.T.at(2, 2) == -(a01 * a13) - a03 * a13);

    // markov parameters 1, -a01, a01^2
    REQUIRE(r.markov.size() == 3);
    CHECK(r.markov[0].is_one());
    CHECK(r.markov[1] == -a01);
    CHECK(r.markov[2] == a01 * a01);

    // the companion bottom row carries the io-equation coefficients
    MPoly k1 = v(4), k2 = v(5) + v(6), k3 = v(0) * v(1) * v(3),
          k4 = v(5) * v(6) - v(2) * v(3);
    REQUIRE(r.den_coeffs.size() == 3);
    CHECK(-r.den_coeffs[0] == k3 - k1 * k4);
    CHECK(-r.den_coeffs[1] == -(k1 * k2) - k4);
    CHECK(-r.den_coeffs[2] == -k1 - k2);
    REQUIRE(r.num_coeffs.size() == 3);
    CHECK(r.num_coeffs[0] == k4);
    CHECK(r.num_coeffs[1] == k2);
    CHECK(r.num_coeffs[2].is_one());

    CHECK(r.new_param_names == std::vector<std::string>{"c0", "c1", "c2", "b0",
                                                        "b1", "b2"});
    REQUIRE(r.new_A_display.size() == 3);
    CHECK(r.new_A_display[0] == std::vector<std::string>{"0", "1", "0"});
    CHECK(r.new_A_display[1] == std::vector<std::string>{"0", "0", "1"});
    CHECK(r.new_A_display[2] == std::vector<std::string>{"-c0", "-c1", "-c2"});
    CHECK(r.new_B_display ==
          std::vector<std::string>{"b2", "-c2*b2 + b1",
                                   "-c1*b2 + c2^2*b2 - c2*b1 + b0"});
    CHECK(r.new_outputs == std::vector<std::string>{"y1 = X1"});
}

TEST_CASE("reparam: single compartment canonical form") {
    CompModel m = make_model(1, {}, {1}, {1}, {1});
    LinearReparam r = siso_canonical_reparam(m);
    CHECK(r.verified);
    CHECK(r.T.at(0, 0).is_one());
    CHECK(r.den_coeffs[0] == MPoly::variable(1, 0));
    CHECK(r.markov[0].is_one());
    CHECK(r.new_A_display[0] == std::vector<std::string>{"-c0"});
}

TEST_CASE("reparam: canonical form preconditions") {
    CompModel two_out = make_model(3, {{1, 2}, {2, 3}}, {1}, {2, 3}, {3});
    try {
        (void)siso_canonical_reparam(two_out);
        FAIL("expected a precondition failure");
    } catch (const PrecondError& e) {
        CHECK(e.code == PrecondCode::NotSISO);
        CHECK(std::string(e.what()) ==
              "canonical form needs exactly one input and one output");
    }

    // nine compartments in a directed chain
    std::vector<std::pair<int, int>> chain;
    for (int c = 1; c < 9; ++c) chain.push_back({c, c + 1});
    CompModel big = make_model(9, chain, {1}, {9}, {});
    try {
        (void)siso_canonical_reparam(big);
        FAIL("expected a precondition failure");
    } catch (const PrecondError& e) {
        CHECK(e.code == PrecondCode::SpecTooLarge);
        CHECK(std::string(e.what()) ==
              "canonical form supported up to 8 compartments");
    }

    // the output never sees the second compartment
    CompModel blind = make_model(2, {{1, 2}}, {1}, {1}, {2});
    try {
        (void)siso_canonical_reparam(blind);
        FAIL("expected a precondition failure");
    } catch (const PrecondError& e) {
        CHECK(e.code == PrecondCode::NotObservable);
        CHECK(std::string(e.what()) == "observability matrix is singular");
    }
}

TEST_CASE("reparam: verification rejects tampered transforms") {
    CompModel m = testutil::siso3_model();
    LinearReparam r = siso_canonical_reparam(m);
    REQUIRE(r.verified);

    LinearReparam bad_t = r;
    bad_t.T.at(2, 1) += MPoly::constant(7, 1);
    std::string why;
    CHECK_FALSE(verify_reparam(m, bad_t, &why));
    CHECK(why == "T*A != Ac*T");

    LinearReparam bad_m = r;
    bad_m.markov[1] += MPoly::constant(7, 1);
    CHECK_FALSE(verify_reparam(m, bad_m, &why));
    CHECK(why == "T*b != markov column");

    LinearReparam bad_shape = r;
    bad_shape.T = PolyMatrix(2, 2, 7);
    CHECK_FALSE(verify_reparam(m, bad_shape, &why));
    CHECK(why == "transform has wrong shape");
}

TEST_CASE("reparam: canonical form verifies on random observable models") {
    testutil::ModelGen gen(5150);
    int done = 0;
    for (int iter = 0; iter < 500 && done < 10; ++iter) {
        CompModel m = gen.random_digraph(2, 4);
        if (m.inputs.size() != 1 || m.outputs.size() != 1) continue;
        LinearReparam r;
        try {
            r = siso_canonical_reparam(m);
        } catch (const PrecondError& e) {
            CHECK(e.code == PrecondCode::NotObservable);
            ++done;
            continue;
        }
        CHECK(r.verified);
        CHECK(verify_reparam(m, r));
        ++done;
    }
}

TEST_CASE("reparam: scaling quotient with a dropped tail") {
    CompModel m = make_model(3, {{2, 3}}, {1}, {1}, {1});
    ScalingSymmetry sym = scaling_symmetries(m);
    REQUIRE(sym.complete);
    LinearReparam r = scaling_reparam(m, sym);
    CHECK(r.kind == "scaling");
    CHECK(r.verified);
    CHECK(r.kept_compartments == std::vector<int>{0});
    CHECK(r.dropped_compartments == std::vector<int>{1, 2});
    CHECK(r.notes == std::vector<std::string>{
                         "compartments reaching no output were dropped"});
    CHECK(r.state_scalings == std::vector<std::string>{"X1 = x1"});
    CHECK(r.new_param_names == std::vector<std::string>{"k1"});
    CHECK(r.new_param_values == std::vector<std::string>{"a01"});
    REQUIRE(r.new_A_display.size() == 1);
    CHECK(r.new_A_display[0] == std::vector<std::string>{"-k1"});
    CHECK(r.new_B_display == std::vector<std::string>{"u1 -> X1"});
    CHECK(r.new_outputs == std::vector<std::string>{"y1 = X1"});
}

TEST_CASE("reparam: scaling quotient needs the symmetries to span") {
    CompModel m = testutil::siso3_model();
    ScalingSymmetry sym = scaling_symmetries(m);
    REQUIRE_FALSE(sym.complete);
    LinearReparam r = scaling_reparam(m, sym);
    CHECK_FALSE(r.verified);
    CHECK(r.notes ==
          std::vector<std::string>{"not applicable: scaling symmetries do not "
                                   "span the unidentifiable directions"});
    CHECK(r.state_scalings.empty());
    CHECK(r.new_param_names.empty());

    std::string why;
    CHECK_FALSE(verify_reparam(m, r, &why));
    CHECK(why == "symmetries do not span the kernel");
}

TEST_CASE("reparam: trivial scaling quotient when nothing moves") {
    CompModel m = make_model(2, {{1, 2}}, {1}, {2}, {});
    ScalingSymmetry sym = scaling_symmetries(m);
    REQUIRE(sym.complete);
    REQUIRE(sym.dim == 0);
    LinearReparam r = scaling_reparam(m, sym);
    CHECK(r.verified);
    CHECK(r.notes ==
          std::vector<std::string>{"no scaling symmetries; parameters are "
                                   "already locally identifiable up to "
                                   "finitely many points"});
    CHECK(r.new_param_names == std::vector<std::string>{"a21"});
    CHECK(r.new_param_values == std::vector<std::string>{"a21"});
    REQUIRE(r.state_exponents.size() == 2);
    for (const auto& row : r.state_exponents)
        for (const auto& e : row) CHECK(e == 0);
}

TEST_CASE("reparam: scaling quotient of the leaky cycle") {
    CompModel m = cycle3_rate_matrix();
    ScalingSymmetry sym = scaling_symmetries(m);
    REQUIRE(sym.complete);
    REQUIRE(sym.dim == 2);
    LinearReparam r = scaling_reparam(m, sym);
    CHECK(r.verified);
    CHECK(r.kept_compartments == std::vector<int>{0, 1, 2});
    CHECK(r.dropped_compartments.empty());
    CHECK(r.notes.empty());

    REQUIRE(r.state_scalings.size() == 3);
    CHECK(r.state_scalings[0] == "X1 = x1"); // pinned input-output compartment

    CHECK(r.new_param_names ==
          std::vector<std::string>{"k1", "k2", "k3", "k4"});
    CHECK(r.new_param_values ==
          std::vector<std::string>{"a13*a21*a32", "a01", "a02", "a03"});

    REQUIRE(r.new_A_display.size() == 3);
    CHECK(r.new_A_display[0][0] == "-k2");
    CHECK(r.new_A_display[1][1] == "-k3");
    CHECK(r.new_A_display[2][2] == "-k4");
    CHECK(r.new_A_display[0][1] == "0");
    CHECK(r.new_A_display[1][2] == "0");
    CHECK(r.new_A_display[2][0] == "0");
    CHECK(r.new_B_display == std::vector<std::string>{"u1 -> X1"});
    CHECK(r.new_outputs == std::vector<std::string>{"y1 = X1"});

    // tampering with a state weight or rescaling a pinned state is caught
    std::string why;
    LinearReparam bad_w = r;
    bad_w.state_exponents[1][0] += 1; // a13 exponent shifts the weight
    CHECK_FALSE(verify_reparam(m, bad_w, &why));
    CHECK(why == "state scaling has the wrong weight");

    LinearReparam bad_p = r;
    bad_p.state_exponents[0][3] = 1; // a01 has weight zero but is pinned
    CHECK_FALSE(verify_reparam(m, bad_p, &why));
    CHECK(why == "input/output compartment rescaled");

    LinearReparam bad_n = r;
    bad_n.state_exponents.pop_back();
    CHECK_FALSE(verify_reparam(m, bad_n, &why));
    CHECK(why == "missing state scalings");
}
