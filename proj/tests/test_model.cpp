#include <doctest.h>

#include <linident/model.hpp>

#include "oracles.hpp"

#include <string>
#include <vector>

using namespace linident;
using testutil::make_model;

namespace {

bool code_is(const ModelError& e, ModelErrorCode c) { return e.code == c; }

} // namespace

TEST_CASE("model: canonical parameter order") {
    CompModel f2 = testutil::siso3_model();
    CHECK(f2.param_names() == std::vector<std::string>{
                                  "a13", "a21", "a23", "a32", "a01", "a02", "a03"});
    CompModel f1 = testutil::cycle4_model();
    CHECK(f1.param_names() ==
          std::vector<std::string>{"a14", "a21", "a32", "a43", "a01", "a03"});

    CHECK(f2.param_ordinal("a13") == 0);
    CHECK(f2.param_ordinal("a03") == 6);
    CHECK(f2.param_ordinal("a99") == -1);
    CHECK(f2.num_params() == 7);

    CHECK(f2.has_edge(0, 1));
    CHECK_FALSE(f2.has_edge(1, 0));
    CHECK(f2.edge_param(2, 0) == 0); // 3 -> 1 carries a13
    CHECK(f2.edge_param(0, 2) == -1);
    CHECK(f2.leak_param(0) == 4);
    CHECK(f1.leak_param(1) == -1);

    CHECK(param_name(2, 1) == "a21");
    CHECK(param_name(12, 3) == "a12_3");
    CHECK(param_name(3, 12) == "a3_12");
    CHECK(leak_name(7) == "a07");
    CHECK(leak_name(10) == "a0_10");
}

TEST_CASE("model: validation rejects malformed descriptions") {
    RawModel raw;
    raw.compartments = 0;
    raw.inputs = {1};
    raw.outputs = {1};
    CHECK_THROWS_WITH_AS(validate_model(raw), "compartment count must be at least 1",
                         ModelError);

    raw.compartments = 2;
    raw.edges = {{0, 1}};
    try {
        validate_model(raw);
        FAIL("expected a range error");
    } catch (const ModelError& e) {
        CHECK(code_is(e, ModelErrorCode::IndexOutOfRange));
        CHECK(std::string(e.what()) == "edge index 0 outside 1..2");
    }

    raw.edges = {{2, 2}};
    try {
        validate_model(raw);
        FAIL("expected a self-loop error");
    } catch (const ModelError& e) {
        CHECK(code_is(e, ModelErrorCode::SelfLoop));
        CHECK(std::string(e.what()) == "self-loop edge (2,2)");
    }

    raw.edges = {{1, 2}, {1, 2}};
    try {
        validate_model(raw);
        FAIL("expected a duplicate-edge error");
    } catch (const ModelError& e) {
        CHECK(code_is(e, ModelErrorCode::DuplicateEdge));
        CHECK(std::string(e.what()) == "duplicate edge (1,2)");
    }

    raw.edges = {{1, 2}};
    raw.inputs = {3};
    try {
        validate_model(raw);
        FAIL("expected a range error");
    } catch (const ModelError& e) {
        CHECK(code_is(e, ModelErrorCode::IndexOutOfRange));
        CHECK(std::string(e.what()) == "input index 3 outside 1..2");
    }

    raw.inputs = {};
    try {
        validate_model(raw);
        FAIL("expected an empty-input error");
    } catch (const ModelError& e) {
        CHECK(code_is(e, ModelErrorCode::EmptyInputs));
        CHECK(std::string(e.what()) == "input set is empty");
    }

    raw.inputs = {1};
    raw.outputs = {};
    try {
        validate_model(raw);
        FAIL("expected an empty-output error");
    } catch (const ModelError& e) {
        CHECK(code_is(e, ModelErrorCode::EmptyOutputs));
        CHECK(std::string(e.what()) == "output set is empty");
    }

    CHECK(std::string(model_error_name(ModelErrorCode::ParseError)) == "ParseError");
    CHECK(std::string(precond_error_name(PrecondCode::NotSISO)) == "NotSISO");
    CHECK(std::string(precond_error_name(PrecondCode::DenominatorVanishes)) ==
          "DenominatorVanishes");

    // repeated annotations collapse
    CompModel m = make_model(2, {{1, 2}}, {1, 1}, {2, 2, 2}, {2, 2});
    CHECK(m.inputs == std::vector<int>{0});
    CHECK(m.outputs == std::vector<int>{1});
    CHECK(m.leaks == std::vector<int>{1});
}

TEST_CASE("model: system matrix under both leak conventions") {
    // two-compartment exchange with one leak: default convention drains
    // outflows through the diagonal
    CompModel m = make_model(2, {{1, 2}, {2, 1}}, {1}, {1}, {1});
    // params sorted by (to, from): a12 (2->1), a21 (1->2), then a01
    CHECK(m.param_names() == std::vector<std::string>{"a12", "a21", "a01"});
    int np = 3;
    PolyMatrix A = compartmental_matrix(m);
    MPoly a12 = MPoly::variable(np, 0), a21 = MPoly::variable(np, 1),
          a01 = MPoly::variable(np, 2);
    CHECK(A.at(0, 0) == -(a01 + a21));
    CHECK(A.at(0, 1) == a12);
    CHECK(A.at(1, 0) == a21);
    CHECK(A.at(1, 1) == -a12);

    // the same graph with total-outflow leaks: the leak diagonal is bare
    CompModel mt = make_model(2, {{1, 2}, {2, 1}}, {1}, {1}, {1}, true);
    PolyMatrix At = compartmental_matrix(mt);
    CHECK(At.at(0, 0) == -a01);
    CHECK(At.at(1, 1) == -a12); // no leak here, diagonal still drains

    // the three-compartment model specified by its rate matrix
    CompModel f2 = testutil::siso3_model();
    PolyMatrix B = compartmental_matrix(f2);
    int q = 7;
    auto var = [&](int i) { return MPoly::variable(q, i); };
    // order: a13 a21 a23 a32 a01 a02 a03
    CHECK(B.at(0, 0) == -var(4));
    CHECK(B.at(0, 1) == MPoly(q));
    CHECK(B.at(0, 2) == var(0));
    CHECK(B.at(1, 0) == var(1));
    CHECK(B.at(1, 1) == -var(5));
    CHECK(B.at(1, 2) == var(2));
    CHECK(B.at(2, 0) == MPoly(q));
    CHECK(B.at(2, 1) == var(3));
    CHECK(B.at(2, 2) == -var(6));

    // four-compartment cycle with two leaks, default convention
    CompModel f1 = testutil::cycle4_model();
    PolyMatrix C = compartmental_matrix(f1);
    int r = 6;
    auto w = [&](int i) { return MPoly::variable(r, i); };
    // order: a14 a21 a32 a43 a01 a03
    CHECK(C.at(0, 0) == -(w(4) + w(1)));
    CHECK(C.at(1, 1) == -w(2));
    CHECK(C.at(2, 2) == -(w(5) + w(3)));
    CHECK(C.at(3, 3) == -w(0));
    CHECK(C.at(1, 0) == w(1));
    CHECK(C.at(0, 3) == w(0));
}

TEST_CASE("model: graph structure flags") {
    CompModel f1 = testutil::cycle4_model();
    GraphProps g1 = graph_props(f1);
    CHECK(g1.strongly_connected);
    CHECK(g1.strongly_io_connected);
    CHECK(g1.is_directed_cycle);
    CHECK_FALSE(g1.is_bidirected_tree);
    CHECK_FALSE(g1.is_directed_path);
    REQUIRE(g1.io_distance.has_value());
    CHECK(*g1.io_distance == 1);
    REQUIRE(g1.output_reachable.size() == 1);
    CHECK(g1.output_reachable[0] == std::set<int>{0, 1, 2, 3});

    CompModel f2 = testutil::siso3_model();
    GraphProps g2 = graph_props(f2);
    CHECK(g2.strongly_connected);
    CHECK_FALSE(g2.is_directed_cycle);

    // bidirected chain of three: tree, catenary, and (for n = 3) a star
    CompModel chain =
        make_model(3, {{1, 2}, {2, 1}, {2, 3}, {3, 2}}, {1}, {2}, {});
    GraphProps gc = graph_props(chain);
    CHECK(gc.is_bidirected_tree);
    CHECK(gc.is_catenary);
    CHECK(gc.is_mammillary);
    CHECK(gc.mammillary_center == 1);
    REQUIRE(gc.io_distance.has_value());
    CHECK(*gc.io_distance == 1);

    // bidirected star of four: mammillary but not catenary
    CompModel star = make_model(
        4, {{1, 2}, {2, 1}, {1, 3}, {3, 1}, {1, 4}, {4, 1}}, {2}, {2}, {});
    GraphProps gs = graph_props(star);
    CHECK(gs.is_bidirected_tree);
    CHECK(gs.is_mammillary);
    CHECK(gs.mammillary_center == 0);
    CHECK_FALSE(gs.is_catenary);
    CHECK(*gs.io_distance == 0);

    // bidirected chain of four: catenary but not mammillary
    CompModel chain4 = make_model(
        4, {{1, 2}, {2, 1}, {2, 3}, {3, 2}, {3, 4}, {4, 3}}, {1}, {4}, {});
    GraphProps gc4 = graph_props(chain4);
    CHECK(gc4.is_catenary);
    CHECK_FALSE(gc4.is_mammillary);
    CHECK(*gc4.io_distance == 3);

    // directed path: io-connected without being strongly connected
    CompModel path = make_model(3, {{1, 2}, {2, 3}}, {1}, {3}, {});
    GraphProps gp = graph_props(path);
    CHECK(gp.is_directed_path);
    CHECK_FALSE(gp.strongly_connected);
    CHECK(gp.strongly_io_connected);
    CHECK(gp.output_reachable[0] == std::set<int>{0, 1, 2});

    // same path observed at the front: the dangling edges break io-connectivity
    CompModel path_front = make_model(3, {{1, 2}, {2, 3}}, {1}, {1}, {});
    GraphProps gf = graph_props(path_front);
    CHECK_FALSE(gf.strongly_io_connected);
    CHECK(gf.output_reachable[0] == std::set<int>{0});

    // unreachable output
    CompModel split = make_model(3, {{1, 2}}, {1}, {3}, {});
    GraphProps gu = graph_props(split);
    REQUIRE(gu.io_distance.has_value());
    CHECK(*gu.io_distance == -1);

    // single compartment
    CompModel solo = make_model(1, {}, {1}, {1}, {1});
    GraphProps g0 = graph_props(solo);
    CHECK(*g0.io_distance == 0);
    CHECK(g0.is_directed_path);
    CHECK(g0.is_bidirected_tree);

    // two-input models carry no io distance
    CompModel two_in = make_model(2, {{1, 2}}, {1, 2}, {2}, {});
    CHECK_FALSE(graph_props(two_in).io_distance.has_value());
}

TEST_CASE("model: reachability") {
    CompModel path = make_model(3, {{1, 2}, {2, 3}}, {1}, {3}, {});
    CHECK(reaches(path, 2) == std::set<int>{0, 1, 2});
    CHECK(reaches(path, 0) == std::set<int>{0});
    CHECK(reaches(path, 1) == std::set<int>{0, 1});
}

TEST_CASE("model: canonical key and hash") {
    CompModel f2 = testutil::siso3_model();
    CHECK(f2.canonical_key() ==
          "n=3;E=(2,0)(0,1)(2,1)(1,2);I=0,;O=0,;L=0,1,2,;total-outflow");
    CompModel f1 = testutil::cycle4_model();
    CHECK(f1.canonical_key() == "n=4;E=(3,0)(0,1)(1,2)(2,3);I=0,;O=1,;L=0,2,");

    // fnv-1a over the key
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : f1.canonical_key()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    CHECK(f1.hash() == h);
    CHECK(f1.hash() != f2.hash());

    // the total-outflow flag distinguishes otherwise identical models
    CompModel f2_plain = make_model(3, {{1, 2}, {2, 3}, {3, 2}, {3, 1}}, {1},
                                    {1}, {1, 2, 3}, false);
    CHECK(f2_plain.canonical_key() !=
          f2.canonical_key());
}

TEST_CASE("model: relabeling") {
    CompModel f1 = testutil::cycle4_model();
    std::vector<int> ident{0, 1, 2, 3};
    CHECK(relabeled(f1, ident).canonical_key() == f1.canonical_key());

    std::vector<int> perm{2, 0, 3, 1};
    CompModel r = relabeled(f1, perm);
    CHECK(r.canonical_key() != f1.canonical_key());
    std::vector<int> inv(4);
    for (int i = 0; i < 4; ++i) inv[(size_t)perm[(size_t)i]] = i;
    CHECK(relabeled(r, inv).canonical_key() == f1.canonical_key());

    // rotating a directed cycle with rotated annotations lands on the same key
    CompModel c3 = make_model(3, {{1, 2}, {2, 3}, {3, 1}}, {1}, {1}, {2});
    CompModel c3_rot = make_model(3, {{2, 3}, {3, 1}, {1, 2}}, {2}, {2}, {3});
    std::vector<int> rot{1, 2, 0};
    CHECK(relabeled(c3, rot).canonical_key() == c3_rot.canonical_key());
}
