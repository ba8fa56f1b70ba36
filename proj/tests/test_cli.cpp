#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "torq/problem.hpp"

using namespace torq;

namespace {

nlohmann::json example_noneffective() {
    return nlohmann::json::parse(R"({
      "ambient_rank": 2,
      "monoid_generators": [[1,0],[0,1]],
      "coefficient_field": "Q",
      "ideal_generators": [
        [ {"coeff":"1","x":[2,0],"y":[0,0]}, {"coeff":"-1","x":[0,0],"y":[2,0]} ],
        [ {"coeff":"1","x":[1,1],"y":[0,0]}, {"coeff":"-1","x":[0,2],"y":[0,0]},
          {"coeff":"-1","x":[0,0],"y":[1,1]}, {"coeff":"1","x":[0,0],"y":[0,2]} ],
        [ {"coeff":"1","x":[0,3],"y":[0,0]}, {"coeff":"-1","x":[0,0],"y":[0,3]} ],
        [ {"coeff":"1","x":[1,0],"y":[0,4]}, {"coeff":"-1","x":[0,1],"y":[1,3]} ]
      ]
    })");
}

nlohmann::json cusp() {
    return nlohmann::json::parse(R"({
      "ambient_rank": 1,
      "monoid_generators": [[1]],
      "coefficient_field": "Q",
      "ideal_generators": [
        [ {"coeff":"1","x":[2],"y":[0]}, {"coeff":"-1","x":[0],"y":[2]} ],
        [ {"coeff":"1","x":[3],"y":[0]}, {"coeff":"-1","x":[0],"y":[3]} ]
      ]
    })");
}

} // namespace

TEST_CASE("parse errors are reported with location") {
    auto bad = nlohmann::json::parse(R"({"ambient_rank": 2})");
    CHECK_THROWS_AS(parse_problem_json(bad, "t"), ParseError);

    auto badvec = nlohmann::json::parse(
        R"({"ambient_rank": 2, "monoid_generators": [[1]]})");
    CHECK_THROWS_AS(parse_problem_json(badvec, "t"), ParseError);

    auto badcoeff = nlohmann::json::parse(
        R"({"ambient_rank": 1, "monoid_generators": [[1]],
            "ideal_generators": [[{"coeff": "x", "x": [1], "y": [0]}]]})");
    CHECK_THROWS_AS(parse_problem_json(badcoeff, "t"), ParseError);
}

TEST_CASE("exponents must pass monoid membership at load") {
    auto j = nlohmann::json::parse(R"({
      "ambient_rank": 1,
      "monoid_generators": [[2],[3]],
      "coefficient_field": "Q",
      "ideal_generators": [
        [ {"coeff":"1","x":[1],"y":[0]}, {"coeff":"-1","x":[0],"y":[1]} ]
      ]
    })");
    CommandRequest req;
    req.command = "verify";
    req.problem = parse_problem_json(j, "t");
    auto res = run_request(req);
    CHECK(res.exit_code == 2);
    CHECK(res.report["error"]["kind"] == "ParseError");
}

TEST_CASE("verify example: all four axioms") {
    CommandRequest req;
    req.command = "verify";
    req.problem = parse_problem_json(example_noneffective(), "t");
    auto res = run_request(req);
    CHECK(res.exit_code == 0);
    CHECK(res.report["result"]["reflexive"] == true);
    CHECK(res.report["result"]["symmetric"] == true);
    CHECK(res.report["result"]["transitive"] == true);
    CHECK(res.report["result"]["finite"] == true);
}

TEST_CASE("effectivize cusp: exit 0, W = [2,3], verified") {
    CommandRequest req;
    req.command = "effectivize";
    req.problem = parse_problem_json(cusp(), "t");
    auto res = run_request(req);
    CHECK(res.exit_code == 0);
    CHECK(res.report["result"]["verified"] == true);
    auto W = res.report["result"]["W"];
    REQUIRE(W.size() == 2);
    CHECK(W[0][0] == 2);
    CHECK(W[1][0] == 3);
}

TEST_CASE("reports are byte-identical across runs") {
    CommandRequest req;
    req.command = "quotient";
    req.problem = parse_problem_json(cusp(), "t");
    auto r1 = run_request(req);
    auto r2 = run_request(req);
    CHECK(r1.report.dump(2) == r2.report.dump(2));
    CHECK(r1.exit_code == r2.exit_code);

    CommandRequest rv;
    rv.command = "verify";
    rv.problem = parse_problem_json(example_noneffective(), "t");
    auto v1 = run_request(rv);
    auto v2 = run_request(rv);
    CHECK(v1.report.dump(2) == v2.report.dump(2));
}

TEST_CASE("report round-trips through the JSON parser") {
    CommandRequest req;
    req.command = "effectivize";
    req.problem = parse_problem_json(cusp(), "t");
    auto res = run_request(req);
    auto parsed = nlohmann::json::parse(res.report.dump(2));
    CHECK(parsed["schema_version"] == "1");
    CHECK(parsed["command"] == "effectivize");
    CHECK(parsed.contains("result"));
}

TEST_CASE("field override to Fp") {
    CommandRequest req;
    req.command = "effectivize";
    req.problem = parse_problem_json(cusp(), "t");
    req.field_override = "Fp:5";
    auto res = run_request(req);
    CHECK(res.exit_code == 0);
    CHECK(res.report["field"] == "F5");
    CHECK(res.report["result"]["verified"] == true);
}

TEST_CASE("amitsur command needs hom and degrees") {
    auto j = nlohmann::json::parse(R"({
      "ambient_rank": 1,
      "monoid_generators": [[1]],
      "coefficient_field": "Q",
      "hom": {"tau_generators": [[2],[3]], "images": [[2],[3]]},
      "degrees": [[0],[1],[2],[3]]
    })");
    CommandRequest req;
    req.command = "amitsur";
    req.problem = parse_problem_json(j, "t");
    req.levels_override = 3;
    auto res = run_request(req);
    CHECK(res.exit_code == 0);
    CHECK(res.report["result"]["all_vanish"] == true);
    CHECK(res.report["result"]["dd_zero"] == true);

    CommandRequest bad = req;
    bad.problem.has_hom = false;
    auto rb = run_request(bad);
    CHECK(rb.exit_code == 2);
}

TEST_CASE("budget exceeded maps to exit 3") {
    CommandRequest req;
    req.command = "effectivize";
    req.problem = parse_problem_json(cusp(), "t");
    req.budget_gb = 1; // impossible degree budget
    auto res = run_request(req);
    CHECK(res.exit_code == 3);
    CHECK(res.report["error"]["kind"] == "DegreeBudgetExceeded");
}

TEST_CASE("degree list parsing") {
    auto a = parse_degree_list("0..3", 1);
    REQUIRE(a.size() == 4);
    CHECK(a[3][0] == 3);
    auto b = parse_degree_list("1,0;2,2", 2);
    REQUIRE(b.size() == 2);
    CHECK(b[1] == zvec_of({2, 2}));
    CHECK_THROWS_AS(parse_degree_list("1,2,3", 2), ParseError);
}

TEST_CASE("certify-noneffective via request") {
    CommandRequest req;
    req.command = "certify-noneffective";
    req.problem = parse_problem_json(example_noneffective(), "t");
    req.element = 3;
    req.bound = 5;
    auto res = run_request(req);
    CHECK(res.exit_code == 0);
    CHECK(res.report["result"]["holds"] == true);

    // a plain difference is not a noneffectiveness witness
    CommandRequest r2;
    r2.command = "certify-noneffective";
    r2.problem = parse_problem_json(cusp(), "t");
    r2.element = 0;
    r2.bound = 2;
    auto res2 = run_request(r2);
    CHECK(res2.exit_code == 0);
    CHECK(res2.report["result"]["holds"] == false);
}

TEST_CASE("verify reports per-axiom budget exhaustion with exit 3") {
    // a basis-size budget that admits the 2-block computations but not the
    // larger 3-block transitivity basis
    CommandRequest req;
    req.command = "verify";
    req.problem = parse_problem_json(example_noneffective(), "t");
    req.problem.budgets.gb_basis = 15;
    auto res = run_request(req);
    CHECK(res.exit_code == 3);
    REQUIRE(res.report["result"].contains("budget_errors"));
    REQUIRE(res.report["result"]["budget_errors"].size() > 0);
    std::string msg = res.report["result"]["budget_errors"][0];
    CHECK(msg.rfind("transitive", 0) == 0);
    // the cheap axioms still computed
    CHECK(res.report["result"]["reflexive"] == true);
    CHECK(res.report["result"]["symmetric"] == true);

    // a degree budget below everything fails already at load and maps to 3
    CommandRequest r2 = req;
    r2.problem.budgets.gb_basis = 5000;
    r2.budget_gb = 2;
    auto res2 = run_request(r2);
    CHECK(res2.exit_code == 3);
}
