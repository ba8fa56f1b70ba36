#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>

#include "torq/problem.hpp"

using namespace torq;

int main(int argc, char** argv) {
    CLI::App app{"torq: exact computations with toric equivalence relations and quotients"};
    app.require_subcommand(1);

    std::string file;
    std::string out_path;
    std::string field;
    std::string degrees;
    int levels = 0;
    int budget_gb = 0;
    long budget_fiber = 0;
    int element = 0;
    int bound = 0;
    bool verbose = false;

    auto add_common = [&](CLI::App* c) {
        c->add_option("file", file, "problem file (JSON)")->required();
        c->add_option("--out", out_path, "write the report to a file instead of stdout");
        c->add_option("--field", field, "coefficient field override: Q or Fp:P");
        c->add_option("--budget-gb", budget_gb, "Groebner degree budget");
        c->add_option("--budget-fiber", budget_fiber, "fiber enumeration budget");
        c->add_flag("--verbose", verbose, "print a human transcript to stderr");
    };

    CLI::App* verify = app.add_subcommand("verify", "check the equivalence-relation axioms");
    add_common(verify);
    CLI::App* eff = app.add_subcommand("effectivize",
                                       "compute difference generators and the target variety");
    add_common(eff);
    CLI::App* quot = app.add_subcommand("quotient", "decide the effective geometric quotient");
    add_common(quot);
    CLI::App* ami = app.add_subcommand("amitsur", "cohomology of the Amitsur complex");
    add_common(ami);
    ami->add_option("--levels", levels, "truncation level n_max");
    ami->add_option("--degrees", degrees, "degree list, e.g. 0..10 or 1,0;2,2");
    CLI::App* cne = app.add_subcommand("certify-noneffective",
                                       "certify that a generator is not a difference combination");
    add_common(cne);
    cne->add_option("--element", element, "index of the ideal generator to certify");
    cne->add_option("--bound", bound, "total degree bound for invariant functions");

    CLI11_PARSE(app, argc, argv);

    CommandRequest req;
    CLI::App* sub = app.get_subcommands().front();
    req.command = sub->get_name();
    try {
        req.problem = parse_problem_file(file);
    } catch (const torq::Error& e) {
        nlohmann::ordered_json rep;
        rep["schema_version"] = "1";
        rep["command"] = req.command;
        rep["error"] = {{"kind", e.kind()}, {"message", e.what()}};
        std::cout << rep.dump(2) << "\n";
        return 2;
    }
    if (!field.empty()) req.field_override = field;
    if (budget_gb > 0) req.budget_gb = budget_gb;
    if (budget_fiber > 0) req.budget_fiber = budget_fiber;
    if (levels > 0) req.levels_override = levels;
    if (!degrees.empty()) {
        try {
            req.degrees_override = parse_degree_list(degrees, req.problem.ambient_rank);
        } catch (const torq::Error& e) {
            std::cerr << e.what() << "\n";
            return 2;
        }
    }
    req.element = element;
    if (cne->count("--bound")) req.bound = bound;
    req.verbose = verbose;

    auto t0 = std::chrono::steady_clock::now();
    CommandResult res = run_request(req);
    auto t1 = std::chrono::steady_clock::now();

    std::string text = res.report.dump(2) + "\n";
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        out << text;
    } else {
        std::cout << text;
    }
    if (verbose) {
        std::cerr << res.transcript;
        std::cerr << "elapsed_ms "
                  << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()
                  << "\n";
    }
    return res.exit_code;
}
