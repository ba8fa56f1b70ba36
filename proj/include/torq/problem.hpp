#ifndef TORQ_PROBLEM_HPP
#define TORQ_PROBLEM_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "torq/errors.hpp"
#include "torq/util.hpp"

namespace torq {

struct BudgetSpec {
    int gb_degree = 40;
    int gb_basis = 5000;
    long fiber_nodes = 100000;
    long membership_nodes = 1000000;
    int quotient_depth = 8;
};

struct TermSpec {
    mpq_class coeff;
    ZVec x, y;
};

struct ProblemFile {
    int ambient_rank = 0;
    std::vector<ZVec> monoid_generators;
    std::string field = "Q"; // "Q" or "Fp"
    std::uint64_t p = 0;
    std::vector<std::vector<TermSpec>> ideal_generators;
    bool has_hom = false;
    std::vector<ZVec> tau_generators;
    std::vector<ZVec> hom_images;
    BudgetSpec budgets;
    std::vector<ZVec> degrees;
    int levels = 4;
};

ProblemFile parse_problem_file(const std::string& path);
ProblemFile parse_problem_json(const nlohmann::json& j, const std::string& where);

// "0..10", "1,2,5" (rank 1) or "0,0;1,2" (semicolon-separated vectors)
std::vector<ZVec> parse_degree_list(const std::string& spec, int rank);

struct CommandRequest {
    std::string command; // verify | effectivize | quotient | amitsur | certify-noneffective
    ProblemFile problem;
    std::optional<std::string> field_override; // "Q" or "Fp:P"
    std::optional<int> budget_gb;
    std::optional<long> budget_fiber;
    std::optional<std::vector<ZVec>> degrees_override;
    std::optional<int> levels_override;
    int element = 0; // certify-noneffective: index into ideal_generators
    std::optional<int> bound;
    bool verbose = false;
};

struct CommandResult {
    int exit_code = 0;
    nlohmann::ordered_json report;
    std::string transcript;
};

// exit codes: 0 computed and asserted properties hold; 1 computed and a
// checked property fails; 2 invalid input; 3 budget exceeded
CommandResult run_request(const CommandRequest& req);

} // namespace torq

#endif
