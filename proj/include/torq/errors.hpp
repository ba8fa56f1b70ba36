#ifndef TORQ_ERRORS_HPP
#define TORQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace torq {

// Base for all library errors. `kind` is a stable machine-readable tag
// used by the CLI to map failures onto exit codes.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

class BudgetExceeded : public Error {
public:
    explicit BudgetExceeded(const std::string& msg) : Error("BudgetExceeded", msg) {}
    BudgetExceeded(const std::string& kind, const std::string& msg) : Error(kind, msg) {}
};

class FiberBudgetExceeded : public BudgetExceeded {
public:
    explicit FiberBudgetExceeded(const std::string& msg)
        : BudgetExceeded("FiberBudgetExceeded", msg) {}
};

class DegreeBudgetExceeded : public BudgetExceeded {
public:
    explicit DegreeBudgetExceeded(const std::string& msg)
        : BudgetExceeded("DegreeBudgetExceeded", msg) {}
};

#define TORQ_SIMPLE_ERROR(Name)                                            \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(const std::string& msg) : Error(#Name, msg) {}       \
    }

TORQ_SIMPLE_ERROR(DimensionMismatch);
TORQ_SIMPLE_ERROR(NotASublattice);
TORQ_SIMPLE_ERROR(NotASubmonoid);
TORQ_SIMPLE_ERROR(EmptyGenerators);
TORQ_SIMPLE_ERROR(ImageNotInTarget);
TORQ_SIMPLE_ERROR(RelationsNotRespected);
TORQ_SIMPLE_ERROR(NotToric);
TORQ_SIMPLE_ERROR(InvalidAmbient);
TORQ_SIMPLE_ERROR(NotAnEquivalenceRelation);
TORQ_SIMPLE_ERROR(InternalInvariantViolated);
TORQ_SIMPLE_ERROR(BinomialityViolated);
TORQ_SIMPLE_ERROR(NotDifferenceGenerated);
TORQ_SIMPLE_ERROR(GNotInI);
TORQ_SIMPLE_ERROR(NonPointedUnsupported);
TORQ_SIMPLE_ERROR(NotACocycle);
TORQ_SIMPLE_ERROR(ParseError);

#undef TORQ_SIMPLE_ERROR

} // namespace torq

#endif
