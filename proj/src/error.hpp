#ifndef WPH_ERROR_HPP
#define WPH_ERROR_HPP

#include <stdexcept>
#include <string>

namespace wph {

enum class ErrorCode {
    InvalidArgument,
    EmptyInput,
    NotAPrimePower,
    NotWellFormed,
    NotNormalizable,
    HypothesisViolated,
    BudgetExceeded,
    EmptySystem,
    CoefficientCollision,
    NoKleinHypersurface,
    PrimalityUndecided,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what)
{
    throw Error(code, what);
}

} // namespace wph

#endif
