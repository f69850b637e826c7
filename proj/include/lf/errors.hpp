#ifndef LF_ERRORS_HPP
#define LF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lf {

// Base class for all library errors. Every error carries a stable `code()`
// string that the CLI surfaces in structured reports.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

#define LF_DEFINE_ERROR(NAME)                                            \
    class NAME : public Error {                                          \
    public:                                                              \
        explicit NAME(const std::string& what) : Error(#NAME, what) {}   \
    }

LF_DEFINE_ERROR(NotEisenstein);
LF_DEFINE_ERROR(NotIrreducible);
LF_DEFINE_ERROR(PrecisionTooSmall);
LF_DEFINE_ERROR(PrecisionUnderflow);
LF_DEFINE_ERROR(DivisionByIndistinguishableZero);
LF_DEFINE_ERROR(IndistinguishableFromZero);
LF_DEFINE_ERROR(NegativeValuation);
LF_DEFINE_ERROR(PrecisionTooSmallToSeparateRoots);
LF_DEFINE_ERROR(NotGalois);
LF_DEFINE_ERROR(DegreeTooLarge);
LF_DEFINE_ERROR(TrivialExtension);
LF_DEFINE_ERROR(SearchBudgetExceeded);
LF_DEFINE_ERROR(UnitNotAtRequiredLevel);
LF_DEFINE_ERROR(CompositumTooLarge);
LF_DEFINE_ERROR(ConfigError);
LF_DEFINE_ERROR(InvalidArgument);

#undef LF_DEFINE_ERROR

} // namespace lf

#endif
