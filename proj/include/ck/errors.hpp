#ifndef CK_ERRORS_HPP
#define CK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ck {

// Bad inputs or out-of-domain requests. CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Failures of the numerics themselves (step underflow, lost brackets,
// transit timeouts). CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ck

#endif
