#pragma once

#include <stdexcept>
#include <string>

namespace starweyl {

// Every error carries the hypothesis it violates, stated as an identity or condition.
class StarError : public std::runtime_error {
public:
    StarError(const std::string& what, std::string hypothesis)
        : std::runtime_error(what), hypothesis_(std::move(hypothesis))
    {
    }
    const std::string& hypothesis() const { return hypothesis_; }

private:
    std::string hypothesis_;
};

#define STARWEYL_ERROR(Name)                                                  \
    class Name : public StarError {                                           \
    public:                                                                   \
        using StarError::StarError;                                           \
    }

STARWEYL_ERROR(SingularPointError);
STARWEYL_ERROR(PoleError);
STARWEYL_ERROR(DivergesError);
STARWEYL_ERROR(DomainError);
STARWEYL_ERROR(ConvergenceError);
STARWEYL_ERROR(ContourTooCloseError);
STARWEYL_ERROR(TruncationError);

#undef STARWEYL_ERROR

}  // namespace starweyl
