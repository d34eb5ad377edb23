#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fundnet
{
    enum class ErrorKind
    {
        ParameterOutOfRange,
        NegativeTime,
        NoClosedForm,
        QuadratureNonConvergence,
        WrongDistributionKind,
        RatioUndefined,
        RatioUnbounded,
        NoContributors,
        NoPensionInflow,
        InvalidPlan,
        MissingMarkFunctions,
        GridMismatch,
        ParseError,
        ValidationError,
        UnknownParameter,
    };

    std::string_view to_string(ErrorKind kind) noexcept;

    /// Every failure raised by the library carries a kind so callers (and the
    /// CLI exit-code mapping) can branch without parsing messages.
    class Error : public std::runtime_error
    {
    public:
        Error(ErrorKind kind, const std::string& message)
            : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind)
        {
        }

        ErrorKind kind() const noexcept { return kind_; }

    private:
        ErrorKind kind_;
    };

    inline void require_nonnegative_time(double t)
    {
        if (!(t >= 0.0))
        {
            throw Error(ErrorKind::NegativeTime, "time must be >= 0, got " + std::to_string(t));
        }
    }
}
