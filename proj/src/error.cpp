#include "fundnet/error.hpp"

namespace fundnet
{
    std::string_view to_string(ErrorKind kind) noexcept
    {
        switch (kind)
        {
        case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
        case ErrorKind::NegativeTime: return "NegativeTime";
        case ErrorKind::NoClosedForm: return "NoClosedForm";
        case ErrorKind::QuadratureNonConvergence: return "QuadratureNonConvergence";
        case ErrorKind::WrongDistributionKind: return "WrongDistributionKind";
        case ErrorKind::RatioUndefined: return "RatioUndefined";
        case ErrorKind::RatioUnbounded: return "RatioUnbounded";
        case ErrorKind::NoContributors: return "NoContributors";
        case ErrorKind::NoPensionInflow: return "NoPensionInflow";
        case ErrorKind::InvalidPlan: return "InvalidPlan";
        case ErrorKind::MissingMarkFunctions: return "MissingMarkFunctions";
        case ErrorKind::GridMismatch: return "GridMismatch";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ValidationError: return "ValidationError";
        case ErrorKind::UnknownParameter: return "UnknownParameter";
        }
        return "Error";
    }
}
