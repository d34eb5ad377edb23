#include "fundnet/format.hpp"

#include "fundnet/error.hpp"

#include <charconv>
#include <cmath>

namespace fundnet
{
    std::string format_number(double x)
    {
        if (std::isnan(x))
            return "nan";
        if (std::isinf(x))
            return x > 0 ? "inf" : "-inf";
        if (x == 0.0)
            return "0";
        char buf[64];
        auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
        return std::string(buf, end);
    }

    double parse_number(const std::string& text, const std::string& what)
    {
        double value = 0.0;
        const char* first = text.data();
        const char* last = text.data() + text.size();
        if (first != last && *first == '+')
            ++first;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last)
        {
            throw Error(ErrorKind::ParseError, what + ": '" + text + "' is not a number");
        }
        return value;
    }
}
