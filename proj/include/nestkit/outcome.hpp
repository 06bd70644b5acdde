#pragma once

#include <string_view>

namespace nestkit {

/// Result of a search. `nonexistent` is only reported after a complete
/// search; running out of budget is always `budget`.
enum class Outcome
{
    found,
    nonexistent,
    budget,
};

constexpr std::string_view to_string(Outcome o)
{
    switch (o) {
    case Outcome::found:
        return "found";
    case Outcome::nonexistent:
        return "nonexistent";
    case Outcome::budget:
        return "budget";
    }
    return "?";
}

} // namespace nestkit
