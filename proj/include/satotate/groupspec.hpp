#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace satotate {

enum class FactorType { SO2, SU2, USp };

struct Factor {
    FactorType type = FactorType::SU2;
    int rank = 1;  // torus dimension: 1 for SO2/SU2, m for USp(2m)

    bool operator==(const Factor&) const = default;
};

// A candidate Sato-Tate group as an ordered product of factors embedded
// block-diagonally in an ambient USp(2g), g = sum of factor ranks.
// Textual syntax: factor ('*' factor)*, with factors SO2 | SU2 | USp(2m)
// (parenthesized spellings SO(2) and SU(2) are accepted).
struct GroupSpec {
    std::vector<Factor> factors;

    int ambient_genus() const;
    std::string str() const;
    bool operator==(const GroupSpec&) const = default;

    static GroupSpec parse(std::string_view text);  // throws UsageError
};

}  // namespace satotate
