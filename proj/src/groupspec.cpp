#include "satotate/groupspec.hpp"

#include <sstream>

#include "satotate/errors.hpp"

namespace satotate {

int GroupSpec::ambient_genus() const {
    int g = 0;
    for (const Factor& f : factors) g += f.rank;
    return g;
}

std::string GroupSpec::str() const {
    std::ostringstream os;
    bool first = true;
    for (const Factor& f : factors) {
        if (!first) os << "*";
        first = false;
        switch (f.type) {
            case FactorType::SO2: os << "SO2"; break;
            case FactorType::SU2: os << "SU2"; break;
            case FactorType::USp: os << "USp(" << 2 * f.rank << ")"; break;
        }
    }
    return os.str();
}

GroupSpec GroupSpec::parse(std::string_view text) {
    GroupSpec spec;
    size_t pos = 0;
    auto fail = [&](const std::string& why) -> void {
        throw UsageError("bad group spec '" + std::string(text) + "': " + why +
                         " at position " + std::to_string(pos));
    };
    auto skip_ws = [&] {
        while (pos < text.size() && text[pos] == ' ') ++pos;
    };
    auto eat = [&](std::string_view tok) {
        if (text.substr(pos, tok.size()) == tok) {
            pos += tok.size();
            return true;
        }
        return false;
    };
    auto parse_int = [&]() -> long {
        size_t start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        if (pos == start) fail("expected a number");
        return std::stol(std::string(text.substr(start, pos - start)));
    };

    while (true) {
        skip_ws();
        Factor f;
        if (eat("SO2") || eat("SO(2)")) {
            f.type = FactorType::SO2;
        } else if (eat("SU2") || eat("SU(2)")) {
            f.type = FactorType::SU2;
        } else if (eat("USp(") || eat("USP(") || eat("usp(")) {
            const long n = parse_int();
            if (!eat(")")) fail("expected ')'");
            if (n < 2 || n % 2 != 0) fail("USp size must be even and >= 2");
            f.type = FactorType::USp;
            f.rank = static_cast<int>(n / 2);
        } else {
            fail("expected SO2, SU2 or USp(2m)");
        }
        spec.factors.push_back(f);
        skip_ws();
        if (pos == text.size()) break;
        if (!eat("*")) fail("expected '*'");
    }
    if (spec.factors.empty()) fail("empty factor list");
    return spec;
}

}  // namespace satotate
