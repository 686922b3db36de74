// Golden tests for the g=2 and g=3 character tables in all three bases.
// Expected strings use the canonical term order (total degree descending,
// then lex ascending), which matches the published tables up to the
// ordering of same-degree terms.

#include "doctest.h"
#include "satotate/bases.hpp"
#include "satotate/charring.hpp"
#include "satotate/weyl.hpp"

using namespace satotate;

namespace {

struct Row {
    std::vector<int> lambda;
    const char* chi;
    const char* s;
    const char* a;
};

const Row kGenus2[] = {
    {{0, 0}, "1", "1", "1"},
    {{1, 0}, "chi_1", "s_1", "a_1"},
    {{0, 1}, "chi_2", "s_2 + 1", "a_2 - 1"},
    {{2, 0}, "chi_1^2 - chi_2 - 1", "s_1^2 - s_2 - 2", "a_1^2 - a_2"},
    {{1, 1}, "chi_1*chi_2 - chi_1", "s_1*s_2", "a_1*a_2 - 2*a_1"},
    {{0, 2}, "chi_2^2 - chi_1^2 + chi_2", "s_2^2 - s_1^2 + 3*s_2 + 2",
     "a_2^2 - a_1^2 - a_2"},
    {{3, 0}, "chi_1^3 - 2*chi_1*chi_2 - chi_1", "s_1^3 - 2*s_1*s_2 - 3*s_1",
     "a_1^3 - 2*a_1*a_2 + a_1"},
    {{2, 1}, "chi_1^2*chi_2 - chi_2^2 - chi_1^2 - chi_2 + 1",
     "s_1^2*s_2 - s_2^2 - 3*s_2 - 1",
     "a_1^2*a_2 - a_2^2 - 2*a_1^2 + a_2 + 1"},
    {{1, 2}, "chi_1*chi_2^2 - chi_1^3 + chi_1",
     "s_1*s_2^2 - s_1^3 + 2*s_1*s_2 + 2*s_1",
     "a_1*a_2^2 - a_1^3 - 2*a_1*a_2 + 2*a_1"},
    {{0, 3}, "chi_2^3 - 2*chi_1^2*chi_2 + 2*chi_2^2 + chi_1^2 - 1",
     "s_2^3 - 2*s_1^2*s_2 + 5*s_2^2 - s_1^2 + 7*s_2 + 2",
     "a_2^3 - 2*a_1^2*a_2 - a_2^2 + 3*a_1^2 - a_2"},
};

const Row kGenus3[] = {
    {{0, 0, 0}, "1", "1", "1"},
    {{1, 0, 0}, "chi_1", "s_1", "a_1"},
    {{0, 1, 0}, "chi_2", "s_2 + 2", "a_2 - 1"},
    {{0, 0, 1}, "chi_3", "s_3 + s_1", "a_3 - a_1"},
    {{2, 0, 0}, "chi_1^2 - chi_2 - 1", "s_1^2 - s_2 - 3", "a_1^2 - a_2"},
    {{1, 1, 0}, "chi_1*chi_2 - chi_3 - chi_1", "s_1*s_2 - s_3",
     "a_1*a_2 - a_3 - a_1"},
    {{1, 0, 1}, "chi_1*chi_3 - chi_2", "s_1*s_3 + s_1^2 - s_2 - 2",
     "a_1*a_3 - a_1^2 - a_2 + 1"},
    {{0, 2, 0}, "chi_2^2 - chi_1*chi_3 - chi_1^2 + chi_2",
     "s_2^2 - s_1*s_3 - 2*s_1^2 + 5*s_2 + 6", "a_2^2 - a_1*a_3 - a_2"},
    {{0, 1, 1}, "chi_2*chi_3 - chi_1*chi_2 + chi_3", "s_2*s_3 + 3*s_3 + s_1",
     "a_2*a_3 - 2*a_1*a_2 + a_1"},
    {{0, 0, 2}, "chi_3^2 - chi_2^2 + chi_1*chi_3",
     "s_3^2 - s_2^2 + 3*s_1*s_3 + 2*s_1^2 - 4*s_2 - 4",
     "a_3^2 - a_2^2 - a_1*a_3 + 2*a_2 - 1"},
};

void check_table(int g, std::span<const Row> rows, int d) {
    const auto order = enumerate_dominant(g, d);
    REQUIRE(order.size() == std::size(rows));
    for (size_t i = 0; i < order.size(); ++i) {
        CAPTURE(i);
        CHECK(order[i].coords == rows[i].lambda);
        const WeightOmega& x = order[i];
        CHECK(character_in_basis(g, x, Basis::Chi).str() == rows[i].chi);
        CHECK(character_in_basis(g, x, Basis::S).str() == rows[i].s);
        CHECK(character_in_basis(g, x, Basis::A).str() == rows[i].a);
    }
}

}  // namespace

TEST_CASE("genus 2 character table, all bases") {
    check_table(2, kGenus2, 3);
}

TEST_CASE("genus 3 character table, all bases") {
    check_table(3, kGenus3, 2);
}
