#pragma once

#include <string>
#include <string_view>

namespace medgraph {

// Exact arithmetic over xsd:decimal lexical forms. Values never leave their
// string representation, so "0.5" and "0.50" compare equal without floating
// point rounding.

// True iff `s` matches (+|-)?([0-9]+(.[0-9]*)?|.[0-9]+)
bool is_valid_decimal(std::string_view s);

// Three-way numeric comparison of two valid decimal lexical forms.
// Returns <0, 0, >0.
int compare_decimal(std::string_view a, std::string_view b);

// Canonical 12-decimal-place rendering used for riskScore literals and
// report output ("0.64" -> "0.640000000000").
std::string format_probability(double value);

}  // namespace medgraph
