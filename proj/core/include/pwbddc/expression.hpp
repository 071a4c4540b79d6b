#pragma once

#include <map>
#include <string>

namespace pwbddc {

// Evaluates arithmetic with + - * / ^, parentheses, log (natural), exp, sqrt, the constant pi,
// named variables and implicit multiplication ("4m", "8pi", "10^3log(m)").
double evaluate_expression(const std::string& text, const std::map<std::string, double>& variables = {});

} // namespace pwbddc
