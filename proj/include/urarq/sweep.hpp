#ifndef URARQ_SWEEP_HPP
#define URARQ_SWEEP_HPP

#include <string>
#include <vector>

namespace urarq {

// Accepts a single number, a comma list "a,b,c", or an inclusive range
// "start:step:stop". Throws UsageError on malformed input.
std::vector<double> parse_value_list(const std::string& text);

} // namespace urarq

#endif
