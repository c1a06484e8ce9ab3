#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "gne/first_order.hpp"
#include "gne/zero_order.hpp"

namespace gne {

/// 17 significant digits, enough to round-trip a double.
std::string format_real(double v);

/// Header `t,gamma_ref,F,x_dist,lambda_norm`; x_dist is empty without a reference
/// solution, gamma_ref is empty on the t = 0 row. LF line endings.
void write_zero_order_trace(std::ostream& out, const std::vector<ZoRecord>& trace);

/// Header `t,F,grad_norm`; keeps rows at multiples of `every` plus the last row.
void write_first_order_trace(std::ostream& out, const std::vector<FoRecord>& trace, std::size_t every = 1);

}  // namespace gne
