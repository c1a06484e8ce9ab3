#include "gne/trace_io.hpp"

#include <algorithm>
#include <cstdio>

namespace gne {

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_zero_order_trace(std::ostream& out, const std::vector<ZoRecord>& trace) {
    out << "t,gamma_ref,F,x_dist,lambda_norm\n";
    for (const auto& r : trace) {
        out << r.t << ',';
        if (r.t > 0) out << format_real(r.gamma_ref);
        out << ',' << format_real(r.gap) << ',';
        if (r.x_dist) out << format_real(*r.x_dist);
        out << ',' << format_real(r.lambda_norm) << '\n';
    }
}

void write_first_order_trace(std::ostream& out, const std::vector<FoRecord>& trace, std::size_t every) {
    every = std::max<std::size_t>(1, every);
    out << "t,F,grad_norm\n";
    for (std::size_t k = 0; k < trace.size(); ++k) {
        const auto& r = trace[k];
        if (r.t % every != 0 && k + 1 != trace.size()) continue;
        out << r.t << ',' << format_real(r.gap) << ',' << format_real(r.grad_norm) << '\n';
    }
}

}  // namespace gne
