#include "pcgbench/preconditioner.hpp"

#include <algorithm>
#include <cstdio>

#include "pcgbench/errors.hpp"

namespace pcgbench {

Vector Preconditioner::apply(std::span<const double> r) const
{
    Vector z(r.size());
    apply(r, z);
    return z;
}

void IdentityPreconditioner::apply(std::span<const double> r, std::span<double> z) const
{
    if (static_cast<Index>(r.size()) != n_ || r.size() != z.size()) {
        throw DimensionMismatch("control preconditioner: length mismatch");
    }
    std::copy(r.begin(), r.end(), z.begin());
}

PreconditionerPtr build_jacobi_control(Index n)
{
    return std::make_shared<IdentityPreconditioner>(n);
}

std::string format_param(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace pcgbench
