#pragma once

#include <memory>
#include <span>
#include <string>
#include <variant>

#include "pcgbench/sparse_matrix.hpp"

namespace pcgbench {

/// z = M^{-1} r with a declared operation count per application.
///
/// Implementations are immutable once built; apply() allocates its own
/// scratch so one instance can serve concurrent solves.
class Preconditioner {
public:
    virtual ~Preconditioner() = default;

    virtual Index dim() const = 0;
    virtual void apply(std::span<const double> r, std::span<double> z) const = 0;
    /// Operations charged per application in the work model.
    virtual Count apply_cost() const = 0;
    /// Estimated operations to build; 0 where construction is free.
    virtual Count generation_cost() const { return 0; }
    virtual std::string label() const = 0;

    Vector apply(std::span<const double> r) const;
};

using PreconditionerPtr = std::shared_ptr<const Preconditioner>;

/// Recorded outcome of a construction that could not complete (e.g. a
/// nonpositive pivot). Never thrown across the harness.
struct GenerationFailure {
    std::string reason;
    Index column = -1;
    double value = 0.0;
};

using BuildResult = std::variant<PreconditionerPtr, GenerationFailure>;

inline bool succeeded(const BuildResult& r)
{
    return std::holds_alternative<PreconditionerPtr>(r);
}

/// Control: after symmetric diagonal scaling the Jacobi preconditioner is the identity.
class IdentityPreconditioner final : public Preconditioner {
public:
    explicit IdentityPreconditioner(Index n) : n_(n) {}
    Index dim() const override { return n_; }
    void apply(std::span<const double> r, std::span<double> z) const override;
    Count apply_cost() const override { return 0; }
    std::string label() const override { return "control"; }

private:
    Index n_;
};

PreconditionerPtr build_jacobi_control(Index n);

/// Shortest round-tripping-enough rendering used in config labels ("%g").
std::string format_param(double v);

}  // namespace pcgbench
